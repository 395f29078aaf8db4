use proptest::prelude::*;
use sdd_core::matcore::{classify, default_tol};
use sdd_core::retina::{
    f_map, jacobian, sample_degrees, solve_retina, RetinaProblem, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

fn thetas(lo: usize, hi: usize) -> impl Strategy<Value = Vec<f64>> {
    (lo..=hi).prop_flat_map(|n| prop::collection::vec(0.5f64..2.0, n))
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|t| -t).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobian_matches_central_differences(theta in thetas(3, 12)) {
        let x = neg(&theta);
        let jac = jacobian(&x).unwrap();
        let h = 1e-5;
        for j in 0..x.len() {
            let mut up = x.clone();
            let mut down = x.clone();
            up[j] += h;
            down[j] -= h;
            let (fu, fd) = (f_map(&up).unwrap(), f_map(&down).unwrap());
            for i in 0..x.len() {
                let approx = (fu[i] - fd[i]) / (2.0 * h);
                let exact = jac.get(i, j);
                prop_assert!((approx - exact).abs() <= 1e-6 * exact.abs());
            }
        }
    }

    #[test]
    fn jacobian_is_balanced_and_positive(theta in thetas(3, 20)) {
        let jac = jacobian(&neg(&theta)).unwrap();
        let c = classify(&jac, default_tol(&jac));
        prop_assert!(c.is_balanced);
        prop_assert!(c.min_offdiag().unwrap() > 0.0);
    }

    #[test]
    fn round_trip_recovers_parameters(theta in thetas(4, 50)) {
        let d = f_map(&neg(&theta)).unwrap();
        let sol = solve_retina(&RetinaProblem::new(d).unwrap(), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(sol.converged);
        for (a, b) in sol.theta.iter().zip(&theta) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn sampler_is_a_pure_function(theta in thetas(3, 15), seed in any::<u64>()) {
        let a = sample_degrees(&theta, seed).unwrap();
        let b = sample_degrees(&theta, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|&v| v > 0.0));
    }
}
