//! Moment-matching equations of the maximum-entropy weighted-graph model.
//!
//! For parameters `theta` the expected degrees are
//! `d_i = sum_{j != i} 1 / (theta_i + theta_j)`, that is `d = F(-theta)` with
//! `F_i(x) = sum_{j != i} -1 / (x_i + x_j)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{Cholesky, SymMatrix};
use crate::suites::trial_rng;

pub const DEFAULT_DOMAIN_FLOOR: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-11;
pub const DEFAULT_MAX_ITER: usize = 200;
const MIN_STEP: f64 = 1e-14;

fn check_pairs(x: &[f64], floor: f64) -> Result<()> {
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            let sum = x[i] + x[j];
            if !(sum.abs() >= floor) {
                return Err(Error::Domain { i, j, sum, floor });
            }
        }
    }
    Ok(())
}

/// `F_i(x) = sum_{j != i} -1 / (x_i + x_j)`.
pub fn f_map(x: &[f64]) -> Result<Vec<f64>> {
    check_pairs(x, DEFAULT_DOMAIN_FLOOR)?;
    Ok(f_map_unchecked(x))
}

fn f_map_unchecked(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| -1.0 / (x[i] + x[j]))
                .sum()
        })
        .collect()
}

/// Jacobian of [`f_map`]: `J_ij = 1 / (x_i + x_j)^2`, diagonal equal to the
/// off-diagonal row sum.
pub fn jacobian(x: &[f64]) -> Result<SymMatrix> {
    check_pairs(x, DEFAULT_DOMAIN_FLOOR)?;
    Ok(jacobian_unchecked(x))
}

fn jacobian_unchecked(x: &[f64]) -> SymMatrix {
    let n = x.len();
    let mut jac = SymMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            let s = x[i] + x[j];
            1.0 / (s * s)
        }
    });
    let diag: Vec<f64> = (0..n).map(|i| jac.row(i).iter().sum()).collect();
    jac = jac.add_scaled(&SymMatrix::diagonal(&diag), 1.0);
    jac
}

/// `(3n - 4) / (2 ell (n-1)(n-2))`.
pub fn lipschitz_constant(n: usize, ell: f64) -> f64 {
    let n = n as f64;
    (3.0 * n - 4.0) / (2.0 * ell * (n - 1.0) * (n - 2.0))
}

/// `min_{i != j} 1 / (theta_i + theta_j)^2`.
pub fn pair_ell(theta: &[f64]) -> f64 {
    let mut top = [f64::NEG_INFINITY; 2];
    for &t in theta {
        if t > top[0] {
            top = [t, top[0]];
        } else if t > top[1] {
            top[1] = t;
        }
    }
    let s = top[0] + top[1];
    1.0 / (s * s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RetinaProblem {
    d: Vec<f64>,
    domain_floor: f64,
}

impl RetinaProblem {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        Self::with_floor(d, DEFAULT_DOMAIN_FLOOR)
    }

    pub fn with_floor(d: Vec<f64>, domain_floor: f64) -> Result<Self> {
        if d.len() < 3 {
            return Err(Error::InvalidArgument(format!("need n >= 3, got {}", d.len())));
        }
        if let Some(i) = d.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!("d[{i}] = {} is not positive", d[i])));
        }
        if !(domain_floor > 0.0) {
            return Err(Error::InvalidArgument("domain floor must be positive".into()));
        }
        Ok(Self { d, domain_floor })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn domain_floor(&self) -> f64 {
        self.domain_floor
    }

    /// `R_i = sum_{j != i} 1 / (theta_i + theta_j) - d_i`.
    pub fn residual(&self, theta: &[f64]) -> Vec<f64> {
        let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
        f_map_unchecked(&neg)
            .into_iter()
            .zip(&self.d)
            .map(|(e, d)| e - d)
            .collect()
    }

    fn feasible(&self, theta: &[f64]) -> bool {
        let mut sorted: Vec<f64> = theta.to_vec();
        sorted.sort_by(f64::total_cmp);
        // smallest pair sum is attained by the two smallest entries
        sorted[0] + sorted[1] >= self.domain_floor
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RetinaSolution {
    pub theta: Vec<f64>,
    pub residual_inf: f64,
    pub iterations: usize,
    pub lipschitz_const: f64,
    /// `lipschitz_const * residual_inf`. A local certificate: `ell_used` is
    /// measured at the final iterate only, so this is an estimate of the
    /// distance to the exact solution, not a proof.
    pub error_certificate: f64,
    pub converged: bool,
    pub ell_used: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton from the uniform start `theta_i = (n-1) / (2 mean(d))`.
///
/// Each step solves `J(-theta) delta = R(theta)` by Cholesky and halves the
/// step until the iterate stays in the domain and `|R|_inf` decreases.
/// A step shorter than `1e-14` or `max_iter` iterations ends the solve with
/// `converged == false`.
pub fn solve_retina(prob: &RetinaProblem, tol: f64, max_iter: usize) -> Result<RetinaSolution> {
    let n = prob.n();
    let mean = prob.d.iter().sum::<f64>() / n as f64;
    let mut theta = vec![(n as f64 - 1.0) / (2.0 * mean); n];
    let mut res = prob.residual(&theta);
    let mut res_inf = inf_norm(&res);
    let mut iterations = 0;
    let mut converged = res_inf <= tol;
    while !converged && iterations < max_iter {
        let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
        let jac = jacobian_unchecked(&neg);
        let step = match Cholesky::factor(&jac) {
            Ok(ch) => ch.solve(&res),
            Err(_) => break,
        };
        iterations += 1;
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda >= MIN_STEP {
            let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t + lambda * s).collect();
            if prob.feasible(&trial) {
                let trial_res = prob.residual(&trial);
                let trial_inf = inf_norm(&trial_res);
                if trial_inf < res_inf {
                    theta = trial;
                    res = trial_res;
                    res_inf = trial_inf;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
        converged = res_inf <= tol;
    }
    let ell_used = pair_ell(&theta);
    let lipschitz_const = lipschitz_constant(n, ell_used);
    Ok(RetinaSolution {
        error_certificate: lipschitz_const * res_inf,
        theta,
        residual_inf: res_inf,
        iterations,
        lipschitz_const,
        converged,
        ell_used,
    })
}

/// Exponential edge weights `A_ij ~ Exp(theta_i + theta_j)` for `i < j`,
/// returned as row sums.
///
/// Each pair draws from its own stream keyed by `(seed, i, j)`, so the result
/// does not depend on evaluation order.
pub fn sample_degrees(theta: &[f64], seed: u64) -> Result<Vec<f64>> {
    let n = theta.len();
    check_pairs(theta, DEFAULT_DOMAIN_FLOOR)?;
    if let Some((i, j, sum)) = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, theta[i] + theta[j]))
        .find(|&(_, _, s)| s <= 0.0)
    {
        return Err(Error::Domain {
            i,
            j,
            sum,
            floor: DEFAULT_DOMAIN_FLOOR,
        });
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((i as u64) << 32) | j as u64);
                    let exp = Exp::new(theta[i] + theta[j]).expect("positive rate");
                    (j, exp.sample(&mut rng))
                })
                .collect()
        })
        .collect();
    let mut d = vec![0.0; n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, a) in row {
            d[i] += a;
            d[j] += a;
        }
    }
    Ok(d)
}

/// Interval from which true parameters are drawn uniformly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaRange {
    pub lo: f64,
    pub hi: f64,
}

impl ThetaRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "theta range {lo},{hi} needs 0 < a <= b"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Upper bound on `1 / (theta_i + theta_j)^2` over the range.
    pub fn m(&self) -> f64 {
        1.0 / (4.0 * self.lo * self.lo)
    }

    /// Lower bound on `1 / (theta_i + theta_j)^2` over the range.
    pub fn ell(&self) -> f64 {
        1.0 / (4.0 * self.hi * self.hi)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                if self.hi > self.lo {
                    rng.random_range(self.lo..=self.hi)
                } else {
                    self.lo
                }
            })
            .collect()
    }
}

/// `(150 sqrt(m) / ell) sqrt(k log n / n)`.
pub fn mle_error_bound(n: usize, k: f64, range: &ThetaRange) -> f64 {
    let nf = n as f64;
    150.0 * range.m().sqrt() / range.ell() * (k * nf.ln() / nf).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MleTrial {
    pub trial: u64,
    pub n: usize,
    pub theta_true: Vec<f64>,
    pub d_hat: Vec<f64>,
    pub theta_hat: Vec<f64>,
    pub err_inf: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub residual_inf: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Sampler seed: `sample_degrees(theta_true, seed)` reproduces `d_hat`.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MleSummary {
    pub n: usize,
    pub k: f64,
    pub trials: usize,
    pub converged: usize,
    pub within_bound: usize,
    /// Among converged trials.
    pub fraction_within: f64,
    /// `1 - 3 / n^{k-1}`.
    pub target_fraction: f64,
    pub median_err: f64,
    pub max_err: f64,
}

pub fn mle_trial(n: usize, k: f64, range: &ThetaRange, seed: u64, trial: u64) -> Result<MleTrial> {
    let mut rng = trial_rng(seed, trial);
    let theta_true = range.sample(&mut rng, n);
    let sampler_seed: u64 = rng.random();
    let d_hat = sample_degrees(&theta_true, sampler_seed)?;
    let sol = solve_retina(&RetinaProblem::new(d_hat.clone())?, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let err_inf = theta_true
        .iter()
        .zip(&sol.theta)
        .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()));
    let bound = mle_error_bound(n, k, range);
    Ok(MleTrial {
        trial,
        n,
        theta_true,
        d_hat,
        theta_hat: sol.theta,
        err_inf,
        bound,
        within_bound: sol.converged && err_inf <= bound,
        residual_inf: sol.residual_inf,
        iterations: sol.iterations,
        converged: sol.converged,
        seed: sampler_seed,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

pub fn summarize(n: usize, k: f64, trials: &[MleTrial]) -> MleSummary {
    let converged: Vec<&MleTrial> = trials.iter().filter(|t| t.converged).collect();
    let within = converged.iter().filter(|t| t.within_bound).count();
    let errs: Vec<f64> = converged.iter().map(|t| t.err_inf).collect();
    MleSummary {
        n,
        k,
        trials: trials.len(),
        converged: converged.len(),
        within_bound: within,
        fraction_within: if converged.is_empty() {
            0.0
        } else {
            within as f64 / converged.len() as f64
        },
        target_fraction: 1.0 - 3.0 / (n as f64).powf(k - 1.0),
        max_err: errs.iter().copied().fold(0.0, f64::max),
        median_err: median(errs),
    }
}

/// Seeded trials at one size, ordered by trial index.
pub fn consistency_experiment(
    n: usize,
    k: f64,
    trials: u64,
    range: &ThetaRange,
    seed: u64,
) -> Result<(Vec<MleTrial>, MleSummary)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(k > 1.0) {
        return Err(Error::InvalidArgument(format!("k = {k}, need k > 1")));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n = {n}, need n >= 3")));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| mle_trial(n, k, range, seed, t))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(n, k, &results);
    Ok((results, summary))
}

/// One summary per size; each size uses the same seed.
pub fn consistency_sweep(
    sizes: &[usize],
    k: f64,
    trials: u64,
    range: &ThetaRange,
    seed: u64,
) -> Result<Vec<MleSummary>> {
    sizes
        .iter()
        .map(|&n| consistency_experiment(n, k, trials, range, seed).map(|(_, s)| s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{classify, default_tol};

    #[test]
    fn f_map_examples() {
        assert_eq!(f_map(&[-1.0; 4]).unwrap(), vec![1.5; 4]);
        let v = f_map(&[-1.0, -2.0, -3.0]).unwrap();
        let want = [1.0 / 3.0 + 0.25, 1.0 / 3.0 + 0.2, 0.25 + 0.2];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        match f_map(&[1.0, -1.0, 3.0]) {
            Err(Error::Domain { i, j, .. }) => assert_eq!((i, j), (0, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jacobian_examples() {
        let jac = jacobian(&[-1.0; 4]).unwrap();
        assert_eq!(jac.get(0, 1), 0.25);
        assert_eq!(jac.get(2, 2), 0.75);
        let x = [-0.7, -1.3, -2.0, -0.9, -1.6];
        let jac = jacobian(&x).unwrap();
        assert!(classify(&jac, default_tol(&jac)).is_balanced);
        let h = 1e-5;
        for j in 0..x.len() {
            let mut up = x;
            let mut down = x;
            up[j] += h;
            down[j] -= h;
            let (fu, fd) = (f_map(&up).unwrap(), f_map(&down).unwrap());
            for i in 0..x.len() {
                let fd_ij = (fu[i] - fd[i]) / (2.0 * h);
                assert!((fd_ij - jac.get(i, j)).abs() <= 1e-6 * jac.get(i, j).abs());
            }
        }
    }

    #[test]
    fn uniform_degrees_solve_exactly() {
        let sol = solve_retina(&RetinaProblem::new(vec![1.5; 4]).unwrap(), 1e-12, 50).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.theta, vec![1.0; 4]);
        assert_eq!(sol.residual_inf, 0.0);
    }

    #[test]
    fn round_trip_recovers_theta() {
        let mut rng = trial_rng(2, 0);
        let range = ThetaRange::new(0.5, 2.0).unwrap();
        let theta = range.sample(&mut rng, 10);
        let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
        let d = f_map(&neg).unwrap();
        let sol = solve_retina(&RetinaProblem::new(d).unwrap(), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(sol.converged);
        for (a, b) in sol.theta.iter().zip(&theta) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(sol.error_certificate <= sol.lipschitz_const * DEFAULT_TOL);
    }

    #[test]
    fn sampler_is_deterministic_and_unbiased_on_average() {
        let theta = [1.0; 4];
        assert_eq!(sample_degrees(&theta, 7).unwrap(), sample_degrees(&theta, 7).unwrap());
        assert_ne!(sample_degrees(&theta, 7).unwrap(), sample_degrees(&theta, 8).unwrap());
        let draws = 10_000;
        let mean = (0..draws)
            .map(|s| sample_degrees(&theta, s).unwrap()[0])
            .sum::<f64>()
            / draws as f64;
        // d_0 is a sum of three Exp(2): mean 1.5, variance 0.75
        let se = (0.75f64 / draws as f64).sqrt();
        assert!((mean - 1.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn mle_bound_value() {
        let range = ThetaRange::new(0.5, 2.0).unwrap();
        assert_eq!(range.m(), 1.0);
        assert_eq!(range.ell(), 1.0 / 16.0);
        let b = mle_error_bound(100, 2.0, &range);
        assert!((b - 2400.0 * (2.0 * 100f64.ln() / 100.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn single_trial_replays() {
        let range = ThetaRange::new(0.5, 2.0).unwrap();
        let a = mle_trial(20, 2.0, &range, 4, 0).unwrap();
        let b = mle_trial(20, 2.0, &range, 4, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_degrees(&a.theta_true, a.seed).unwrap(), a.d_hat);
    }
}
