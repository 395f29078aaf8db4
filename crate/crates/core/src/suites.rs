//! Seeded random instance generators and the randomized verification suites.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    adjugate_bound, condition_bound, det_lower_bound, det_upper_bound_balanced,
    eig_interval_check, lower_bound_trivial, main_bound, spectral_route_bound, varah_bound,
    xi_functional, BoundReport,
};
use crate::error::{Error, Result};
use crate::graphlimit::{signless_laplacian, LoopGraph};
use crate::matcore::SymMatrix;
use crate::sform::SForm;

/// Generator for trial `trial` of a run seeded with `seed`.
///
/// Streams are independent, so trials can run in any order or in parallel.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Adds `diag_i = row_sum_i + extra_i` to a zero-diagonal symmetric matrix.
fn with_dominant_diagonal(off: SymMatrix, mut extra: impl FnMut(usize) -> f64) -> SymMatrix {
    let diag: Vec<f64> = (0..off.n())
        .map(|i| off.row(i).iter().sum::<f64>() + extra(i))
        .collect();
    off.add_scaled(&SymMatrix::diagonal(&diag), 1.0)
}

fn random_offdiag<R: Rng>(rng: &mut R, n: usize, ell: f64, m: f64) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else if m > ell {
            rng.random_range(ell..=m)
        } else {
            ell
        }
    })
}

/// Balanced positive matrix with off-diagonal entries in `[ell, m]`.
pub fn random_balanced<R: Rng>(rng: &mut R, n: usize, ell: f64, m: f64) -> SymMatrix {
    with_dominant_diagonal(random_offdiag(rng, n, ell, m), |_| 0.0)
}

/// Diagonally dominant positive matrix with off-diagonal entries in
/// `[ell, m]` and row dominances in `[min_delta, max_delta]`.
pub fn random_dominant<R: Rng>(
    rng: &mut R,
    n: usize,
    ell: f64,
    m: f64,
    min_delta: f64,
    max_delta: f64,
) -> SymMatrix {
    let off = random_offdiag(rng, n, ell, m);
    let extras: Vec<f64> = (0..n)
        .map(|_| {
            if max_delta > min_delta {
                rng.random_range(min_delta..=max_delta)
            } else {
                min_delta
            }
        })
        .collect();
    with_dominant_diagonal(off, |i| extras[i])
}

/// Dominant `S` (balanced about half the time) and `J = S + E`, `E != 0`,
/// where `E` is nonnegative and diagonally dominant.
///
/// Off-diagonal perturbations are drawn from `uniform(0.05, 3) * ell`, each
/// kept with probability one half, with at least one kept.
pub fn random_above_sform<R: Rng>(rng: &mut R, n: usize) -> (SymMatrix, SForm) {
    let ell = rng.random_range(0.2..2.0);
    let slack = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(0.0..2.0) * ell
    };
    let s = SForm::new(n, (n - 2) as f64 * ell + slack, ell).expect("valid parameters");
    let a = rng.random_range(0..n);
    let b = (a + rng.random_range(1..n)) % n;
    let forced = (a.min(b), a.max(b));
    let bump = SymMatrix::from_fn(n, |i, j| {
        let keep = i != j && ((i, j) == forced || rng.random_bool(0.5));
        if keep {
            rng.random_range(0.05..3.0) * ell
        } else {
            0.0
        }
    });
    let e = with_dominant_diagonal(bump, |_| {
        if rng.random_bool(0.5) {
            rng.random_range(0.0..1.0) * ell
        } else {
            0.0
        }
    });
    (s.dense().add_scaled(&e, 1.0), s)
}

/// Random graph with self-loops and, often, isolated vertices; never empty.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> LoopGraph {
    let p_edge = rng.random_range(0.1..0.6);
    let p_loop = rng.random_range(0.0..0.3);
    let mut edges = Vec::new();
    for i in 0..n {
        if rng.random_bool(p_loop) {
            edges.push((i, i));
        }
        for j in (i + 1)..n {
            if rng.random_bool(p_edge) {
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        let a = rng.random_range(0..n);
        edges.push((a, (a + 1) % n));
    }
    LoopGraph::new(n, edges).expect("in range")
}

fn random_interval<R: Rng>(rng: &mut R) -> (f64, f64) {
    let ell = rng.random_range(0.2..2.0);
    let m = ell * rng.random_range(1.0..3.0);
    (ell, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Varah,
    Main,
    Lower,
    Spectral,
    Cond,
    Eig,
    Det,
    Adjugate,
    Xi,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Varah,
        Suite::Main,
        Suite::Lower,
        Suite::Spectral,
        Suite::Cond,
        Suite::Eig,
        Suite::Det,
        Suite::Adjugate,
        Suite::Xi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Varah => "varah",
            Suite::Main => "main",
            Suite::Lower => "lower",
            Suite::Spectral => "spectral",
            Suite::Cond => "cond",
            Suite::Eig => "eig",
            Suite::Det => "det",
            Suite::Adjugate => "adjugate",
            Suite::Xi => "xi",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRecord {
    pub suite: Suite,
    pub trial: u64,
    pub n: usize,
    pub report: BoundReport,
}

fn xi_report<R: Rng>(rng: &mut R, n: usize) -> Result<BoundReport> {
    let ell = rng.random_range(0.2..2.0);
    let alpha = (n - 2) as f64 * ell * rng.random_range(1.0..3.0);
    let s = SForm::new(n, alpha, ell)?;
    let p = signless_laplacian(&random_graph(rng, n));
    let r = xi_functional(&s, &p)?;
    // the functional is O(b^2), far below the comparison tolerance, so the
    // verdict is strict positivity plus agreement with the closed form
    let mut report = BoundReport::compare("xi", 0.0, r.xi)
        .with("n", n as f64)
        .with("alpha", alpha)
        .with("ell", ell)
        .with("discrepancy", r.max_rel_discrepancy);
    report.holds = r.xi > 0.0 && r.max_rel_discrepancy <= 1e-10;
    Ok(report)
}

fn trial_reports(suite: Suite, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<BoundReport>> {
    Ok(match suite {
        Suite::Varah => {
            let (ell, m) = random_interval(rng);
            let j = random_dominant(rng, n, ell, m, 0.05 * ell, 2.0 * m);
            vec![varah_bound(&j)?]
        }
        Suite::Main => {
            let (j, s) = random_above_sform(rng, n);
            vec![main_bound(&j, &s)?]
        }
        Suite::Lower => {
            let (ell, m) = random_interval(rng);
            let j = random_dominant(rng, n, ell, m, 0.0, 2.0 * m);
            vec![lower_bound_trivial(&j)?]
        }
        Suite::Spectral | Suite::Cond => {
            let (ell, m) = random_interval(rng);
            let max_delta = if rng.random_bool(0.5) { 0.0 } else { 2.0 * m };
            let j = random_dominant(rng, n, ell, m, 0.0, max_delta);
            if suite == Suite::Spectral {
                vec![spectral_route_bound(&j, ell)?]
            } else {
                vec![condition_bound(&j, ell)?]
            }
        }
        Suite::Eig => {
            let (ell, m) = random_interval(rng);
            let max_delta = if rng.random_bool(0.5) { 0.0 } else { 2.0 * m };
            let j = random_dominant(rng, n, ell, m, 0.0, max_delta);
            let i = rng.random_range(1..n);
            vec![eig_interval_check(&j, ell, m, i)?]
        }
        Suite::Det => {
            let (ell, m) = random_interval(rng);
            let j = random_dominant(rng, n, ell, m, 0.0, 2.0 * m);
            let b = random_balanced(rng, n, ell, m);
            vec![det_lower_bound(&j, ell, m)?, det_upper_bound_balanced(&b, ell, m)?]
        }
        Suite::Adjugate => {
            let (ell, m) = random_interval(rng);
            vec![adjugate_bound(&random_balanced(rng, n, ell, m), ell, m)?]
        }
        Suite::Xi => vec![xi_report(rng, n)?],
    })
}

/// Runs `trials` seeded instances with `n` drawn uniformly from `n_range`.
///
/// Output is ordered by trial index; a trial may emit more than one record.
pub fn run_suite(
    suite: Suite,
    n_range: (usize, usize),
    trials: u64,
    seed: u64,
) -> Result<Vec<SuiteRecord>> {
    let (lo, hi) = n_range;
    if lo < 3 || hi < lo {
        return Err(Error::InvalidArgument(format!("n range {lo},{hi} needs 3 <= a <= b")));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = rng.random_range(lo..=hi);
            let reports = trial_reports(suite, &mut rng, n)?;
            Ok(reports
                .into_iter()
                .map(|report| SuiteRecord {
                    suite,
                    trial,
                    n,
                    report,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{classify, default_tol};

    #[test]
    fn trial_streams_differ_and_replay() {
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(1, 0).random::<u64>());
    }

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = trial_rng(5, 0);
        for n in 3..10 {
            let b = random_balanced(&mut rng, n, 1.0, 2.0);
            assert!(classify(&b, default_tol(&b)).is_balanced);
            let d = random_dominant(&mut rng, n, 1.0, 2.0, 0.1, 0.5);
            assert!(classify(&d, default_tol(&d)).is_strictly_dominant);
            let (j, s) = random_above_sform(&mut rng, n);
            assert!(j.max_abs_diff(&s.dense()) > 0.0);
            assert!(classify(&j, default_tol(&j)).is_dominant);
            assert!(random_graph(&mut rng, n).has_edges());
        }
    }

    #[test]
    fn every_suite_holds_on_a_small_run() {
        for suite in Suite::ALL {
            let records = run_suite(suite, (3, 8), 40, 11).unwrap();
            for r in &records {
                assert!(r.report.applicable, "{suite} trial {}: {:?}", r.trial, r.report.note);
                assert!(r.report.holds, "{suite} trial {}: {:?}", r.trial, r.report);
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
