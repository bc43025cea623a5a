//! Upper estimates of the ratio ‖p'‖/‖p‖ by searching root configurations.
//!
//! Every configuration tried has its roots projected into the domain, so the
//! best ratio found is attained by an admissible polynomial and is therefore an
//! upper bound for the infimum.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::upper_witness_target;
use crate::geometry::{diameter, fekete_points, incircle, ConvexBoundary, PlanePoint};
use crate::norms::{ratio, Norm, NormError, RootPolynomial};
use crate::simplex::{self, SimplexOptions};

pub const MIN_BUDGET: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Norm(#[from] NormError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    NelderMead,
    RandomPerturbation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub norm: Norm,
    /// Objective evaluations, shared evenly between restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub method: SearchMethod,
}

impl SearchConfig {
    pub fn new(n: usize, norm: Norm) -> Self {
        SearchConfig {
            n,
            norm,
            budget: 20_000,
            restarts: 4,
            seed: 0,
            method: SearchMethod::NelderMead,
        }
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        let bad = |m: String| Err(EstimateError::InvalidConfig(m));
        if self.n < 1 {
            return bad("n must be at least 1".into());
        }
        if self.budget < MIN_BUDGET {
            return bad(format!("budget must be at least {MIN_BUDGET}"));
        }
        if self.restarts < 1 || self.restarts > self.budget {
            return bad("restarts must lie in 1..=budget".into());
        }
        self.norm.validate()?;
        Ok(())
    }

    /// Seed of restart `r`.
    pub fn sub_seed(&self, r: usize) -> u64 {
        derive_seed(self.seed, r as u64)
    }
}

/// Independent child seed `index` of `seed` (ChaCha stream `index + 1`).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng.random()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub seed: u64,
    pub ratio: f64,
    pub witness: RootPolynomial,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value after each iteration; nonincreasing.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_ratio: f64,
    pub witness: RootPolynomial,
    pub evaluations: usize,
    /// False when no restart met its stopping test within budget.
    pub converged: bool,
    /// Trace of the winning restart.
    pub trace: Vec<f64>,
    pub restarts: Vec<RestartOutcome>,
}

/// `n` roots drawn uniformly from the domain by rejection from its bounding box.
pub fn random_poly(b: &ConvexBoundary, n: usize, seed: u64) -> RootPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_roots(b, n, &mut rng)
}

fn random_roots<R: Rng>(b: &ConvexBoundary, n: usize, rng: &mut R) -> RootPolynomial {
    let (lo, hi) = b.bounding_box();
    let roots = (0..n)
        .map(|_| loop {
            let z = Complex64::new(rng.random_range(lo.re..=hi.re), rng.random_range(lo.im..=hi.im));
            if b.contains(z, 0.0) {
                break z;
            }
        })
        .collect();
    RootPolynomial::new(roots).expect("n >= 1")
}

fn to_coords(p: &RootPolynomial) -> Vec<f64> {
    p.roots().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn to_roots(x: &[f64]) -> Vec<PlanePoint> {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn project_coords(b: &ConvexBoundary, x: &mut [f64]) {
    for c in x.chunks_exact_mut(2) {
        let z = b.project(Complex64::new(c[0], c[1]));
        c[0] = z.re;
        c[1] = z.im;
    }
}

fn objective(b: &ConvexBoundary, norm: Norm, x: &[f64]) -> f64 {
    match RootPolynomial::new(to_roots(x)) {
        Ok(p) => ratio(&p, b, norm).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

fn nelder_mead(b: &ConvexBoundary, norm: Norm, start: &RootPolynomial, budget: usize) -> (Vec<f64>, f64, usize, bool, Vec<f64>) {
    let scale = diameter(b);
    let mut x = to_coords(start);
    let mut evals = 0;
    let mut trace: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let mut converged = false;
    let mut step = 0.1 * scale;
    // restart the simplex from its best point while budget remains
    while evals < budget {
        let r = simplex::minimize(
            |x| objective(b, norm, x),
            |x| project_coords(b, x),
            &x,
            SimplexOptions {
                initial_step: step,
                max_evals: budget - evals,
                f_tol: 1e-10,
                x_tol: 1e-8 * scale,
            },
        );
        evals += r.evals;
        let before = best;
        for v in r.trace {
            trace.push(before.min(v));
        }
        if r.value < before {
            best = r.value;
            x = r.x;
        }
        if !r.converged {
            break;
        }
        converged = true;
        if before - best <= 1e-12 * best.abs() || step < 1e-6 * scale {
            break;
        }
        step *= 0.25;
    }
    (x, best, evals, converged, trace)
}

fn perturbation(
    b: &ConvexBoundary,
    norm: Norm,
    start: &RootPolynomial,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64, usize, bool, Vec<f64>) {
    let scale = diameter(b);
    let mut x = to_coords(start);
    project_coords(b, &mut x);
    let mut best = objective(b, norm, &x);
    let mut trace = vec![best];
    let mut sigma = 0.1 * scale;
    let n = x.len() / 2;
    let mut evals = 1;
    while evals < budget {
        let std = Normal::new(0.0, sigma).expect("positive step");
        let mut y = x.clone();
        let i = rng.random_range(0..n);
        y[2 * i] += std.sample(rng);
        y[2 * i + 1] += std.sample(rng);
        project_coords(b, &mut y);
        let v = objective(b, norm, &y);
        evals += 1;
        if v < best {
            best = v;
            x = y;
            sigma *= 1.5;
        } else {
            sigma *= 0.9;
        }
        trace.push(best);
        if sigma < 1e-9 * scale {
            return (x, best, evals, true, trace);
        }
    }
    (x, best, evals, false, trace)
}

fn run_restart(b: &ConvexBoundary, cfg: &SearchConfig, r: usize, budget: usize) -> RestartOutcome {
    let seed = cfg.sub_seed(r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_roots(b, cfg.n, &mut rng);
    let (x, value, evaluations, converged, trace) = match cfg.method {
        SearchMethod::NelderMead => nelder_mead(b, cfg.norm, &start, budget),
        SearchMethod::RandomPerturbation => perturbation(b, cfg.norm, &start, budget, &mut rng),
    };
    let witness = RootPolynomial::new(to_roots(&x)).expect("n >= 1");
    // recompute so the reported ratio is exactly that of the witness
    let ratio = ratio(&witness, b, cfg.norm).unwrap_or(value);
    RestartOutcome {
        seed,
        ratio,
        witness,
        evaluations,
        converged,
        trace,
    }
}

/// Minimize `‖p'‖/‖p‖` over roots in the domain with independent restarts.
pub fn estimate_oscillation(b: &ConvexBoundary, cfg: &SearchConfig) -> Result<SearchResult, EstimateError> {
    cfg.validate()?;
    let per = cfg.budget / cfg.restarts;
    let restarts: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(b, cfg, r, per))
        .collect();
    let winner = restarts
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, c)| a.ratio.total_cmp(&c.ratio).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let w = &restarts[winner];
    Ok(SearchResult {
        best_ratio: w.ratio,
        witness: w.witness.clone(),
        evaluations: restarts.iter().map(|r| r.evaluations).sum(),
        converged: restarts.iter().any(|r| r.converged),
        trace: w.trace.clone(),
        restarts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Incenter,
    Fekete,
    Optimizer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub target: f64,
    /// Family that produced the first witness below target, if any.
    pub source: Option<WitnessSource>,
    pub ratio: f64,
    pub witness: RootPolynomial,
    /// Ratios of the candidates tried, in order.
    pub tried: Vec<(WitnessSource, f64)>,
    pub found: bool,
}

/// Look for `p` with `‖p'‖/‖p‖ < 15n/d`: all roots at the incenter, then roots
/// at Fekete points, then the optimizer with the given budget.
pub fn upper_bound_witness(
    b: &ConvexBoundary,
    n: usize,
    norm: Norm,
    budget: usize,
    seed: u64,
) -> Result<WitnessReport, EstimateError> {
    norm.validate()?;
    if n < 1 {
        return Err(EstimateError::InvalidConfig("n must be at least 1".into()));
    }
    let target = upper_witness_target(diameter(b), n);
    let mut tried = Vec::new();
    let mut best: Option<(f64, RootPolynomial)> = None;
    let mut consider = |source, p: RootPolynomial, tried: &mut Vec<_>| -> Result<bool, EstimateError> {
        let r = ratio(&p, b, norm)?;
        tried.push((source, r));
        if best.as_ref().is_none_or(|(v, _)| r < *v) {
            best = Some((r, p));
        }
        Ok(r < target)
    };

    let (center, _) = incircle(b);
    let mut source = None;
    if consider(WitnessSource::Incenter, RootPolynomial::repeated(center, n), &mut tried)? {
        source = Some(WitnessSource::Incenter);
    } else if n >= 2
        && consider(
            WitnessSource::Fekete,
            RootPolynomial::new(fekete_points(b, n).points).expect("n >= 2"),
            &mut tried,
        )?
    {
        source = Some(WitnessSource::Fekete);
    } else {
        let cfg = SearchConfig {
            budget: budget.max(MIN_BUDGET),
            seed,
            ..SearchConfig::new(n, norm)
        };
        let res = estimate_oscillation(b, &cfg)?;
        if consider(WitnessSource::Optimizer, res.witness, &mut tried)? {
            source = Some(WitnessSource::Optimizer);
        }
    }
    let (ratio, witness) = best.expect("a candidate was evaluated");
    Ok(WitnessReport {
        target,
        source,
        ratio,
        witness,
        tried,
        found: source.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use approx::assert_relative_eq;

    #[test]
    fn random_poly_is_deterministic_and_inside() {
        let disk = shapes::unit_disk();
        let p = random_poly(&disk, 3, 1);
        assert_eq!(p.degree(), 3);
        assert!(p.roots_in(&disk));
        assert_eq!(p, random_poly(&disk, 3, 1));
        assert_ne!(p, random_poly(&disk, 3, 2));
        assert_eq!(random_poly(&shapes::regular_heptagon(), 1, 9).degree(), 1);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::new(4, Norm::Sup);
        assert!(cfg.validate().is_ok());
        cfg.budget = 99;
        assert!(cfg.validate().is_err());
        cfg.budget = 1000;
        cfg.n = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn degree_one_on_disk_reaches_one_half() {
        let disk = shapes::unit_disk();
        let cfg = SearchConfig {
            budget: 2000,
            restarts: 2,
            seed: 3,
            ..SearchConfig::new(1, Norm::Sup)
        };
        let res = estimate_oscillation(&disk, &cfg).unwrap();
        assert_relative_eq!(res.best_ratio, 0.5, epsilon = 1e-6);
        assert!(res.witness.roots_in(&disk));
    }

    #[test]
    fn traces_are_nonincreasing_and_results_reproducible() {
        let sq = shapes::unit_square();
        for method in [SearchMethod::NelderMead, SearchMethod::RandomPerturbation] {
            let cfg = SearchConfig {
                budget: 600,
                restarts: 3,
                seed: 11,
                method,
                ..SearchConfig::new(3, Norm::Lq(2.0))
            };
            let a = estimate_oscillation(&sq, &cfg).unwrap();
            for r in &a.restarts {
                assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
                assert!(r.witness.roots_in(&sq));
            }
            assert_relative_eq!(
                a.best_ratio,
                ratio(&a.witness, &sq, cfg.norm).unwrap(),
                max_relative = 1e-8
            );
            let b = estimate_oscillation(&sq, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn disk_witness_is_immediate() {
        let w = upper_bound_witness(&shapes::unit_disk(), 8, Norm::Lq(2.0), 200, 0).unwrap();
        assert_eq!(w.source, Some(WitnessSource::Incenter));
        assert_relative_eq!(w.ratio, 8.0, epsilon = 1e-8);
        assert_relative_eq!(w.target, 60.0, epsilon = 1e-12);
    }

    #[test]
    fn square_and_heptagon_witnesses() {
        let w = upper_bound_witness(&shapes::unit_square(), 4, Norm::Lq(1.0), 200, 0).unwrap();
        assert!(w.found && w.ratio < 15.0 * 4.0 / 2f64.sqrt());
        let w = upper_bound_witness(&shapes::regular_heptagon(), 16, Norm::Lq(4.0), 200, 0).unwrap();
        assert!(w.found && w.target > 106.8 && w.target < 106.9);
    }
}
