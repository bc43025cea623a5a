//! Transfinite diameter bracket from Fekete-point ascent.
//!
//! The `m`-th diameter `δ_m` is the maximum over `m` points of the geometric mean
//! of their pairwise distances; it decreases to the transfinite diameter, so any
//! computed `δ_m` is an upper estimate. Lower estimates come from classical
//! inclusion bounds: a segment of length `d` inside `K` gives `Δ ≥ d/4`, and the
//! area bound `Δ ≥ sqrt(area/π)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::ConvexBoundary;
use super::functionals::diameter;
use super::piece::PlanePoint;
use crate::numeric::{golden_max, CompensatedSum};

pub const DEFAULT_FEKETE_POINTS: usize = 48;
const MAX_SWEEPS: usize = 400;
const GAP_SAMPLES: usize = 8;
const FEKETE_SEED: u64 = 0x5eed_fe7e;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransfiniteBracket {
    /// `d/4`.
    pub lower: f64,
    /// `sqrt(area/π)`.
    pub area_lower: f64,
    /// `min(δ_m, d/2)`.
    pub upper: f64,
    /// `δ_m` as found by the ascent.
    pub fekete_estimate: f64,
    pub m: usize,
    /// Set when no start met the convergence test before the sweep cap.
    pub stalled: bool,
    /// Arc-length parameters of the best point set.
    pub fekete_params: Vec<f64>,
}

impl TransfiniteBracket {
    /// Sound lower estimate of the transfinite diameter.
    pub fn certified_lower(&self) -> f64 {
        self.lower.max(self.area_lower).min(2.0 * self.lower)
    }
}

/// Result of one Fekete ascent.
#[derive(Debug, Clone)]
pub struct FeketeSet {
    pub params: Vec<f64>,
    pub points: Vec<PlanePoint>,
    /// `Σ_{i<j} ln|z_i − z_j|`.
    pub log_energy: f64,
    pub converged: bool,
}

impl FeketeSet {
    /// `δ_m = exp(E / C(m, 2))`.
    pub fn mth_diameter(&self) -> f64 {
        let m = self.points.len() as f64;
        (self.log_energy * 2.0 / (m * (m - 1.0))).exp()
    }
}

/// `Σ_{i<j} ln|z_i − z_j|` with compensated summation.
pub fn log_energy(points: &[PlanePoint]) -> f64 {
    let mut s = CompensatedSum::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            s.add((points[i] - points[j]).norm().ln());
        }
    }
    s.value()
}

fn partial_energy(points: &[PlanePoint], skip: usize, z: PlanePoint) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != skip)
        .map(|(_, &w)| (z - w).norm().ln())
        .sum()
}

/// Coordinate ascent on boundary parameters, keeping the cyclic order.
/// `params` must be increasing with total span below `L`.
fn ascend(b: &ConvexBoundary, mut params: Vec<f64>) -> FeketeSet {
    let m = params.len();
    let l = b.total_length();
    let mut points: Vec<PlanePoint> = params.iter().map(|&s| b.point_at(s)).collect();
    let mut energy = log_energy(&points);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let before = energy;
        for i in 0..m {
            let prev = if i == 0 { params[m - 1] - l } else { params[i - 1] };
            let next = if i + 1 == m { params[0] + l } else { params[i + 1] };
            let current = partial_energy(&points, i, points[i]);
            let f = |s: f64| partial_energy(&points, i, b.point_at(s));
            let gap = next - prev;
            let h = gap / (GAP_SAMPLES + 1) as f64;
            let mut best = (params[i], current);
            for g in 1..=GAP_SAMPLES {
                let s = prev + h * g as f64;
                let v = f(s);
                if v > best.1 {
                    best = (s, v);
                }
            }
            let lo = (best.0 - h).max(prev + 1e-3 * h);
            let hi = (best.0 + h).min(next - 1e-3 * h);
            let (s, v) = golden_max(f, lo, hi, 1e-13 * l);
            if v > best.1 {
                best = (s, v);
            }
            if best.1 > current {
                params[i] = best.0;
                points[i] = b.point_at(best.0);
            }
        }
        energy = log_energy(&points);
        if energy - before <= 1e-13 * energy.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    FeketeSet {
        params: params.iter().map(|&s| b.wrap_param(s)).collect(),
        points,
        log_energy: energy,
        converged,
    }
}

/// Approximate Fekete points: best of several deterministic starts.
pub fn fekete_points(b: &ConvexBoundary, m: usize) -> FeketeSet {
    assert!(m >= 2, "need at least two Fekete points");
    let l = b.total_length();
    let h = l / m as f64;
    let mut starts: Vec<Vec<f64>> = [0.0, 0.5]
        .iter()
        .map(|&off| (0..m).map(|i| (i as f64 + off) * h).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(FEKETE_SEED ^ m as u64);
    for _ in 0..2 {
        let mut s: Vec<f64> = (0..m)
            .map(|i| (i as f64 + rng.random_range(0.1..0.9)) * h)
            .collect();
        s.sort_by(f64::total_cmp);
        starts.push(s);
    }
    let results: Vec<FeketeSet> = starts.into_par_iter().map(|s| ascend(b, s)).collect();
    let converged = results.iter().any(|r| r.converged);
    let mut best = results
        .into_iter()
        .reduce(|a, c| if c.log_energy > a.log_energy { c } else { a })
        .expect("at least one start");
    best.converged = converged;
    best
}

/// Transfinite-diameter bracket with `m` Fekete points (`m ≥ 3`).
pub fn transfinite_diameter(b: &ConvexBoundary, m: usize) -> TransfiniteBracket {
    assert!(m >= 3, "transfinite estimate needs m >= 3");
    let d = diameter(b);
    let set = fekete_points(b, m);
    let estimate = set.mth_diameter();
    TransfiniteBracket {
        lower: d / 4.0,
        area_lower: (b.area() / std::f64::consts::PI).sqrt(),
        upper: estimate.min(d / 2.0),
        fekete_estimate: estimate,
        m,
        stalled: !set.converged,
        fekete_params: set.params,
    }
}
