//! Monic polynomials stored by their roots, and their sup and `L^q` norms on a
//! piecewise boundary with respect to arc length.
//!
//! Quadrature works on `exp(q·(ln|f| − s))` with `s` the largest sampled log
//! modulus, so high degrees neither overflow nor underflow; panel totals use
//! compensated summation so results do not depend on evaluation order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ConvexBoundary, PlanePoint};
use crate::numeric::{gauss_legendre_16, golden_max, CompensatedSum};

/// Relative change below which a bisected panel is accepted.
pub const PANEL_REL_TOL: f64 = 1e-9;
pub const MAX_PANEL_DEPTH: u32 = 16;
/// Sup-norm sampling: at least this many nodes per piece.
pub const SUP_MIN_NODES: usize = 1024;
pub const SUP_NODES_PER_DEGREE: usize = 32;
const SUP_REFINE_PEAKS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("a polynomial needs at least one root")]
    Empty,
    #[error("non-finite root {0}")]
    NonFiniteRoot(Complex64),
    #[error("point {0} is a root; the logarithmic derivative is undefined")]
    AtRoot(Complex64),
    #[error("exponent q = {0} is outside [1, ∞]")]
    InvalidExponent(f64),
}

/// Monic polynomial `∏ (z − z_j)` given by its root multiset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PlanePoint>", into = "Vec<PlanePoint>")]
pub struct RootPolynomial {
    roots: Vec<PlanePoint>,
}

impl TryFrom<Vec<PlanePoint>> for RootPolynomial {
    type Error = NormError;

    fn try_from(roots: Vec<PlanePoint>) -> Result<Self, NormError> {
        RootPolynomial::new(roots)
    }
}

impl From<RootPolynomial> for Vec<PlanePoint> {
    fn from(p: RootPolynomial) -> Self {
        p.roots
    }
}

impl RootPolynomial {
    pub fn new(roots: Vec<PlanePoint>) -> Result<Self, NormError> {
        if roots.is_empty() {
            return Err(NormError::Empty);
        }
        if let Some(z) = roots.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(NormError::NonFiniteRoot(*z));
        }
        Ok(RootPolynomial { roots })
    }

    /// `(z − z0)^n`.
    pub fn repeated(z0: PlanePoint, n: usize) -> Self {
        RootPolynomial::new(vec![z0; n]).expect("n >= 1")
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[PlanePoint] {
        &self.roots
    }

    /// Whether every root lies in the closed domain (tolerance `1e-9`).
    pub fn roots_in(&self, b: &ConvexBoundary) -> bool {
        self.roots.iter().all(|&z| b.contains(z, 1e-9))
    }

    /// `(p(z), p'(z))`.
    pub fn evaluate(&self, z: PlanePoint) -> (Complex64, Complex64) {
        let mut value = Complex64::new(1.0, 0.0);
        let mut inv_sum = Complex64::new(0.0, 0.0);
        let mut hit_root = false;
        for &r in &self.roots {
            let w = z - r;
            if w.re == 0.0 && w.im == 0.0 {
                hit_root = true;
            } else {
                inv_sum += w.inv();
            }
            value *= w;
        }
        if !hit_root {
            return (value, value * inv_sum);
        }
        // leave-one-out products
        let mut deriv = Complex64::new(0.0, 0.0);
        for skip in 0..self.roots.len() {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, &r) in self.roots.iter().enumerate() {
                if i != skip {
                    prod *= z - r;
                }
            }
            deriv += prod;
        }
        (value, deriv)
    }

    /// `p'(z)/p(z) = Σ 1/(z − z_j)`.
    pub fn log_derivative(&self, z: PlanePoint) -> Result<Complex64, NormError> {
        let mut sum = Complex64::new(0.0, 0.0);
        for &r in &self.roots {
            let w = z - r;
            if w.re == 0.0 && w.im == 0.0 {
                return Err(NormError::AtRoot(z));
            }
            sum += w.inv();
        }
        Ok(sum)
    }

    /// `ln|p(z)|` or `ln|p'(z)|`.
    pub fn log_modulus(&self, target: NormTarget, z: PlanePoint) -> f64 {
        match target {
            NormTarget::P => {
                let prod: f64 = self.roots.iter().map(|&r| (z - r).norm_sqr()).product();
                if prod.is_normal() {
                    0.5 * prod.ln()
                } else {
                    // product left the normal range: fall back to a sum of logs
                    self.roots.iter().map(|&r| (z - r).norm().ln()).sum()
                }
            }
            NormTarget::Pprime => self.evaluate(z).1.norm().ln(),
        }
    }
}

/// Which function a norm is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormTarget {
    P,
    Pprime,
}

/// `L^q` with `q ≥ 1`, or the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    Lq(f64),
    Sup,
}

impl Norm {
    pub fn validate(self) -> Result<Self, NormError> {
        match self {
            Norm::Lq(q) if !(q >= 1.0 && q.is_finite()) => Err(NormError::InvalidExponent(q)),
            n => Ok(n),
        }
    }

    /// `q` as a number, `∞` for the sup norm.
    pub fn exponent(self) -> f64 {
        match self {
            Norm::Lq(q) => q,
            Norm::Sup => f64::INFINITY,
        }
    }

    pub fn from_exponent(q: f64) -> Self {
        if q.is_infinite() {
            Norm::Sup
        } else {
            Norm::Lq(q)
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Lq(q) => write!(f, "{q}"),
            Norm::Sup => f.write_str("inf"),
        }
    }
}

impl FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "sup" => Ok(Norm::Sup),
            t => {
                let q: f64 = t.parse().map_err(|_| format!("bad exponent {t:?}"))?;
                Norm::Lq(q).validate().map_err(|e| e.to_string())
            }
        }
    }
}

impl Serialize for Norm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Norm::Lq(q) => s.serialize_f64(*q),
            Norm::Sup => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Norm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(q) => Ok(Norm::Lq(q)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub error_estimate: f64,
    /// Boundary parameter of the maximum (sup norm only).
    pub argmax_param: Option<f64>,
    pub quadrature_nodes: usize,
    /// False when some panel hit the depth limit before meeting the tolerance.
    pub converged: bool,
}

/// Sampled and refined maximum of `|f|` on the boundary.
pub fn sup_norm_of(p: &RootPolynomial, target: NormTarget, b: &ConvexBoundary) -> NormReport {
    let nodes = SUP_MIN_NODES.max(SUP_NODES_PER_DEGREE * p.degree());
    let mut peaks: Vec<(f64, usize, f64, f64)> = Vec::new(); // (log value, piece, t, step)
    let mut total_nodes = 0;
    let mut best_err = 0.0;
    let mut best_log = f64::NEG_INFINITY;
    for (j, piece) in b.pieces().iter().enumerate() {
        let len = piece.length();
        let h = len / (nodes - 1) as f64;
        let vals: Vec<f64> = (0..nodes)
            .map(|i| p.log_modulus(target, piece.point_at(h * i as f64)))
            .collect();
        total_nodes += nodes;
        for i in 0..nodes {
            let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
            let right = if i + 1 < nodes { vals[i + 1] } else { f64::NEG_INFINITY };
            if vals[i] >= left && vals[i] >= right {
                peaks.push((vals[i], j, h * i as f64, h));
            }
            if vals[i] > best_log && i > 0 && i + 1 < nodes {
                // quadratic-interpolation loss between nodes, relative to the peak
                let e = (left.exp() - 2.0 * vals[i].exp() + right.exp()).abs() / 8.0;
                best_err = e / vals[i].exp();
            }
            best_log = best_log.max(vals[i]);
        }
    }
    peaks.sort_by(|a, c| c.0.total_cmp(&a.0));
    let mut best = (peaks[0].0, peaks[0].1, peaks[0].2);
    for &(_, j, t, h) in peaks.iter().take(SUP_REFINE_PEAKS) {
        let piece = &b.pieces()[j];
        let len = piece.length();
        let (lo, hi) = ((t - h).max(0.0), (t + h).min(len));
        let (x, v) = golden_max(
            |s| p.log_modulus(target, piece.point_at(s)),
            lo,
            hi,
            1e-10 * len.max(1e-300),
        );
        total_nodes += 60;
        if v > best.0 {
            best = (v, j, x);
        }
    }
    let value = best.0.exp();
    NormReport {
        value,
        error_estimate: best_err * value,
        argmax_param: Some(b.wrap_param(b.vertex_params()[best.1] + best.2)),
        quadrature_nodes: total_nodes,
        converged: true,
    }
}

pub fn sup_norm(p: &RootPolynomial, b: &ConvexBoundary) -> NormReport {
    sup_norm_of(p, NormTarget::P, b)
}

struct PanelSum {
    sum: CompensatedSum,
    err: f64,
    nodes: usize,
    converged: bool,
}

/// One 16-point Gauss–Legendre panel of `g` over local `[a, b]` of piece `j`.
fn gl_panel<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre_16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let s: CompensatedSum = x.iter().zip(w).map(|(x, w)| w * g(mid + half * x)).collect();
    s.value() * half
}

fn adaptive<G: Fn(f64) -> f64>(
    g: &G,
    a: f64,
    b: f64,
    whole: f64,
    abs_floor: f64,
    depth: u32,
    acc: &mut PanelSum,
) {
    let m = 0.5 * (a + b);
    let left = gl_panel(g, a, m);
    let right = gl_panel(g, m, b);
    acc.nodes += 32;
    let refined = left + right;
    let diff = (refined - whole).abs();
    if diff <= PANEL_REL_TOL * refined.abs() || diff <= abs_floor * (b - a) {
        acc.sum.add(refined);
        acc.err += diff;
        return;
    }
    if depth >= MAX_PANEL_DEPTH {
        acc.sum.add(refined);
        acc.err += diff;
        acc.converged = false;
        return;
    }
    adaptive(g, a, m, left, abs_floor, depth + 1, acc);
    adaptive(g, m, b, right, abs_floor, depth + 1, acc);
}

/// Local break points on piece `j`: ends, a uniform grid sized by the degree,
/// and the foot points of roots that sit close to the piece.
fn panel_breaks(p: &RootPolynomial, b: &ConvexBoundary, j: usize, lo: f64, hi: f64) -> Vec<f64> {
    let piece = &b.pieces()[j];
    let l = b.total_length();
    let count = ((hi - lo) / l * (4 * p.degree()).max(32) as f64).ceil().max(1.0) as usize;
    let mut cuts: Vec<f64> = (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect();
    let spacing = (hi - lo) / count as f64;
    for &r in p.roots() {
        let t = piece.nearest_param(r);
        if t > lo && t < hi && (piece.point_at(t) - r).norm() < spacing {
            cuts.push(t);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, c| (*a - *c).abs() <= 1e-14 * l);
    cuts
}

/// `∫ |f|^q` over the given boundary parameter ranges, scaled by `exp(−q·scale)`.
/// Ranges must lie in `[0, L]`.
fn integrate_pow(
    p: &RootPolynomial,
    target: NormTarget,
    b: &ConvexBoundary,
    q: f64,
    ranges: &[(f64, f64)],
) -> (f64, f64, PanelSum) {
    // panels as (piece, a, b)
    let mut panels = Vec::new();
    for &(s0, s1) in ranges {
        for j in 0..b.num_pieces() {
            let (v0, v1) = b.piece_interval(j);
            let (a, c) = (s0.max(v0) - v0, s1.min(v1) - v0);
            if c > a {
                let cuts = panel_breaks(p, b, j, a, c);
                panels.extend(cuts.windows(2).map(|w| (j, w[0], w[1])));
            }
        }
    }
    let (x, _) = gauss_legendre_16();
    let scale = panels
        .iter()
        .flat_map(|&(j, a, c)| {
            let piece = &b.pieces()[j];
            x.iter()
                .map(move |x| p.log_modulus(target, piece.point_at(0.5 * (a + c) + 0.5 * (c - a) * x)))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let mut acc = PanelSum {
        sum: CompensatedSum::new(),
        err: 0.0,
        nodes: 0,
        converged: true,
    };
    if !scale.is_finite() {
        return (0.0, scale, acc);
    }
    let total_len: f64 = panels.iter().map(|&(_, a, c)| c - a).sum();
    let coarse: Vec<f64> = panels
        .iter()
        .map(|&(j, a, c)| {
            let piece = &b.pieces()[j];
            let g = |t: f64| (q * (p.log_modulus(target, piece.point_at(t)) - scale)).exp();
            gl_panel(&g, a, c)
        })
        .collect();
    acc.nodes += 16 * panels.len();
    let rough: f64 = coarse.iter().sum();
    let abs_floor = 1e-3 * PANEL_REL_TOL * rough / total_len.max(1e-300);
    for (&(j, a, c), &whole) in panels.iter().zip(&coarse) {
        let piece = &b.pieces()[j];
        let g = |t: f64| (q * (p.log_modulus(target, piece.point_at(t)) - scale)).exp();
        adaptive(&g, a, c, whole, abs_floor, 1, &mut acc);
    }
    (acc.sum.value(), scale, acc)
}

/// `‖f‖_{L^q(∂K)}` with respect to arc length.
pub fn lq_norm(
    target: NormTarget,
    p: &RootPolynomial,
    b: &ConvexBoundary,
    q: f64,
) -> Result<NormReport, NormError> {
    Norm::Lq(q).validate()?;
    let (scaled, scale, acc) = integrate_pow(p, target, b, q, &[(0.0, b.total_length())]);
    let value = scaled.powf(1.0 / q) * scale.exp();
    let rel_err = if scaled > 0.0 { acc.err / scaled / q } else { 0.0 };
    Ok(NormReport {
        value,
        error_estimate: rel_err * value,
        argmax_param: None,
        quadrature_nodes: acc.nodes,
        converged: acc.converged,
    })
}

/// Norm of `p` or `p'` in the requested norm.
pub fn norm_of(
    target: NormTarget,
    p: &RootPolynomial,
    b: &ConvexBoundary,
    norm: Norm,
) -> Result<NormReport, NormError> {
    match norm.validate()? {
        Norm::Sup => Ok(sup_norm_of(p, target, b)),
        Norm::Lq(q) => lq_norm(target, p, b, q),
    }
}

/// `‖p'‖ / ‖p‖` on the boundary.
pub fn ratio(p: &RootPolynomial, b: &ConvexBoundary, norm: Norm) -> Result<f64, NormError> {
    let num = norm_of(NormTarget::Pprime, p, b, norm)?;
    let den = norm_of(NormTarget::P, p, b, norm)?;
    Ok(num.value / den.value)
}

/// Share of `‖p‖_q^q` carried by the boundary parameter ranges (each within `[0, L]`).
pub fn mass_fraction(
    p: &RootPolynomial,
    b: &ConvexBoundary,
    q: f64,
    ranges: &[(f64, f64)],
) -> Result<f64, NormError> {
    Norm::Lq(q).validate()?;
    if ranges.is_empty() {
        return Ok(0.0);
    }
    let (whole, scale, _) = integrate_pow(p, NormTarget::P, b, q, &[(0.0, b.total_length())]);
    let (part, part_scale, _) = integrate_pow(p, NormTarget::P, b, q, ranges);
    Ok(part / whole * (q * (part_scale - scale)).exp())
}

/// `(8π(q+1))^{−1/q}`.
pub fn h_set_constant(q: f64) -> f64 {
    (8.0 * PI * (q + 1.0)).powf(-1.0 / q)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HSet {
    /// Maximal boundary parameter intervals where `|p|` exceeds the threshold;
    /// an interval may wrap through parameter 0 (then `end < start`).
    pub intervals: Vec<(f64, f64)>,
    pub mass_fraction: f64,
    pub threshold: f64,
    pub sup: f64,
}

impl HSet {
    pub fn contains(&self, s: f64) -> bool {
        self.intervals.iter().any(|&(a, c)| {
            if a <= c {
                s >= a && s <= c
            } else {
                s >= a || s <= c
            }
        })
    }
}

/// Super-level set `{|p| > c n^{−2/q} ‖p‖_∞}` and the share of `‖p‖_q^q` it carries.
pub fn h_set(p: &RootPolynomial, b: &ConvexBoundary, q: f64) -> Result<HSet, NormError> {
    Norm::Lq(q).validate()?;
    let n = p.degree() as f64;
    let sup = sup_norm(p, b).value;
    let threshold = h_set_constant(q) * n.powf(-2.0 / q) * sup;
    let log_thr = threshold.ln();
    let l = b.total_length();
    let f = |s: f64| p.log_modulus(NormTarget::P, b.point_at(s)) - log_thr;

    let count = b.num_pieces() * SUP_MIN_NODES.max(SUP_NODES_PER_DEGREE * p.degree());
    let h = l / count as f64;
    let vals: Vec<f64> = (0..count).map(|i| f(h * i as f64)).collect();
    let crossing = |a: f64, c: f64, fa: f64| {
        let (mut lo, mut hi) = (a, c);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if (f(m) > 0.0) == (fa > 0.0) {
                lo = m;
            } else {
                hi = m;
            }
            if hi - lo <= 1e-14 * l {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for i in 0..count {
        let (a, fa, fb) = (h * i as f64, vals[i], vals[(i + 1) % count]);
        if (fa > 0.0) != (fb > 0.0) {
            let x = b.wrap_param(crossing(a, a + h, fa));
            if fb > 0.0 {
                ups.push(x);
            } else {
                downs.push(x);
            }
        }
    }
    let intervals: Vec<(f64, f64)> = if ups.is_empty() {
        if vals[0] > 0.0 {
            vec![(0.0, l)]
        } else {
            Vec::new()
        }
    } else {
        // pair each up-crossing with the next down-crossing cyclically
        ups.iter()
            .map(|&u| {
                let d = downs
                    .iter()
                    .copied()
                    .min_by(|x, y| b.wrap_param(x - u).total_cmp(&b.wrap_param(y - u)))
                    .expect("crossings come in pairs");
                (u, d)
            })
            .collect()
    };
    let mut ranges = Vec::new();
    for &(a, c) in &intervals {
        if a <= c {
            ranges.push((a, c));
        } else {
            ranges.push((a, l));
            ranges.push((0.0, c));
        }
    }
    let mass_fraction = mass_fraction(p, b, q, &ranges)?;
    Ok(HSet {
        intervals,
        mass_fraction,
        threshold,
        sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let z2 = RootPolynomial::repeated(c(0.0, 0.0), 2);
        assert_eq!(z2.evaluate(c(1.0, 0.0)), (c(1.0, 0.0), c(2.0, 0.0)));
        let sym = RootPolynomial::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(sym.evaluate(c(0.0, 0.0)), (c(-1.0, 0.0), c(0.0, 0.0)));
        let double = RootPolynomial::repeated(c(1.0, 0.0), 2);
        assert_eq!(double.evaluate(c(1.0, 0.0)), (c(0.0, 0.0), c(0.0, 0.0)));
        let simple = RootPolynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(simple.evaluate(c(1.0, 0.0)).1, c(-1.0, 0.0));
    }

    #[test]
    fn log_derivative_examples() {
        let z2 = RootPolynomial::repeated(c(0.0, 0.0), 2);
        assert_eq!(z2.log_derivative(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        let p = RootPolynomial::new(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(p.log_derivative(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let far = RootPolynomial::repeated(c(-1.0, 0.0), 10);
        assert_relative_eq!(
            far.log_derivative(c(0.95, 0.0)).unwrap().re,
            5.128205128205128,
            epsilon = 1e-14
        );
        assert_eq!(
            z2.log_derivative(c(0.0, 0.0)),
            Err(NormError::AtRoot(c(0.0, 0.0)))
        );
    }

    #[test]
    fn sup_norm_examples() {
        let disk = shapes::unit_disk();
        let z8 = RootPolynomial::repeated(c(0.0, 0.0), 8);
        assert_relative_eq!(sup_norm(&z8, &disk).value, 1.0, epsilon = 1e-14);
        let p = RootPolynomial::repeated(c(-1.0, 0.0), 4);
        let rep = sup_norm(&p, &disk);
        assert_relative_eq!(rep.value, 16.0, epsilon = 1e-12);
        let at = disk.point_at(rep.argmax_param.unwrap());
        assert!((at - c(1.0, 0.0)).norm() < 1e-5);
        let z = RootPolynomial::repeated(c(0.0, 0.0), 1);
        assert_relative_eq!(
            sup_norm(&z, &shapes::centered_square()).value,
            0.5f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn lq_norm_examples() {
        let disk = shapes::unit_disk();
        let z8 = RootPolynomial::repeated(c(0.0, 0.0), 8);
        let tau_sqrt = (2.0 * PI).sqrt();
        assert_relative_eq!(
            lq_norm(NormTarget::P, &z8, &disk, 2.0).unwrap().value,
            tau_sqrt,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            lq_norm(NormTarget::Pprime, &z8, &disk, 2.0).unwrap().value,
            8.0 * tau_sqrt,
            epsilon = 1e-11
        );
        let p = RootPolynomial::repeated(c(-1.0, 0.0), 1);
        let r = lq_norm(NormTarget::P, &p, &disk, 2.0).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, (4.0 * PI).sqrt(), epsilon = 1e-12);
        assert!(lq_norm(NormTarget::P, &p, &disk, 0.5).is_err());
    }

    #[test]
    fn lq_with_root_on_a_corner() {
        // ∫ over the boundary of [0,1]² of |z| (q = 1); oracle by a fine midpoint rule
        let sq = shapes::unit_square();
        let p = RootPolynomial::repeated(c(0.0, 0.0), 1);
        let r = lq_norm(NormTarget::P, &p, &sq, 1.0).unwrap();
        // two sides through the origin give 1/2 each; the far sides ∫_0^1 sqrt(1+t²) dt each
        let far = 0.5 * (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln());
        assert_relative_eq!(r.value, 1.0 + 2.0 * far, epsilon = 1e-12);
    }

    #[test]
    fn ratio_examples() {
        let disk = shapes::unit_disk();
        for n in [1, 3, 6] {
            let p = RootPolynomial::repeated(c(0.0, 0.0), n);
            for norm in [Norm::Lq(1.0), Norm::Lq(2.0), Norm::Lq(4.0), Norm::Sup] {
                assert_relative_eq!(ratio(&p, &disk, norm).unwrap(), n as f64, epsilon = 1e-10);
            }
        }
        let p = RootPolynomial::repeated(c(-1.0, 0.0), 4);
        assert_relative_eq!(ratio(&p, &disk, Norm::Sup).unwrap(), 2.0, epsilon = 1e-10);
        let z = RootPolynomial::repeated(c(0.0, 0.0), 1);
        assert_relative_eq!(
            ratio(&z, &shapes::centered_square(), Norm::Sup).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn h_set_examples() {
        let disk = shapes::unit_disk();
        let z8 = RootPolynomial::repeated(c(0.0, 0.0), 8);
        let h = h_set(&z8, &disk, 2.0).unwrap();
        assert_relative_eq!(h.threshold, 0.014395589561305645, epsilon = 1e-15);
        assert_eq!(h.intervals, vec![(0.0, 2.0 * PI)]);
        assert_relative_eq!(h.mass_fraction, 1.0, epsilon = 1e-12);

        let p = RootPolynomial::repeated(c(-1.0, 0.0), 4);
        let h = h_set(&p, &disk, 1.0).unwrap();
        assert_relative_eq!(h.threshold, 1.0 / (16.0 * PI), epsilon = 1e-12);
        assert_eq!(h.intervals.len(), 1);
        // oracle: |1+e^{iθ}|^4 = 16 cos^4(θ/2) exceeds the threshold for |θ| < θ*
        let theta_star = 2.0 * ((h.threshold / 16.0).powf(0.25)).acos();
        let (a, e) = h.intervals[0];
        assert_relative_eq!(a, 2.0 * PI - theta_star, epsilon = 1e-9);
        assert_relative_eq!(e, theta_star, epsilon = 1e-9);
        let m = 200_000;
        let dt = 2.0 * PI / m as f64;
        let (mut inside, mut total) = (0.0, 0.0);
        for i in 0..m {
            let t = -PI + (i as f64 + 0.5) * dt;
            let v = 16.0 * (t / 2.0).cos().powi(4);
            total += v;
            if t.abs() < theta_star {
                inside += v;
            }
        }
        assert_relative_eq!(h.mass_fraction, inside / total, epsilon = 1e-8);
        assert!(h.mass_fraction >= 0.5);
    }

    #[test]
    fn norm_parsing() {
        assert_eq!("inf".parse::<Norm>().unwrap(), Norm::Sup);
        assert_eq!("2".parse::<Norm>().unwrap(), Norm::Lq(2.0));
        assert!("0.5".parse::<Norm>().is_err());
        let text = serde_json::to_string(&Norm::Sup).unwrap();
        assert_eq!(serde_json::from_str::<Norm>(&text).unwrap(), Norm::Sup);
    }

    #[test]
    fn root_polynomial_round_trips_through_json() {
        let p = RootPolynomial::new(vec![c(0.1, -0.2), c(1.0 / 3.0, 0.7)]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<RootPolynomial>(&text).unwrap(), p);
        assert!(serde_json::from_str::<RootPolynomial>("[]").is_err());
    }
}
