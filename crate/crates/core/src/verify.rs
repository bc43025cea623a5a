//! Property suites run against random polynomials with roots in a domain.
//!
//! Each case draws its polynomial from its own derived seed, so any row of a
//! report can be replayed on its own and reproduces bit-for-bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    self, classify_segment_alternative, comparison_bounds, certificate_constants, BoundKind,
    CertificateConstants,
};
use crate::certify::{certify_report_from, CertificationReport, ECertificate, Tag};
use crate::domain_spec::Domain;
use crate::estimator::{derive_seed, random_poly, upper_bound_witness};
use crate::geometry::{
    summarize_with_bracket, transfinite_diameter, GeometrySummary, DEFAULT_FEKETE_POINTS,
};
use crate::norms::{self, h_set, lq_norm, ratio, sup_norm, Norm, NormTarget, RootPolynomial};

/// Relative slack granted to quadrature-based comparisons.
pub const QUADRATURE_BUDGET: f64 = 1e-6;
/// Absolute slack for the level-set checks.
pub const LEVEL_SET_TOL: f64 = 1e-9;
/// Boundary samples for pointwise checks.
pub const POINTWISE_SAMPLES: usize = 256;
/// Boundary samples for the level-set depth check.
pub const LEVEL_SAMPLES: usize = 4096;
/// Samples per straight piece for the segment alternative.
pub const ALTERNATIVE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `‖p‖_q ≥ (d/(2(q+1)))^{1/q} n^{−2/q} ‖p‖_∞`.
    Nikolskii,
    /// The level set carries at least half of `‖p‖_q^q`.
    HSetMass,
    /// On the level set `ln(‖p‖_∞/|p|) ≤ ln(16π) + 2 ln n`.
    HSetLevel,
    /// `‖p‖_∞ ≥ Δⁿ` for roots inside and outside the domain.
    Transfinite,
    /// `‖p'‖/‖p‖ ≥ 0.022/d`.
    DiameterOnly,
    /// `|p'/p| ≥ n/(2R)` pointwise on all-curved certified domains.
    Pointwise,
    /// `‖p'‖/‖p‖ ≥ c_K n` on certified domains.
    DegreeLinear,
    /// `‖p'‖/‖p‖` against every applicable comparison row.
    Comparison,
    /// Some branch of the straight-piece alternative holds.
    SegmentAlternative,
    /// Straight pieces failing branch (i) carry at most half the mass once `n ≥ n0`.
    Assembly,
    /// Some polynomial beats `15n/d`.
    UpperWitness,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Nikolskii,
        Suite::HSetMass,
        Suite::HSetLevel,
        Suite::Transfinite,
        Suite::DiameterOnly,
        Suite::Pointwise,
        Suite::DegreeLinear,
        Suite::Comparison,
        Suite::SegmentAlternative,
        Suite::Assembly,
        Suite::UpperWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Nikolskii => "nikolskii",
            Suite::HSetMass => "h_set_mass",
            Suite::HSetLevel => "h_set_level",
            Suite::Transfinite => "transfinite",
            Suite::DiameterOnly => "diameter_only",
            Suite::Pointwise => "pointwise",
            Suite::DegreeLinear => "degree_linear",
            Suite::Comparison => "comparison",
            Suite::SegmentAlternative => "segment_alternative",
            Suite::Assembly => "assembly",
            Suite::UpperWitness => "upper_witness",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let head = s.split(':').next().unwrap_or(s);
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == head)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// One checked inequality. `margin ≥ 0` means it held; `pass` also allows the
/// suite's numerical slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub domain: String,
    /// Suite name, with `:label` for comparison rows and `:piece` for segments.
    pub suite: String,
    pub case_id: u64,
    pub n: usize,
    /// Exponent, or `inf`.
    pub q: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub seed: u64,
}

/// Everything needed to replay a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub domain: String,
    pub suite: String,
    pub case_id: u64,
    pub seed: u64,
    pub roots: Vec<[f64; 2]>,
    pub point: Option<[f64; 2]>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub norm: Norm,
    pub trials: usize,
    pub seed: u64,
}

/// Domain data shared by all cases.
#[derive(Debug, Clone)]
pub struct DomainContext {
    pub domain: Domain,
    pub summary: GeometrySummary,
    pub certification: CertificationReport,
    pub constants: Option<CertificateConstants>,
}

impl DomainContext {
    pub fn new(domain: Domain) -> Self {
        Self::with_fekete_points(domain, DEFAULT_FEKETE_POINTS)
    }

    pub fn with_fekete_points(domain: Domain, m: usize) -> Self {
        let bracket = transfinite_diameter(domain.boundary(), m);
        let summary = summarize_with_bracket(domain.boundary(), &bracket);
        let certification = certify_report_from(&domain.td, bracket);
        let constants = certification.certified.as_ref().ok().map(certificate_constants);
        DomainContext {
            domain,
            summary,
            certification,
            constants,
        }
    }

    pub fn certificate(&self) -> Option<&ECertificate> {
        self.certification.certified.as_ref().ok()
    }

    fn all_curved(&self) -> bool {
        self.domain.td.tags.iter().all(|&t| t == Tag::Curved)
    }

    /// Circularity radius valid for the whole boundary, when known.
    pub fn global_radius(&self) -> Option<f64> {
        if self.all_curved() {
            self.constants.map(|c| c.rk)
        } else {
            None
        }
    }

    /// Curvature bound valid for the whole boundary, when known.
    pub fn global_kappa(&self) -> Option<f64> {
        if self.all_curved() {
            self.certificate().map(|c| c.kappa)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub witnesses: Vec<FailureWitness>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }
}

struct Case<'a> {
    ctx: &'a DomainContext,
    cfg: &'a VerifyConfig,
    case_id: u64,
    seed: u64,
    p: RootPolynomial,
    out: VerifyReport,
}

impl Case<'_> {
    fn record(&mut self, suite: String, lhs: f64, rhs: f64, upper: bool, slack: f64, point: Option<[f64; 2]>) {
        let margin = if upper { rhs - lhs } else { lhs - rhs };
        let pass = margin >= -slack;
        if !pass {
            self.out.witnesses.push(FailureWitness {
                domain: self.ctx.domain.name.clone(),
                suite: suite.clone(),
                case_id: self.case_id,
                seed: self.seed,
                roots: self.p.roots().iter().map(|z| [z.re, z.im]).collect(),
                point,
                detail: format!("lhs {lhs:e}, rhs {rhs:e}"),
            });
        }
        self.out.rows.push(VerifyRow {
            domain: self.ctx.domain.name.clone(),
            suite,
            case_id: self.case_id,
            n: self.cfg.n,
            q: self.cfg.norm.to_string(),
            lhs,
            rhs,
            margin,
            pass,
            seed: self.seed,
        });
    }

    fn run(&mut self, suite: Suite) {
        let b = self.ctx.domain.boundary();
        let n = self.cfg.n;
        let d = self.ctx.summary.diameter;
        let norm = self.cfg.norm;
        let name = suite.name().to_string();
        match suite {
            Suite::Nikolskii => {
                if let Norm::Lq(q) = norm {
                    let lq = lq_norm(NormTarget::P, &self.p, b, q).expect("q >= 1").value;
                    let rhs = bounds::nikolskii_bound(d, q, n) * sup_norm(&self.p, b).value;
                    self.record(name, lq, rhs, false, QUADRATURE_BUDGET * rhs, None);
                }
            }
            Suite::HSetMass => {
                if let Norm::Lq(q) = norm {
                    let h = h_set(&self.p, b, q).expect("q >= 1");
                    self.record(name, h.mass_fraction, 0.5, false, LEVEL_SET_TOL, None);
                }
            }
            Suite::HSetLevel => {
                if let Norm::Lq(q) = norm {
                    let h = h_set(&self.p, b, q).expect("q >= 1");
                    let (worst, at) = b
                        .uniform_params(LEVEL_SAMPLES, 0.0)
                        .into_iter()
                        .filter(|&s| h.contains(s))
                        .map(|s| {
                            let z = b.point_at(s);
                            (h.sup.ln() - self.p.log_modulus(NormTarget::P, z), Some([z.re, z.im]))
                        })
                        .fold((f64::NEG_INFINITY, None), |a, c| if c.0 > a.0 { c } else { a });
                    self.record(name, worst, bounds::h_set_log_bound(n), true, LEVEL_SET_TOL, at);
                }
            }
            Suite::Transfinite => {
                let delta = self.ctx.certification.bracket.certified_lower();
                let rhs = bounds::transfinite_sup_lower(delta, n);
                self.record(format!("{name}:inside"), sup_norm(&self.p, b).value, rhs, false, 0.0, None);
                let outside = self.outside_poly();
                let sup = sup_norm(&outside, b).value;
                let saved = std::mem::replace(&mut self.p, outside);
                self.record(format!("{name}:outside"), sup, rhs, false, 0.0, None);
                self.p = saved;
            }
            Suite::DiameterOnly => {
                let r = ratio(&self.p, b, norm).expect("valid norm");
                self.record(name, r, bounds::gabriel_bound(d), false, 0.0, None);
            }
            Suite::Pointwise => {
                if let Some(r) = self.ctx.global_radius() {
                    let rhs = bounds::pointwise_log_derivative_bound(n, r);
                    let (lhs, at) = b
                        .uniform_params(POINTWISE_SAMPLES, 0.0)
                        .into_iter()
                        .map(|s| {
                            let z = b.point_at(s);
                            let v = self.p.log_derivative(z).map_or(f64::INFINITY, |w| w.norm());
                            (v, Some([z.re, z.im]))
                        })
                        .fold((f64::INFINITY, None), |a, c| if c.0 < a.0 { c } else { a });
                    self.record(name, lhs, rhs, false, 0.0, at);
                }
            }
            Suite::DegreeLinear => {
                if let Some(c) = self.ctx.constants {
                    let r = ratio(&self.p, b, norm).expect("valid norm");
                    self.record(name, r, c.ck * n as f64, false, 0.0, None);
                }
            }
            Suite::Comparison => {
                let r = ratio(&self.p, b, norm).expect("valid norm");
                let rows = comparison_bounds(
                    &self.ctx.summary,
                    self.ctx.global_radius(),
                    self.ctx.global_kappa(),
                    n,
                    norm,
                );
                for row in rows.into_iter().filter(|r| r.kind == BoundKind::Lower) {
                    if let Some(v) = row.value {
                        // pointwise-derived rows lose a little to quadrature
                        let slack = if matches!(norm, Norm::Lq(_)) { QUADRATURE_BUDGET * v } else { 0.0 };
                        self.record(format!("{name}:{}", row.label), r, v, false, slack, None);
                    }
                }
            }
            Suite::SegmentAlternative => {
                if let Some(cert) = self.ctx.certificate() {
                    let td = &self.ctx.domain.td;
                    for j in td.straight_indices().collect::<Vec<_>>() {
                        let alt = classify_segment_alternative(&self.p, td, cert, j, ALTERNATIVE_SAMPLES)
                            .expect("straight piece");
                        let point = alt.worst_i.map(|w| w.point);
                        let holds = if alt.either() { 1.0 } else { 0.0 };
                        self.record(format!("{name}:{j}"), holds, 1.0, false, 0.0, point);
                    }
                }
            }
            Suite::Assembly => {
                if let (Some(cert), Norm::Lq(q)) = (self.ctx.certificate(), norm) {
                    if n as u64 >= self.ctx.constants.map_or(u64::MAX, |c| c.n0) {
                        let rep = bounds::assembly_check(&self.p, &self.ctx.domain.td, cert, q, ALTERNATIVE_SAMPLES)
                            .expect("valid inputs");
                        self.record(name, rep.s_fraction, 0.5, true, LEVEL_SET_TOL, None);
                    }
                }
            }
            Suite::UpperWitness => {
                let w = upper_bound_witness(b, n, norm, 2000, self.seed).expect("valid norm");
                let saved = std::mem::replace(&mut self.p, w.witness.clone());
                self.record(name, w.ratio, w.target, true, 0.0, None);
                if w.found {
                    // strictness: the witness must beat the target, not tie it
                    let last = self.out.rows.last_mut().expect("row just recorded");
                    last.pass = w.ratio < w.target;
                }
                self.p = saved;
            }
        }
    }

    /// Roots anywhere in the bounding box scaled by two about its center.
    fn outside_poly(&self) -> RootPolynomial {
        let (lo, hi) = self.ctx.domain.boundary().bounding_box();
        let c = (lo + hi) * 0.5;
        let half = hi - c;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ OUTSIDE_SALT);
        let roots = (0..self.cfg.n)
            .map(|_| {
                c + Complex64::new(
                    2.0 * half.re * rng.random_range(-1.0..=1.0),
                    2.0 * half.im * rng.random_range(-1.0..=1.0),
                )
            })
            .collect();
        RootPolynomial::new(roots).expect("n >= 1")
    }
}

const OUTSIDE_SALT: u64 = 0x6f75_7473_6964_6521;

/// Seed of random case `case_id`.
pub fn case_seed(seed: u64, case_id: u64) -> u64 {
    derive_seed(seed, case_id)
}

/// Suites evaluated on each random case; `UpperWitness` runs once per call.
pub const RANDOM_SUITES: [Suite; 10] = [
    Suite::Nikolskii,
    Suite::HSetMass,
    Suite::HSetLevel,
    Suite::Transfinite,
    Suite::DiameterOnly,
    Suite::Pointwise,
    Suite::DegreeLinear,
    Suite::Comparison,
    Suite::SegmentAlternative,
    Suite::Assembly,
];

fn run_case(ctx: &DomainContext, cfg: &VerifyConfig, case_id: u64, suites: &[Suite]) -> VerifyReport {
    let seed = case_seed(cfg.seed, case_id);
    let mut case = Case {
        ctx,
        cfg,
        case_id,
        seed,
        p: random_poly(ctx.domain.boundary(), cfg.n, seed),
        out: VerifyReport::default(),
    };
    for &s in suites {
        case.run(s);
    }
    case.out
}

/// Run `suites` on `cfg.trials` random cases (in parallel, results in case order).
pub fn verify_suites(ctx: &DomainContext, cfg: &VerifyConfig, suites: &[Suite]) -> VerifyReport {
    let random: Vec<Suite> = suites.iter().copied().filter(|&s| s != Suite::UpperWitness).collect();
    let parts: Vec<VerifyReport> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|id| run_case(ctx, cfg, id, &random))
        .collect();
    let mut out = VerifyReport::default();
    for part in parts {
        out.rows.extend(part.rows);
        out.witnesses.extend(part.witnesses);
    }
    if suites.contains(&Suite::UpperWitness) {
        let part = run_case(ctx, cfg, cfg.trials as u64, &[Suite::UpperWitness]);
        out.rows.extend(part.rows);
        out.witnesses.extend(part.witnesses);
    }
    out
}

/// Every suite.
pub fn verify(ctx: &DomainContext, cfg: &VerifyConfig) -> VerifyReport {
    verify_suites(ctx, cfg, &Suite::ALL)
}

/// Recompute the rows of one suite for one recorded case.
pub fn replay(ctx: &DomainContext, row: &VerifyRow) -> Result<Vec<VerifyRow>, String> {
    let suite: Suite = row.suite.parse()?;
    let norm: Norm = row.q.parse()?;
    let cfg = VerifyConfig {
        n: row.n,
        norm,
        trials: 0,
        seed: 0,
    };
    let mut case = Case {
        ctx,
        cfg: &cfg,
        case_id: row.case_id,
        seed: row.seed,
        p: random_poly(ctx.domain.boundary(), row.n, row.seed),
        out: VerifyReport::default(),
    };
    case.run(suite);
    Ok(case.out.rows)
}

/// Roots used by a recorded case (for witness display).
pub fn case_polynomial(ctx: &DomainContext, row: &VerifyRow) -> RootPolynomial {
    random_poly(ctx.domain.boundary(), row.n, row.seed)
}

/// `‖p'‖/‖p‖` for the witness roots of a failure record.
pub fn witness_ratio(ctx: &DomainContext, w: &FailureWitness, norm: Norm) -> Option<f64> {
    let roots = w.roots.iter().map(|r| Complex64::new(r[0], r[1])).collect();
    let p = RootPolynomial::new(roots).ok()?;
    norms::ratio(&p, ctx.domain.boundary(), norm).ok()
}


#[cfg(test)]
mod props {
    use std::sync::OnceLock;

    use proptest::prelude::*;

    use super::*;
    use crate::domain_spec::bundled;

    fn disk() -> &'static DomainContext {
        static CTX: OnceLock<DomainContext> = OnceLock::new();
        CTX.get_or_init(|| DomainContext::with_fekete_points(bundled("disk").unwrap(), 16))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn any_row_replays_exactly(seed in any::<u64>(), n in 1usize..7, qi in 0usize..3) {
            let cfg = VerifyConfig {
                n,
                norm: [Norm::Lq(1.0), Norm::Lq(3.0), Norm::Sup][qi],
                trials: 2,
                seed,
            };
            let rep = verify_suites(disk(), &cfg, &RANDOM_SUITES);
            prop_assert!(rep.all_pass(), "{:?}", rep.witnesses);
            for row in &rep.rows {
                prop_assert!(replay(disk(), row).unwrap().contains(row));
            }
        }
    }
}
