//! Acceptance criteria. Each test writes one `CRITERION k: PASS|FAIL` line to
//! stderr (uncaptured) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use turanlab::bounds::{classify_segment_alternative, trapezoid};
use turanlab::certify::{
    check_partial_r_circular, chord_arc_angle, circularity_radius, convexify, ECertificate,
    TaggedDecomposition,
};
use turanlab::domain_spec::bundled_corpus;
use turanlab::estimator::{
    derive_seed, estimate_oscillation, random_poly, upper_bound_witness, SearchConfig, WitnessSource,
};
use turanlab::geometry::{shapes, transfinite_diameter, BoundaryPiece, ConvexBoundary};
use turanlab::norms::{lq_norm, ratio, Norm, NormTarget, RootPolynomial};
use turanlab::verify::{verify_suites, DomainContext, Suite, VerifyConfig, VerifyRow};
use turanlab::PlanePoint;

/// Relative rounding allowance at an exactly extremal value (a few ulps).
const FLOAT_SLACK: f64 = 1e-12;
/// Criterion 1 upper window factor.
const SHARPNESS_WINDOW: f64 = 1.05;
/// Criterion 1 wall time limit per degree.
const SHARPNESS_TIME: Duration = Duration::from_secs(60);
/// Criterion 2 optimizer allowance.
const DISK_LQ_TOL: f64 = 1e-6;
/// Criteria 4-6 population size.
const POPULATION: usize = 1000;
/// Criterion 7 relative distance of the disk estimate from 1.
const DISK_FEKETE_TOL: f64 = 0.01;
/// Criterion 8 tolerances.
const RADIUS_TOL: f64 = 1e-3;
const HAUSDORFF_TOL: f64 = 1e-3;
const ANGLE_TOL: f64 = 1e-9;
/// Criterion 12 tolerances and resolution.
const RIEMANN_POINTS: usize = 1 << 20;
const RIEMANN_TOL: f64 = 1e-6;
const CLOSED_FORM_TOL: f64 = 1e-10;

fn report(k: u32, pass: bool, detail: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "CRITERION {k:2}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

fn contexts() -> &'static [DomainContext] {
    static CTX: OnceLock<Vec<DomainContext>> = OnceLock::new();
    CTX.get_or_init(|| bundled_corpus().into_iter().map(DomainContext::new).collect())
}

fn ctx(name: &str) -> &'static DomainContext {
    contexts().iter().find(|c| c.domain.name == name).expect("bundled domain")
}

fn disk() -> ConvexBoundary {
    shapes::unit_disk()
}

#[test]
fn criterion_01_disk_sharpness() {
    let mut pass = true;
    let mut detail = String::new();
    for n in [2usize, 4, 8] {
        let t = Instant::now();
        let cfg = SearchConfig {
            seed: 1,
            ..SearchConfig::new(n, Norm::Sup)
        };
        let res = estimate_oscillation(&disk(), &cfg).unwrap();
        let elapsed = t.elapsed();
        let half = n as f64 / 2.0;
        let ok = res.best_ratio >= half * (1.0 - FLOAT_SLACK)
            && res.best_ratio <= half * SHARPNESS_WINDOW
            && elapsed < SHARPNESS_TIME;
        pass &= ok;
        detail += &format!("n={n}: {:.15} in {:.1}s; ", res.best_ratio, elapsed.as_secs_f64());
    }
    report(1, pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_02_disk_lq_bound() {
    let b = disk();
    let mut pass = true;
    let mut detail = String::new();
    for q in [1.0, 2.0] {
        for n in [2usize, 4, 8] {
            let half = n as f64 / 2.0;
            let cfg = SearchConfig {
                budget: 5000,
                seed: 2,
                ..SearchConfig::new(n, Norm::Lq(q))
            };
            let best = estimate_oscillation(&b, &cfg).unwrap().best_ratio;
            let worst_random = (0..200u64)
                .map(|i| ratio(&random_poly(&b, n, derive_seed(20, i)), &b, Norm::Lq(q)).unwrap())
                .fold(f64::INFINITY, f64::min);
            let ok = best >= half - DISK_LQ_TOL && worst_random >= half;
            pass &= ok;
            detail += &format!("q={q} n={n}: opt {best:.6} rand-min {worst_random:.4}; ");
        }
    }
    report(2, pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_03_degree_linear_on_certified_domains() {
    let mut violations = 0usize;
    let mut detail = String::new();
    for name in ["heptagon", "truncated_disk"] {
        let c = ctx(name);
        let ck = c.constants.expect("certified").ck;
        let mut rel = Vec::new();
        for n in [4usize, 8, 16, 32] {
            for q in [1.0, 2.0, 4.0] {
                let cfg = VerifyConfig {
                    n,
                    norm: Norm::Lq(q),
                    trials: 200,
                    seed: 3,
                };
                let rep = verify_suites(c, &cfg, &[Suite::DegreeLinear]);
                assert_eq!(rep.rows.len(), 200);
                violations += rep.failures();
                rel.extend(rep.rows.iter().map(|r| r.lhs / r.rhs));
                let search = SearchConfig {
                    budget: 2000,
                    restarts: 5,
                    seed: 3,
                    ..SearchConfig::new(n, Norm::Lq(q))
                };
                let res = estimate_oscillation(c.domain.boundary(), &search).unwrap();
                assert_eq!(res.restarts.len(), 5);
                for r in &res.restarts {
                    let bound = ck * n as f64;
                    if !(r.ratio >= bound) {
                        violations += 1;
                    }
                    rel.push(r.ratio / bound);
                }
            }
        }
        rel.sort_by(f64::total_cmp);
        detail += &format!(
            "{name}: cK={ck:.3e}, ratio/(cK n) min {:.3e} median {:.3e} max {:.3e}; ",
            rel[0],
            rel[rel.len() / 2],
            rel[rel.len() - 1]
        );
    }
    let pass = violations == 0;
    report(3, pass, &format!("{violations} violations; {detail}"));
    assert!(pass);
}

/// Rows of the shared random population used by criteria 4 to 6.
fn population() -> &'static [VerifyRow] {
    static ROWS: OnceLock<Vec<VerifyRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let suites = [Suite::Nikolskii, Suite::HSetMass, Suite::HSetLevel, Suite::DiameterOnly];
        let ctxs = contexts();
        (0..POPULATION)
            .flat_map(|i| {
                let cfg = VerifyConfig {
                    n: 2 + (i / 18) % 15,
                    norm: Norm::Lq([1.0, 2.0, 4.0][(i / 6) % 3]),
                    trials: 1,
                    seed: 4_000 + i as u64,
                };
                verify_suites(&ctxs[i % ctxs.len()], &cfg, &suites).rows
            })
            .collect()
    })
}

fn population_check(k: u32, suites: &[&str]) {
    let rows: Vec<&VerifyRow> = population().iter().filter(|r| suites.contains(&r.suite.as_str())).collect();
    let failures = rows.iter().filter(|r| !r.pass).count();
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let pass = rows.len() == POPULATION * suites.len() && failures == 0;
    report(k, pass, &format!("{} checks, {failures} violations, smallest margin {worst:.3e}", rows.len()));
    assert!(pass);
}

#[test]
fn criterion_04_nikolskii() {
    population_check(4, &["nikolskii"]);
}

#[test]
fn criterion_05_h_set() {
    population_check(5, &["h_set_mass", "h_set_level"]);
}

#[test]
fn criterion_06_gabriel() {
    population_check(6, &["diameter_only"]);
}

#[test]
fn criterion_07_transfinite_engine() {
    let disk_40 = transfinite_diameter(&disk(), 40).fekete_estimate;
    let near_one = (disk_40 - 1.0).abs() <= DISK_FEKETE_TOL;
    let seq: Vec<f64> = [8, 16, 32, 48]
        .iter()
        .map(|&m| transfinite_diameter(&disk(), m).fekete_estimate)
        .collect();
    let monotone = seq.windows(2).all(|w| w[1] <= w[0]);
    let bracket_ok = contexts().iter().all(|c| {
        let d = c.summary.diameter;
        let br = &c.certification.bracket;
        br.certified_lower() >= d / 4.0 && br.upper <= d / 2.0 && br.certified_lower() <= br.upper
    });
    let pass = near_one && monotone && bracket_ok;
    report(
        7,
        pass,
        &format!(
            "disk m=40 estimate {disk_40:.12} (within 1%: {near_one}); m=8,16,32,48 {seq:?} monotone: {monotone}; brackets: {bracket_ok}"
        ),
    );
    assert!(pass);
}

/// Certificate data shared by the convexification and alternative checks.
fn truncated_example_cert() -> ECertificate {
    ECertificate {
        k: 2,
        d: 2.0,
        delta_cap: 0.99,
        kappa: 1.0,
        xi: 0.31755,
        delta_small: 0.3,
        lambdas: vec![1, 1],
    }
}

fn truncated_td() -> TaggedDecomposition {
    ctx("truncated_disk").domain.td.clone()
}

#[test]
fn criterion_08_convexification() {
    let td = truncated_td();
    let cert = truncated_example_cert();
    let (curve, kappa_star) = convexify(&td, &cert).unwrap();
    let radius = match curve.pieces()[0] {
        BoundaryPiece::CircularArc { radius, .. } => radius,
        _ => f64::NAN,
    };
    let radius_ok = (radius - 0.99986).abs() <= RADIUS_TOL && (radius - 1.0).abs() <= RADIUS_TOL;
    // both curves are star-shaped about the origin, so this is the Hausdorff distance
    let hausdorff = curve
        .uniform_params(20_000, 0.0)
        .into_iter()
        .map(|s| (curve.point_at(s).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let kappa_ok = kappa_star == cert.kappa.min(2.0 * cert.xi.sin() / cert.delta_cap);

    let square = TaggedDecomposition::from_kinds(shapes::unit_square());
    let sq_cert = ECertificate {
        k: 4,
        d: 2f64.sqrt(),
        delta_cap: 2f64.sqrt() / 2.0,
        kappa: f64::INFINITY,
        xi: PI / 4.0,
        delta_small: 0.1,
        lambdas: vec![2; 4],
    };
    let (sq_curve, sq_kappa) = convexify(&square, &sq_cert).unwrap();
    let mut angle_err: f64 = 0.0;
    for j in 0..4 {
        angle_err = angle_err.max(sq_curve.outer_angle(j).abs());
        let (a, b) = chord_arc_angle(&square.boundary.pieces()[j], &sq_curve.pieces()[j]);
        angle_err = angle_err.max((a - PI / 4.0).abs()).max((b - PI / 4.0).abs());
    }
    let sq_kappa_ok = sq_kappa == sq_cert.kappa.min(2.0 * sq_cert.xi.sin() / sq_cert.delta_cap);

    let mut circ = Vec::new();
    circ.push(check_partial_r_circular(&td, &cert, circularity_radius(&cert), 256).is_ok());
    for name in ["disk", "truncated_disk"] {
        let c = ctx(name);
        let cert = c.certificate().unwrap();
        circ.push(check_partial_r_circular(&c.domain.td, cert, circularity_radius(cert), 256).is_ok());
    }
    let circ_ok = circ.iter().all(|&x| x);

    let pass = radius_ok && hausdorff <= HAUSDORFF_TOL && kappa_ok && angle_err <= ANGLE_TOL && sq_kappa_ok && circ_ok;
    report(
        8,
        pass,
        &format!(
            "radius {radius:.6}, Hausdorff {hausdorff:.2e}, square angle error {angle_err:.1e}, kappa* exact {}, R_K circularity {circ:?}",
            kappa_ok && sq_kappa_ok
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_trapezoid_grid() {
    let mut checked = 0usize;
    let mut worst = f64::INFINITY;
    for i in 1..=20 {
        let cap = 2.0 * i as f64 / 20.0;
        for j in 1..=20 {
            let small = cap / 2.0 * j as f64 / 20.0;
            for k in 1..=20 {
                let xi = PI / 2.0 * k as f64 / 20.0;
                let theta = small * xi / (4.0 * cap) * 0.999;
                let t = trapezoid((cap - small) / 2.0, xi, theta).unwrap();
                worst = worst.min(cap - small / 2.0 - t.diam);
                checked += 1;
            }
        }
    }
    let pass = checked == 8000 && worst > 0.0;
    report(9, pass, &format!("{checked} grid points, smallest (Δ − δ/2) − diam B = {worst:.3e}"));
    assert!(pass);
}

#[test]
fn criterion_10_segment_alternative() {
    let mut neither = 0usize;
    let mut total = 0usize;
    for name in ["heptagon", "truncated_disk"] {
        let c = ctx(name);
        let cert = c.certificate().unwrap();
        let td = &c.domain.td;
        for i in 0..200u64 {
            let p = random_poly(&td.boundary, 8, derive_seed(10, i));
            for j in td.straight_indices() {
                let alt = classify_segment_alternative(&p, td, cert, j, 256).unwrap();
                total += 1;
                if !alt.either() {
                    neither += 1;
                }
            }
        }
    }

    let td = truncated_td();
    let cert = truncated_example_cert();
    let far = RootPolynomial::repeated(PlanePoint::new(-1.0, 0.0), 10);
    let a = classify_segment_alternative(&far, &td, &cert, 0, 256).unwrap();
    let seg = td.boundary.pieces()[0];
    let mut roots = vec![seg.start_point(); 5];
    roots.extend(vec![seg.end_point(); 5]);
    let chord = RootPolynomial::new(roots).unwrap();
    let b = classify_segment_alternative(&chord, &td, &cert, 0, 257).unwrap();

    let pass = neither == 0 && a.holds_i && !b.holds_i && b.holds_ii;
    report(
        10,
        pass,
        &format!(
            "{total} classifications, {neither} with neither branch; far roots (i)={} ; chord-end roots (i)={} (ii)={}",
            a.holds_i, b.holds_i, b.holds_ii
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_upper_witness() {
    let mut pass = true;
    let mut detail = String::new();
    for c in contexts() {
        let b = c.domain.boundary();
        let mut sources = Vec::new();
        for n in [4usize, 8, 16, 32, 64] {
            for q in [1.0, 2.0] {
                let w = upper_bound_witness(b, n, Norm::Lq(q), 2000, 11).unwrap();
                let early = matches!(w.source, Some(WitnessSource::Incenter | WitnessSource::Fekete));
                pass &= w.found && early && w.ratio < w.target;
                sources.push(w.source);
            }
        }
        let fekete = sources.iter().filter(|s| **s == Some(WitnessSource::Fekete)).count();
        let missing = sources.iter().filter(|s| s.is_none()).count();
        detail += &format!("{}: {} via incenter, {fekete} via Fekete, {missing} none; ", c.domain.name, sources.len() - fekete - missing);
    }
    report(11, pass, &detail);
    assert!(pass, "{detail}");
}

/// Midpoint Riemann sum of `|f|^q` over `count` equal arc-length cells.
fn riemann_lq(p: &RootPolynomial, target: NormTarget, b: &ConvexBoundary, q: f64, count: usize) -> f64 {
    let h = b.total_length() / count as f64;
    let logs: Vec<f64> = b
        .uniform_params(count, 0.5 * h)
        .into_iter()
        .map(|s| p.log_modulus(target, b.point_at(s)))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (q * (l - top)).exp()).sum();
    top.exp() * (h * sum).powf(1.0 / q)
}

#[test]
fn criterion_12_quadrature_oracle() {
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for (di, domain) in bundled_corpus().iter().enumerate() {
        let b = domain.boundary();
        for i in 0..50usize {
            let n = 2 + i % 5;
            let q = [1.0, 2.0, 4.0][i % 3];
            let target = if i % 2 == 0 { NormTarget::P } else { NormTarget::Pprime };
            let p = random_poly(b, n, derive_seed(12, (di * 50 + i) as u64));
            let quad = lq_norm(target, &p, b, q).unwrap().value;
            let riemann = riemann_lq(&p, target, b, q, RIEMANN_POINTS);
            worst = worst.max((quad - riemann).abs() / riemann);
            cases += 1;
        }
    }
    let one_plus_z = RootPolynomial::new(vec![PlanePoint::new(-1.0, 0.0)]).unwrap();
    let closed = lq_norm(NormTarget::P, &one_plus_z, &disk(), 2.0).unwrap().value;
    let exact = (4.0 * PI).sqrt();
    let closed_err = (closed - exact).abs() / exact;
    let pass = cases == 300 && worst <= RIEMANN_TOL && closed_err <= CLOSED_FORM_TOL;
    report(
        12,
        pass,
        &format!("{cases} cases, worst relative gap {worst:.2e}; ‖1+z‖₂ relative error {closed_err:.1e}"),
    );
    assert!(pass);
}
