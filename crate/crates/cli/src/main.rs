use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use turanlab::bounds::comparison_bounds;
use turanlab::domain_spec::{bundled, bundled_corpus, load_domain_spec, Domain, BUNDLED};
use turanlab::estimator::{estimate_oscillation, SearchConfig, SearchMethod};
use turanlab::norms::{norm_of, Norm, NormTarget, RootPolynomial};
use turanlab::report::ReportRecord;
use turanlab::verify::{replay, verify, DomainContext, VerifyConfig, VerifyReport, VerifyRow};
use turanlab::PlanePoint;

mod roots;

/// Exit code for a violated inequality.
const FALSIFIED: u8 = 1;
/// Exit code for bad arguments or unreadable input.
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "turanlab", version, about = "Derivative-to-polynomial norm ratios on convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry summary and E-domain certificate.
    Certify {
        /// Domain file, or the name of a bundled domain.
        spec: String,
    },
    /// Lower bounds and the upper target for degree n.
    Bounds {
        spec: String,
        #[arg(long)]
        n: usize,
        /// Circularity radius to use for the R-circular row.
        #[arg(long = "R")]
        r: Option<f64>,
        #[arg(long, default_value = "inf")]
        q: Norm,
    },
    /// Norms of p and p' for given roots.
    Norms {
        spec: String,
        /// File of roots, or inline `x,y;x,y;...`.
        #[arg(long)]
        roots: String,
        #[arg(long)]
        q: Norm,
    },
    /// Search for small ratios ‖p'‖/‖p‖.
    Estimate {
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Norm,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::NelderMead)]
        method: MethodArg,
    },
    /// Run the property suites on random polynomials; rows go to stdout as CSV.
    Verify {
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Norm,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify and verify the whole bundled corpus, writing files to a directory.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "2")]
        q: Norm,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute every row of a saved verify report and compare bit-for-bit.
    Replay {
        /// A `verify.csv` or `verify.json` written by `report`.
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    NelderMead,
    Perturb,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// An error that maps to the usage exit code rather than a generic failure.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("TURANLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("TURANLAB_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// A path if one exists, otherwise a bundled domain name.
fn load(spec: &str) -> Result<Domain> {
    let path = Path::new(spec);
    if path.exists() {
        return load_domain_spec(path).map_err(|e| usage(e.to_string()));
    }
    bundled(spec).ok_or_else(|| {
        let names: Vec<_> = BUNDLED.iter().map(|(f, _)| *f).collect();
        usage(format!("{spec}: no such file or bundled domain ({})", names.join(", ")))
    })
}

fn print(record: &ReportRecord) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(record)?);
    Ok(())
}

fn run(cmd: Command) -> Result<u8> {
    let t0 = Instant::now();
    match cmd {
        Command::Certify { spec } => {
            let ctx = DomainContext::new(load(&spec)?);
            let mut rec = certify_record(&ctx);
            rec.wall_time_s = t0.elapsed().as_secs_f64();
            print(&rec)?;
            Ok(0)
        }
        Command::Bounds { spec, n, r, q } => {
            check_norm(q)?;
            if n == 0 {
                bail!(usage("--n must be at least 1"));
            }
            if r.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
                bail!(usage("--R must be positive"));
            }
            let ctx = DomainContext::new(load(&spec)?);
            let g = &ctx.summary;
            let constants = ctx.constants;
            let rows = comparison_bounds(g, r.or(ctx.global_radius()), ctx.global_kappa(), n, q);
            let mut rec = ReportRecord::new(&ctx.domain.name, "bounds", json!({"n": n, "R": r, "q": q}));
            rec.results = json!({
                "rows": rows,
                "constants": constants,
                "degree_linear": constants.map(|c| c.ck * n as f64),
            });
            rec.error_estimates = json!({"depth_resolution": g.depth_resolution});
            rec.wall_time_s = t0.elapsed().as_secs_f64();
            print(&rec)?;
            Ok(0)
        }
        Command::Norms { spec, roots, q } => {
            check_norm(q)?;
            let domain = load(&spec)?;
            let roots = roots::parse_roots(&roots).map_err(|e| usage(format!("--roots: {e}")))?;
            let p = RootPolynomial::new(roots).map_err(|e| usage(e.to_string()))?;
            let b = domain.boundary();
            let np = norm_of(NormTarget::P, &p, b, q)?;
            let nd = norm_of(NormTarget::Pprime, &p, b, q)?;
            let mut rec = ReportRecord::new(&domain.name, "norms", json!({"q": q, "roots": p}));
            rec.results = json!({
                "norm_p": np.value,
                "norm_dp": nd.value,
                "ratio": nd.value / np.value,
                "roots_in_domain": p.roots_in(b),
            });
            rec.error_estimates = json!({"norm_p": np, "norm_dp": nd});
            rec.wall_time_s = t0.elapsed().as_secs_f64();
            print(&rec)?;
            Ok(0)
        }
        Command::Estimate {
            spec,
            n,
            q,
            budget,
            restarts,
            seed,
            method,
        } => {
            let domain = load(&spec)?;
            let cfg = SearchConfig {
                budget,
                restarts,
                seed,
                method: match method {
                    MethodArg::NelderMead => SearchMethod::NelderMead,
                    MethodArg::Perturb => SearchMethod::RandomPerturbation,
                },
                ..SearchConfig::new(n, q)
            };
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            let res = estimate_oscillation(domain.boundary(), &cfg)?;
            let mut rec = ReportRecord::new(&domain.name, "estimate", serde_json::to_value(cfg)?);
            rec.results = json!({
                "best_ratio": res.best_ratio,
                "witness": res.witness,
                "evaluations": res.evaluations,
                "converged": res.converged,
                "restart_ratios": res.restarts.iter().map(|r| r.ratio).collect::<Vec<_>>(),
                "restart_seeds": res.restarts.iter().map(|r| r.seed).collect::<Vec<_>>(),
            });
            let norm_p = norm_of(NormTarget::P, &res.witness, domain.boundary(), q)?;
            let norm_dp = norm_of(NormTarget::Pprime, &res.witness, domain.boundary(), q)?;
            rec.error_estimates = json!({
                "norm_p": norm_p.error_estimate,
                "norm_dp": norm_dp.error_estimate,
                "quadrature_converged": norm_p.converged && norm_dp.converged,
            });
            rec.seed = Some(seed);
            rec.wall_time_s = t0.elapsed().as_secs_f64();
            print(&rec)?;
            Ok(0)
        }
        Command::Verify {
            spec,
            n,
            q,
            trials,
            seed,
        } => {
            check_norm(q)?;
            if n == 0 {
                bail!(usage("--n must be at least 1"));
            }
            let domain = load(&spec)?;
            let cfg = VerifyConfig {
                n,
                norm: q,
                trials,
                seed,
            };
            let ctx = DomainContext::new(domain);
            let rep = verify(&ctx, &cfg);
            write_csv(std::io::stdout().lock(), &rep.rows)?;
            summarize_failures(&rep);
            eprintln!(
                "{}: {} rows, {} failures ({:.2} s)",
                ctx.domain.name,
                rep.rows.len(),
                rep.failures(),
                t0.elapsed().as_secs_f64()
            );
            Ok(if rep.all_pass() { 0 } else { FALSIFIED })
        }
        Command::Report {
            out,
            format,
            n,
            q,
            trials,
            seed,
        } => {
            check_norm(q)?;
            if n == 0 {
                bail!(usage("--n must be at least 1"));
            }
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let cfg = VerifyConfig {
                n,
                norm: q,
                trials,
                seed,
            };
            let mut records = Vec::new();
            let mut all = VerifyReport::default();
            for domain in bundled_corpus() {
                let t = Instant::now();
                let ctx = DomainContext::new(domain);
                let mut crec = certify_record(&ctx);
                crec.wall_time_s = t.elapsed().as_secs_f64();
                records.push(crec);
                let t = Instant::now();
                let rep = verify(&ctx, &cfg);
                let mut rec = ReportRecord::new(&ctx.domain.name, "verify", serde_json::to_value(cfg)?);
                rec.results = json!({"rows": rep.rows.len(), "failures": rep.failures()});
                rec.error_estimates = json!({
                    "quadrature_budget": turanlab::verify::QUADRATURE_BUDGET,
                    "level_set_tol": turanlab::verify::LEVEL_SET_TOL,
                });
                rec.seed = Some(seed);
                rec.wall_time_s = t.elapsed().as_secs_f64();
                records.push(rec);
                all.rows.extend(rep.rows);
                all.witnesses.extend(rep.witnesses);
            }
            match format {
                Format::Csv => {
                    let f = std::fs::File::create(out.join("verify.csv"))?;
                    write_csv(f, &all.rows)?;
                }
                Format::Json => {
                    let f = std::fs::File::create(out.join("verify.json"))?;
                    serde_json::to_writer_pretty(f, &all)?;
                }
            }
            if !all.witnesses.is_empty() {
                let f = std::fs::File::create(out.join("witnesses.json"))?;
                serde_json::to_writer_pretty(f, &all.witnesses)?;
            }
            let f = std::fs::File::create(out.join("records.json"))?;
            serde_json::to_writer_pretty(f, &records)?;
            summarize_failures(&all);
            eprintln!(
                "wrote {} rows, {} failures to {} ({:.2} s)",
                all.rows.len(),
                all.failures(),
                out.display(),
                t0.elapsed().as_secs_f64()
            );
            Ok(if all.all_pass() { 0 } else { FALSIFIED })
        }
        Command::Replay { file } => {
            let rows = read_rows(&file)?;
            let mut contexts: Vec<DomainContext> = Vec::new();
            let mut mismatches = 0usize;
            for row in &rows {
                if !contexts.iter().any(|c| c.domain.name == row.domain) {
                    contexts.push(DomainContext::new(load(&row.domain)?));
                }
                let ctx = contexts.iter().find(|c| c.domain.name == row.domain).expect("just added");
                let again = replay(ctx, row).map_err(usage)?;
                if !again.iter().any(|r| bit_equal(r, row)) {
                    mismatches += 1;
                    eprintln!("mismatch: {} {} case {}", row.domain, row.suite, row.case_id);
                }
            }
            eprintln!("replayed {} rows, {} mismatches", rows.len(), mismatches);
            Ok(if mismatches == 0 { 0 } else { FALSIFIED })
        }
    }
}

fn check_norm(q: Norm) -> Result<()> {
    q.validate().map(|_| ()).map_err(|e| usage(e.to_string()))
}

fn certify_record(ctx: &DomainContext) -> ReportRecord {
    let domain = &ctx.domain;
    let g = &ctx.summary;
    let report = &ctx.certification;
    let status = |r: &Result<_, _>| match r {
        Ok(_) => "certified".to_string(),
        Err(e) => format!("rejected: {e}"),
    };
    let mut rec = ReportRecord::new(&domain.name, "certify", json!({"fekete_points": report.bracket.m}));
    rec.results = json!({
        "k": domain.td.num_pieces(),
        "geometry": g,
        "delta_bracket": {
            "lower": report.bracket.certified_lower(),
            "upper": report.bracket.upper,
            "fekete_estimate": report.bracket.fekete_estimate,
        },
        "certificate": report.certified.as_ref().ok(),
        "status": status(&report.certified),
        "plausible_certificate": report.plausible.as_ref().ok(),
        "plausible_status": status(&report.plausible),
        "constants": ctx.constants,
    });
    rec.error_estimates = json!({
        "depth_resolution": g.depth_resolution,
        "fekete_stalled": report.bracket.stalled,
    });
    rec
}

fn write_csv<W: std::io::Write>(w: W, rows: &[VerifyRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn read_rows(path: &Path) -> Result<Vec<VerifyRow>> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let rep: VerifyReport = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        Ok(rep.rows)
    } else {
        let mut rd = csv::Reader::from_path(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        rd.deserialize()
            .collect::<Result<Vec<VerifyRow>, _>>()
            .map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn bit_equal(a: &VerifyRow, b: &VerifyRow) -> bool {
    a.suite == b.suite
        && a.case_id == b.case_id
        && a.n == b.n
        && a.q == b.q
        && a.seed == b.seed
        && a.pass == b.pass
        && a.lhs.to_bits() == b.lhs.to_bits()
        && a.rhs.to_bits() == b.rhs.to_bits()
        && a.margin.to_bits() == b.margin.to_bits()
}

fn summarize_failures(rep: &VerifyReport) {
    for w in &rep.witnesses {
        let roots: Vec<PlanePoint> = w.roots.iter().map(|r| PlanePoint::new(r[0], r[1])).collect();
        eprintln!(
            "FAIL {} {} case {} seed {}: {} roots {:?} point {:?}",
            w.domain, w.suite, w.case_id, w.seed, w.detail, roots, w.point
        );
    }
}
