//! The `qes` command-line tool.
//!
//! Exit status: 0 success, 1 verification failure, 2 input error,
//! 3 numeric or resource failure. Settings come from built-in defaults,
//! then `--config`, then flags; `QES_PRECISION` overrides `--precision`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{annotate_fitted_ends, verify_theorem1_with, TheoremOptions};
use crate::error::{Error, Result};
use crate::io::{read_rows, render_svg, rows_from_branches, write_rows, PlotOptions, RunConfig};
use crate::nevanlinna::{
    asymptotic_value, beta_along_branch, schwarzian_residual, ConnectionOptions, DiskGrid, ProfileOptions, Sector,
};
use crate::qes::{eigenvector_at_big_lambda, spectral_polynomial_capped, QesSystem};
use crate::rootfind::{classify_zeros_with, complex_roots, Precision};
use crate::tracer::{classify_point_precise, find_components_for, LocusPoint, StepPolicy};
use crate::trees::reconcile;

/// Largest J accepted by `poly` unless `--cap` says otherwise.
pub const DEFAULT_J_CAP: usize = 60;

#[derive(Parser, Debug)]
#[command(
    name = "qes",
    version,
    about = "Real QES spectral locus of the quartic PT-symmetric oscillator"
)]
pub struct Cli {
    /// key = value configuration file (keys: J, b_min, b_max, locus_tol,
    /// eps_real, beta_tol, precision, strict, raw_lambda, out, report, seed).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision in bits for exact root refinement (QES_PRECISION overrides).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Output format for commands that support both.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Default)]
pub struct WindowArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub b_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b_max: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the exact spectral polynomial Q_J(b, lambda) as JSON.
    Poly {
        #[arg(short = 'J', long = "J", allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse J above this.
        #[arg(long, default_value_t = DEFAULT_J_CAP)]
        cap: usize,
    },
    /// Trace every component of the real locus in a b window (CSV by default).
    Trace {
        #[arg(short = 'J', long = "J", allow_hyphen_values = true)]
        j: Option<i64>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 1 unless the component count is floor(n/2) + 1.
        #[arg(long)]
        strict: bool,
        /// Fill the beta column.
        #[arg(long)]
        beta: bool,
    },
    /// Label a locus point by its zero counts (n, m).
    Classify {
        #[arg(short = 'J', long = "J", allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Eigenvalue in the equation's convention; see --phys.
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Read --lambda as lambda_hat = -lambda.
        #[arg(long)]
        phys: bool,
    },
    /// Nevanlinna parameter at a point (with --b/--lambda) or along every component.
    Beta {
        #[arg(short = 'J', long = "J", allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long)]
        phys: bool,
        #[command(flatten)]
        window: WindowArgs,
        /// Read the limit in the conjugate sector instead.
        #[arg(long)]
        conjugate: bool,
        /// Starting radius on the positive real axis.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the structural checks on a traced locus and write a JSON report.
    Verify {
        #[arg(short = 'J', long = "J", allow_hyphen_values = true)]
        j: Option<i64>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Skip the beta profiles, Schwarzian check and chart reconciliation.
        #[arg(long)]
        no_beta: bool,
    },
    /// Render a trace CSV as SVG in the (b, lambda_hat) plane.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot lambda instead of lambda_hat.
        #[arg(long)]
        raw_lambda: bool,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        #[arg(long, default_value_t = 600.0)]
        height: f64,
    },
}

/// Exit status for a completed check.
pub fn verdict(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(bits) = cli.precision {
        cfg.precision = Precision { bits };
    }
    cfg.precision = cfg.precision.from_env_or()?;
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_j(flag: Option<i64>, cfg: &RunConfig) -> Result<usize> {
    let j = flag
        .or(cfg.j.map(|j| j as i64))
        .ok_or_else(|| Error::InvalidInput("J is required (--J or config)".into()))?;
    if j < 1 {
        return Err(Error::InvalidJ(j));
    }
    Ok(j as usize)
}

fn resolve_window(w: &WindowArgs, cfg: &RunConfig) -> Result<(f64, f64)> {
    let window = (w.b_min.unwrap_or(cfg.window.0), w.b_max.unwrap_or(cfg.window.1));
    if window.0.is_nan() || window.1.is_nan() || window.0 >= window.1 {
        return Err(Error::InvalidInput(format!(
            "empty b window [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(window)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn policy(cfg: &RunConfig) -> StepPolicy {
    StepPolicy {
        locus_tol: cfg.locus_tol,
        ..StepPolicy::default()
    }
}

fn connection_opts(cfg: &RunConfig) -> ConnectionOptions {
    ConnectionOptions {
        stabilization: cfg.beta_tol,
        ..ConnectionOptions::default()
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    let cfg = effective_config(&cli)?;
    let format = cli.format;
    match cli.command {
        Command::Poly { j, out, cap } => {
            let j = resolve_j(j, &cfg)?;
            let q = spectral_polynomial_capped(j as i64, cap)?;
            let out = out.or(cfg.out.clone());
            match format.unwrap_or(Format::Json) {
                Format::Json => write_json(out.as_deref(), &q.to_json())?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
                    w.write_record(["b_power", "lambda_power", "coefficient"])?;
                    for (i, k, c) in q.to_json().terms {
                        w.write_record([i.to_string(), k.to_string(), c])?;
                    }
                    w.flush()?;
                }
            }
            Ok(0)
        }
        Command::Trace {
            j,
            window,
            out,
            strict,
            beta,
        } => {
            let j = resolve_j(j, &cfg)?;
            let window = resolve_window(&window, &cfg)?;
            let q = spectral_polynomial_capped(j as i64, DEFAULT_J_CAP)?;
            let mut branches = find_components_for(&q, window, &policy(&cfg))?;
            if beta {
                let opts = connection_opts(&cfg);
                for br in &mut branches {
                    br.points.par_iter_mut().try_for_each(|p| -> Result<()> {
                        p.beta = Some(asymptotic_value(p, &opts)?.beta);
                        Ok(())
                    })?;
                }
            }
            let rows = rows_from_branches(j, &branches);
            let out = out.or(cfg.out.clone());
            match format.unwrap_or(Format::Csv) {
                Format::Csv => write_rows(sink(out.as_deref())?, &rows)?,
                Format::Json => write_json(out.as_deref(), &rows)?,
            }
            let expected = (j - 1) / 2 + 1;
            let ok = branches.len() == expected;
            if !ok {
                eprintln!("found {} components, expected {expected}", branches.len());
            }
            Ok(if strict || cfg.strict { verdict(ok) } else { 0 })
        }
        Command::Classify { j, b, lambda, phys } => {
            let j = resolve_j(j, &cfg)?;
            let lambda = if phys { -lambda } else { lambda };
            let sys = QesSystem::new(j)?;
            let big_lambda = lambda + b * b;
            let a = eigenvector_at_big_lambda(&sys, b, big_lambda)?;
            let zeros = complex_roots(&a.coeffs)?;
            let quick = classify_zeros_with(&zeros, 1.0, cfg.eps_real)?;
            let q = spectral_polynomial_capped(j as i64, DEFAULT_J_CAP)?;
            let precise = classify_point_precise(&q, b, big_lambda, cfg.precision)?;
            let zeros: Vec<[f64; 2]> = precise.zeros.iter().map(|z| [z.re, z.im]).collect();
            let report = json!({
                "J": j,
                "b": b,
                "lambda": lambda,
                "lambda_phys": -lambda,
                "n": sys.n(),
                "m": precise.m,
                "n_real": precise.n_real,
                "precision_bits": cfg.precision.bits,
                "stable": quick.m == precise.m,
                "zeros": zeros,
            });
            match format.unwrap_or(Format::Json) {
                Format::Json => write_json(cfg.out.as_deref(), &report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(sink(cfg.out.as_deref())?);
                    w.write_record(["J", "b", "lambda", "n", "m", "n_real"])?;
                    w.write_record([
                        j.to_string(),
                        crate::io::fmt17(b),
                        crate::io::fmt17(lambda),
                        sys.n().to_string(),
                        precise.m.to_string(),
                        precise.n_real.to_string(),
                    ])?;
                    w.flush()?;
                }
            }
            Ok(0)
        }
        Command::Beta {
            j,
            b,
            lambda,
            phys,
            window,
            conjugate,
            radius,
            out,
        } => {
            let j = resolve_j(j, &cfg)?;
            let mut opts = connection_opts(&cfg);
            opts.radius = radius;
            if conjugate {
                opts.sector = Sector::S4;
            }
            let out = out.or(cfg.out.clone());
            match (b, lambda) {
                (Some(b), Some(lambda)) => {
                    let lambda = if phys { -lambda } else { lambda };
                    let sys = QesSystem::new(j)?;
                    let point = LocusPoint::new(&sys, b, lambda + b * b, 0.0)?;
                    let r = asymptotic_value(&point, &opts)?;
                    write_json(
                        out.as_deref(),
                        &json!({ "J": j, "b": b, "lambda": lambda, "result": r }),
                    )?;
                }
                (None, None) => {
                    let window = resolve_window(&window, &cfg)?;
                    let q = spectral_polynomial_capped(j as i64, DEFAULT_J_CAP)?;
                    let branches = find_components_for(&q, window, &policy(&cfg))?;
                    let popts = ProfileOptions {
                        connection: opts,
                        ..ProfileOptions::default()
                    };
                    let profiles = branches
                        .iter()
                        .map(|br| beta_along_branch(&q, br, &popts))
                        .collect::<Result<Vec<_>>>()?;
                    match format.unwrap_or(Format::Json) {
                        Format::Json => write_json(out.as_deref(), &profiles)?,
                        Format::Csv => {
                            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
                            w.write_record(["J", "n", "m", "t", "b", "big_lambda", "beta", "error"])?;
                            for p in &profiles {
                                for s in &p.samples {
                                    w.write_record([
                                        j.to_string(),
                                        p.label.n.to_string(),
                                        p.label.m.to_string(),
                                        crate::io::fmt17(s.t),
                                        crate::io::fmt17(s.b),
                                        crate::io::fmt17(s.big_lambda),
                                        crate::io::fmt17(s.beta),
                                        crate::io::fmt17(s.error),
                                    ])?;
                                }
                            }
                            w.flush()?;
                        }
                    }
                }
                _ => return Err(Error::InvalidInput("give both --b and --lambda, or neither".into())),
            }
            Ok(0)
        }
        Command::Verify {
            j,
            window,
            report,
            no_beta,
        } => {
            let j = resolve_j(j, &cfg)?;
            let window = resolve_window(&window, &cfg)?;
            let topts = TheoremOptions {
                policy: policy(&cfg),
                precision: cfg.precision,
                ..TheoremOptions::default()
            };
            let thm = verify_theorem1_with(j, window, &topts)?;
            let mut doc = serde_json::to_value(&thm)?;
            let mut pass = thm.pass;
            if !no_beta {
                let (beta, trees) = beta_sections(j, &thm.branches, &cfg)?;
                pass &= beta["pass"].as_bool() == Some(true) && trees["pass"].as_bool() == Some(true);
                doc["beta"] = beta;
                doc["trees"] = trees;
            }
            doc["pass"] = json!(pass);
            write_json(report.or(cfg.report.clone()).as_deref(), &doc)?;
            Ok(verdict(pass))
        }
        Command::Plot {
            csv,
            out,
            raw_lambda,
            width,
            height,
        } => {
            let rows = read_rows(File::open(&csv)?)?;
            let opts = PlotOptions {
                width,
                height,
                raw_lambda: raw_lambda || cfg.raw_lambda,
            };
            let svg = render_svg(&rows, &opts);
            let mut w = sink(out.or(cfg.out.clone()).as_deref())?;
            w.write_all(svg.as_bytes())?;
            w.flush()?;
            Ok(0)
        }
    }
}

/// beta profiles on every branch, a Schwarzian spot check, and the chart
/// reconciliation, as `{pass, evidence}` sections.
fn beta_sections(
    j: usize,
    branches: &[crate::tracer::Branch],
    cfg: &RunConfig,
) -> Result<(serde_json::Value, serde_json::Value)> {
    let q = spectral_polynomial_capped(j as i64, DEFAULT_J_CAP)?;
    let mut branches = branches.to_vec();
    annotate_fitted_ends(&q, &mut branches, &crate::asymptotics::DEFAULT_FIT_B).ok();
    let popts = ProfileOptions {
        connection: connection_opts(cfg),
        ..ProfileOptions::default()
    };
    let mut evidence = Vec::new();
    let mut pass = true;
    let mut profiles = Vec::new();
    for br in &branches {
        match beta_along_branch(&q, br, &popts) {
            Ok(p) => {
                evidence.push(json!({
                    "m": p.label.m,
                    "monotone": p.monotone,
                    "range": [p.range.0, p.range.1],
                    "end_limits": p.end_limits,
                    "crossings": p.crossings.len(),
                }));
                profiles.push(p);
            }
            Err(e @ Error::MonotonicityViolation { .. }) => {
                pass = false;
                evidence.push(json!({ "m": br.label.m, "error": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    // Schwarzian spot check at the leftmost point of the first branch.
    if let Some(p) = branches
        .first()
        .and_then(|b| b.points.iter().min_by(|x, y| x.b.total_cmp(&y.b)))
    {
        let grid = DiskGrid::random(1.5, 10, 1e-2, cfg.seed).avoiding(p)?;
        let r = schwarzian_residual(p, &grid)?;
        pass &= r.max_residual <= 1e-4;
        evidence.push(json!({ "schwarzian": r, "b": p.b, "lambda": p.lambda }));
    }
    let rec = reconcile(j - 1, &branches, &profiles);
    let trees = json!({ "pass": rec.pass, "evidence": [rec] });
    Ok((json!({ "pass": pass, "evidence": evidence }), trees))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_exit_one() {
        assert_eq!(verdict(true), 0);
        assert_eq!(verdict(false), 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_from(["qes", "frobnicate"]), 2);
        assert_eq!(run_from(["qes", "poly"]), 2);
        assert_eq!(
            run_from(["qes", "classify", "--J", "3", "--b", "x", "--lambda", "0"]),
            2
        );
    }
}
