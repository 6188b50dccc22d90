//! Command-line front end: density and CDF evaluation, closed-form
//! probabilities and moments, shape reports, sampling, fitting, the
//! random-walk oracle, the spherical model, plot data, and property
//! verification sweeps.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ewc::angle::CircAngle;
use ewc::brownian::{conditional_equal_sample, conditional_exit_sample, WalkConfig};
use ewc::density::ewc_density;
use ewc::fit::{fit_ewc, fit_wc, loglik, Dataset};
use ewc::interval::{cdf, interval_probability};
use ewc::moments::{circular_summary, trig_moment};
use ewc::params::EwcParams;
use ewc::sampling::{
    sample_ewc_invcdf, sample_ewc_mcmc, sample_ewc_rejection, McmcConfig, SampleBatch,
};
use ewc::shape::{is_symmetric, modality, stationary_coeffs, Modality};
use ewc::sphere::{
    sample_exit, sample_sphere_mcmc, sphere_density, SphereParams, UnitVector,
};
use ewc::stats::histogram_l1;

#[derive(Parser)]
#[command(name = "ewc", version, about = "Extended wrapped Cauchy distributions")]
struct Cli {
    /// Thread count for multistart fits and oracle sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the density at one angle.
    Pdf {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        theta: f64,
    },
    /// Evaluate the distribution function F(theta) - F(-pi).
    Cdf {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        theta: f64,
    },
    /// Closed-form probability of the arc (a, b), -pi <= a < b < pi.
    Prob {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Trigonometric moments and circular summary statistics.
    Moments {
        #[command(flatten)]
        params: ParamsArg,
        /// Highest moment order to report.
        #[arg(long, default_value_t = 4)]
        max_order: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Symmetry, modality classification, modes, and antimodes.
    Shape {
        #[command(flatten)]
        params: ParamsArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Draw a reproducible sample; CSV plus a JSON sidecar.
    Sample {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Method::Rejection)]
        method: Method,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 10)]
        thin: usize,
        #[arg(long, default_value_t = 1)]
        chains: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Maximum-likelihood fit to a CSV of angles (header `theta`).
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// Interpret the input angles as degrees.
        #[arg(long)]
        degrees: bool,
        /// Fit the two-parameter wrapped Cauchy submodel instead.
        #[arg(long)]
        wc: bool,
        /// Optional starting point (parameter JSON).
        #[arg(long)]
        init: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random-walk check of the exit-point derivations.
    Oracle {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, value_enum, default_value_t = OracleMode::Exit)]
        mode: OracleMode,
        #[arg(long, default_value_t = 0.005)]
        step_std: f64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 20_000)]
        n_target: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 72)]
        bins: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate the spherical density at one point.
    SpherePdf {
        /// Sphere parameter JSON: {"d", "rho1", "eta1", "rho2", "eta2"}.
        #[arg(long)]
        params: PathBuf,
        /// Evaluation point, comma-separated coordinates (normalized).
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Sample the spherical model; CSV with one column per coordinate.
    SphereSample {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 10)]
        thin: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Emit (theta, density) pairs for plotting.
    Plotdata {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 720)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the closed-form property sweeps and print pass/fail.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Check-name substring filter; `all` runs everything.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct ParamsArg {
    /// Parameter JSON: {"mu1": rad, "mu2": rad, "rho1": r, "rho2": r}.
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Rejection,
    InverseCdf,
    Mcmc,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    /// Condition one walk's first exit on its later outer exit.
    Exit,
    /// Condition two independent exits on coincidence.
    Coincidence,
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    mu1: f64,
    mu2: f64,
    rho1: f64,
    rho2: f64,
}

#[derive(Serialize, Deserialize)]
struct SphereParamsFile {
    d: usize,
    rho1: f64,
    eta1: Vec<f64>,
    rho2: f64,
    eta2: Vec<f64>,
}

enum CliError {
    /// Bad arguments or malformed input files.
    Usage(String),
    /// A well-formed request that failed numerically.
    Numeric(String),
}

impl From<ewc::EwcError> for CliError {
    fn from(e: ewc::EwcError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// All scalars are printed with 17 significant digits so text output
/// round-trips through f64 exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_params(path: &Path) -> Result<EwcParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let p: ParamsFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    EwcParams::new(p.mu1, p.mu2, p.rho1, p.rho2).map_err(CliError::from)
}

fn load_sphere_params(path: &Path) -> Result<SphereParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let p: SphereParamsFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    for (name, eta) in [("eta1", &p.eta1), ("eta2", &p.eta2)] {
        if eta.len() != p.d {
            return Err(CliError::Usage(format!(
                "{name} has {} coordinates, expected d = {}",
                eta.len(),
                p.d
            )));
        }
    }
    Ok(SphereParams::new(
        p.rho1,
        UnitVector::new(p.eta1)?,
        p.rho2,
        UnitVector::new(p.eta2)?,
    )?)
}

fn load_angles(path: &Path, degrees: bool) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "theta" => {}
        _ => {
            return Err(CliError::Usage(format!(
                "{}:1: expected header line `theta`",
                path.display()
            )))
        }
    }
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| {
            CliError::Usage(format!("{}:{}: {e}", path.display(), idx + 1))
        })?;
        values.push(v);
    }
    let data = if degrees {
        Dataset::from_degrees(&values)
    } else {
        Dataset::from_radians(&values)
    };
    data.map_err(CliError::from)
}

fn emit(out: &OutArg, content: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

fn sidecar_path(out: &OutArg) -> Option<PathBuf> {
    out.out.as_ref().map(|p| {
        let mut name = p.file_stem().unwrap_or_default().to_os_string();
        name.push(".meta.json");
        p.with_file_name(name)
    })
}

fn write_batch(out: &OutArg, batch: &SampleBatch) -> Result<(), CliError> {
    let meta = json!({
        "seed": batch.seed,
        "method": batch.method,
        "n": batch.angles.len(),
        "diagnostics": batch.diagnostics,
    });
    match out.format {
        Format::Csv => {
            let mut csv = String::from("theta\n");
            for a in &batch.angles {
                csv.push_str(&num(a.radians()));
                csv.push('\n');
            }
            emit(out, &csv)?;
            match sidecar_path(out) {
                Some(path) => fs::write(&path, format!("{meta:#}\n"))
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                None => eprintln!("{meta}"),
            }
        }
        Format::Json => {
            let doc = json!({
                "angles": batch.angles,
                "meta": meta,
            });
            emit(out, &format!("{doc:#}\n"))?;
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Pdf { params, theta } => {
            let p = load_params(&params.params)?;
            println!("{}", num(ewc_density(CircAngle::new(theta), &p)));
        }
        Command::Cdf { params, theta } => {
            let p = load_params(&params.params)?;
            println!("{}", num(cdf(CircAngle::new(theta), &p)));
        }
        Command::Prob { params, a, b } => {
            let p = load_params(&params.params)?;
            let prob = interval_probability(CircAngle::new(a), CircAngle::new(b), &p)?;
            println!("{}", num(prob));
        }
        Command::Moments {
            params,
            max_order,
            out,
        } => {
            let p = load_params(&params.params)?;
            let summary = circular_summary(&p);
            let moments: Vec<_> = (0..=max_order)
                .map(|n| {
                    let m = trig_moment(n, &p);
                    json!({"n": n, "re": m.value.re, "im": m.value.im})
                })
                .collect();
            let doc = json!({
                "mean_direction": summary.mean_direction.map(|a| a.radians()),
                "mean_resultant_length": summary.mean_resultant_length,
                "skewness": summary.skewness,
                "moments": moments,
            });
            emit(&out, &format!("{doc:#}\n"))?;
        }
        Command::Shape { params, out } => {
            let p = load_params(&params.params)?;
            let axis = is_symmetric(&p);
            let coeffs = stationary_coeffs(&p);
            let doc = match modality(&p) {
                Ok(report) => {
                    let pairs = |v: &[(CircAngle, f64)]| {
                        v.iter()
                            .map(|(a, d)| json!({"theta": a.radians(), "density": d}))
                            .collect::<Vec<_>>()
                    };
                    json!({
                        "symmetric": axis.is_some(),
                        "symmetry_axis": axis.map(|a| a.radians()),
                        "discriminant": report.discriminant,
                        "classification": match report.classification {
                            Modality::Unimodal => "unimodal",
                            Modality::Bimodal => "bimodal",
                            Modality::Boundary => "boundary",
                        },
                        "modes": pairs(&report.modes),
                        "antimodes": pairs(&report.antimodes),
                        "stationary_coeffs": coeffs.a,
                    })
                }
                Err(ewc::EwcError::UniformNoModes) => json!({
                    "symmetric": true,
                    "symmetry_axis": serde_json::Value::Null,
                    "classification": "uniform",
                }),
                Err(e) => return Err(e.into()),
            };
            emit(&out, &format!("{doc:#}\n"))?;
        }
        Command::Sample {
            params,
            n,
            seed,
            method,
            burn_in,
            thin,
            chains,
            out,
        } => {
            let p = load_params(&params.params)?;
            let batch = match method {
                Method::Rejection => sample_ewc_rejection(&p, n, seed),
                Method::InverseCdf => sample_ewc_invcdf(&p, n, seed, 1e-12)?,
                Method::Mcmc => sample_ewc_mcmc(
                    &p,
                    n,
                    &McmcConfig {
                        burn_in,
                        thin,
                        chain_count: chains,
                    },
                    seed,
                ),
            };
            write_batch(&out, &batch)?;
        }
        Command::Fit {
            data,
            degrees,
            wc,
            init,
            out,
        } => {
            let dataset = load_angles(&data, degrees)?;
            let doc = if wc {
                let est = fit_wc(&dataset)?;
                let as_ewc = EwcParams::new(est.mu, 0.0, est.rho(), 0.0)?;
                json!({
                    "model": "wc",
                    "mu": est.mu.radians(),
                    "rho": est.rho(),
                    "loglik": loglik(&dataset, &as_ewc),
                    "n": dataset.len(),
                })
            } else {
                let start = init.as_deref().map(load_params).transpose()?;
                let fit = fit_ewc(&dataset, start)?;
                if fit.params.rho1() > 0.999 || fit.params.rho2() > 0.999 {
                    eprintln!("warning: fitted concentration near the boundary");
                }
                json!({
                    "model": "ewc",
                    "params": fit.params,
                    "loglik": fit.loglik,
                    "converged": fit.converged,
                    "iterations": fit.iterations,
                    "stderr": fit.stderr,
                    "init": fit.init,
                    "n": dataset.len(),
                })
            };
            emit(&out, &format!("{doc:#}\n"))?;
        }
        Command::Oracle {
            params,
            mode,
            step_std,
            epsilon,
            n_target,
            seed,
            bins,
            out,
        } => {
            let p = load_params(&params.params)?;
            let cfg = WalkConfig {
                step_std,
                epsilon,
                ..WalkConfig::default()
            };
            let (batch, mut report) = match mode {
                OracleMode::Exit => conditional_exit_sample(&p, n_target, &cfg, seed)?,
                OracleMode::Coincidence => {
                    conditional_equal_sample(&p, n_target, epsilon, seed)?
                }
            };
            if bins != report.bin_count {
                report.l1_distance =
                    histogram_l1(&batch.angles, bins, |t| ewc_density(CircAngle::new(t), &p));
                report.bin_count = bins;
            }
            let doc = json!({
                "mode": match mode {
                    OracleMode::Exit => "exit",
                    OracleMode::Coincidence => "coincidence",
                },
                "step_std": step_std,
                "epsilon": epsilon,
                "seed": seed,
                "report": report,
            });
            emit(&out, &format!("{doc:#}\n"))?;
        }
        Command::SpherePdf { params, x } => {
            let p = load_sphere_params(&params)?;
            let coords: Vec<f64> = x
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("--x: {e}")))?;
            let point = UnitVector::normalize(coords)?;
            println!("{}", num(sphere_density(&point, &p)?));
        }
        Command::SphereSample {
            params,
            n,
            seed,
            burn_in,
            thin,
            out,
        } => {
            let p = load_sphere_params(&params)?;
            let points = if p.rho1 == 0.0 || p.rho2 == 0.0 {
                // one factor is flat: the exact single-pole sampler applies
                let (rho, eta) = if p.rho1 == 0.0 {
                    (p.rho2, &p.eta2)
                } else {
                    (p.rho1, &p.eta1)
                };
                sample_exit(rho, eta, n, seed)?
            } else {
                sample_sphere_mcmc(
                    &p,
                    n,
                    &McmcConfig {
                        burn_in,
                        thin,
                        chain_count: 1,
                    },
                    seed,
                )?
            };
            let mut csv = String::new();
            for k in 0..p.d {
                if k > 0 {
                    csv.push(',');
                }
                csv.push_str(&format!("x{k}"));
            }
            csv.push('\n');
            for point in &points {
                let row: Vec<String> = point.coords().iter().map(|&c| num(c)).collect();
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            emit(&out, &csv)?;
        }
        Command::Plotdata { params, n, out } => {
            let p = load_params(&params.params)?;
            if n < 2 {
                return Err(CliError::Usage("plotdata needs --n >= 2".into()));
            }
            match out.format {
                Format::Csv => {
                    let mut csv = String::from("theta,density\n");
                    for k in 0..n {
                        let t = -std::f64::consts::PI
                            + ewc::density::TWO_PI * k as f64 / n as f64;
                        csv.push_str(&format!(
                            "{},{}\n",
                            num(t),
                            num(ewc_density(CircAngle::new(t), &p))
                        ));
                    }
                    emit(&out, &csv)?;
                }
                Format::Json => {
                    let rows: Vec<_> = (0..n)
                        .map(|k| {
                            let t = -std::f64::consts::PI
                                + ewc::density::TWO_PI * k as f64 / n as f64;
                            json!({"theta": t, "density": ewc_density(CircAngle::new(t), &p)})
                        })
                        .collect();
                    emit(&out, &format!("{:#}\n", json!(rows)))?;
                }
            }
        }
        Command::Verify { seed, suite } => {
            let mut all_passed = true;
            for check in ewc::verify::run_all(seed) {
                if suite != "all" && !check.name.contains(&suite) {
                    continue;
                }
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} (worst {:.3e}, tol {:.3e}, {} cases)",
                    check.name, check.worst, check.tolerance, check.cases
                );
                all_passed &= check.passed;
            }
            if !all_passed {
                return Err(CliError::Numeric("one or more checks failed".into()));
            }
        }
    }
    Ok(())
}
