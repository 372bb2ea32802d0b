//! Command-line front end: every library capability as a subcommand with
//! reproducible, machine-readable output (JSON records, CSV tables).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::io::Write;
use trispec::eigen::{self, PathInC, SigmaMethod};
use trispec::family::{Alpha, FamilySpec, OperatorFamily, Parity};
use trispec::taylor::{self, Backend};
use trispec::{asympt, surface, trace, verify, Error};

/// Default tolerance for solver-level checks; the TRISPEC_TOL environment
/// variable overrides it.
fn default_tol() -> f64 {
    std::env::var("TRISPEC_TOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-10)
}

#[derive(Parser)]
#[command(
    name = "trispec",
    about = "Spectra, Taylor branches, traces and Riemann-surface structure of tri-diagonal pencils L + zB",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Worker threads for grid scans.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family kind: power | whittaker-hill | a JSON object.
    #[arg(long, default_value = "power")]
    family: String,
    /// Exponent alpha for the power family ("p/q" stays exact).
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Parameter t of the Whittaker-Hill family.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Diagonal parity of the Whittaker-Hill family.
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    parity: ParityArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl FamilyArgs {
    fn build(&self) -> Result<OperatorFamily, Error> {
        match self.family.as_str() {
            "power" => OperatorFamily::power(Alpha::parse(&self.alpha)?),
            "whittaker-hill" => OperatorFamily::whittaker_hill(
                self.t,
                match self.parity {
                    ParityArg::Even => Parity::Even,
                    ParityArg::Odd => Parity::Odd,
                },
            ),
            s if s.trim_start().starts_with('{') => {
                let spec: FamilySpec = serde_json::from_str(s)
                    .map_err(|e| Error::InvalidFamily(format!("bad family JSON: {e}")))?;
                spec.build()
            }
            other => Err(Error::InvalidFamily(format!(
                "unknown family {other:?}; use power, whittaker-hill, or inline JSON"
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// All eigenvalues of the N x N truncation at z, as CSV (re, im, residual).
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "0")]
        z: String,
        #[arg(long = "N", default_value_t = 64)]
        n_dim: usize,
        /// Tolerance (default from TRISPEC_TOL or 1e-10).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Continue branch n along a path (JSON array of [re, im] waypoints).
    Branch {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: u32,
        /// Path waypoints as JSON; defaults to the segment 0 -> --to.
        #[arg(long)]
        path: Option<String>,
        /// Radial endpoint when --path is not given.
        #[arg(long, default_value = "0.1")]
        to: String,
        /// Tolerance (default from TRISPEC_TOL or 1e-10).
        #[arg(long)]
        tol: Option<f64>,
        /// Include every accepted sample in the output record.
        #[arg(long)]
        samples: bool,
    },
    /// Taylor coefficients a_2k(n) of one branch, as CSV.
    Taylor {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Force exact rationals (errors when 2 alpha is not an integer).
        #[arg(long)]
        exact: bool,
        /// Force the double-double float backend.
        #[arg(long)]
        float: bool,
    },
    /// Partial regularized trace as a JSON record, or CSV over a z-grid.
    Trace {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "0.1")]
        z: String,
        #[arg(long = "N", default_value_t = 50)]
        n_sum: u32,
        #[arg(long, default_value_t = 0)]
        p: u32,
        /// Real z-grid "start:stop:count" for batch mode (CSV output).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Characteristic polynomial of the n window eigenvalues at z.
    CharPoly {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "0")]
        z: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Product)]
        method: MethodArg,
    },
    /// Power sum sigma_j of the window eigenvalues.
    Sigma {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "0")]
        z: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, value_enum, default_value_t = SigmaArg::Eig)]
        method: SigmaArg,
    },
    /// Branch points of the n-window discriminant, as JSON.
    BranchPoints {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: u32,
        /// Search radius override (defaults to 0.9 R_n).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 4)]
        grid_density: u32,
        /// Tolerance (default from TRISPEC_TOL or 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monodromy permutation of branches 1..=n-max around a closed path.
    Monodromy {
        #[command(flatten)]
        family: FamilyArgs,
        /// Closed path as a JSON array of [re, im] waypoints based at 0.
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        /// Tolerance (default from TRISPEC_TOL or 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sign-pattern irreducibility certificate.
    Irreducibility {
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value_t = 6)]
        k: u32,
        #[arg(long = "N", default_value_t = 100)]
        n_max: u32,
    },
    /// Asymptotics checks: expansion residual slopes, P_k recovery,
    /// radius probe.
    Asymptotics {
        #[command(subcommand)]
        what: AsymptoticsCommand,
    },
    /// Run the full acceptance suite and print its pass/fail table.
    Verify {
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Product,
    Newton,
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaArg {
    Eig,
    Contour,
}

#[derive(Subcommand)]
enum AsymptoticsCommand {
    /// Slope fit of the second-order expansion residual.
    Thm2 {
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value = "1")]
        z: String,
        /// Emit the raw (n, residual) samples as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Slope fit of the alpha = 1/2 fourth-order expansion residual.
    Thm4 {
        #[arg(long, default_value = "1")]
        z: String,
        /// Emit the raw (n, residual) samples as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Least-squares recovery of the inverse-power coefficients P_k(z).
    Pk {
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 16)]
        n_lo: u32,
        #[arg(long, default_value_t = 64)]
        n_hi: u32,
    },
    /// Radius-of-convergence probe from the coefficient decay.
    Radius {
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
    },
}

/// Accepts "a+bi", "a-bi", "bi", "a", or "[a, b]".
fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: [f64; 2] = serde_json::from_str(s)
            .map_err(|e| Error::InvalidFamily(format!("bad complex {s:?}: {e}")))?;
        return Ok(Complex64::new(v[0], v[1]));
    }
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E'
            {
                split = Some(i);
                break;
            }
        }
        if let Some(i) = split {
            let re: f64 = body[..i]
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad complex {s:?}")))?;
            let im_str = &body[i..];
            let im: f64 = match im_str {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_str
                    .parse()
                    .map_err(|_| Error::InvalidFamily(format!("bad complex {s:?}")))?,
            };
            return Ok(Complex64::new(re, im));
        }
        let im: f64 = match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => body
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad complex {s:?}")))?,
        };
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = s
        .parse()
        .map_err(|_| Error::InvalidFamily(format!("bad complex {s:?}")))?;
    Ok(Complex64::new(re, 0.0))
}

struct Output {
    target: Option<std::path::PathBuf>,
    buffer: String,
}

impl Output {
    fn new(target: Option<std::path::PathBuf>) -> Self {
        Output { target, buffer: String::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.buffer.push_str(s.as_ref());
        self.buffer.push('\n');
    }

    fn flush(self) -> Result<(), Error> {
        match self.target {
            Some(path) => {
                std::fs::write(&path, self.buffer).map_err(|e| Error::Io(e.to_string()))
            }
            None => {
                print!("{}", self.buffer);
                std::io::stdout().flush().ok();
                Ok(())
            }
        }
    }
}

fn emit_fit(out: &mut Output, fit: &asympt::ResidualFit, csv: bool) {
    if csv {
        out.line("n,residual");
        for (n, r) in &fit.samples {
            out.line(format!("{n},{r:.17e}"));
        }
    } else {
        out.line(serde_json::to_string_pretty(fit).unwrap());
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            let record = serde_json::json!({ "error": e.to_string() });
            eprintln!("{record}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    let mut out = Output::new(cli.output.clone());
    let mut exit = 0;
    match cli.command {
        Command::Spectrum { family, z, n_dim, tol } => {
            let fam = family.build()?;
            let z = parse_complex(&z)?;
            let m = trispec::truncate(&fam, z, n_dim)?;
            let s = eigen::spectrum(&m, tol.unwrap_or_else(default_tol))?;
            out.line("re,im,residual");
            for lam in &s.eigenvalues {
                out.line(format!("{:.17e},{:.17e},{:.3e}", lam.re, lam.im, s.residual_tol));
            }
        }
        Command::Branch { family, n, path, to, tol, samples } => {
            let fam = family.build()?;
            let path = match path {
                Some(p) => {
                    let v: serde_json::Value = serde_json::from_str(&p)
                        .map_err(|e| Error::BadPath(format!("bad path JSON: {e}")))?;
                    PathInC::from_json(&v, false)?
                }
                None => PathInC::open(vec![Complex64::new(0.0, 0.0), parse_complex(&to)?])?,
            };
            let b = eigen::continue_branch(&fam, n, &path, tol.unwrap_or_else(default_tol))?;
            let status = match b.status {
                eigen::BranchStatus::Ok => serde_json::json!("ok"),
                eigen::BranchStatus::NearCollision { z_bad, gap } => serde_json::json!({
                    "near_collision": { "z": [z_bad.re, z_bad.im], "gap": gap }
                }),
            };
            let final_v = b.final_value();
            let mut record = serde_json::json!({
                "n": n,
                "status": status,
                "final": [final_v.re, final_v.im],
                "steps": b.samples.len(),
            });
            if samples {
                record["samples"] = serde_json::json!(b
                    .samples
                    .iter()
                    .map(|(z, e)| [z.re, z.im, e.re, e.im])
                    .collect::<Vec<_>>());
            }
            out.line(record.to_string());
        }
        Command::Taylor { family, n, kmax, exact, float } => {
            let fam = family.build()?;
            let backend = match (exact, float) {
                (true, false) => Backend::Exact,
                (false, true) => Backend::Float,
                _ => Backend::Auto,
            };
            let ts = taylor::solve_branch_equation_with(&fam, n, kmax, backend)?;
            out.line("k,order,a_2k");
            for k in 1..=kmax {
                out.line(format!("{k},{},{}", 2 * k, ts.coeff(k).render()));
            }
        }
        Command::Trace { family, z, n_sum, p, grid } => {
            let fam = family.build()?;
            match grid {
                None => {
                    let z = parse_complex(&z)?;
                    let r = trace::partial_trace(&fam, z, p, n_sum)?;
                    out.line(serde_json::to_string_pretty(&r).unwrap());
                }
                Some(g) => {
                    let parts: Vec<&str> = g.split(':').collect();
                    if parts.len() != 3 {
                        return Err(Error::InvalidFamily("grid format is start:stop:count".into()));
                    }
                    let start: f64 = parts[0]
                        .parse()
                        .map_err(|_| Error::InvalidFamily("bad grid start".into()))?;
                    let stop: f64 = parts[1]
                        .parse()
                        .map_err(|_| Error::InvalidFamily("bad grid stop".into()))?;
                    let count: usize = parts[2]
                        .parse()
                        .map_err(|_| Error::InvalidFamily("bad grid count".into()))?;
                    if count == 0 {
                        return Err(Error::InvalidFamily("grid count must be >= 1".into()));
                    }
                    let zs: Vec<f64> = (0..count)
                        .map(|i| start + (stop - start) * i as f64 / (count - 1).max(1) as f64)
                        .collect();
                    let jobs = cli.jobs.max(1).min(zs.len());
                    let per = zs.len().div_ceil(jobs);
                    let mut rows: Vec<Option<trispec::Result<trace::TraceReport>>> =
                        (0..zs.len()).map(|_| None).collect();
                    std::thread::scope(|scope| {
                        let mut handles = Vec::new();
                        for (ci, chunk) in zs.chunks(per).enumerate() {
                            let fam = fam.clone();
                            handles.push((
                                ci,
                                scope.spawn(move || {
                                    chunk
                                        .iter()
                                        .map(|&zr| {
                                            trace::partial_trace(
                                                &fam,
                                                Complex64::new(zr, 0.0),
                                                p,
                                                n_sum,
                                            )
                                        })
                                        .collect::<Vec<_>>()
                                }),
                            ));
                        }
                        for (ci, h) in handles {
                            for (j, r) in h.join().unwrap().into_iter().enumerate() {
                                rows[ci * per + j] = Some(r);
                            }
                        }
                    });
                    out.line("z,partial_re,partial_im,rate");
                    for (zr, r) in zs.iter().zip(rows) {
                        let r = r.unwrap()?;
                        out.line(format!(
                            "{:.17e},{:.17e},{:.17e},{:.4}",
                            zr, r.partial_sum[0], r.partial_sum[1], r.convergence_rate_estimate
                        ));
                    }
                }
            }
        }
        Command::CharPoly { family, z, n, method } => {
            let fam = family.build()?;
            let z = parse_complex(&z)?;
            let m = match method {
                MethodArg::Product => surface::CharPolyMethod::Product,
                MethodArg::Newton => surface::CharPolyMethod::Newton,
            };
            let p = surface::char_poly(&fam, z, n, m)?;
            let record = serde_json::json!({
                "n": n,
                "z": [z.re, z.im],
                "coefficients": p.coefficients.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "discriminant": [p.discriminant_value.re, p.discriminant_value.im],
            });
            out.line(serde_json::to_string_pretty(&record).unwrap());
        }
        Command::Sigma { family, z, n, j, method } => {
            let fam = family.build()?;
            let z = parse_complex(&z)?;
            let m = match method {
                SigmaArg::Eig => SigmaMethod::Eig,
                SigmaArg::Contour => SigmaMethod::Contour,
            };
            let s = eigen::power_sum_sigma(&fam, z, j, n, m)?;
            out.line(serde_json::json!({ "j": j, "n": n, "sigma": [s.re, s.im] }).to_string());
        }
        Command::BranchPoints { family, n, radius, grid_density, tol } => {
            let fam = family.build()?;
            let tol = tol.unwrap_or_else(|| default_tol().max(1e-9));
            let set = match radius {
                Some(r) => surface::find_branch_points_in(&fam, n, r, grid_density, tol)?,
                None => surface::find_branch_points(&fam, n, grid_density, tol)?,
            };
            let record = serde_json::json!({
                "n": set.n,
                "search_radius": set.search_radius,
                "points": set.points.iter().map(|p| serde_json::json!({
                    "z": p.z_star,
                    "labels": [p.colliding_labels.0, p.colliding_labels.1],
                    "multiplicity_hint": p.multiplicity_hint,
                    "confidence": if p.high_confidence { "high" } else { "low" },
                })).collect::<Vec<_>>(),
            });
            out.line(serde_json::to_string_pretty(&record).unwrap());
        }
        Command::Monodromy { family, path, n_max, tol } => {
            let fam = family.build()?;
            let v: serde_json::Value = serde_json::from_str(&path)
                .map_err(|e| Error::BadPath(format!("bad path JSON: {e}")))?;
            let path = PathInC::from_json(&v, true)?;
            let m = surface::monodromy(&fam, &path, n_max, tol.unwrap_or_else(|| default_tol().max(1e-9)))?;
            out.line(serde_json::to_string_pretty(&m).unwrap());
        }
        Command::Irreducibility { alpha, k, n_max } => {
            let alpha = Alpha::parse(&alpha)?;
            let r = surface::irreducibility_certificate(alpha, k, n_max)?;
            out.line(serde_json::to_string_pretty(&r).unwrap());
        }
        Command::Asymptotics { what } => match what {
            AsymptoticsCommand::Thm2 { alpha, z, csv } => {
                let fit = asympt::thm2_slope_fit(
                    Alpha::parse(&alpha)?,
                    parse_complex(&z)?,
                    &asympt::N_LADDER,
                )?;
                emit_fit(&mut out, &fit, csv);
            }
            AsymptoticsCommand::Thm4 { z, csv } => {
                let fit = asympt::thm4_slope_fit(parse_complex(&z)?, &asympt::N_LADDER)?;
                emit_fit(&mut out, &fit, csv);
            }
            AsymptoticsCommand::Pk { z, n_lo, n_hi } => {
                let r = asympt::pk_expansion_check(z, n_lo, n_hi)?;
                out.line(serde_json::to_string_pretty(&r).unwrap());
            }
            AsymptoticsCommand::Radius { alpha, n, kmax } => {
                let fam = OperatorFamily::power(Alpha::parse(&alpha)?)?;
                let est = asympt::radius_probe(&fam, n, kmax)?;
                out.line(
                    serde_json::json!({
                        "n": n,
                        "radius_estimate": est,
                        "certified_radius": fam.radius(n),
                        "note": "probe only; never asserted as a theorem",
                    })
                    .to_string(),
                );
            }
        },
        Command::Verify { seed } => {
            let results = verify::run_all(seed)?;
            out.line(verify::render_table(&results));
            let all = results.iter().all(|r| r.passed);
            out.line(format!(
                "{}/{} criteria passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            ));
            if !all {
                exit = 1;
            }
        }
    }
    out.flush()?;
    Ok(exit)
}
