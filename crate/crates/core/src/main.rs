use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bvbfv::report::{self, DiracConfig, ModelConfig, ModelKind, OrbitConfig, Report, Status, Suite, SuiteConfig, WilsonConfig};
use bvbfv::scalar::{parse_rational, Rational};
use bvbfv::{Error, Result};

const OUT_ENV: &str = "BVBFV_OUT_DIR";

#[derive(Parser)]
#[command(name = "bvbfv", version, about = "Checks for Chern-Simons theory with Wilson lines in the BV-BFV formalism")]
struct Cli {
    /// Report path; defaults to `<dir>/<command>.json` with `<dir>` from $BVBFV_OUT_DIR or `bvbfv-reports`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the check table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "cs3")]
    model: String,
    /// Builtin name (su2, so3, abelian(n), sums with +) or a JSON file.
    #[arg(long, default_value = "su2")]
    algebra: String,
    /// Number of Wilson lines.
    #[arg(long)]
    lines: Option<usize>,
    /// Orbit representative as comma-separated rationals.
    #[arg(long)]
    t0: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classical master equation of a BV model.
    VerifyCme {
        #[command(flatten)]
        model: ModelArgs,
        /// Give the source a boundary.
        #[arg(long)]
        boundary: bool,
    },
    /// Boundary BFV structure and action induced by a model with boundary.
    DeriveBfv {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Square and centrality of the cubic Dirac operator.
    Dirac {
        #[arg(long, default_value = "su2")]
        algebra: String,
        /// Spin of the su2 representation.
        #[arg(long, conflicts_with = "rep")]
        spin: Option<String>,
        /// `adj` or `triv:n`.
        #[arg(long)]
        rep: Option<String>,
        #[arg(long, default_value = "1")]
        hbar: String,
        #[arg(long, default_value = "1/6")]
        cubic: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Cohomology of the quantised boundary charge.
    Cohomology {
        /// Signed points such as `+su2:0.5 -su2:0.5`.
        #[arg(long, num_args = 1.., required = true)]
        points: Vec<String>,
        #[arg(long, default_value = "1")]
        hbar: String,
    },
    /// Kirillov form, norm and tangent checks on a coadjoint orbit.
    OrbitCheck {
        #[arg(long, default_value = "su2")]
        algebra: String,
        #[arg(long)]
        t0: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Wilson holonomy and its invariances.
    Wilson {
        #[arg(long, default_value = "su2")]
        algebra: String,
        #[arg(long, default_value = "0.5")]
        spin: String,
        #[arg(long, default_value_t = 50)]
        configs: usize,
        #[arg(long, default_value_t = 8)]
        segments: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// JSON list of algebra vectors, one per segment.
        #[arg(long)]
        connection: Option<PathBuf>,
        /// Treat the connection as an open line and report the matrix.
        #[arg(long)]
        open: bool,
    },
    /// Runs a predefined set of checks.
    Suite {
        #[arg(value_parser = ["paper-all", "symbolic", "quantum", "numeric"])]
        name: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cubic coefficient used for every Dirac operator.
        #[arg(long)]
        cubic: Option<String>,
    },
}

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::Config(format!("`{s}` is not a rational number")))
}

fn model_config(a: &ModelArgs, default_lines: usize) -> Result<ModelConfig> {
    let kind = ModelKind::parse(&a.model)?;
    let mut cfg = ModelConfig::new(kind, report::load_algebra(&a.algebra)?);
    cfg.lines = a.lines.unwrap_or(default_lines);
    cfg.t0 = a.t0.as_deref().map(report::parse_vector).transpose()?;
    Ok(cfg)
}

impl Cmd {
    fn file_stem(&self) -> String {
        match self {
            Cmd::VerifyCme { .. } => "verify-cme".into(),
            Cmd::DeriveBfv { .. } => "derive-bfv".into(),
            Cmd::Dirac { .. } => "dirac".into(),
            Cmd::Cohomology { .. } => "cohomology".into(),
            Cmd::OrbitCheck { .. } => "orbit-check".into(),
            Cmd::Wilson { .. } => "wilson".into(),
            Cmd::Suite { name, .. } => format!("suite-{name}"),
        }
    }

    fn run(&self) -> Result<Report> {
        match self {
            Cmd::VerifyCme { model, boundary } => {
                let mut cfg = model_config(model, 0)?;
                cfg.boundary = *boundary;
                report::verify_cme(&cfg)
            }
            Cmd::DeriveBfv { model } => {
                let lines = if model.model == "cs1" { 1 } else { 2 };
                report::derive_bfv(&model_config(model, lines)?)
            }
            Cmd::Dirac { algebra, spin, rep, hbar, cubic, mode, tolerance } => {
                let l = report::load_algebra(algebra)?;
                let rep = match (spin, rep) {
                    (Some(s), _) => s.clone(),
                    (None, Some(r)) => r.clone(),
                    (None, None) if l.name() == "su2" => "0.5".into(),
                    (None, None) => "adj".into(),
                };
                let mut cfg = DiracConfig::new(l, &rep, rational(hbar)?);
                cfg.cubic = rational(cubic)?;
                if let Mode::Float = mode {
                    cfg.tolerance = Some(*tolerance);
                }
                report::dirac(&cfg)
            }
            Cmd::Cohomology { points, hbar } => report::cohomology_report(points, &rational(hbar)?),
            Cmd::OrbitCheck { algebra, t0, samples, seed, step, tolerance } => {
                let l = report::load_algebra(algebra)?;
                let t0 = match t0 {
                    Some(s) => report::parse_vector(s)?,
                    None => ModelConfig::new(ModelKind::Cs3, l.clone()).t0(),
                };
                let mut cfg = OrbitConfig::new(l, t0, *seed);
                cfg.samples = *samples;
                cfg.step = *step;
                cfg.tolerance = *tolerance;
                report::orbit_check(&cfg)
            }
            Cmd::Wilson { algebra, spin, configs, segments, seed, connection, open } => {
                let mut cfg = WilsonConfig::new(report::load_algebra(algebra)?, spin, *seed);
                cfg.configs = *configs;
                cfg.segments = *segments;
                cfg.closed = !*open;
                if let Some(p) = connection {
                    cfg.connection = Some(bvbfv::orbit::parse_connection(&std::fs::read_to_string(p)?)?);
                }
                report::wilson(&cfg)
            }
            Cmd::Suite { name, seed, cubic } => {
                let cubic = cubic.as_deref().map(rational).transpose()?;
                report::suite(&SuiteConfig { suite: Suite::parse(name)?, seed: *seed, cubic })
            }
        }
    }
}

fn print_table(r: &Report) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        let mut res = c.residual.clone();
        if res.chars().count() > 100 {
            res = res.chars().take(97).collect::<String>() + "...";
        }
        if writeln!(out, "{tag}  {:<44} {res}", c.name).is_err() {
            return;
        }
    }
}

/// Point descriptors such as `-su2:0.5` would parse as short flags; every
/// descriptor is passed on as `--points=<descriptor>`.
fn normalise_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for a in args {
        if (a.starts_with('-') || a.starts_with('+')) && !a.starts_with("--") && a.contains(':') {
            if out.last().is_some_and(|p| p == "--points") {
                out.pop();
            }
            out.push(format!("--points={a}"));
        } else {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalise_args(std::env::args()));
    let path = cli.out.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("bvbfv-reports"));
        dir.join(format!("{}.json", cli.cmd.file_stem()))
    });
    let (text, code) = match cli.cmd.run() {
        Ok(r) => {
            if cli.json {
                use std::io::Write;
                let _ = std::io::stdout().write_all(r.to_pretty().as_bytes());
            } else {
                print_table(&r);
            }
            (r.to_pretty(), if r.ok() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let v =
                serde_json::json!({ "schema": report::SCHEMA, "command": cli.cmd.file_stem(), "status": "error", "error": e.to_string() });
            (serde_json::to_string_pretty(&v).expect("report serialises") + "\n", 2)
        }
    };
    let written = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .map_or(Ok(()), std::fs::create_dir_all)
        .and_then(|_| std::fs::write(&path, text));
    match written {
        Ok(()) if !cli.json => eprintln!("report: {}", path.display()),
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
