use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use sadic::coincidence::{explore, explorer_svg, strong_coincidence, GeomSegment};
use sadic::config::SystemConfig;
use sadic::language::balance;
use sadic::lyapunov::estimate_exponents_with;
use sadic::pipeline::{run_verify, SCHEMA_VERSION};
use sadic::price::price_report;
use sadic::rauzy::{fractal_points, orbit_vs_shift, rotation_factor};
use sadic::spectral::{rational_independence, right_eigenvector, DEFAULT_PARTIAL_QUOTIENT_CAP};
use sadic::{Error, Letter};

#[derive(Parser)]
#[command(name = "sadic", version, about = "Two-letter S-adic systems: balance, eigenvectors, coincidence, Rauzy fractals")]
struct Cli {
    /// Emit pretty JSON instead of the `key: value` summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Balance constant of the shifted language up to a length.
    Balance {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        shift: Option<usize>,
        #[arg(long)]
        maxlen: Option<usize>,
        /// Report `refuted` when the spread exceeds this.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Generalized right eigenvector, its rational independence, and the left-vector trace.
    Eigen {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Strong coincidence up to a cap.
    Coincide {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        cap: Option<usize>,
        /// List every coincident n up to the cap.
        #[arg(long)]
        all: bool,
    },
    /// Rauzy fractal approximation.
    Fractal {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exchange-of-pieces orbit against the shift.
    RotateCheck {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Monte-Carlo Lyapunov exponents of a sequence model.
    Lyapunov {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Use the untransposed cocycle.
        #[arg(long)]
        untransposed: bool,
    },
    /// Broken lines of an iterated configuration and their stripe slices.
    ExploreConfig {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Segment `x1,x2,i`; repeatable. Default: both unit segments at the origin.
        #[arg(long = "segment")]
        segments: Vec<String>,
        /// Normal of the slicing hyperplanes, `a,b`.
        #[arg(long, default_value = "1,1")]
        normal: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Full hypothesis and conclusion pipeline.
    Verify {
        #[command(flatten)]
        cfg: ConfigArg,
    },
}

enum Failure {
    Config(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. }
            | Error::MalformedSubstitution(_)
            | Error::InvalidLetter(_)
            | Error::EmptyImage(_)
            | Error::InvalidModel(_) => Failure::Config(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<SystemConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    SystemConfig::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn parse_segment(s: &str) -> Result<GeomSegment, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Config(format!("segment {s:?}: expected x1,x2,i"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let x1: i64 = parts[0].parse().map_err(|_| bad())?;
    let x2: i64 = parts[1].parse().map_err(|_| bad())?;
    let i = match parts[2] {
        "1" => Letter::One,
        "2" => Letter::Two,
        _ => return Err(bad()),
    };
    Ok(GeomSegment::new([x1, x2], i))
}

fn run(command: Command) -> Result<(Value, bool), Failure> {
    let mut errored = false;
    let value = match command {
        Command::Balance { cfg, shift, maxlen, bound } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            let cert = balance(
                &d,
                shift.unwrap_or(c.params.shift),
                maxlen.unwrap_or(c.params.maxlen),
                bound.or(c.params.bound),
            )?;
            to_value(&cert)
        }
        Command::Eigen { cfg, depth, tolerance } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            let right = right_eigenvector(
                &d,
                depth.unwrap_or(c.params.eigen_depth),
                tolerance.unwrap_or(c.params.tolerance),
                c.params.precision,
            )?;
            let u = right.best();
            let price = price_report(&d, &c.params.price_params())?;
            json!({
                "u": u.to_f64(),
                "u1_prime": u.u1_prime(),
                "right": to_value(&right),
                "independence": to_value(&rational_independence(u, DEFAULT_PARTIAL_QUOTIENT_CAP)),
                "E": to_value(&price.e),
            })
        }
        Command::Coincide { cfg, cap, all } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            to_value(&strong_coincidence(&d, cap.unwrap_or(c.params.cap), all)?)
        }
        Command::Fractal { cfg, depth, svg, csv } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            let right = right_eigenvector(&d, c.params.eigen_depth, c.params.tolerance, c.params.precision)?;
            let approx = fractal_points(&d, right.best(), depth.unwrap_or(c.params.fractal_depth), Letter::One)?;
            if let Some(p) = &svg {
                write_file(p, &approx.to_svg())?;
            }
            if let Some(p) = &csv {
                write_file(p, &approx.to_csv()?)?;
            }
            let (lo, hi) = approx.range().unwrap_or((0.0, 0.0));
            json!({
                "points": approx.points.len(),
                "u1_prime": approx.u1_prime,
                "min": lo,
                "max": hi,
                "svg": svg.map(|p| p.display().to_string()),
                "csv": csv.map(|p| p.display().to_string()),
            })
        }
        Command::RotateCheck { cfg, steps } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            let right = right_eigenvector(&d, c.params.eigen_depth, c.params.tolerance, c.params.precision)?;
            let u = right.best();
            let rot = rotation_factor(u);
            let orbit = orbit_vs_shift(&d, u, steps.unwrap_or(c.params.steps), c.params.classifier_depth, None)?;
            json!({
                "angle": rot.angle,
                "rational": rot.rational,
                "mismatches": orbit.mismatches,
                "first_mismatch": orbit.first_mismatch,
                "steps": orbit.steps,
                "classifier_points": orbit.classifier_points,
            })
        }
        Command::Lyapunov {
            cfg,
            length,
            samples,
            seed,
            untransposed,
        } => {
            let c = load(&cfg.config)?;
            let model = c.sequence_model()?;
            let est = estimate_exponents_with(
                &model,
                length.unwrap_or(c.params.length),
                samples.unwrap_or(c.params.samples),
                seed.unwrap_or(c.params.seed),
                !untransposed,
            )?;
            let mut v = to_value(&est);
            v["model"] = to_value(&model);
            v["strongly_connected"] = json!(model.strongly_connected());
            v["positive_cylinder"] = json!(model.has_positive_cylinder());
            v["unimodular"] = json!(model.is_unimodular());
            v
        }
        Command::ExploreConfig {
            cfg,
            n,
            segments,
            normal,
            svg,
        } => {
            let c = load(&cfg.config)?;
            let d = c.directive()?;
            let k = if segments.is_empty() {
                vec![GeomSegment::origin(Letter::One), GeomSegment::origin(Letter::Two)]
            } else {
                segments.iter().map(|s| parse_segment(s)).collect::<Result<_, _>>()?
            };
            let nv: Vec<f64> = normal
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Config(format!("normal {normal:?}: expected a,b")))?;
            if nv.len() != 2 {
                return Err(Failure::Config(format!("normal {normal:?}: expected a,b")));
            }
            let right = right_eigenvector(&d, c.params.eigen_depth, c.params.tolerance, c.params.precision)?;
            let report = explore(&d, &k, n, right.best().to_f64(), [nv[0], nv[1]])?;
            if let Some(p) = &svg {
                write_file(p, &explorer_svg(&report))?;
            }
            to_value(&report)
        }
        Command::Verify { cfg } => {
            let c = load(&cfg.config)?;
            let report = run_verify(&c)?;
            errored = !report.errors.is_empty();
            to_value(&report)
        }
    };
    Ok((value, errored))
}

fn print_summary(v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
        other => println!("{other}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(3);
        }
    };
    let json = cli.json;
    match pool.install(|| run(cli.command)) {
        Ok((mut value, errored)) => {
            if let Value::Object(map) = &mut value {
                if !map.contains_key("schema_version") {
                    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&value).expect("JSON output"));
            } else {
                print_summary(&value);
            }
            if errored {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
