//! `uncurl`: uncurling metrics, unital norms and algebra invariants from the command line.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use uncurl_core::unorm::QuadratureConfig;

use commands::{Failure, Settings, UnormArgs, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "uncurl", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Quadrature convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,

    /// Gauss-Legendre order per panel.
    #[arg(long, global = true, default_value_t = 16)]
    order: usize,

    /// Maximum dyadic refinement depth.
    #[arg(long, global = true, default_value_t = 20)]
    max_depth: u32,

    /// Central-difference step.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_step: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check associativity and find the unit.
    Validate { file: String },
    /// Left regular representation, usual norm, |1|^2 and symbolic inverse.
    Repinfo { file: String },
    /// Basis of the uncurling space.
    Uncurl { file: String },
    /// Normalized family: particular metric plus free directions.
    Normalize { file: String },
    /// Isomorphism invariants.
    Invariants { file: String },
    /// Try to tell two algebras apart by their invariants.
    Compare { first: String, second: String },
    /// Evaluate the unital norm at a point.
    Unorm {
        file: String,
        /// `canonical`, `family:c1,...`, a JSON matrix, or a file holding one.
        #[arg(long, default_value = "canonical")]
        metric: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Intermediate waypoint between the unit and the point; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        path: Vec<String>,
        /// Scale factor for the homogeneity residual.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Exact and numerical property suite for one metric.
    Check {
        file: String,
        #[arg(long, default_value = "canonical")]
        metric: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Numerical demonstrations.
    #[command(subcommand)]
    Demo(Demo),
    /// Emit a builtin algebra file, e.g. `complex` or `direct_sum(dual, reals(1))`.
    Builtin { name: String },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Recover the Euclidean length from its gradient field.
    Pythagoras {
        #[arg(long, default_value_t = 10)]
        paths: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Repinfo { .. } => "repinfo",
            Command::Uncurl { .. } => "uncurl",
            Command::Normalize { .. } => "normalize",
            Command::Invariants { .. } => "invariants",
            Command::Compare { .. } => "compare",
            Command::Unorm { .. } => "unorm",
            Command::Check { .. } => "check",
            Command::Demo(Demo::Pythagoras { .. }) => "demo pythagoras",
            Command::Builtin { .. } => "builtin",
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let bad = |m: &str| Err(Failure::new(EXIT_USAGE, "invalid_params", m));
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return bad("--tolerance must be positive");
    }
    if cli.order == 0 {
        return bad("--order must be positive");
    }
    if cli.fd_step.is_nan() || cli.fd_step <= 0.0 {
        return bad("--fd-step must be positive");
    }
    Ok(Settings {
        quadrature: QuadratureConfig {
            order: cli.order,
            tolerance: cli.tolerance,
            max_depth: cli.max_depth,
        },
        fd_step: cli.fd_step,
        seed: cli.seed,
    })
}

fn dispatch(cli: &Cli) -> commands::Outcome {
    let s = settings(cli)?;
    match &cli.command {
        Command::Validate { file } => commands::validate(file),
        Command::Repinfo { file } => commands::repinfo(file),
        Command::Uncurl { file } => commands::uncurl(file),
        Command::Normalize { file } => commands::normalize(file),
        Command::Invariants { file } => commands::invariants(file),
        Command::Compare { first, second } => commands::compare(first, second),
        Command::Unorm {
            file,
            metric,
            point,
            path,
            alpha,
        } => commands::unorm(
            UnormArgs {
                file,
                metric,
                point,
                path,
                alpha: *alpha,
            },
            s,
        ),
        Command::Check {
            file,
            metric,
            trials,
        } => commands::check(file, metric, *trials, s),
        Command::Demo(Demo::Pythagoras { paths, points }) => {
            commands::pythagoras(*paths, *points, s)
        }
        Command::Builtin { name } => commands::emit_builtin(name),
    }
}

/// Tags a command body with the schema and attaches the error, if any.
fn envelope(command: Option<&str>, body: Map<String, Value>, error: Option<&Failure>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), report::SCHEMA.into());
    m.insert("command".into(), command.map_or(Value::Null, Value::from));
    m.extend(body);
    if let Some(f) = error {
        let mut e = Map::new();
        e.insert("kind".into(), f.kind.into());
        e.insert("message".into(), f.message.clone().into());
        e.insert("exit_code".into(), f.code.into());
        m.insert("error".into(), Value::Object(e));
    }
    Value::Object(m)
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("reports serialize") + "\n",
        Format::Text => report::to_text(v),
    }
}

fn write_out(text: &str, output: Option<&PathBuf>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let f = Failure::new(EXIT_USAGE, "usage", e.kind().to_string());
            let _ = write_out(
                &render(&envelope(None, Map::new(), Some(&f)), Format::Json),
                None,
            );
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let name = cli.command.name();
    let (value, code) = match dispatch(&cli) {
        // a bare algebra file, so the output pipes straight back in
        Ok(body) if matches!(cli.command, Command::Builtin { .. }) => (Value::Object(body), 0),
        Ok(body) => (envelope(Some(name), body, None), 0),
        Err(mut f) => {
            eprintln!("uncurl {name}: {}", f.message);
            let body = std::mem::take(&mut f.partial);
            (envelope(Some(name), body, Some(&f)), f.code)
        }
    };
    if let Err(e) = write_out(&render(&value, cli.format), cli.output.as_ref()) {
        eprintln!("uncurl: cannot write report: {e}");
        return ExitCode::from(commands::EXIT_VALIDATION as u8);
    }
    ExitCode::from(code as u8)
}
