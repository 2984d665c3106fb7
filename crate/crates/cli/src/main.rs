use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use chronospin::config;
use chronospin::output::{self, Manifest};
use chronospin::svg;
use chronospin_core::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport, SpinZ};

#[derive(Parser)]
#[command(
    name = "chronospin",
    version,
    about = "Discrete-tick spin simulator with closed-form reference checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key-value config file.
    Run {
        /// Path to the config file.
        config: PathBuf,
        /// Override the seed from the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count from the file.
        #[arg(long)]
        trials: Option<u64>,
        /// Directory for result files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Result files to write.
        #[arg(long, value_delimiter = ',', default_values = ["csv", "json"])]
        formats: Vec<Format>,
    },
    /// Pair runs across a list of relative analyzer angles.
    Sweep {
        /// Sweep flavor; only singlet-angle-sweep exists.
        #[arg(long, default_value = "singlet-angle-sweep")]
        kind: String,
        /// Relative angles, radians or degrees with a deg suffix.
        #[arg(long, value_delimiter = ',')]
        angles: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Second-measurement rule: paper-ensemble or born-projection.
        #[arg(long)]
        rule: Option<String>,
        /// Interval policy: uniform-parity, fixed-even or fixed-odd.
        #[arg(long)]
        delay_policy: Option<String>,
        /// Pair member measured first, 1 or 2.
        #[arg(long)]
        first_particle: Option<u8>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_values = ["csv", "json"])]
        formats: Vec<Format>,
    },
    /// Four-term CHSH run at settings a, a', b, b'.
    Chsh {
        /// The four analyzer settings; defaults to the canonical ones.
        #[arg(long, value_delimiter = ',')]
        angles: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        rule: Option<String>,
        #[arg(long)]
        delay_policy: Option<String>,
        #[arg(long)]
        first_particle: Option<u8>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_values = ["csv", "json"])]
        formats: Vec<Format>,
    },
    /// Exact per-tick readout probabilities of one carrier.
    Trace {
        /// Start label, down or up.
        #[arg(long, default_value = "down")]
        start: String,
        /// Last tick to print.
        #[arg(long, default_value_t = 8)]
        ticks: u64,
        /// Also write the oscillation plot to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

enum CliError {
    Validation(String),
    Runtime(String),
}

fn validation(e: impl ToString) -> CliError {
    CliError::Validation(e.to_string())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn parse_angles(raw: &[String]) -> Result<Vec<f64>, CliError> {
    raw.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| config::angle_value(s).map_err(CliError::Validation))
        .collect()
}

fn apply_overrides(
    config: &mut ExperimentConfig,
    seed: Option<u64>,
    trials: Option<u64>,
    rule: Option<String>,
    delay_policy: Option<String>,
    first_particle: Option<u8>,
) -> Result<(), CliError> {
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(trials) = trials {
        config.trials = trials;
    }
    if let Some(rule) = rule {
        config.rule = rule.parse().map_err(validation)?;
    }
    if let Some(policy) = delay_policy {
        config.delay_policy = policy.parse().map_err(validation)?;
    }
    if let Some(first) = first_particle {
        config.first_particle = first;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            out,
            formats,
        } => {
            let text = fs::read_to_string(&config).map_err(|e| io_error(&config, e))?;
            let mut parsed = config::parse(&text).map_err(validation)?;
            apply_overrides(&mut parsed, seed, trials, None, None, None)?;
            run_and_emit(parsed, &out, &formats)
        }
        Command::Sweep {
            kind,
            angles,
            seed,
            trials,
            rule,
            delay_policy,
            first_particle,
            out,
            formats,
        } => {
            let kind: ExperimentKind = kind.parse().map_err(validation)?;
            if kind != ExperimentKind::SingletAngleSweep {
                return Err(CliError::Validation(format!(
                    "sweep supports kind singlet-angle-sweep, got {kind}"
                )));
            }
            let mut config = ExperimentConfig::new(kind);
            config.angles = parse_angles(&angles)?;
            apply_overrides(
                &mut config,
                seed,
                trials,
                rule,
                delay_policy,
                first_particle,
            )?;
            run_and_emit(config, &out, &formats)
        }
        Command::Chsh {
            angles,
            seed,
            trials,
            rule,
            delay_policy,
            first_particle,
            out,
            formats,
        } => {
            let mut config = ExperimentConfig::new(ExperimentKind::Chsh);
            config.angles = parse_angles(&angles)?;
            apply_overrides(
                &mut config,
                seed,
                trials,
                rule,
                delay_policy,
                first_particle,
            )?;
            run_and_emit(config, &out, &formats)
        }
        Command::Trace { start, ticks, svg } => {
            let start: SpinZ = start.parse().map_err(validation)?;
            print!("{}", output::trace_text(start, ticks));
            if let Some(path) = svg {
                fs::write(&path, svg::trace_svg(start, ticks)).map_err(|e| io_error(&path, e))?;
            }
            Ok(())
        }
    }
}

fn run_and_emit(
    config: ExperimentConfig,
    out_dir: &Path,
    formats: &[Format],
) -> Result<(), CliError> {
    let report = run_experiment(&config).map_err(validation)?;
    print!("{}", output::render_text(&report));
    if formats.is_empty() {
        return Ok(());
    }

    fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    let mut outputs = Vec::new();
    let mut seen = Vec::new();
    for format in formats {
        if seen.contains(format) {
            continue;
        }
        seen.push(*format);
        let name = match format {
            Format::Csv => {
                write_output(out_dir, "results.csv", output::to_csv(&report))?;
                "results.csv"
            }
            Format::Json => {
                write_output(out_dir, "results.json", output::to_json(&report))?;
                "results.json"
            }
            Format::Svg => {
                let legs = match &report {
                    ExperimentReport::SingletAngleSweep(sweep) => sweep.legs.clone(),
                    ExperimentReport::Chsh(chsh) => {
                        chsh.terms.iter().map(|t| t.report.clone()).collect()
                    }
                    _ => {
                        eprintln!("note: no svg view for {}", report.kind());
                        continue;
                    }
                };
                write_output(out_dir, "results.svg", svg::correlation_svg(&legs))?;
                "results.svg"
            }
        };
        outputs.push(name.to_string());
    }

    let manifest = Manifest {
        tool: "chronospin",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .unwrap_or_default()
            .as_secs(),
        config_echo: config::emit(&config),
        outputs,
    };
    write_output(out_dir, "manifest.json", manifest.to_json())?;
    Ok(())
}

fn write_output(dir: &Path, name: &str, content: String) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| io_error(&path, e))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
