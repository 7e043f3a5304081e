use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use color488::analysis::{FitOptions, FitTarget, LowRateOptions};
use color488::decoders::{DecoderKind, Order};
use color488_cli::commands::{self, DecodeOptions, EnumerateOptions, LatticeOptions, Report};
use color488_cli::config::{self, Code, Noise, Rounds};
use color488_cli::{ExitKind, ExperimentConfig};

#[derive(Parser)]
#[command(name = "color488", version, about = "4.8.8 color code decoder lab")]
#[command(propagate_version = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice and dump it as JSON
    Lattice {
        #[arg(long, value_parser = config::parse_distance)]
        d: usize,
        /// Run the invariant checks
        #[arg(long)]
        validate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo logical failure rates as CSV
    Sample(SampleArgs),
    /// Exhaustive minimum-weight enumeration
    Enumerate {
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long, value_parser = config::parse_distance)]
        d: usize,
        /// Error weight; defaults to d/2
        #[arg(long)]
        weight: Option<usize>,
        /// Tie-break seeds per configuration
        #[arg(long, default_value_t = 16)]
        repeats: usize,
        /// Enumerate first-row boundary patterns instead
        #[arg(long)]
        patterns: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form failure counts over a distance range
    Analytic {
        /// Inclusive even range `lo:hi[:step]` or a comma list
        #[arg(long, value_parser = distances, default_value = "4:100")]
        d_range: List<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified estimate at low physical error rates
    Lowrate {
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long, value_parser = config::parse_distance)]
        d: usize,
        #[arg(long, value_parser = probabilities, default_value = "0.0001,0.0003,0.001,0.003")]
        p: List<f64>,
        /// Heaviest stratum included
        #[arg(long)]
        w_max: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        shots_per_weight: u64,
        #[arg(long, default_value_t = 4)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-size-scaling threshold fit of a samples CSV
    Fit {
        samples: PathBuf,
        #[arg(long, value_enum, default_value = "any")]
        target: FitTargetArg,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one error and report the correction
    Decode {
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long, value_parser = config::parse_distance)]
        d: usize,
        /// Flipped qubits, comma separated
        #[arg(long, value_delimiter = ',')]
        errors: Vec<usize>,
        /// Dump defect graphs and matchings of both stages
        #[arg(long)]
        trace: bool,
        /// Tie-break seed; omitted means ties go by node order
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long, value_parser = config::parse_decoder, default_value = "correlated")]
    decoder: DecoderKind,
    /// Discounted boundary weight in (0, 1]
    #[arg(long)]
    wb: Option<f64>,
    /// `rb-then-rg` or `rg-then-rb`
    #[arg(long, value_parser = config::parse_order)]
    order: Option<Order>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "color-bitflip")]
    code: Code,
    #[arg(long, value_enum, default_value = "capacity")]
    noise: Noise,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Distances: comma list or `lo:hi[:step]`
    #[arg(long, value_parser = distances)]
    d: List<usize>,
    #[arg(long, value_parser = probabilities)]
    p: List<f64>,
    /// Measurement rounds: a number or `d`
    #[arg(long, default_value = "d")]
    rounds: Rounds,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A comma list or range taken as one flag value.
#[derive(Clone)]
struct List<T>(Vec<T>);

fn distances(s: &str) -> Result<List<usize>, String> {
    config::parse_distances(s).map(List)
}

fn probabilities(s: &str) -> Result<List<f64>, String> {
    config::parse_probabilities(s).map(List)
}

#[derive(Copy, Clone, clap::ValueEnum)]
enum FitTargetArg {
    Any,
    Green,
    Blue,
}

fn base(
    command: &str,
    d: Vec<usize>,
    dec: Option<&DecoderArgs>,
    out: &Option<PathBuf>,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(command);
    cfg.distances = d;
    if let Some(a) = dec {
        cfg.decoder = a.decoder;
        cfg.w_b = a.wb;
        cfg.order = a.order;
    }
    cfg.out = out.as_ref().map(|p| p.display().to_string());
    cfg
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), color488::Error> {
    Ok(match cli.command {
        Command::Lattice { d, validate, out } => {
            let cfg = base("lattice", vec![d], None, &out);
            (
                commands::cmd_lattice(&cfg, LatticeOptions { validate })?,
                out,
            )
        }
        Command::Sample(a) => {
            let mut cfg = base("sample", a.d.0, Some(&a.decoder), &a.out);
            cfg.code = a.code;
            cfg.noise = a.noise;
            cfg.ps = a.p.0;
            cfg.rounds = a.rounds;
            cfg.shots = a.shots;
            cfg.seed = a.seed;
            cfg.workers = a.workers;
            (commands::cmd_sample(&cfg)?, a.out)
        }
        Command::Enumerate {
            decoder,
            d,
            weight,
            repeats,
            patterns,
            seed,
            out,
        } => {
            let mut cfg = base("enumerate", vec![d], Some(&decoder), &out);
            cfg.seed = seed;
            (
                commands::cmd_enumerate(
                    &cfg,
                    EnumerateOptions {
                        weight,
                        repeats,
                        patterns,
                    },
                )?,
                out,
            )
        }
        Command::Analytic { d_range, out } => {
            let cfg = base("analytic", d_range.0, None, &out);
            (commands::cmd_analytic(&cfg)?, out)
        }
        Command::Lowrate {
            decoder,
            d,
            p,
            w_max,
            shots_per_weight,
            repeats,
            seed,
            out,
        } => {
            let mut cfg = base("lowrate", vec![d], Some(&decoder), &out);
            cfg.ps = p.0;
            cfg.seed = seed;
            let opts = LowRateOptions {
                w_max: w_max.unwrap_or(d / 2 + 3),
                shots_per_weight,
                repeats,
                seed,
            };
            (commands::cmd_lowrate(&cfg, opts)?, out)
        }
        Command::Fit {
            samples,
            target,
            bootstrap,
            seed,
            out,
        } => {
            let mut cfg = base("fit", Vec::new(), None, &out);
            cfg.seed = seed;
            let text = std::fs::read_to_string(&samples)?;
            let target = match target {
                FitTargetArg::Any => FitTarget::Any,
                FitTargetArg::Green => FitTarget::Green,
                FitTargetArg::Blue => FitTarget::Blue,
            };
            let opts = FitOptions {
                target,
                bootstrap,
                seed,
                ..FitOptions::default()
            };
            (commands::cmd_fit(&cfg, &text, opts)?, out)
        }
        Command::Decode {
            decoder,
            d,
            errors,
            trace,
            seed,
            out,
        } => {
            let cfg = base("decode", vec![d], Some(&decoder), &out);
            (
                commands::cmd_decode(
                    &cfg,
                    DecodeOptions {
                        errors,
                        trace,
                        tie_seed: seed,
                    },
                )?,
                out,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, out)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &report.text),
                None => {
                    print!("{}", report.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(ExitKind::Config.code() as u8);
            }
            if out.is_some() {
                eprintln!("{}", report.summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitKind::of(&e).code() as u8)
        }
    }
}
