use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use metdist::distortion::DistortionError;
use metdist::harness::{render_output, run_experiment, summarize, ExperimentConfig};
use metdist::ingest::{parse_soc, write_soc, SocDocument};
use metdist::lp::LpError;
use metdist::samplers::{sample, Geometry, Model, SamplerSpec};
use metdist::{metric_distortion, parse_lottery_spec, Lottery, PreferenceProfile, Rule, RuleError};

/// Metric distortion of randomized social choice rules.
#[derive(Debug, Parser)]
#[command(name = "metdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the metric distortion of a lottery on a profile.
    Distort {
        profile: PathBuf,
        /// Lottery as `0.5,0,0.5` or `a=1/2,c=1/2`.
        #[arg(long, conflicts_with = "rule", required_unless_present = "rule")]
        lottery: Option<String>,
        /// Rule whose lottery is evaluated.
        #[arg(long, value_parser = parse_rule)]
        rule: Option<Rule>,
    },
    /// Print the lottery a rule selects on a profile.
    Rule {
        #[arg(value_parser = parse_rule)]
        name: Rule,
        profile: PathBuf,
    },
    /// Sample a profile and print it as SOC.
    Sample {
        #[arg(long, value_enum)]
        model: ModelName,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mallows dispersion.
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        /// Mallows central ranking as 0-based indices, e.g. `2,0,1`.
        #[arg(long, value_delimiter = ',')]
        reference: Option<Vec<usize>>,
        /// Urn replacement count.
        #[arg(long, default_value_t = 10.0)]
        alpha: f64,
        /// Euclidean dimension.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = GeometryName::Cube)]
        geometry: GeometryName,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a TOML file and write CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Output file; overrides `output` in the config. Stdout if neither.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; never changes the output.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check that a SOC file is well formed.
    Validate { profile: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelName {
    Ic,
    Mallows,
    Urn,
    Euclidean,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GeometryName {
    Cube,
    Ball,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<RuleError> for Failure {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::Lp(LpError::NumericalFailure(_)) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<DistortionError> for Failure {
    fn from(e: DistortionError) -> Self {
        match e {
            DistortionError::Lp(_) | DistortionError::Lp1Infeasible { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: RuleError| e.to_string())
}

fn read_profile(path: &Path) -> Result<PreferenceProfile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_soc(&text)
        .map(|doc| doc.profile)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_lottery(profile: &PreferenceProfile, p: &Lottery) {
    for x in profile.alternatives() {
        println!("{}\t{:.6}", profile.name(x), p.prob(x));
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Distort { profile, lottery, rule } => {
            let profile = read_profile(&profile)?;
            let p = match (lottery, rule) {
                (Some(spec), _) => parse_lottery_spec(&spec, profile.names()).map_err(|e| Failure::Input(e.to_string()))?,
                (None, Some(rule)) => rule.apply(&profile)?,
                (None, None) => unreachable!("clap requires one of --lottery and --rule"),
            };
            println!("{}", metric_distortion(&profile, &p)?);
        }
        Command::Rule { name, profile } => {
            let profile = read_profile(&profile)?;
            let p = name.apply(&profile)?;
            print_lottery(&profile, &p);
        }
        Command::Sample {
            model,
            m,
            n,
            seed,
            phi,
            reference,
            alpha,
            dim,
            geometry,
            out,
        } => {
            let model = match model {
                ModelName::Ic => Model::Ic,
                ModelName::Mallows => Model::Mallows { phi, reference },
                ModelName::Urn => Model::Urn { alpha },
                ModelName::Euclidean => Model::Euclidean {
                    dim,
                    geometry: match geometry {
                        GeometryName::Cube => Geometry::Cube,
                        GeometryName::Ball => Geometry::Ball,
                    },
                },
            };
            let profile = sample(&SamplerSpec::new(model, m, n, seed)).map_err(|e| Failure::Input(e.to_string()))?;
            write_out(out.as_deref(), &write_soc(&SocDocument::new(profile)))?;
        }
        Command::Experiment { config, out, threads } => {
            let mut config = ExperimentConfig::load(&config).map_err(|e| Failure::Input(e.to_string()))?;
            if threads.is_some() {
                config.threads = threads;
            }
            let results = run_experiment(&config).map_err(|e| Failure::Input(e.to_string()))?;
            let failed: usize = results.iter().map(|r| r.failed).sum();
            if failed > 0 {
                log::warn!("{failed} rule evaluations failed and were left out of the means");
            }
            let csv = render_output(&config, &results).map_err(|e| Failure::Input(e.to_string()))?;
            write_out(out.as_deref().or(config.output.as_deref()), &csv)?;
            eprint!("{}", summarize(&results));
        }
        Command::Validate { profile } => {
            let text = fs::read_to_string(&profile).map_err(|e| Failure::Input(format!("{}: {e}", profile.display())))?;
            let doc = parse_soc(&text).map_err(|e| Failure::Input(format!("{}: {e}", profile.display())))?;
            println!(
                "ok: {} alternatives, {} voters",
                doc.profile.num_alternatives(),
                doc.profile.num_voters()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
