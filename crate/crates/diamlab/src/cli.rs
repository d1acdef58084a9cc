//! `diamlab` subcommands.
//!
//! Exit codes: 0 success, 1 oracle failure, 2 configuration error,
//! 3 numerical error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diamlab_core::limits::{aprs_envelope, law_for, limit_cdf, LimitError};
use diamlab_core::stats::ks_distance;
use diamlab_core::{DistributionSpec, Family, LimitLaw};
use thiserror::Error;

use crate::harness::{
    convergence_table, depoissonisation_compare, ecdf_of, run_replications, ExperimentConfig, HarnessError, Process,
};
use crate::oracle::{kernel_oracle, segment_oracle};
use crate::report::{Body, LawJson, LimitRow, OracleSummary, Report, RunConfig, SimulateSummary, TGrid};
use crate::spec_json::{DensityJson, DensityKind, FamilyName, SpecJson, SpecJsonError};

pub const EXIT_ORACLE_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) | Self::Io(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        if e.is_numerical() {
            Self::Numerical(e.to_string())
        } else {
            Self::Config(e.to_string())
        }
    }
}

impl From<SpecJsonError> for CliError {
    fn from(e: SpecJsonError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        Self::Config(e.to_string())
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "diamlab", version, about = "Diameter of random samples in the unit ball")]
pub struct Cli {
    /// Worker threads; all cores when unset. Results do not depend on it.
    #[arg(long, env = "DIAMLAB_THREADS", global = true)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Output file; standard output when unset.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate replications and write one row per replication.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a limit law on a grid of t.
    Limit {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        /// Number of grid points, end points included.
        #[arg(long, default_value_t = 101)]
        t_steps: usize,
    },
    /// Compare Poisson and binomial samples with the limit law and each other.
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// KS distance to the limit law for a list of intensities.
    Table {
        #[command(flatten)]
        spec: SpecArgs,
        /// Comma-separated, nondecreasing.
        #[arg(long)]
        n_list: String,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Process::Poisson)]
        process: Process,
    },
    /// Check the pruned kernel against brute force and segment samples
    /// against their exact law.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        segment_n: usize,
        #[arg(long, default_value_t = 2000)]
        segment_reps: usize,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Radial exponent of radial-power (also of a radial-power sector base).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Boundary atom P(‖ξ‖ = 1) of radial-power.
    #[arg(long)]
    pub atom: Option<f64>,
    /// Base family of a sector.
    #[arg(long, value_enum)]
    pub base: Option<FamilyName>,
    /// Comma-separated unit vector.
    #[arg(long)]
    pub cap_center: Option<String>,
    #[arg(long)]
    pub cap_angle: Option<f64>,
    /// Segment directions, e.g. "1,0;0,1".
    #[arg(long)]
    pub dirs: Option<String>,
    /// Comma-separated segment probabilities.
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long, value_enum)]
    pub density: Option<DensityKind>,
    /// Cosine terms "k,amplitude,phase;...".
    #[arg(long)]
    pub density_params: Option<String>,
    /// Spec as inline JSON or a path to a JSON file.
    #[arg(long, conflicts_with_all = ["family", "d", "alpha", "atom", "base", "cap_center", "cap_angle", "dirs", "density", "density_params"])]
    pub spec_json: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Poisson mean, or the point count of the binomial process.
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Process::Poisson)]
    pub process: Process,
    /// Exponent of the scaling n^(2/γ); taken from the limit law when unset.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    Continuous,
    Segments,
    Zeta,
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    /// Evaluate this law instead of the one of --family.
    #[arg(long, value_enum)]
    pub law: Option<LawKind>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub sigma0: Option<f64>,
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| config_err(format!("{what}: cannot parse {s:?} as a number")))
        })
        .collect()
}

fn parse_rows(text: &str, what: &str) -> Result<Vec<Vec<f64>>, CliError> {
    text.split(';').map(|row| parse_list(row, what)).collect()
}

impl SpecArgs {
    fn has_family(&self) -> bool {
        self.family.is_some() || self.spec_json.is_some()
    }

    pub fn to_json(&self) -> Result<SpecJson, CliError> {
        if let Some(arg) = &self.spec_json {
            let mut json = SpecJson::from_arg(arg)?;
            if let Some(p) = &self.probs {
                json.probs = Some(parse_list(p, "--probs")?);
            }
            return Ok(json);
        }
        let family = self.family.ok_or_else(|| config_err("--family or --spec-json is required"))?;
        let mut json = SpecJson::empty(family);
        json.d = self.d;
        match family {
            FamilyName::UniformBall | FamilyName::Sphere => {}
            FamilyName::RadialPower => {
                json.alpha = self.alpha;
                json.atom = self.atom;
            }
            FamilyName::Sector => {
                let base_family = self.base.unwrap_or(FamilyName::UniformBall);
                if base_family == FamilyName::Sector {
                    return Err(config_err("a sector base cannot be a sector"));
                }
                let mut base = SpecJson::empty(base_family);
                base.d = self.d;
                base.alpha = self.alpha;
                base.atom = self.atom;
                json.base = Some(Box::new(base));
                json.cap_center = self.cap_center.as_deref().map(|c| parse_list(c, "--cap-center")).transpose()?;
                json.cap_angle = self.cap_angle;
            }
            FamilyName::Segments => {
                json.directions = self.dirs.as_deref().map(|d| parse_rows(d, "--dirs")).transpose()?;
                json.probs = self.probs.as_deref().map(|p| parse_list(p, "--probs")).transpose()?;
            }
            FamilyName::Circle => {
                let kind = self.density.unwrap_or(if self.density_params.is_some() {
                    DensityKind::CosineMix
                } else {
                    DensityKind::Uniform
                });
                let params = match &self.density_params {
                    None => Vec::new(),
                    Some(text) => parse_rows(text, "--density-params")?
                        .into_iter()
                        .map(|row| {
                            <[f64; 3]>::try_from(row)
                                .map_err(|_| config_err("--density-params rows need exactly three numbers"))
                        })
                        .collect::<Result<_, _>>()?,
                };
                json.density = Some(DensityJson { kind, params });
            }
        }
        Ok(json)
    }

    /// The validated spec together with its fully resolved JSON form.
    pub fn resolve(&self) -> Result<(DistributionSpec, SpecJson), CliError> {
        let spec = self.to_json()?.build()?;
        let resolved = SpecJson::from_spec(&spec);
        Ok((spec, resolved))
    }
}

fn required_law(spec: &DistributionSpec) -> Result<LimitLaw, CliError> {
    law_for(spec)?.ok_or_else(|| config_err("no limit law is known for this distribution"))
}

fn is_uniform_disk(spec: &DistributionSpec) -> bool {
    matches!(spec.family(), Family::UniformBall { d: 2 })
}

pub enum Outcome {
    Success,
    OracleFailed,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let threads = cli.threads;
    let mut outcome = Outcome::Success;
    let report = match cli.command {
        Command::Simulate { spec, run } => simulate(&spec, &run, threads)?,
        Command::Limit {
            spec,
            law,
            t_min,
            t_max,
            t_steps,
        } => limit(&spec, &law, TGrid { t_min, t_max, t_steps })?,
        Command::Compare { spec, n, reps, seed } => {
            let (spec, resolved) = spec.resolve()?;
            let law = required_law(&spec)?;
            let result = depoissonisation_compare(&spec, n, &law, reps, seed, threads)?;
            let mut config = RunConfig::new("compare");
            config.spec = Some(resolved);
            config.law = Some(LawJson::from(&law));
            config.n = Some(n as f64);
            config.replications = Some(reps);
            config.seed = Some(seed);
            config.gamma = Some(law.gamma());
            Report {
                config,
                body: Body::Compare { result },
            }
        }
        Command::Table {
            spec,
            n_list,
            reps,
            seed,
            process,
        } => {
            let (spec, resolved) = spec.resolve()?;
            let law = required_law(&spec)?;
            let n_list = parse_list(&n_list, "--n-list")?;
            let base = ExperimentConfig {
                spec,
                n: n_list.first().copied().unwrap_or(1.0),
                process,
                replications: reps,
                seed,
                gamma: law.gamma(),
            };
            let rows = convergence_table(&base, &n_list, &law, threads)?;
            let mut config = RunConfig::new("table");
            config.spec = Some(resolved);
            config.law = Some(LawJson::from(&law));
            config.process = Some(process);
            config.n_list = Some(n_list);
            config.replications = Some(reps);
            config.seed = Some(seed);
            config.gamma = Some(law.gamma());
            Report {
                config,
                body: Body::Table { rows },
            }
        }
        Command::Oracle {
            cases,
            seed,
            segment_n,
            segment_reps,
        } => {
            if cases == 0 || segment_n < 2 || segment_reps == 0 {
                return Err(config_err("oracle needs --cases ≥ 1, --segment-n ≥ 2 and --segment-reps ≥ 1"));
            }
            let kernel = kernel_oracle(cases, seed, threads)?;
            let segment = segment_oracle(segment_n, segment_reps, seed, threads)?;
            let passed = kernel.ok() && segment.ok();
            if !passed {
                outcome = Outcome::OracleFailed;
            }
            let mut config = RunConfig::new("oracle");
            config.cases = Some(cases);
            config.seed = Some(seed);
            Report {
                config,
                body: Body::Oracle(OracleSummary { kernel, segment, passed }),
            }
        }
    };
    emit(&report, cli.format, cli.output.as_ref())?;
    Ok(outcome)
}

fn simulate(spec: &SpecArgs, run: &RunArgs, threads: Option<usize>) -> Result<Report, CliError> {
    let (spec, resolved) = spec.resolve()?;
    let law = law_for(&spec)?;
    let gamma = run
        .gamma
        .or_else(|| law.as_ref().map(LimitLaw::gamma))
        .ok_or_else(|| config_err("no limit law is known for this distribution; pass --gamma"))?;
    let experiment = ExperimentConfig {
        spec,
        n: run.n,
        process: run.process,
        replications: run.reps,
        seed: run.seed,
        gamma,
    };
    let replications = run_replications(&experiment, threads)?;
    let ecdf = ecdf_of(&replications)?;
    let summary = SimulateSummary {
        ks_distance: law.as_ref().map(|law| ks_distance(&ecdf, law)),
        usable: ecdf.len() - ecdf.degenerate(),
        degenerate: ecdf.degenerate(),
        mean_scaled_deficit: ecdf.mean(),
    };
    let mut config = RunConfig::new("simulate");
    config.spec = Some(resolved);
    config.law = law.as_ref().map(LawJson::from);
    config.process = Some(run.process);
    config.n = Some(run.n);
    config.replications = Some(run.reps);
    config.seed = Some(run.seed);
    config.gamma = Some(gamma);
    Ok(Report {
        config,
        body: Body::Simulate { replications, summary },
    })
}

fn limit(spec: &SpecArgs, law_args: &LawArgs, grid: TGrid) -> Result<Report, CliError> {
    if !(grid.t_min >= 0.0) || !(grid.t_max >= grid.t_min) || !grid.t_max.is_finite() || grid.t_steps == 0 {
        return Err(config_err("need 0 ≤ --t-min ≤ --t-max and --t-steps ≥ 1"));
    }
    let mut config = RunConfig::new("limit");
    let (law, envelope) = match law_args.law {
        Some(kind) => {
            let law = match kind {
                LawKind::Continuous => LimitLaw::continuous(
                    law_args.gamma.ok_or_else(|| config_err("--law continuous requires --gamma"))?,
                    law_args.sigma0.ok_or_else(|| config_err("--law continuous requires --sigma0"))?,
                )?,
                LawKind::Segments => LimitLaw::segments(parse_list(
                    spec.probs.as_deref().ok_or_else(|| config_err("--law segments requires --probs"))?,
                    "--probs",
                )?)?,
                LawKind::Zeta => LimitLaw::SegmentsZeta,
            };
            if spec.has_family() {
                return Err(config_err("--law cannot be combined with --family or --spec-json"));
            }
            (law, false)
        }
        None => {
            let (spec, resolved) = spec.resolve()?;
            let law = required_law(&spec)?;
            config.spec = Some(resolved);
            (law, is_uniform_disk(&spec))
        }
    };
    let rows = (0..grid.t_steps)
        .map(|k| {
            let t = if grid.t_steps == 1 {
                grid.t_min
            } else if k + 1 == grid.t_steps {
                grid.t_max
            } else {
                grid.t_min + (grid.t_max - grid.t_min) * k as f64 / (grid.t_steps - 1) as f64
            };
            let cdf = limit_cdf(&law, t)?;
            let (lower, upper) = aprs_envelope(t);
            Ok(LimitRow {
                t,
                cdf,
                envelope_lower: envelope.then_some(lower),
                envelope_upper: envelope.then_some(upper),
            })
        })
        .collect::<Result<Vec<_>, LimitError>>()?;
    config.law = Some(LawJson::from(&law));
    config.gamma = Some(law.gamma());
    config.t_grid = Some(grid);
    Ok(Report {
        config,
        body: Body::Limit { rows },
    })
}

fn emit(report: &Report, format: Format, output: Option<&PathBuf>) -> Result<(), CliError> {
    let out: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            config_err(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => report.write_csv(out)?,
        Format::Json => report.write_json(out)?,
    }
    Ok(())
}
