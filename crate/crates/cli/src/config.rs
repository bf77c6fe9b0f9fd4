//! Command-line parsing, config-file layering, and parameter validation.
//!
//! Precedence per parameter: CLI flag, then config-file entry, then the
//! built-in default. Config files are flat `key = value` text, one entry per
//! line, `#` starting a comment line; keys are the long option names of the
//! invoked subcommand and unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use zenosim_core::fock::FockCutoff;
use zenosim_core::mcwf::McwfSpec;
use zenosim_core::thermal::ThermalArraySpec;
use zenosim_core::Error as CoreError;

/// Fixed default seed so out-of-the-box runs are reproducible; pass
/// `--seed random` to opt into entropy.
pub const DEFAULT_SEED: u64 = 0x5EED_BA5E;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parameter `{key}`: {message}")]
    InvalidParameter { key: &'static str, message: String },

    #[error("config file `{path}`: {message}")]
    ConfigFile { path: String, message: String },

    #[error("config file `{path}`: unknown key `{key}`")]
    UnknownKey { path: String, key: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "zenosim",
    version,
    about = "Single-photon transmission through beam-splitter arrays",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Ideal-array transmission cos^(2N)(pi/2N) for N = 1..=n-max
    Ideal(IdealArgs),
    /// Ensemble transmission with normally dispersed splitting angles
    Dispersion(DispersionArgs),
    /// Exact truncated propagation with thermal inputs at the side ports
    Thermal(ThermalArgs),
    /// Quantum-jump trajectory ensemble with absorption and reflection loss
    Mcwf(McwfArgs),
    /// One quantum-jump trajectory
    Trajectory(TrajectoryArgs),
    /// Critical splitter count maximizing transmission under absorption
    Critical(CriticalArgs),
}

/// Options shared by every subcommand.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Flat `key = value` file supplying defaults for this command
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Master seed: an unsigned integer, or `random` for entropy
    /// [default: 1592638046 = 0x5EED_BA5E]
    #[arg(long, value_name = "SEED", verbatim_doc_comment)]
    pub seed: Option<String>,

    /// Worker-thread hint for ensemble commands; 0 means automatic
    #[arg(long, value_name = "K")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IdealArgs {
    /// Largest array size to tabulate
    #[arg(long = "n-max", value_name = "N")]
    pub n_max: Option<usize>,

    /// Fixed splitting angle in radians; default is pi/2N per row
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub theta: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Largest array size to tabulate
    #[arg(long = "n-max", value_name = "N")]
    pub n_max: Option<usize>,

    /// Row spacing in N
    #[arg(long = "n-step", value_name = "STEP")]
    pub n_step: Option<usize>,

    /// Standard deviation of the angle distribution, radians
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub sigma: Option<f64>,

    /// Angle vectors per ensemble
    #[arg(long, value_name = "M")]
    pub samples: Option<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ThermalArgs {
    /// Number of beam splitters
    #[arg(long, value_name = "N")]
    pub beamsplitters: Option<usize>,

    /// Mean photon number of the thermal inputs
    #[arg(long, value_name = "NBAR", allow_hyphen_values = true)]
    pub nbar: Option<f64>,

    /// Uniform splitting angle in radians; default pi/2N
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Total-photon-number cutoff carried through the array
    #[arg(long, value_name = "NMAX")]
    pub cutoff: Option<usize>,

    /// Photon cutoff of each fresh thermal ancilla
    #[arg(long = "ancilla-cutoff", value_name = "NMAX")]
    pub ancilla_cutoff: Option<usize>,

    /// Renormalize the truncated ancilla instead of tracking leaked mass
    #[arg(long = "renormalize-ancilla", value_name = "BOOL")]
    pub renormalize_ancilla: Option<bool>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct McwfArgs {
    /// Number of beam splitters
    #[arg(long, value_name = "N")]
    pub beamsplitters: Option<usize>,

    /// Absorption probability per splitter
    #[arg(long, value_name = "G", allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Splitting angle in radians; default pi/2N
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Trajectories in the ensemble
    #[arg(long, value_name = "M")]
    pub trajectories: Option<usize>,

    /// Experimental per-splitter angle spread
    #[arg(
        long = "theta-sigma",
        value_name = "RAD",
        hide = true,
        allow_hyphen_values = true
    )]
    pub theta_sigma: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Number of beam splitters
    #[arg(long, value_name = "N")]
    pub beamsplitters: Option<usize>,

    /// Absorption probability per splitter
    #[arg(long, value_name = "G", allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Splitting angle in radians; default pi/2N
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub theta: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    /// Absorption coefficient; repeat the flag for several rows
    #[arg(long = "gamma", value_name = "G", allow_hyphen_values = true)]
    pub gamma: Vec<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Fully resolved options shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonConfig {
    pub seed: u64,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

/// A validated experiment, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub common: CommonConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    Ideal {
        n_max: usize,
        theta: Option<f64>,
    },
    Dispersion {
        n_max: usize,
        n_step: usize,
        sigma: f64,
        samples: usize,
    },
    Thermal(ThermalArraySpec),
    Mcwf(McwfSpec),
    Trajectory(McwfSpec),
    Critical {
        gammas: Vec<f64>,
    },
}

/// Config-file contents; consumed key by key so leftovers can be rejected.
#[derive(Debug, Default)]
struct FileValues {
    path: String,
    map: BTreeMap<String, String>,
}

impl FileValues {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: display.clone(),
            source,
        })?;
        let mut map = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::ConfigFile {
                    path: display,
                    message: format!("line {}: expected `key = value`, got `{line}`", number + 1),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                return Err(CliError::ConfigFile {
                    path: display,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { path: display, map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    /// Rejects any key the command did not consume.
    fn finish(self) -> Result<(), CliError> {
        match self.map.into_keys().next() {
            Some(key) => Err(CliError::UnknownKey {
                path: self.path,
                key,
            }),
            None => Ok(()),
        }
    }
}

/// One parameter: CLI flag over config entry over default.
fn resolve<T>(
    cli: Option<T>,
    file: &mut FileValues,
    key: &'static str,
    default: T,
) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    resolve_opt(cli, file, key)?.map_or(Ok(default), Ok)
}

/// Like [`resolve`] but without a default.
fn resolve_opt<T>(
    cli: Option<T>,
    file: &mut FileValues,
    key: &'static str,
) -> Result<Option<T>, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    if cli.is_some() {
        // still consume the file entry so it does not count as unknown
        file.take(key);
        return Ok(cli);
    }
    match file.take(key) {
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| CliError::InvalidParameter {
                key,
                message: format!("cannot parse `{raw}`: {e}"),
            }),
        None => Ok(None),
    }
}

fn resolve_seed(cli: Option<String>, file: &mut FileValues) -> Result<u64, CliError> {
    let raw = resolve_opt(cli, file, "seed")?;
    match raw.as_deref() {
        None => Ok(DEFAULT_SEED),
        Some("random") => Ok(rand::random()),
        Some(text) => text.parse().map_err(|e| CliError::InvalidParameter {
            key: "seed",
            message: format!("expected an unsigned integer or `random`, got `{text}`: {e}"),
        }),
    }
}

fn resolve_common(args: CommonArgs, file: &mut FileValues) -> Result<CommonConfig, CliError> {
    let seed = resolve_seed(args.seed, file)?;
    let workers = resolve_opt(args.workers, file, "workers")?;
    let output = resolve_opt(args.output, file, "output")?;
    Ok(CommonConfig {
        seed,
        workers,
        output,
    })
}

fn require_positive(key: &'static str, value: usize) -> Result<usize, CliError> {
    if value == 0 {
        return Err(CliError::InvalidParameter {
            key,
            message: "must be at least 1".into(),
        });
    }
    Ok(value)
}

fn require_finite(key: &'static str, value: f64) -> Result<f64, CliError> {
    if !value.is_finite() {
        return Err(CliError::InvalidParameter {
            key,
            message: format!("must be finite, got {value}"),
        });
    }
    Ok(value)
}

fn require_non_negative(key: &'static str, value: f64) -> Result<f64, CliError> {
    require_finite(key, value)?;
    if value < 0.0 {
        return Err(CliError::InvalidParameter {
            key,
            message: format!("must be non-negative, got {value}"),
        });
    }
    Ok(value)
}

/// Maps a core-domain failure to the CLI parameter that caused it.
fn core_error(key: &'static str, error: CoreError) -> CliError {
    CliError::InvalidParameter {
        key,
        message: error.to_string(),
    }
}

/// Resolves an invoked subcommand into a validated experiment.
pub fn resolve_experiment(command: CliCommand) -> Result<Experiment, CliError> {
    match command {
        CliCommand::Ideal(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let n_max = require_positive("n-max", resolve(args.n_max, &mut file, "n-max", 100)?)?;
            let theta = resolve_opt(args.theta, &mut file, "theta")?
                .map(|t| require_finite("theta", t))
                .transpose()?;
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;
            Ok(Experiment {
                config: ExperimentConfig::Ideal { n_max, theta },
                common,
            })
        }
        CliCommand::Dispersion(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let n_max = require_positive("n-max", resolve(args.n_max, &mut file, "n-max", 200)?)?;
            let n_step = require_positive("n-step", resolve(args.n_step, &mut file, "n-step", 1)?)?;
            let sigma =
                require_non_negative("sigma", resolve(args.sigma, &mut file, "sigma", 0.01)?)?;
            let samples = require_positive(
                "samples",
                resolve(args.samples, &mut file, "samples", 5000)?,
            )?;
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;
            Ok(Experiment {
                config: ExperimentConfig::Dispersion {
                    n_max,
                    n_step,
                    sigma,
                    samples,
                },
                common,
            })
        }
        CliCommand::Thermal(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let n = require_positive(
                "beamsplitters",
                resolve(args.beamsplitters, &mut file, "beamsplitters", 50)?,
            )?;
            let nbar = require_non_negative("nbar", resolve(args.nbar, &mut file, "nbar", 0.01)?)?;
            let theta = resolve_opt(args.theta, &mut file, "theta")?
                .map(|t| require_finite("theta", t))
                .transpose()?;
            let cutoff = resolve(args.cutoff, &mut file, "cutoff", 2)?;
            let ancilla_cutoff = resolve(args.ancilla_cutoff, &mut file, "ancilla-cutoff", 1)?;
            let renormalize = resolve(
                args.renormalize_ancilla,
                &mut file,
                "renormalize-ancilla",
                false,
            )?;
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;

            let mut spec = ThermalArraySpec::new(n, nbar)
                .map_err(|e| core_error("nbar", e))?
                .with_cutoff(FockCutoff::new(cutoff).map_err(|e| core_error("cutoff", e))?)
                .with_ancilla_cutoff(
                    FockCutoff::new(ancilla_cutoff).map_err(|e| core_error("ancilla-cutoff", e))?,
                )
                .with_renormalized_ancilla(renormalize);
            if let Some(theta) = theta {
                spec = spec.with_theta(theta).map_err(|e| core_error("theta", e))?;
            }
            Ok(Experiment {
                config: ExperimentConfig::Thermal(spec),
                common,
            })
        }
        CliCommand::Mcwf(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let spec = resolve_trajectory_spec(
                args.beamsplitters,
                args.gamma,
                args.theta,
                Some((args.trajectories, 5000)),
                args.theta_sigma,
                &mut file,
            )?;
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;
            Ok(Experiment {
                config: ExperimentConfig::Mcwf(spec),
                common,
            })
        }
        CliCommand::Trajectory(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let spec = resolve_trajectory_spec(
                args.beamsplitters,
                args.gamma,
                args.theta,
                None,
                None,
                &mut file,
            )?;
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;
            Ok(Experiment {
                config: ExperimentConfig::Trajectory(spec),
                common,
            })
        }
        CliCommand::Critical(args) => {
            let mut file = FileValues::load(args.common.config.as_deref())?;
            let gammas = if args.gamma.is_empty() {
                match file.take("gamma") {
                    Some(raw) => raw
                        .split(',')
                        .map(|piece| {
                            piece
                                .trim()
                                .parse()
                                .map_err(|e| CliError::InvalidParameter {
                                    key: "gamma",
                                    message: format!("cannot parse `{piece}`: {e}"),
                                })
                        })
                        .collect::<Result<Vec<f64>, _>>()?,
                    None => vec![0.0001, 0.0005, 0.001],
                }
            } else {
                file.take("gamma");
                args.gamma
            };
            for &gamma in &gammas {
                require_finite("gamma", gamma)?;
                if gamma <= 0.0 {
                    return Err(CliError::InvalidParameter {
                        key: "gamma",
                        message: format!("must be positive, got {gamma}"),
                    });
                }
            }
            let common = resolve_common(args.common, &mut file)?;
            file.finish()?;
            Ok(Experiment {
                config: ExperimentConfig::Critical { gammas },
                common,
            })
        }
    }
}

fn resolve_trajectory_spec(
    beamsplitters: Option<usize>,
    gamma: Option<f64>,
    theta: Option<f64>,
    trajectories: Option<(Option<usize>, usize)>,
    theta_sigma: Option<f64>,
    file: &mut FileValues,
) -> Result<McwfSpec, CliError> {
    let n = require_positive(
        "beamsplitters",
        resolve(beamsplitters, file, "beamsplitters", 50)?,
    )?;
    let gamma = require_non_negative("gamma", resolve(gamma, file, "gamma", 0.001)?)?;
    let theta = resolve_opt(theta, file, "theta")?
        .map(|t| require_finite("theta", t))
        .transpose()?;
    let m = match trajectories {
        Some((cli, default)) => {
            require_positive("trajectories", resolve(cli, file, "trajectories", default)?)?
        }
        None => 1,
    };
    let sigma = match trajectories {
        Some(_) => require_non_negative(
            "theta-sigma",
            resolve(theta_sigma, file, "theta-sigma", 0.0)?,
        )?,
        None => 0.0,
    };

    // seed is attached later by resolve_common; the spec carries a placeholder
    let mut spec = McwfSpec::new(n, gamma, m, 0).map_err(|e| core_error("gamma", e))?;
    if let Some(theta) = theta {
        spec = spec.with_theta(theta).map_err(|e| core_error("theta", e))?;
    }
    if sigma > 0.0 {
        spec = spec
            .with_theta_sigma(sigma)
            .map_err(|e| core_error("theta-sigma", e))?;
    }
    Ok(spec)
}
