//! Executes a resolved experiment into its CSV table.

use zenosim_core::array::{
    default_theta, dispersion_ensemble, dispersion_expectation, ideal_p1, DispersionSpec,
};
use zenosim_core::fock::thermal_mixture;
use zenosim_core::mcwf::{bernoulli_p1, run_ensemble, run_trajectory, McwfSpec};
use zenosim_core::optimize::{asymptotic_critical_n_alt, solve_critical_n};
use zenosim_core::rng::stream_rng;
use zenosim_core::thermal::{propagate_thermal_array, thermal_p1_approx};
use zenosim_core::Parallelism;

use crate::config::{CliError, CommonConfig, Experiment, ExperimentConfig};
use crate::table::{Cell, CsvTable};

pub const IDEAL_HEADER: &[&str] = &["N", "p1"];
pub const DISPERSION_HEADER: &[&str] = &["N", "p1_mean", "stderr", "p1_ideal", "p1_expected"];
pub const THERMAL_HEADER: &[&str] = &["n", "p1_exact", "p1_approx", "leaked"];
pub const MCWF_HEADER: &[&str] = &["n", "p1_mcwf", "stderr", "p1_bernoulli", "p1_eq11"];
pub const TRAJECTORY_HEADER: &[&str] = &["n", "p1"];
pub const CRITICAL_HEADER: &[&str] = &[
    "gamma",
    "n_real",
    "n_int",
    "p1_at_max",
    "asymptotic_eq12",
    "asymptotic_paper",
];

/// Runs the experiment; every failure mode here is a parameter-domain error.
pub fn execute(experiment: &Experiment) -> Result<CsvTable, CliError> {
    let common = &experiment.common;
    match &experiment.config {
        ExperimentConfig::Ideal { n_max, theta } => run_ideal(*n_max, *theta),
        ExperimentConfig::Dispersion {
            n_max,
            n_step,
            sigma,
            samples,
        } => run_dispersion(*n_max, *n_step, *sigma, *samples, common),
        ExperimentConfig::Thermal(spec) => run_thermal(spec),
        ExperimentConfig::Mcwf(spec) => run_mcwf(spec, common),
        ExperimentConfig::Trajectory(spec) => run_trajectory_csv(spec, common),
        ExperimentConfig::Critical { gammas } => run_critical(gammas),
    }
}

fn parallelism(common: &CommonConfig) -> Parallelism {
    Parallelism::from_worker_hint(common.workers)
}

fn invalid(key: &'static str, error: zenosim_core::Error) -> CliError {
    CliError::InvalidParameter {
        key,
        message: error.to_string(),
    }
}

fn run_ideal(n_max: usize, theta: Option<f64>) -> Result<CsvTable, CliError> {
    let mut table = CsvTable::new(IDEAL_HEADER);
    for n in 1..=n_max {
        let p1 = ideal_p1(n, theta).map_err(|e| invalid("n-max", e))?;
        table.push_row(vec![Cell::Int(n as u64), Cell::Float(p1)]);
    }
    Ok(table)
}

fn run_dispersion(
    n_max: usize,
    n_step: usize,
    sigma: f64,
    samples: usize,
    common: &CommonConfig,
) -> Result<CsvTable, CliError> {
    let mut table = CsvTable::new(DISPERSION_HEADER);
    for n in (1..=n_max).step_by(n_step) {
        // disjoint stream blocks per row keep every ensemble independent
        let spec = DispersionSpec::new(n, sigma, samples, common.seed)
            .map_err(|e| invalid("sigma", e))?
            .with_stream_base((n as u64) << 32);
        let stats =
            dispersion_ensemble(&spec, parallelism(common)).map_err(|e| invalid("samples", e))?;
        table.push_row(vec![
            Cell::Int(n as u64),
            Cell::Float(stats.mean(0)),
            Cell::Float(stats.stderr(0)),
            Cell::Float(ideal_p1(n, None).map_err(|e| invalid("n-max", e))?),
            Cell::Float(dispersion_expectation(n, sigma).map_err(|e| invalid("sigma", e))?),
        ]);
    }
    Ok(table)
}

fn run_thermal(spec: &zenosim_core::thermal::ThermalArraySpec) -> Result<CsvTable, CliError> {
    let ports = propagate_thermal_array(spec).map_err(|e| invalid("nbar", e))?;
    // the approximation decays with the same vacuum weight the exact run used
    let alpha = thermal_mixture(spec.nbar, spec.ancilla_cutoff, spec.renormalize_ancilla)
        .map_err(|e| invalid("nbar", e))?
        .prob(0);
    let mut table = CsvTable::new(THERMAL_HEADER);
    for (index, port) in ports.iter().enumerate() {
        let n = index + 1;
        table.push_row(vec![
            Cell::Int(n as u64),
            Cell::Float(port.prob(1)),
            Cell::Float(thermal_p1_approx(n, spec.theta, alpha)),
            Cell::Float(port.leaked()),
        ]);
    }
    Ok(table)
}

fn run_mcwf(spec: &McwfSpec, common: &CommonConfig) -> Result<CsvTable, CliError> {
    let spec = McwfSpec {
        seed: common.seed,
        ..spec.clone()
    };
    let stats = run_ensemble(&spec, parallelism(common)).map_err(|e| invalid("gamma", e))?;
    let delta_p = spec.jump_probability();
    let mut table = CsvTable::new(MCWF_HEADER);
    for n in 1..=spec.n_splitters {
        table.push_row(vec![
            Cell::Int(n as u64),
            Cell::Float(stats.mean(n - 1)),
            Cell::Float(stats.stderr(n - 1)),
            Cell::Float(bernoulli_p1(n, spec.gamma, spec.theta).map_err(|e| invalid("gamma", e))?),
            Cell::Float((-delta_p * n as f64).exp()),
        ]);
    }
    Ok(table)
}

fn run_trajectory_csv(spec: &McwfSpec, common: &CommonConfig) -> Result<CsvTable, CliError> {
    let spec = McwfSpec {
        seed: common.seed,
        ..spec.clone()
    };
    spec.validate().map_err(|e| invalid("gamma", e))?;
    let record = run_trajectory(&spec, &mut stream_rng(spec.seed, 0));
    let mut table = CsvTable::new(TRAJECTORY_HEADER);
    for (index, &alive) in record.survival().iter().enumerate() {
        table.push_row(vec![
            Cell::Int(index as u64 + 1),
            Cell::Int(u64::from(alive)),
        ]);
    }
    Ok(table)
}

fn run_critical(gammas: &[f64]) -> Result<CsvTable, CliError> {
    let mut sorted = gammas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite gammas"));
    sorted.dedup();
    let mut table = CsvTable::new(CRITICAL_HEADER);
    for gamma in sorted {
        let result = solve_critical_n(gamma).map_err(|e| invalid("gamma", e))?;
        table.push_row(vec![
            Cell::Float(result.gamma),
            Cell::Float(result.n_real),
            Cell::Int(result.n_int as u64),
            Cell::Float(result.p1_at_max),
            Cell::Float(result.asymptotic_estimate),
            Cell::Float(asymptotic_critical_n_alt(gamma)),
        ]);
    }
    Ok(table)
}

