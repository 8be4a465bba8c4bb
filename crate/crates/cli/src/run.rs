//! A single scenario run and the artifacts it writes.

use std::fs;

use clap::ValueEnum;
use coherent_ladder::observables::{summarize, ObservableSeries};
use coherent_ladder::trajectory::uniform_grid;
use coherent_ladder::{closed_form, oracle, spectral, AmplitudeTrajectory, PopulationDistribution};

use crate::config::{Method, ScenarioConfig};
use crate::output::{plot_script, write_file, Cell, Csv};
use crate::CliError;

pub const POPULATIONS: &str = "populations.csv";
pub const OBSERVABLES: &str = "observables.csv";
pub const COMPARISON: &str = "comparison.csv";
pub const COMPARISON_SPECTRAL: &str = "comparison_spectral.csv";
pub const PLOT_SCRIPT: &str = "plot_populations.py";

/// What a run computed, for sweeps and callers.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub populations: PopulationDistribution,
    pub observables: ObservableSeries,
    /// Refined peak of `<n>(t)`.
    pub max_mean_quanta: f64,
    pub period: Option<f64>,
    /// `None` unless the oracle was run.
    pub max_pop_err_vs_oracle: Option<f64>,
    pub max_amp_err_vs_oracle: Option<f64>,
}

fn comparison_csv(method: &AmplitudeTrajectory, reference: &AmplitudeTrajectory) -> Csv {
    let mut csv = Csv::new(&["t", "max_amp_abs_err", "max_pop_abs_err", "norm_drift"]);
    for (k, &t) in reference.times.iter().enumerate() {
        let (a, b) = (&method.amps[k], &reference.amps[k]);
        let len = a.len().max(b.len());
        let zero = Default::default();
        let (mut amp, mut pop) = (0f64, 0f64);
        for n in 0..len {
            let x = a.get(n).unwrap_or(&zero);
            let y = b.get(n).unwrap_or(&zero);
            amp = amp.max((x - y).norm());
            pop = pop.max((x.norm_sqr() - y.norm_sqr()).abs());
        }
        let drift = (b.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs();
        csv.row([Cell::Real(t), amp.into(), pop.into(), drift.into()]);
    }
    csv
}

/// Run one scenario; `oracle_check` forces an oracle integration for the error column.
pub fn run_with(config: &ScenarioConfig, oracle_check: bool) -> Result<RunReport, CliError> {
    let system = config.system()?;
    let grid = uniform_grid(config.t_max, config.t_steps);
    let needs_oracle = oracle_check || matches!(config.method, Method::Oracle | Method::CompareAll);
    let reference = if needs_oracle {
        Some(oracle::integrate(&system, &grid, &config.settings())?)
    } else {
        None
    };
    // analytic methods share the oracle's level count so rows line up
    let levels = config.levels.or(reference.as_ref().map(|r| r.levels()));
    let primary = match config.method {
        Method::ClosedForm | Method::CompareAll => closed_form::solve(&system, &grid, levels)?,
        Method::Spectral => spectral::solve(&system, &grid, levels)?,
        Method::Oracle => reference.clone().expect("oracle ran"),
    };

    fs::create_dir_all(&config.output_dir)
        .map_err(|source| CliError::Io { path: config.output_dir.clone(), source })?;
    let populations = primary.populations();
    let observables = summarize(&populations);

    let mut csv = Csv::new(&["t", "n", "rho"]);
    for (&t, row) in populations.times.iter().zip(&populations.pops) {
        for (n, &rho) in row.iter().enumerate() {
            csv.row([Cell::Real(t), n.into(), rho.into()]);
        }
    }
    csv.write(&config.output_dir.join(POPULATIONS))?;

    let mut csv = Csv::new(&["t", "norm", "mean_quanta"]);
    for k in 0..observables.times.len() {
        csv.row([observables.times[k], observables.norm[k], observables.mean_quanta[k]].map(Cell::Real));
    }
    csv.write(&config.output_dir.join(OBSERVABLES))?;

    if config.method == Method::CompareAll {
        let reference = reference.as_ref().expect("oracle ran");
        comparison_csv(&primary, reference).write(&config.output_dir.join(COMPARISON))?;
        let spec = spectral::solve(&system, &grid, levels)?;
        comparison_csv(&spec, reference).write(&config.output_dir.join(COMPARISON_SPECTRAL))?;
    }

    let name = config.scenario.to_possible_value().expect("named scenario");
    let title = format!("{} ({})", name.get_name(), primary.provenance);
    write_file(&config.output_dir.join(PLOT_SCRIPT), &plot_script(&title))?;

    let (pop_err, amp_err) = match &reference {
        Some(r) => (
            Some(populations.max_abs_diff(&r.populations())),
            Some(primary.max_abs_diff(r)),
        ),
        None => (None, None),
    };
    Ok(RunReport {
        max_mean_quanta: observables.peak_mean_quanta(),
        period: observables.period_estimate,
        populations,
        observables,
        max_pop_err_vs_oracle: pop_err,
        max_amp_err_vs_oracle: amp_err,
    })
}

pub fn run(config: &ScenarioConfig) -> Result<RunReport, CliError> {
    run_with(config, false)
}
