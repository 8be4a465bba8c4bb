//! Parameter sweeps: one run per value, each in its own subdirectory.

use std::thread;

use clap::ValueEnum;

use crate::config::{ConfigError, ScenarioConfig};
use crate::output::{Cell, Csv};
use crate::run::{run_with, RunReport};
use crate::CliError;

pub const SUMMARY: &str = "summary.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParameter {
    #[value(name = "N")]
    N,
    #[value(name = "epsilon")]
    Epsilon,
}

impl SweepParameter {
    fn name(self) -> &'static str {
        match self {
            SweepParameter::N => "N",
            SweepParameter::Epsilon => "epsilon",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub period: Option<f64>,
    pub max_mean_quanta: f64,
    pub max_pop_err_vs_oracle: f64,
}

fn entry_config(base: &ScenarioConfig, vary: SweepParameter, raw: &str) -> Result<(f64, ScenarioConfig), ConfigError> {
    let mut cfg = base.with_output_dir(&base.output_dir.join(format!("{}_{raw}", vary.name())));
    let value = match vary {
        SweepParameter::N => {
            let n: usize = raw
                .parse()
                .map_err(|_| ConfigError::new("values", format!("`{raw}` is not a level count")))?;
            if n == 0 {
                return Err(ConfigError::new("values", "N must be at least 1"));
            }
            if cfg.n.is_none() {
                return Err(ConfigError::new("vary", "scenario has no N to vary"));
            }
            cfg.n = Some(n);
            n as f64
        }
        SweepParameter::Epsilon => {
            let eps: f64 = raw
                .parse()
                .map_err(|_| ConfigError::new("values", format!("`{raw}` is not a number")))?;
            if !eps.is_finite() {
                return Err(ConfigError::new("values", "epsilon must be finite"));
            }
            if cfg.family.is_some() {
                return Err(ConfigError::new("vary", "custom families fix their own detuning"));
            }
            cfg.epsilon = eps;
            eps
        }
    };
    // re-check the scenario-specific rules for the new value
    cfg.system()?;
    Ok((value, cfg))
}

/// Runs every entry concurrently, then writes `summary.csv` in the base output directory.
pub fn sweep(base: &ScenarioConfig, vary: SweepParameter, values: &[String]) -> Result<Vec<SweepRow>, CliError> {
    if values.is_empty() {
        return Err(ConfigError::new("values", "empty list").into());
    }
    let entries = values
        .iter()
        .map(|raw| entry_config(base, vary, raw.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let reports: Vec<Result<RunReport, CliError>> = thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|(_, cfg)| s.spawn(move || run_with(cfg, true)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let mut rows = Vec::with_capacity(entries.len());
    for ((value, _), report) in entries.iter().zip(reports) {
        let report = report?;
        rows.push(SweepRow {
            value: *value,
            period: report.period,
            max_mean_quanta: report.max_mean_quanta,
            max_pop_err_vs_oracle: report.max_pop_err_vs_oracle.unwrap_or(0.0),
        });
    }
    std::fs::create_dir_all(&base.output_dir)
        .map_err(|source| CliError::Io { path: base.output_dir.clone(), source })?;
    let mut csv = Csv::new(&["value", "period", "max_mean_quanta", "max_pop_err_vs_oracle"]);
    for r in &rows {
        csv.row([
            Cell::Real(r.value),
            Cell::Real(r.period.unwrap_or(f64::NAN)),
            Cell::Real(r.max_mean_quanta),
            Cell::Real(r.max_pop_err_vs_oracle),
        ]);
    }
    csv.write(&base.output_dir.join(SUMMARY))?;
    Ok(rows)
}
