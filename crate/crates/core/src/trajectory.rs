use std::fmt;

use num_complex::Complex64 as C64;

use crate::systems::MultilevelSystem;

/// Which solver produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Spectral,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Spectral => "spectral",
            Provenance::Oracle => "oracle",
        })
    }
}

/// Amplitudes `a_n(t_k)` on a time grid; `amps[k][n]`.
#[derive(Debug, Clone)]
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    pub amps: Vec<Vec<C64>>,
    pub provenance: Provenance,
    pub system: MultilevelSystem,
}

impl AmplitudeTrajectory {
    /// Number of represented levels (the widest row).
    pub fn levels(&self) -> usize {
        self.amps.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn populations(&self) -> PopulationDistribution {
        PopulationDistribution {
            times: self.times.clone(),
            pops: self
                .amps
                .iter()
                .map(|row| row.iter().map(|a| a.norm_sqr()).collect())
                .collect(),
            kind: None,
        }
    }

    /// Largest `|a_n - b_n|` over the grid, levels missing on one side count as zero.
    pub fn max_abs_diff(&self, other: &AmplitudeTrajectory) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| row_diff(a, b, |z| z.norm(), |x, y| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

/// Parametric shape of a population distribution at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionKind {
    Poisson { lambda: f64 },
    Binomial { n: usize, y: f64 },
    TwoLevel { y: f64 },
    Generic,
}

/// Level populations `rho_n(t_k)`; `pops[k][n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationDistribution {
    pub times: Vec<f64>,
    pub pops: Vec<Vec<f64>>,
    /// One entry per time when the producer knows the shape.
    pub kind: Option<Vec<DistributionKind>>,
}

impl PopulationDistribution {
    pub fn levels(&self) -> usize {
        self.pops.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest `|rho_n - rho'_n|` over the grid.
    pub fn max_abs_diff(&self, other: &PopulationDistribution) -> f64 {
        self.pops
            .iter()
            .zip(&other.pops)
            .map(|(a, b)| row_diff(a, b, |x| x.abs(), |x, y| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Populations of level `n` over time (zero where not represented).
    pub fn level(&self, n: usize) -> Vec<f64> {
        self.pops.iter().map(|row| row.get(n).copied().unwrap_or(0.0)).collect()
    }
}

pub(crate) fn row_diff<T: Copy>(
    a: &[T],
    b: &[T],
    mag: impl Fn(T) -> f64,
    diff: impl Fn(T, T) -> f64,
) -> f64 {
    let common = a.len().min(b.len());
    let head = (0..common).map(|n| diff(a[n], b[n]));
    let tail = a[common..].iter().chain(&b[common..]).map(|&v| mag(v));
    head.chain(tail).fold(0.0, f64::max)
}

/// Uniform grid `t_k = t_max k / steps`, `k = 0..=steps`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect()
}
