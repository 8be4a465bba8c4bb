//! Summaries of population dynamics: norm, mean quanta, absorbed energy,
//! distribution fits and period detection.

use crate::special::{binomial_pmf, poisson_pmf};
use crate::trajectory::PopulationDistribution;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    /// `sum_n rho_n`.
    pub norm: Vec<f64>,
    /// `<n> = sum_n n rho_n`.
    pub mean_quanta: Vec<f64>,
    /// Mean absorbed energy in units of `hbar omega`, equal to `<n>`.
    pub mean_energy_units: Vec<f64>,
    pub period_estimate: Option<f64>,
}

impl ObservableSeries {
    /// Largest sampled `<n>`.
    pub fn max_mean_quanta(&self) -> f64 {
        self.mean_quanta.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `<n>` with parabolic refinement around the best sample.
    pub fn peak_mean_quanta(&self) -> f64 {
        let m = &self.mean_quanta;
        let Some((k, &best)) = m.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
            return 0.0;
        };
        if k == 0 || k + 1 == m.len() {
            return best;
        }
        let (_, value) = parabola_vertex(
            [self.times[k - 1], self.times[k], self.times[k + 1]],
            [m[k - 1], m[k], m[k + 1]],
        );
        value.max(best)
    }
}

pub fn summarize(pops: &PopulationDistribution) -> ObservableSeries {
    let norm: Vec<f64> = pops.pops.iter().map(|row| row.iter().sum()).collect();
    let mean_quanta: Vec<f64> = pops
        .pops
        .iter()
        .map(|row| row.iter().enumerate().map(|(n, r)| n as f64 * r).sum())
        .collect();
    let mut series = ObservableSeries {
        times: pops.times.clone(),
        norm,
        mean_energy_units: mean_quanta.clone(),
        mean_quanta,
        period_estimate: None,
    };
    series.period_estimate = detect_period(&series);
    series
}

/// Vertex `(t, value)` of the parabola through three points.
fn parabola_vertex(t: [f64; 3], m: [f64; 3]) -> (f64, f64) {
    let (a, b) = (t[1] - t[0], t[1] - t[2]);
    let (fa, fb) = (m[1] - m[0], m[1] - m[2]);
    let den = a * fb - b * fa;
    if den == 0.0 {
        return (t[1], m[1]);
    }
    let tv = t[1] - 0.5 * (a * a * fb - b * b * fa) / den;
    // evaluate the interpolating parabola at the vertex (Lagrange form)
    let l = |i: usize, j: usize, k: usize| (tv - t[j]) * (tv - t[k]) / ((t[i] - t[j]) * (t[i] - t[k]));
    (tv, m[0] * l(0, 1, 2) + m[1] * l(1, 0, 2) + m[2] * l(2, 0, 1))
}

/// Fundamental period of `<n>(t)` from the spacing of its deepest minima,
/// each refined by a parabola. `None` unless at least two minima are found
/// (the start of the series counts when it is one).
pub fn detect_period(series: &ObservableSeries) -> Option<f64> {
    let m = &series.mean_quanta;
    let t = &series.times;
    if m.len() < 3 {
        return None;
    }
    let lo = m.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if !(range > 1e-12) {
        return None;
    }
    let deep = |v: f64| v - lo <= 0.05 * range;
    let mut minima = Vec::new();
    if m[0] <= m[1] && deep(m[0]) {
        minima.push(t[0]);
    }
    for k in 1..m.len() - 1 {
        if m[k] <= m[k - 1] && m[k] < m[k + 1] && deep(m[k]) {
            let (tv, _) = parabola_vertex([t[k - 1], t[k], t[k + 1]], [m[k - 1], m[k], m[k + 1]]);
            minima.push(tv);
        }
    }
    if minima.len() < 2 {
        return None;
    }
    Some((minima[minima.len() - 1] - minima[0]) / (minima.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypothesis {
    Poisson,
    /// Binomial law on `0..=n`.
    Binomial { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionFit {
    /// `lambda` for Poisson, `y` for binomial.
    pub parameter: f64,
    /// `max_n |rho_n - model_n|`.
    pub residual: f64,
}

/// Moment-matched fit of one population vector to a one-parameter law.
pub fn fit_distribution(pops: &[f64], hypothesis: Hypothesis) -> DistributionFit {
    if pops.iter().skip(1).all(|&r| r == 0.0) {
        return DistributionFit { parameter: 0.0, residual: 0.0 };
    }
    let mean: f64 = pops.iter().enumerate().map(|(n, r)| n as f64 * r).sum();
    let (parameter, model) = match hypothesis {
        Hypothesis::Poisson => (mean, poisson_pmf(mean, pops.len().saturating_sub(1))),
        Hypothesis::Binomial { n } => {
            let y = mean / n as f64;
            (y, binomial_pmf(n, y))
        }
    };
    let len = pops.len().max(model.len());
    let residual = (0..len)
        .map(|k| (pops.get(k).copied().unwrap_or(0.0) - model.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);
    DistributionFit { parameter, residual }
}
