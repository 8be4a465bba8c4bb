//! General solution as a Fourier transform of the spectrum `sigma(x) p_0 p_n(x)`:
//!
//! ```text
//! a_n(t) = e^{i s_n t} sum_x sigma(x) p_0 p_n(x) e^{i r x t}         (discrete variable)
//! a_n(t) = e^{i s_n t} int  sigma(x) p_0 p_n(x) e^{i r x t} dx      (continuous variable)
//! ```
//!
//! Valid whenever the ladder's `f_n`, `eps_n` match the family's recurrence
//! (see [`verify_recurrence_match`]).

use num_complex::Complex64 as C64;

use crate::closed_form::{harmonic_levels, mirror};
use crate::polynomials::{gauss_rule, PolynomialFamily};
use crate::special::ComplexKahanSum;
use crate::systems::MultilevelSystem;
use crate::trajectory::{AmplitudeTrajectory, Provenance};
use crate::{Error, Result};

/// Default agreement required between a Gauss rule and its doubled rule.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Largest Gauss rule tried before giving up.
pub const MAX_QUADRATURE_ORDER: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    DiscreteSum,
    ContinuousQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSolution {
    family: PolynomialFamily,
    mode: Mode,
    quad_order: Option<usize>,
    tolerance: f64,
}

impl SpectralSolution {
    pub fn new(family: PolynomialFamily) -> Self {
        let mode = if family.is_discrete() { Mode::DiscreteSum } else { Mode::ContinuousQuadrature };
        Self { family, mode, quad_order: None, tolerance: QUADRATURE_TOLERANCE }
    }

    /// Starting Gauss order for continuous mode (escalated automatically).
    pub fn with_quad_order(mut self, order: usize) -> Self {
        self.quad_order = Some(order);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn family(&self) -> PolynomialFamily {
        self.family
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Amplitudes `a_0(t)..a_{n_max}(t)`.
    pub fn amplitudes_at(&self, t: f64, n_max: usize) -> Result<Vec<C64>> {
        if let Some(top) = self.family.max_degree() {
            if n_max > top {
                return Err(Error::Domain(format!(
                    "degree {n_max} exceeds N = {top} of {}",
                    self.family
                )));
            }
        }
        let b = match self.mode {
            Mode::DiscreteSum => self.discrete_sum(t, n_max)?,
            Mode::ContinuousQuadrature => self.quadrature(t, n_max)?,
        };
        let c = self.family.coefficients();
        Ok(b.into_iter()
            .enumerate()
            .map(|(n, bn)| C64::from_polar(1.0, c.s(n) * t) * bn)
            .collect())
    }

    fn discrete_sum(&self, t: f64, n_max: usize) -> Result<Vec<C64>> {
        let r = self.family.coefficients().r();
        let p0 = self.family.p0();
        let points = self.family.discrete_points().expect("discrete family");
        let mut acc = vec![ComplexKahanSum::default(); n_max + 1];
        for x in points {
            let x = x as f64;
            let w = self.family.weight(x)? * p0;
            let phase = C64::from_polar(1.0, r * x * t);
            for (slot, pn) in acc.iter_mut().zip(self.family.eval_unchecked(x, n_max)) {
                slot.add(phase * (w * pn));
            }
        }
        Ok(acc.iter().map(ComplexKahanSum::value).collect())
    }

    fn quadrature_with(&self, order: usize, t: f64, n_max: usize) -> Result<Vec<C64>> {
        let rule = gauss_rule(&self.family, order)?;
        let r = self.family.coefficients().r();
        let p0 = self.family.p0();
        let mut acc = vec![ComplexKahanSum::default(); n_max + 1];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let phase = C64::from_polar(1.0, r * x * t);
            for (slot, pn) in acc.iter_mut().zip(self.family.eval_unchecked(x, n_max)) {
                slot.add(phase * (w * p0 * pn));
            }
        }
        Ok(acc.iter().map(ComplexKahanSum::value).collect())
    }

    /// Gauss rule of order `n_max + 2t^2 + 20` (or the configured start),
    /// doubled until two successive rules agree.
    fn quadrature(&self, t: f64, n_max: usize) -> Result<Vec<C64>> {
        let auto = n_max + (2.0 * t * t).ceil() as usize + 20;
        let mut order = self.quad_order.unwrap_or(auto).max(n_max + 2);
        let mut coarse = self.quadrature_with(order, t, n_max)?;
        let mut last_diff = f64::INFINITY;
        while 2 * order <= MAX_QUADRATURE_ORDER {
            order *= 2;
            let fine = self.quadrature_with(order, t, n_max)?;
            last_diff = coarse
                .iter()
                .zip(&fine)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if last_diff <= self.tolerance {
                return Ok(fine);
            }
            coarse = fine;
        }
        Err(Error::Accuracy(format!(
            "Gauss quadrature at t = {t} did not converge: successive rules differ by {last_diff:.3e} at order {order}"
        )))
    }
}

/// Outcome of matching a ladder against a family's recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceMatch {
    pub matches: bool,
    pub max_deviation: f64,
}

/// Tolerance below which coefficient deviations count as a match.
pub const MATCH_TOLERANCE: f64 = 1e-12;

/// Checks `f_n = fbar_n` and `eps_n = s_n - s_{n-1}`, the condition under
/// which the spectral sum solves the ladder equations.
///
/// Finite families are checked through `n = N + 1` (the terminating zero);
/// infinite ones through the system's top level, its truncation, or 64.
pub fn verify_recurrence_match(family: &PolynomialFamily, system: &MultilevelSystem) -> RecurrenceMatch {
    let c = family.coefficients();
    let top = family.max_degree();
    let upper = match (top, system.top_level()) {
        (Some(n), Some(m)) => n.max(m) + 1,
        (Some(n), None) => n + 1,
        (None, Some(m)) => m,
        (None, None) => system.truncation().unwrap_or(64),
    };
    let mut worst = 0f64;
    for n in 1..=upper {
        let df = (system.dipole(n) - c.fbar(n)).abs();
        // above the top of a finite family there is no transition to detune
        let de = if top.is_some_and(|top| n > top) {
            0.0
        } else {
            (system.detuning(n) - (c.s(n) - c.s(n - 1))).abs()
        };
        worst = worst.max(df).max(de);
    }
    RecurrenceMatch { matches: worst <= MATCH_TOLERANCE, max_deviation: worst }
}

/// Spectral amplitude trajectory of a family-generated ladder.
pub fn solve(system: &MultilevelSystem, times: &[f64], levels: Option<usize>) -> Result<AmplitudeTrajectory> {
    let (family, mirrored) = system
        .family()
        .ok_or_else(|| Error::Domain("tabulated ladders have no generating family".into()))?;
    let n_max = match family.max_degree() {
        Some(top) => top,
        None => {
            let eps = system.uniform_detuning().unwrap_or(0.0);
            levels
                .or(system.truncation())
                .unwrap_or_else(|| harmonic_levels(eps, times))
                .max(1)
                - 1
        }
    };
    let solution = SpectralSolution::new(family);
    let mut amps = Vec::with_capacity(times.len());
    for &t in times {
        let mut row = solution.amplitudes_at(t, n_max)?;
        if mirrored {
            mirror(&mut row);
        }
        amps.push(row);
    }
    Ok(AmplitudeTrajectory {
        times: times.to_vec(),
        amps,
        provenance: Provenance::Spectral,
        system: system.clone(),
    })
}
