//! Ladder models: dipole-moment function `f_n`, detunings `eps_n`, level count.

use crate::polynomials::{FamilyKind, PolynomialFamily};
use crate::{Error, Result};

/// Where the coupling constants come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// `f_n = fbar_n`, `eps_n = s_n - s_{n-1}` of a polynomial family. With
    /// `mirrored` set every detuning changes sign; the amplitudes then follow
    /// from `a_n -> (-1)^n conj(a_n)`.
    Family { family: PolynomialFamily, mirrored: bool },
    /// Explicit `f_1..f_N` and `eps_1..eps_N` of an `(N+1)`-level ladder.
    Tabulated { dipole: Vec<f64>, detuning: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultilevelSystem {
    coupling: Coupling,
    truncation: Option<usize>,
}

impl MultilevelSystem {
    /// The ladder whose coefficients match the recurrence of `family`.
    pub fn from_family(family: PolynomialFamily) -> Self {
        Self { coupling: Coupling::Family { family, mirrored: false }, truncation: None }
    }

    /// Harmonic ladder `f_n = sqrt(n)` with uniform detuning `eps`.
    ///
    /// `eps = 0` is the Hermite system, `eps > 0` the Charlier system with
    /// `mu = eps^-2`, `eps < 0` the mirrored Charlier system.
    pub fn harmonic(eps: f64) -> Result<Self> {
        if !eps.is_finite() {
            return Err(Error::invalid("epsilon", format!("must be finite, got {eps}")));
        }
        if eps == 0.0 {
            return Ok(Self::from_family(PolynomialFamily::hermite()));
        }
        let family = PolynomialFamily::charlier(1.0 / (eps * eps))?;
        Ok(Self { coupling: Coupling::Family { family, mirrored: eps < 0.0 }, truncation: None })
    }

    pub fn kravchuk(params: &KravchukParameters) -> Self {
        Self::from_family(params.family())
    }

    /// Two-level system, the `N = 1` Kravchuk oscillator.
    pub fn two_level(eps: f64) -> Result<Self> {
        Ok(Self::kravchuk(&KravchukParameters::from_detuning(1, eps)?))
    }

    /// Finite ladder from explicit `f_1..f_N` and `eps_1..eps_N`.
    pub fn tabulated(dipole: Vec<f64>, detuning: Vec<f64>) -> Result<Self> {
        if dipole.is_empty() {
            return Err(Error::invalid("dipole", "at least one transition is required"));
        }
        if dipole.len() != detuning.len() {
            return Err(Error::invalid(
                "detuning",
                format!("{} detunings for {} transitions", detuning.len(), dipole.len()),
            ));
        }
        if dipole.iter().chain(&detuning).any(|v| !v.is_finite()) {
            return Err(Error::invalid("dipole", "coefficients must be finite"));
        }
        Ok(Self { coupling: Coupling::Tabulated { dipole, detuning }, truncation: None })
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    /// Generating family, if any, and whether detunings are mirrored.
    pub fn family(&self) -> Option<(PolynomialFamily, bool)> {
        match &self.coupling {
            Coupling::Family { family, mirrored } => Some((*family, *mirrored)),
            Coupling::Tabulated { .. } => None,
        }
    }

    /// Index `N` of the top level; `None` for infinite ladders.
    pub fn top_level(&self) -> Option<usize> {
        match &self.coupling {
            Coupling::Family { family, .. } => family.max_degree(),
            Coupling::Tabulated { dipole, .. } => Some(dipole.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.top_level().is_some()
    }

    /// Caller-chosen level count for an infinite ladder.
    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn with_truncation(mut self, levels: usize) -> Self {
        self.truncation = Some(levels);
        self
    }

    /// Dipole moment `f_n` of transition `n-1 <-> n`; `f_0 = 0`, and zero
    /// above the top of a finite ladder.
    pub fn dipole(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match &self.coupling {
            Coupling::Family { family, .. } => family.coefficients().fbar(n),
            Coupling::Tabulated { dipole, .. } => dipole.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// Detuning `eps_n` of transition `n`; zero for `n = 0`.
    pub fn detuning(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match &self.coupling {
            Coupling::Family { family, mirrored } => {
                let c = family.coefficients();
                let eps = c.s(n) - c.s(n - 1);
                if *mirrored { -eps } else { eps }
            }
            Coupling::Tabulated { detuning, .. } => detuning.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// The uniform detuning of an equidistant ladder, if it is one.
    pub fn uniform_detuning(&self) -> Option<f64> {
        match &self.coupling {
            Coupling::Family { family, mirrored } => {
                let eps = match family.kind() {
                    FamilyKind::Hermite => 0.0,
                    FamilyKind::Charlier { mu } => 1.0 / mu.sqrt(),
                    FamilyKind::Kravchuk { .. } => {
                        let c = family.coefficients();
                        c.s(1) - c.s(0)
                    }
                };
                Some(if *mirrored { -eps } else { eps })
            }
            Coupling::Tabulated { detuning, .. } => {
                let first = detuning[0];
                detuning.iter().all(|&e| e == first).then_some(first)
            }
        }
    }
}

/// Parameters of one Kravchuk oscillator: `N`, detuning, `p`, `q`, `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KravchukParameters {
    pub n: usize,
    pub epsilon: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl KravchukParameters {
    /// From the ladder's own parameters: `r = sqrt(4/N + eps^2)`,
    /// `p = (1 + eps/r)/2`, `q = (1 - eps/r)/2`.
    pub fn from_detuning(n: usize, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N", "must be at least 1"));
        }
        if !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", format!("must be finite, got {epsilon}")));
        }
        let nf = n as f64;
        let r = (4.0 / nf + epsilon * epsilon).sqrt();
        // 1 -+ eps/r = (4/N) / (r (r +- eps)) avoids cancellation at large |eps|
        let (p, q) = if epsilon >= 0.0 {
            let q = 2.0 / (nf * r * (r + epsilon));
            (1.0 - q, q)
        } else {
            let p = 2.0 / (nf * r * (r - epsilon));
            (p, 1.0 - p)
        };
        Ok(Self { n, epsilon, p, q, r })
    }

    /// From the weight parameter `p`: `r = 1/sqrt(pqN)`, `eps = r (p - q)`.
    pub fn from_probability(n: usize, p: f64) -> Result<Self> {
        let family = PolynomialFamily::kravchuk(p, n)?;
        let q = 1.0 - p;
        let r = family.coefficients().r();
        Ok(Self { n, epsilon: r * (p - q), p, q, r })
    }

    pub fn family(&self) -> PolynomialFamily {
        PolynomialFamily::kravchuk_pq(self.p, self.q, self.n)
            .expect("validated Kravchuk parameters")
    }
}

/// Kravchuk dipole moments `f_1..f_N`, `f_n = sqrt(n (N + 1 - n) / N)`.
pub fn dipole_profile(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| ((k * (n + 1 - k)) as f64 / n as f64).sqrt())
        .collect()
}

/// Conversion from laboratory units.
///
/// With Rabi frequency `Lambda = mu_01 E / (2 hbar)` the dimensionless time is
/// `t = Lambda tau` and the detuning of transition `n` is
/// `eps_n = (omega_n - omega_laser) / Lambda`. No unit checking is done.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiUnits {
    pub rabi_frequency: f64,
}

impl RabiUnits {
    pub fn time(&self, tau: f64) -> f64 {
        self.rabi_frequency * tau
    }

    pub fn detuning(&self, transition_frequency: f64, laser_frequency: f64) -> f64 {
        (transition_frequency - laser_frequency) / self.rabi_frequency
    }
}
