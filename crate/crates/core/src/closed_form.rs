//! Exact amplitudes and populations of the solvable ladders.
//!
//! * harmonic ladder at resonance: Poisson populations with mean `t^2`;
//! * harmonic ladder off resonance: Poisson with mean `(2/eps)^2 sin^2(eps t / 2)`;
//! * Kravchuk oscillator: binomial populations with parameter
//!   `y(t) = (2/r)^2 sin^2(r t / 2) / N`;
//! * two-level system, the `N = 1` oscillator.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::polynomials::{FamilyKind, PolynomialFamily, Spectrum};
use crate::special::{binomial_pmf, ln_binomial, ln_factorial, poisson_pmf, poisson_truncation};
use crate::systems::{KravchukParameters, MultilevelSystem};
use crate::trajectory::{AmplitudeTrajectory, DistributionKind, PopulationDistribution, Provenance};
use crate::{Error, Result};

/// `a_n = i^n t^n / sqrt(n!) exp(-t^2/2)`, `n = 0..=n_max`.
pub fn harmonic_resonant(t: f64, n_max: usize) -> Vec<C64> {
    (0..=n_max)
        .map(|n| {
            let mag = if n == 0 {
                (-0.5 * t * t).exp()
            } else if t == 0.0 {
                0.0
            } else {
                (n as f64 * t.abs().ln() - 0.5 * ln_factorial(n) - 0.5 * t * t).exp()
            };
            let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            C64::from_polar(sign * mag, FRAC_PI_2 * (n % 4) as f64)
        })
        .collect()
}

/// Mean number of absorbed quanta of the harmonic ladder,
/// `(2/eps)^2 sin^2(eps t / 2)`, continuous through `eps = 0` where it is `t^2`.
pub fn harmonic_mean_quanta(eps: f64, t: f64) -> f64 {
    let half = 0.5 * eps * t;
    let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
    (t * sinc).powi(2)
}

/// Detuned harmonic ladder (Charlier system), `eps != 0`.
///
/// For `eps > 0`:
/// `a_n = exp(i (n eps + 1/eps) t) (theta/eps)^n / sqrt(n!) exp(-theta/eps^2)`,
/// `theta = 1 - exp(-i eps t)`. Negative detuning is obtained from the
/// positive one by `a_n -> (-1)^n conj(a_n)`.
pub fn harmonic_detuned(t: f64, eps: f64, n_max: usize) -> Result<Vec<C64>> {
    if eps == 0.0 {
        return Err(Error::Domain(
            "zero detuning has no Charlier solution; use harmonic_resonant".into(),
        ));
    }
    if !eps.is_finite() {
        return Err(Error::invalid("epsilon", format!("must be finite, got {eps}")));
    }
    let e = eps.abs();
    let half = 0.5 * e * t;
    // 1 - exp(-i e t) without cancellation at small e t
    let theta = C64::new(2.0 * half.sin().powi(2), (e * t).sin());
    let base = (-theta / (e * e)).exp();
    let ln_ratio = if theta == C64::new(0.0, 0.0) { None } else { Some((theta / e).ln()) };
    let mut amps: Vec<C64> = (0..=n_max)
        .map(|n| {
            let phase = C64::from_polar(1.0, (n as f64 * e + 1.0 / e) * t);
            let power = match (n, ln_ratio) {
                (0, _) => C64::new(1.0, 0.0),
                (_, None) => C64::new(0.0, 0.0),
                (_, Some(l)) => (l * n as f64 - 0.5 * ln_factorial(n)).exp(),
            };
            phase * power * base
        })
        .collect();
    if eps < 0.0 {
        mirror(&mut amps);
    }
    Ok(amps)
}

/// `a_n -> (-1)^n conj(a_n)`: maps the solution for detunings `eps_n` onto the
/// solution for `-eps_n`.
pub fn mirror(amps: &mut [C64]) {
    for (n, a) in amps.iter_mut().enumerate() {
        *a = if n % 2 == 0 { a.conj() } else { -a.conj() };
    }
}

/// Poisson populations of the harmonic ladder with detuning `eps` (any sign,
/// including zero).
pub fn harmonic_populations(eps: f64, t: f64, n_max: usize) -> Vec<f64> {
    poisson_pmf(harmonic_mean_quanta(eps, t), n_max)
}

/// Binomial parameter `y(t) = (2/r)^2 sin^2(r t / 2) / N`, clamped to `[0, 1]`.
pub fn kravchuk_y(params: &KravchukParameters, t: f64) -> f64 {
    let s = (0.5 * params.r * t).sin();
    (4.0 / (params.r * params.r * params.n as f64) * s * s).clamp(0.0, 1.0)
}

/// Kravchuk oscillator amplitudes `a_0..a_N`:
///
/// `a_n = [C(N,n) (pq)^n]^{1/2} (p e^{irt} + q)^{N-n} (e^{irt} - 1)^n exp(i[(p-q)n - pN] r t)`,
/// assembled from logarithms of the moduli and sums of the arguments.
pub fn kravchuk_amplitudes(params: &KravchukParameters, t: f64) -> Vec<C64> {
    let KravchukParameters { n: top, p, q, r, .. } = *params;
    let rt = r * t;
    let s = (0.5 * rt).sin();
    // |p e^{irt} + q|^2 = 1 - 4pq sin^2(rt/2)
    let ln_mod_a = 0.5 * (1.0 - 4.0 * p * q * s * s).max(0.0).ln();
    let arg_a = (p * rt.sin()).atan2(p * rt.cos() + q);
    // e^{irt} - 1 = 2i sin(rt/2) e^{irt/2}
    let ln_mod_b = (2.0 * s.abs()).ln();
    let arg_b = 0.5 * rt + FRAC_PI_2 + if s < 0.0 { std::f64::consts::PI } else { 0.0 };
    let ln_pq = (p * q).ln();
    (0..=top)
        .map(|n| {
            let up = top - n;
            if (up > 0 && ln_mod_a == f64::NEG_INFINITY) || (n > 0 && ln_mod_b == f64::NEG_INFINITY)
            {
                return C64::new(0.0, 0.0);
            }
            let mut ln_mod = 0.5 * (ln_binomial(top, n) + n as f64 * ln_pq);
            let mut arg = ((p - q) * n as f64 - p * top as f64) * rt;
            if up > 0 {
                ln_mod += up as f64 * ln_mod_a;
                arg += up as f64 * arg_a;
            }
            if n > 0 {
                ln_mod += n as f64 * ln_mod_b;
                arg += n as f64 * arg_b;
            }
            C64::from_polar(ln_mod.exp(), arg)
        })
        .collect()
}

/// Binomial populations `C(N,n) (1-y)^{N-n} y^n` and the parameter `y(t)`.
pub fn kravchuk_populations(params: &KravchukParameters, t: f64) -> (Vec<f64>, f64) {
    let y = kravchuk_y(params, t);
    (binomial_pmf(params.n, y), y)
}

/// Two-level populations `(rho_0, rho_1)`: `y = sin^2(Omega t) / Omega^2`,
/// `Omega = sqrt(1 + (eps/2)^2)`.
pub fn two_level(eps: f64, t: f64) -> [f64; 2] {
    let omega = (1.0 + 0.25 * eps * eps).sqrt();
    let s = (omega * t).sin();
    let y = (s * s / (omega * omega)).clamp(0.0, 1.0);
    [1.0 - y, y]
}

/// Sup-norm distances between Kravchuk(`N`, `eps`) populations and the
/// Poisson law with `lambda(t) = (2/eps)^2 sin^2(eps t / 2)` at time `t`, one
/// per entry of `ns`.
pub fn poisson_limit(ns: &[usize], eps: f64, t: f64) -> Result<Vec<f64>> {
    let lambda = harmonic_mean_quanta(eps, t);
    ns.iter()
        .map(|&n| {
            let params = KravchukParameters::from_detuning(n, eps)?;
            let (rho, _) = kravchuk_populations(&params, t);
            let poisson = poisson_pmf(lambda, poisson_truncation(lambda).max(n));
            let d = (0..poisson.len())
                .map(|k| (rho.get(k).copied().unwrap_or(0.0) - poisson[k]).abs())
                .fold(0.0, f64::max);
            Ok(d)
        })
        .collect()
}

/// Fourier spectrum `S_n(x) = sigma(x) p_0 p_n(x)` of the `n`-th amplitude.
pub fn spectrum(family: PolynomialFamily, n: usize) -> Result<Spectrum> {
    Spectrum::new(family, n)
}

/// Kravchuk parameters of a Kravchuk family.
pub(crate) fn kravchuk_params_of(family: &PolynomialFamily) -> Option<KravchukParameters> {
    match family.kind() {
        FamilyKind::Kravchuk { p, q, n } => {
            let r = family.coefficients().r();
            Some(KravchukParameters { n, epsilon: r * (p - q), p, q, r })
        }
        _ => None,
    }
}

/// Level count used for Poisson-type outputs over a time grid.
pub fn harmonic_levels(eps: f64, times: &[f64]) -> usize {
    let lambda_max = times
        .iter()
        .map(|&t| harmonic_mean_quanta(eps, t))
        .fold(0.0, f64::max);
    poisson_truncation(lambda_max)
}

/// Closed-form amplitude trajectory of a family-generated ladder.
///
/// Infinite ladders are represented up to `levels` (default: Poisson tail
/// bound over the grid, or the system's own truncation).
pub fn solve(system: &MultilevelSystem, times: &[f64], levels: Option<usize>) -> Result<AmplitudeTrajectory> {
    let (family, mirrored) = system
        .family()
        .ok_or_else(|| Error::Domain("tabulated ladders have no closed form".into()))?;
    let amps = match family.kind() {
        FamilyKind::Kravchuk { .. } => {
            let params = kravchuk_params_of(&family).expect("Kravchuk family");
            let mut rows: Vec<Vec<C64>> = times.iter().map(|&t| kravchuk_amplitudes(&params, t)).collect();
            if mirrored {
                rows.iter_mut().for_each(|r| mirror(r));
            }
            rows
        }
        FamilyKind::Hermite | FamilyKind::Charlier { .. } => {
            let eps = system.uniform_detuning().expect("harmonic ladder");
            let n = levels
                .or(system.truncation())
                .unwrap_or_else(|| harmonic_levels(eps, times));
            let n_max = n.max(1) - 1;
            times
                .iter()
                .map(|&t| {
                    if eps == 0.0 {
                        Ok(harmonic_resonant(t, n_max))
                    } else {
                        harmonic_detuned(t, eps, n_max)
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(AmplitudeTrajectory {
        times: times.to_vec(),
        amps,
        provenance: Provenance::ClosedForm,
        system: system.clone(),
    })
}

/// Closed-form populations with their distribution shape recorded per time.
pub fn populations(system: &MultilevelSystem, times: &[f64], levels: Option<usize>) -> Result<PopulationDistribution> {
    let (family, _) = system
        .family()
        .ok_or_else(|| Error::Domain("tabulated ladders have no closed form".into()))?;
    let mut pops = Vec::with_capacity(times.len());
    let mut kinds = Vec::with_capacity(times.len());
    match family.kind() {
        FamilyKind::Kravchuk { n, .. } => {
            let params = kravchuk_params_of(&family).expect("Kravchuk family");
            for &t in times {
                let (rho, y) = kravchuk_populations(&params, t);
                pops.push(rho);
                kinds.push(if n == 1 {
                    DistributionKind::TwoLevel { y }
                } else {
                    DistributionKind::Binomial { n, y }
                });
            }
        }
        _ => {
            let eps = system.uniform_detuning().expect("harmonic ladder");
            let n = levels
                .or(system.truncation())
                .unwrap_or_else(|| harmonic_levels(eps, times));
            for &t in times {
                let lambda = harmonic_mean_quanta(eps, t);
                pops.push(poisson_pmf(lambda, n.max(1) - 1));
                kinds.push(DistributionKind::Poisson { lambda });
            }
        }
    }
    Ok(PopulationDistribution { times: times.to_vec(), pops, kind: Some(kinds) })
}
