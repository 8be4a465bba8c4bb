//! Brute-force integration of the ladder equations
//!
//! ```text
//! da_n/dt = i [ f_{n+1} e^{-i eps_{n+1} t} a_{n+1} + f_n e^{+i eps_n t} a_{n-1} ]
//! ```
//!
//! with an adaptive Dormand-Prince 5(4) pair. Only `f_n` and `eps_n` of the
//! system are consulted; nothing here touches the polynomial machinery.

use num_complex::Complex64 as C64;

use crate::special::poisson_truncation;
use crate::systems::MultilevelSystem;
use crate::trajectory::{AmplitudeTrajectory, Provenance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Levels kept for infinite ladders; `None` picks a Poisson tail bound.
    pub truncation_levels: Option<usize>,
    /// Largest population tolerated in the top two retained levels.
    pub tail_guard: f64,
    /// Truncation enlargements (by 1.5x) before giving up.
    pub max_retries: usize,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1.0,
            truncation_levels: None,
            tail_guard: 1e-12,
            max_retries: 4,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {v}")))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("max_step", self.max_step)?;
        positive("tail_guard", self.tail_guard)?;
        if matches!(self.truncation_levels, Some(l) if l < 2) {
            return Err(Error::invalid("truncation_levels", "at least two levels are required"));
        }
        Ok(())
    }
}

/// Coupling constants of a (possibly truncated) ladder with `levels` levels.
#[derive(Debug, Clone)]
struct Ladder {
    /// `f[n]` couples `n-1` and `n`; `f[0] = 0`.
    f: Vec<f64>,
    eps: Vec<f64>,
}

impl Ladder {
    fn new(system: &MultilevelSystem, levels: usize) -> Self {
        Self {
            f: (0..levels).map(|n| system.dipole(n)).collect(),
            eps: (0..levels).map(|n| system.detuning(n)).collect(),
        }
    }

    fn levels(&self) -> usize {
        self.f.len()
    }

    fn max_coupling(&self) -> f64 {
        self.f.iter().copied().fold(0.0, f64::max)
    }

    fn rhs(&self, t: f64, a: &[C64], out: &mut [C64], phase: &mut [C64]) {
        let l = self.levels();
        for n in 1..l {
            phase[n] = C64::from_polar(self.f[n], self.eps[n] * t);
        }
        for n in 0..l {
            let mut s = C64::new(0.0, 0.0);
            if n + 1 < l {
                s += phase[n + 1].conj() * a[n + 1];
            }
            if n > 0 {
                s += phase[n] * a[n - 1];
            }
            out[n] = C64::new(-s.im, s.re);
        }
    }
}

// Dormand-Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Stepper<'a> {
    ladder: &'a Ladder,
    settings: &'a IntegratorSettings,
    k: [Vec<C64>; 7],
    stage: Vec<C64>,
    y_new: Vec<C64>,
    phase: Vec<C64>,
    steps: usize,
}

impl<'a> Stepper<'a> {
    fn new(ladder: &'a Ladder, settings: &'a IntegratorSettings) -> Self {
        let l = ladder.levels();
        let z = vec![C64::new(0.0, 0.0); l];
        Self {
            ladder,
            settings,
            k: std::array::from_fn(|_| z.clone()),
            stage: z.clone(),
            y_new: z.clone(),
            phase: z,
            steps: 0,
        }
    }

    fn eval(&mut self, t: f64, which: usize, use_stage: bool) {
        let (ladder, phase) = (self.ladder, &mut self.phase);
        let src = if use_stage { &self.stage } else { &self.y_new };
        ladder.rhs(t, src, &mut self.k[which], phase);
    }

    fn combine(&mut self, y: &[C64], h: f64, coeffs: &[(usize, f64)]) {
        for n in 0..y.len() {
            let mut acc = C64::new(0.0, 0.0);
            for &(j, c) in coeffs {
                acc += self.k[j][n] * c;
            }
            self.stage[n] = y[n] + acc * h;
        }
    }

    /// One trial step from `(t, y)`; `k[0]` must hold `f(t, y)`. Returns the
    /// scaled error norm; the candidate is left in `y_new` and `k[6]`.
    fn trial(&mut self, t: f64, y: &[C64], h: f64) -> f64 {
        self.combine(y, h, &[(0, A21)]);
        self.eval(t + C2 * h, 1, true);
        self.combine(y, h, &[(0, A31), (1, A32)]);
        self.eval(t + C3 * h, 2, true);
        self.combine(y, h, &[(0, A41), (1, A42), (2, A43)]);
        self.eval(t + C4 * h, 3, true);
        self.combine(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
        self.eval(t + C5 * h, 4, true);
        self.combine(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
        self.eval(t + h, 5, true);
        self.combine(y, h, &[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)]);
        std::mem::swap(&mut self.stage, &mut self.y_new);
        self.eval(t + h, 6, false);

        let (rtol, atol) = (self.settings.rel_tol, self.settings.abs_tol);
        let mut sum = 0.0;
        for n in 0..y.len() {
            let err = (self.k[0][n] * E1
                + self.k[2][n] * E3
                + self.k[3][n] * E4
                + self.k[4][n] * E5
                + self.k[5][n] * E6
                + self.k[6][n] * E7)
                * h;
            let scale = atol + rtol * y[n].norm().max(self.y_new[n].norm());
            sum += (err.re / scale).powi(2) + (err.im / scale).powi(2);
        }
        (sum / (2 * y.len()) as f64).sqrt()
    }

    /// Advance `y` from `t` to `t_end` (either direction), landing exactly on
    /// `t_end`. `h` carries the step-size proposal between calls.
    fn advance(&mut self, y: &mut Vec<C64>, t: f64, t_end: f64, h: &mut f64) -> Result<()> {
        let dir = if t_end >= t { 1.0 } else { -1.0 };
        let mut t = t;
        let (ladder, phase) = (self.ladder, &mut self.phase);
        ladder.rhs(t, y, &mut self.k[0], phase);
        while dir * (t_end - t) > 0.0 {
            let remaining = (t_end - t).abs();
            let clamped = *h >= remaining;
            let step = if clamped { remaining } else { *h };
            if step < 1e-14 * t.abs().max(1.0) && !clamped {
                return Err(Error::StepUnderflow { t, h: step });
            }
            self.steps += 1;
            if self.steps > self.settings.max_steps {
                return Err(Error::Accuracy(format!(
                    "step budget of {} exhausted at t = {t}",
                    self.settings.max_steps
                )));
            }
            let err = self.trial(t, y, dir * step);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if clamped { t_end } else { t + dir * step };
                std::mem::swap(y, &mut self.y_new);
                self.k.swap(0, 6);
                let proposal = (step * fac).min(self.settings.max_step);
                *h = if clamped { proposal.max(*h) } else { proposal };
            } else {
                *h = step * fac.min(1.0);
            }
        }
        Ok(())
    }
}

fn initial_step(ladder: &Ladder, settings: &IntegratorSettings) -> f64 {
    (0.05 / (1.0 + 2.0 * ladder.max_coupling())).min(settings.max_step)
}

/// Integrate `levels` levels of `system` from `initial` at `t_from` to every
/// time in `targets` (monotone, any direction). Returns one state per target.
pub fn propagate(
    system: &MultilevelSystem,
    levels: usize,
    initial: &[C64],
    t_from: f64,
    targets: &[f64],
    settings: &IntegratorSettings,
) -> Result<Vec<Vec<C64>>> {
    settings.validate()?;
    if initial.len() != levels {
        return Err(Error::invalid(
            "initial",
            format!("{} amplitudes for {levels} levels", initial.len()),
        ));
    }
    let ladder = Ladder::new(system, levels);
    let mut stepper = Stepper::new(&ladder, settings);
    let mut y = initial.to_vec();
    let mut t = t_from;
    let mut h = initial_step(&ladder, settings);
    let mut out = Vec::with_capacity(targets.len());
    for &target in targets {
        if target != t {
            stepper.advance(&mut y, t, target, &mut h)?;
            t = target;
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// Levels kept for an infinite ladder over `[0, t_max]`: Poisson tail bound
/// with mean at most `t_max^2`, or `(2/eps)^2` for a uniformly detuned ladder.
pub fn default_truncation(system: &MultilevelSystem, t_max: f64) -> usize {
    let mut lambda = t_max * t_max;
    if let Some(eps) = system.uniform_detuning() {
        if eps != 0.0 {
            lambda = lambda.min(4.0 / (eps * eps));
        }
    }
    poisson_truncation(lambda).max(2)
}

/// Integrate from `a_n(0) = delta_{n,0}` over `times` (sorted, starting at 0).
///
/// Infinite ladders are truncated; when the top two levels pick up more than
/// `tail_guard` the run is repeated with 1.5x the levels.
pub fn integrate(
    system: &MultilevelSystem,
    times: &[f64],
    settings: &IntegratorSettings,
) -> Result<AmplitudeTrajectory> {
    settings.validate()?;
    if times.first() != Some(&0.0) {
        return Err(Error::invalid("times", "grid must start at t = 0"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("times", "grid must be sorted and finite"));
    }
    let t_max = *times.last().expect("non-empty grid");
    let mut levels = match system.top_level() {
        Some(top) => top + 1,
        None => settings
            .truncation_levels
            .or(system.truncation())
            .unwrap_or_else(|| default_truncation(system, t_max)),
    };
    let mut attempt = 0;
    loop {
        let mut initial = vec![C64::new(0.0, 0.0); levels];
        initial[0] = C64::new(1.0, 0.0);
        let amps = propagate(system, levels, &initial, 0.0, times, settings)?;
        if system.is_finite() {
            return Ok(AmplitudeTrajectory {
                times: times.to_vec(),
                amps,
                provenance: Provenance::Oracle,
                system: system.clone(),
            });
        }
        let tail = amps
            .iter()
            .flat_map(|row| row[levels.saturating_sub(2)..].iter().map(|a| a.norm_sqr()))
            .fold(0.0, f64::max);
        if tail <= settings.tail_guard {
            return Ok(AmplitudeTrajectory {
                times: times.to_vec(),
                amps,
                provenance: Provenance::Oracle,
                system: system.clone().with_truncation(levels),
            });
        }
        if attempt >= settings.max_retries {
            return Err(Error::Truncation { tail, guard: settings.tail_guard, levels });
        }
        attempt += 1;
        levels = (levels as f64 * 1.5).ceil() as usize;
    }
}

/// `max_k |sum_n |a_n(t_k)|^2 - 1|`.
pub fn norm_drift(trajectory: &AmplitudeTrajectory) -> f64 {
    trajectory
        .amps
        .iter()
        .map(|row| (row.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}
