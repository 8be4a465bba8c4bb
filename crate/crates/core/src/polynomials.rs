//! Orthonormal polynomial sequences in the recurrence form
//!
//! ```text
//! fbar_{n+1} p_{n+1}(x) + fbar_n p_{n-1}(x) = (r x + s_n) p_n(x),   fbar_0 = 0, fbar_1 = 1
//! ```
//!
//! for the three families that generate solvable ladders: Hermite (continuous
//! variable), Charlier and Kravchuk (discrete variable).

mod quadrature;

pub use quadrature::{gauss_rule, tridiagonal_eigenvalues, QuadratureRule};

use std::f64::consts::PI;
use std::fmt;

use crate::special::{ln_binomial, ln_factorial, xlny, KahanSum};
use crate::{Error, Result};

/// Relative weight below which the Charlier support is cut off.
pub const CHARLIER_WEIGHT_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    Hermite,
    Charlier { mu: f64 },
    /// `q` is stored alongside `p` so that `q = 1 - p` is not recomputed with
    /// cancellation when `p` is close to one.
    Kravchuk { p: f64, q: f64, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// The whole real line.
    Real,
    /// `{0, 1, 2, ...}`.
    NonNegativeIntegers,
    /// `{0, 1, ..., upper}`.
    Integers { upper: usize },
}

/// Coefficients `fbar_n`, `r`, `s_n` of the orthonormal recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoefficients {
    kind: FamilyKind,
    r: f64,
}

impl RecurrenceCoefficients {
    /// Off-diagonal coefficient; zero at `n = 0` and, for Kravchuk, from `N + 1` on.
    pub fn fbar(&self, n: usize) -> f64 {
        match self.kind {
            FamilyKind::Hermite | FamilyKind::Charlier { .. } => (n as f64).sqrt(),
            FamilyKind::Kravchuk { n: top, .. } => {
                if n > top {
                    0.0
                } else {
                    ((n * (top + 1 - n)) as f64 / top as f64).sqrt()
                }
            }
        }
    }

    /// Frequency scale.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Diagonal shift.
    pub fn s(&self, n: usize) -> f64 {
        let n = n as f64;
        match self.kind {
            FamilyKind::Hermite => 0.0,
            FamilyKind::Charlier { mu } => n / mu.sqrt() + mu.sqrt(),
            FamilyKind::Kravchuk { p, q, n: top } => {
                self.r * (p - q) * n - self.r * p * top as f64
            }
        }
    }
}

/// One orthonormal polynomial sequence with its weight and support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialFamily {
    kind: FamilyKind,
}

impl fmt::Display for PolynomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Hermite => write!(f, "Hermite"),
            FamilyKind::Charlier { mu } => write!(f, "Charlier(mu={mu})"),
            FamilyKind::Kravchuk { p, n, .. } => write!(f, "Kravchuk(p={p}, N={n})"),
        }
    }
}

impl PolynomialFamily {
    pub fn hermite() -> Self {
        Self { kind: FamilyKind::Hermite }
    }

    pub fn charlier(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid("mu", format!("must be positive and finite, got {mu}")));
        }
        Ok(Self { kind: FamilyKind::Charlier { mu } })
    }

    pub fn kravchuk(p: f64, n: usize) -> Result<Self> {
        Self::kravchuk_pq(p, 1.0 - p, n)
    }

    /// Kravchuk family with `p` and `q = 1 - p` supplied separately.
    pub fn kravchuk_pq(p: f64, q: f64, n: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        if !(q > 0.0 && q < 1.0) || ((p + q) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("q", format!("must equal 1 - p, got {q}")));
        }
        if n == 0 {
            return Err(Error::invalid("N", "must be at least 1"));
        }
        Ok(Self { kind: FamilyKind::Kravchuk { p, q, n } })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn support(&self) -> Support {
        match self.kind {
            FamilyKind::Hermite => Support::Real,
            FamilyKind::Charlier { .. } => Support::NonNegativeIntegers,
            FamilyKind::Kravchuk { n, .. } => Support::Integers { upper: n },
        }
    }

    /// Highest admissible degree, `None` for infinite sequences.
    pub fn max_degree(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::Kravchuk { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, FamilyKind::Hermite)
    }

    pub fn coefficients(&self) -> RecurrenceCoefficients {
        let r = match self.kind {
            FamilyKind::Hermite => 2f64.sqrt(),
            FamilyKind::Charlier { mu } => -1.0 / mu.sqrt(),
            FamilyKind::Kravchuk { p, q, n } => 1.0 / (p * q * n as f64).sqrt(),
        };
        RecurrenceCoefficients { kind: self.kind, r }
    }

    /// Total mass of the weight: `sqrt(pi)` for Hermite, one otherwise.
    pub fn weight_mass(&self) -> f64 {
        match self.kind {
            FamilyKind::Hermite => PI.sqrt(),
            _ => 1.0,
        }
    }

    /// Constant `p_0` with unit norm under the weight.
    pub fn p0(&self) -> f64 {
        1.0 / self.weight_mass().sqrt()
    }

    fn check_point(&self, x: f64) -> Result<()> {
        let ok = match self.support() {
            Support::Real => x.is_finite(),
            Support::NonNegativeIntegers => x >= 0.0 && x.fract() == 0.0 && x.is_finite(),
            Support::Integers { upper } => {
                x >= 0.0 && x.fract() == 0.0 && x <= upper as f64
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("x = {x} is outside the support of {self}")))
        }
    }

    fn check_degree(&self, n_max: usize) -> Result<()> {
        match self.max_degree() {
            Some(top) if n_max > top => Err(Error::Domain(format!(
                "degree {n_max} exceeds N = {top} of {self}"
            ))),
            _ => Ok(()),
        }
    }

    /// Weight `sigma(x)`; discrete weights are built in log space.
    pub fn weight(&self, x: f64) -> Result<f64> {
        self.check_point(x)?;
        Ok(match self.kind {
            FamilyKind::Hermite => (-x * x).exp(),
            FamilyKind::Charlier { mu } => {
                let k = x as usize;
                (k as f64 * mu.ln() - mu - ln_factorial(k)).exp()
            }
            FamilyKind::Kravchuk { p, q, n } => {
                let k = x as usize;
                (ln_binomial(n, k) + xlny(k as f64, p) + xlny((n - k) as f64, q)).exp()
            }
        })
    }

    /// Values `p_0(x), ..., p_{n_max}(x)` by forward recurrence.
    pub fn eval_sequence(&self, x: f64, n_max: usize) -> Result<Vec<f64>> {
        self.check_point(x)?;
        self.check_degree(n_max)?;
        Ok(self.eval_unchecked(x, n_max))
    }

    /// Values at an arbitrary real `x` without support checks.
    ///
    /// Hermite values come from the forward recurrence. For the discrete
    /// families the forward recurrence loses all accuracy once `p_n(x)` starts
    /// to decay in `n`, so the sequence is taken as the null vector of the
    /// Jacobi matrix shifted by `x` (see [`Self::two_sided_sequence`]).
    pub(crate) fn eval_unchecked(&self, x: f64, n_max: usize) -> Vec<f64> {
        match self.kind {
            FamilyKind::Hermite => self.eval_forward(x, n_max),
            FamilyKind::Kravchuk { n, .. } => {
                let mut v = self.two_sided_sequence(x, n);
                v.truncate(n_max + 1);
                v
            }
            FamilyKind::Charlier { mu } => {
                // the sequence decays super-exponentially past n ~ (sqrt x + sqrt mu)^2
                let turn = (x.max(0.0).sqrt() + mu.sqrt()).powi(2).ceil() as usize;
                let top = 2 * n_max.max(turn) + 60;
                let mut v = self.two_sided_sequence(x, top);
                v.truncate(n_max + 1);
                v
            }
        }
    }

    /// Plain forward recurrence from `p_0`, `p_{-1} = 0`.
    pub fn eval_forward(&self, x: f64, n_max: usize) -> Vec<f64> {
        let c = self.coefficients();
        let r = c.r();
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(self.p0());
        let mut prev = 0.0;
        for n in 0..n_max {
            let cur = out[n];
            let next = ((r * x + c.s(n)) * cur - c.fbar(n) * prev) / c.fbar(n + 1);
            prev = cur;
            out.push(next);
        }
        out
    }

    /// `p_0(x)..p_top(x)` for `x` an eigenvalue of the order-`top + 1` Jacobi
    /// matrix, i.e. a solution of the recurrence with both `p_{-1} = 0` and
    /// `p_{top+1} = 0`.
    ///
    /// Twisted factorization: forward pivots from the top-left, backward
    /// pivots from the bottom-right, joined at the row with the smallest
    /// residual, so each component is propagated in its stable direction.
    pub(crate) fn two_sided_sequence(&self, x: f64, top: usize) -> Vec<f64> {
        let c = self.coefficients();
        let r = c.r();
        let sign = r.signum();
        // symmetric Jacobi matrix: diagonal b_n = -s_n / r, off-diagonal a_n = fbar_n / |r|
        let d: Vec<f64> = (0..=top).map(|n| -c.s(n) / r - x).collect();
        let e: Vec<f64> = (1..=top).map(|n| c.fbar(n) / r.abs()).collect();
        let scale = d.iter().chain(&e).fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
        let guard = |p: f64| if p == 0.0 { f64::EPSILON * scale } else { p };

        let mut fwd = vec![0.0; top + 1];
        fwd[0] = guard(d[0]);
        for j in 1..=top {
            fwd[j] = guard(d[j] - e[j - 1] * e[j - 1] / fwd[j - 1]);
        }
        let mut bwd = vec![0.0; top + 1];
        bwd[top] = guard(d[top]);
        for j in (0..top).rev() {
            bwd[j] = guard(d[j] - e[j] * e[j] / bwd[j + 1]);
        }
        let twist = (0..=top)
            .min_by(|&a, &b| {
                let ga = (fwd[a] + bwd[a] - d[a]).abs();
                let gb = (fwd[b] + bwd[b] - d[b]).abs();
                ga.total_cmp(&gb)
            })
            .expect("non-empty");

        let mut v = vec![0.0; top + 1];
        v[twist] = 1.0;
        for j in (0..twist).rev() {
            v[j] = -e[j] * v[j + 1] / fwd[j];
        }
        for j in twist + 1..=top {
            v[j] = -e[j - 1] * v[j - 1] / bwd[j];
        }
        let p0 = self.p0();
        let v0 = v[0];
        let mut s = 1.0;
        v.iter_mut().for_each(|vn| {
            *vn = s * p0 * *vn / v0;
            s *= sign;
        });
        v
    }

    /// Last point kept in the truncated Charlier support.
    pub fn charlier_cutoff(mu: f64) -> usize {
        let floor = (mu + 40.0 * mu.sqrt() + 40.0).ceil() as usize;
        let mode = mu.floor() as usize;
        let ln_w = |k: usize| k as f64 * mu.ln() - mu - ln_factorial(k);
        let ln_max = ln_w(mode);
        let ln_cut = CHARLIER_WEIGHT_CUTOFF.ln();
        let mut x = floor;
        while ln_w(x) - ln_max >= ln_cut {
            x += 1;
        }
        x
    }

    /// Support points used when the discrete support is summed over.
    pub fn discrete_points(&self) -> Option<std::ops::RangeInclusive<usize>> {
        match self.kind {
            FamilyKind::Hermite => None,
            FamilyKind::Charlier { mu } => Some(0..=Self::charlier_cutoff(mu)),
            FamilyKind::Kravchuk { n, .. } => Some(0..=n),
        }
    }

    /// `max_{m,n <= n_max} |<p_m, p_n> - delta_{mn}|`.
    ///
    /// Discrete families are summed over their (truncated) support; Hermite
    /// uses a Gauss rule of order `max(quad_order, n_max + 1)`.
    pub fn gram_residual(&self, n_max: usize, quad_order: Option<usize>) -> Result<f64> {
        self.check_degree(n_max)?;
        let dim = n_max + 1;
        let mut gram = vec![KahanSum::new(); dim * dim];
        let mut accumulate = |w: f64, vals: &[f64]| {
            for m in 0..dim {
                for n in m..dim {
                    gram[m * dim + n].add(w * vals[m] * vals[n]);
                }
            }
        };
        match self.discrete_points() {
            Some(points) => {
                for x in points {
                    let x = x as f64;
                    accumulate(self.weight(x)?, &self.eval_unchecked(x, n_max));
                }
            }
            None => {
                let rule = gauss_rule(self, quad_order.unwrap_or(0).max(n_max + 1))?;
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    accumulate(w, &self.eval_unchecked(x, n_max));
                }
            }
        }
        let mut worst = 0f64;
        for m in 0..dim {
            for n in m..dim {
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((gram[m * dim + n].value() - target).abs());
            }
        }
        Ok(worst)
    }

    /// Largest relative defect of the recurrence over `samples` when the
    /// polynomial values come from `route` (which must return at least
    /// `n_max + 1` values).
    pub fn recurrence_residual<F>(&self, n_max: usize, samples: &[f64], mut route: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<Vec<f64>>,
    {
        self.check_degree(n_max)?;
        let c = self.coefficients();
        let mut worst = 0f64;
        for &x in samples {
            self.check_point(x)?;
            let p = route(x)?;
            if p.len() < n_max + 1 {
                return Err(Error::Domain(format!(
                    "route returned {} values, need {}",
                    p.len(),
                    n_max + 1
                )));
            }
            for n in 0..n_max {
                let below = if n == 0 { 0.0 } else { c.fbar(n) * p[n - 1] };
                let defect = c.fbar(n + 1) * p[n + 1] + below - (c.r() * x + c.s(n)) * p[n];
                worst = worst.max(defect.abs() / p[n].abs().max(1.0));
            }
        }
        Ok(worst)
    }
}

/// Orthonormal Kravchuk polynomial `p_n(x)` through the terminating
/// hypergeometric series `2F1(-n, -x; -N; 1/p)`.
///
/// Independent of the recurrence: the normalization comes from the textbook
/// squared norm `(q/p)^n / C(N, n)` of the hypergeometric polynomial, and the
/// sign makes the leading coefficient positive.
pub fn kravchuk_hypergeometric(p: f64, top: usize, n: usize, x: usize) -> Result<f64> {
    if n > top || x > top {
        return Err(Error::Domain(format!("n = {n}, x = {x} must not exceed N = {top}")));
    }
    let q = 1.0 - p;
    // the series cancels badly for p > 1/2; reflect onto the q side
    if p > 0.5 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * kravchuk_hypergeometric(q, top, n, top - x)?);
    }
    let mut series = KahanSum::new();
    let mut term = 1.0;
    series.add(term);
    for k in 0..n.min(x) {
        // ratio of consecutive terms (-n+k)(-x+k) / ((-N+k)(k+1)) / p
        term *= ((n - k) as f64 * (x - k) as f64)
            / (-((top - k) as f64) * (k + 1) as f64 * p);
        series.add(term);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (0.5 * (ln_binomial(top, n) + n as f64 * (p / q).ln())).exp();
    Ok(sign * norm * series.value())
}

/// Fourier spectrum `S_n(x) = sigma(x) p_0 p_n(x)` of the `n`-th amplitude.
#[derive(Debug, Clone, Copy)]
pub struct Spectrum {
    family: PolynomialFamily,
    n: usize,
}

impl Spectrum {
    pub fn new(family: PolynomialFamily, n: usize) -> Result<Self> {
        family.check_degree(n)?;
        Ok(Self { family, n })
    }

    pub fn at(&self, x: f64) -> Result<f64> {
        let vals = self.family.eval_sequence(x, self.n)?;
        Ok(self.family.weight(x)? * vals[0] * vals[self.n])
    }

    pub fn degree(&self) -> usize {
        self.n
    }
}
