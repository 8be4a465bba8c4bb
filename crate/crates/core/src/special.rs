//! Log-space combinatorics and compensated summation.

use num_complex::Complex64 as C64;

/// `ln(n!)`.
///
/// Summed logs up to 256, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 256 {
        // summed logs: relative error a few ulp of the result
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if n <= 256 {
        // product form keeps small binomials exact-ish
        (1..=k)
            .map(|j| ((n - k + j) as f64 / j as f64).ln())
            .sum()
    } else {
        ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
    }
}

/// `x ln y` with the convention `0 ln 0 = 0`.
pub(crate) fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (independent real and imaginary parts).
#[derive(Debug, Default, Clone, Copy)]
pub struct ComplexKahanSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexKahanSum {
    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

/// Poisson probabilities `P_0..=P_{n_max}` with mean `lambda`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| {
            if lambda == 0.0 {
                if n == 0 { 1.0 } else { 0.0 }
            } else {
                (n as f64 * lambda.ln() - lambda - ln_factorial(n)).exp()
            }
        })
        .collect()
}

/// Binomial probabilities `C(N,n) (1-y)^{N-n} y^n`, `n = 0..=N`.
pub fn binomial_pmf(n_trials: usize, y: f64) -> Vec<f64> {
    let y = y.clamp(0.0, 1.0);
    (0..=n_trials)
        .map(|n| {
            let ln = ln_binomial(n_trials, n)
                + xlny((n_trials - n) as f64, 1.0 - y)
                + xlny(n as f64, y);
            ln.exp()
        })
        .collect()
}

/// Level count keeping a Poisson tail below ~1e-10: `ceil(l + 12 sqrt(l) + 30)`.
pub fn poisson_truncation(lambda_max: f64) -> usize {
    let l = lambda_max.max(0.0);
    (l + 12.0 * l.sqrt() + 30.0).ceil() as usize
}
