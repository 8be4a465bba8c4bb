//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Run with `cargo test -p coherent-ladder --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use coherent_ladder::closed_form::{self, kravchuk_populations, two_level};
use coherent_ladder::observables::summarize;
use coherent_ladder::oracle::{self, norm_drift, IntegratorSettings};
use coherent_ladder::polynomials::kravchuk_hypergeometric;
use coherent_ladder::special::poisson_pmf;
use coherent_ladder::spectral::SpectralSolution;
use coherent_ladder::trajectory::uniform_grid;
use coherent_ladder::{AmplitudeTrajectory, KravchukParameters, MultilevelSystem, PolynomialFamily, C64};

const FIG2_T_MAX: f64 = 30.0;
const FIG2_STEPS: usize = 600;
const FIG2_N: usize = 20;
const FIG2A_EPS: f64 = 0.0;
const FIG2B_EPS: f64 = 0.5;

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Criterion {
    parts: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.parts.push(Check::new(ok, detail));
    }

    fn below(&mut self, label: &str, value: f64, bound: f64) {
        self.check(value < bound, format!("{label} = {value:.3e} (< {bound:.0e})"));
    }
}

/// Oracle drifts of every scenario, gathered for criterion 10.
#[derive(Default)]
struct Drifts(Vec<(String, f64)>);

impl Drifts {
    fn record(&mut self, label: &str, tr: &AmplitudeTrajectory) {
        self.0.push((label.to_string(), norm_drift(tr)));
    }
}

fn max_level_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let len = x.len().max(y.len());
            (0..len)
                .map(|n| (x.get(n).copied().unwrap_or(0.0) - y.get(n).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn fig2(c: &mut Criterion, drifts: &mut Drifts, name: &str, eps: f64) {
    let start = Instant::now();
    let params = KravchukParameters::from_detuning(FIG2_N, eps).unwrap();
    let system = MultilevelSystem::kravchuk(&params);
    let grid = uniform_grid(FIG2_T_MAX, FIG2_STEPS);
    let exact = closed_form::solve(&system, &grid, None).unwrap();
    let exact_pops = closed_form::populations(&system, &grid, None).unwrap();
    let numeric = oracle::integrate(&system, &grid, &IntegratorSettings::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    drifts.record(name, &numeric);
    c.below(&format!("{name} max |rho err|"), exact_pops.max_abs_diff(&numeric.populations()), 1e-6);
    c.below(&format!("{name} max |amp err|"), exact.max_abs_diff(&numeric), 1e-6);
    c.below(&format!("{name} runtime [s]"), elapsed, 5.0);
}

/// `d rho_N / dt` from the oracle state: `2 Re(conj(a_N) i f_N e^{i eps_N t} a_{N-1})`.
fn top_population_slope(system: &MultilevelSystem, t: f64) -> (f64, f64) {
    let tr = oracle::integrate(system, &[0.0, t], &IntegratorSettings::default()).unwrap();
    let a = &tr.amps[1];
    let n = a.len() - 1;
    let da = C64::new(0.0, 1.0) * C64::from_polar(system.dipole(n), system.detuning(n) * t) * a[n - 1];
    (2.0 * (a[n].conj() * da).re, a[n].norm_sqr())
}

fn criterion_2(c: &mut Criterion) {
    let params = KravchukParameters::from_detuning(FIG2_N, FIG2A_EPS).unwrap();
    let system = MultilevelSystem::kravchuk(&params);
    let t_inv = PI / params.r;
    c.check((params.r - 0.2f64.sqrt()).abs() < 1e-15, format!("r = {:.12}", params.r));
    let (rho, _) = kravchuk_populations(&params, t_inv);
    c.check(rho[FIG2_N] >= 1.0 - 1e-8, format!("closed-form rho_20(pi/r) = {:.12}", rho[FIG2_N]));
    let (_, rho_oracle) = top_population_slope(&system, t_inv);
    c.check(rho_oracle >= 1.0 - 1e-8, format!("oracle rho_20(pi/r) = {rho_oracle:.12}"));
    // root of d rho_20/dt on the oracle, bracketed around pi/r
    let (mut lo, mut hi) = (t_inv - 0.3, t_inv + 0.3);
    let (mut g_lo, _) = top_population_slope(&system, lo);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (g, _) = top_population_slope(&system, mid);
        if (g > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let t_oracle = 0.5 * (lo + hi);
    c.below("|t_inv(oracle) - pi/r|", (t_oracle - t_inv).abs(), 1e-6);
}

fn criterion_3(c: &mut Criterion, drifts: &mut Drifts) {
    let params = KravchukParameters::from_detuning(FIG2_N, FIG2B_EPS).unwrap();
    let system = MultilevelSystem::kravchuk(&params);
    let grid = uniform_grid(FIG2_T_MAX, FIG2_STEPS);
    let target = 4.0 / (4.0 / FIG2_N as f64 + FIG2B_EPS * FIG2B_EPS);
    let closed = summarize(&closed_form::populations(&system, &grid, None).unwrap());
    let numeric = oracle::integrate(&system, &grid, &IntegratorSettings::default()).unwrap();
    drifts.record("fig2b (criterion 3)", &numeric);
    let orc = summarize(&numeric.populations());
    c.below("|max <n> closed - 8.8889|", (closed.max_mean_quanta() - target).abs(), 1e-4);
    c.below("|max <n> oracle - 8.8889|", (orc.max_mean_quanta() - target).abs(), 1e-4);
    c.check(closed.max_mean_quanta() < FIG2_N as f64, format!("max <n> = {:.6} < N", closed.max_mean_quanta()));
}

fn criterion_4(c: &mut Criterion, drifts: &mut Drifts) {
    let system = MultilevelSystem::harmonic(0.0).unwrap();
    let grid = uniform_grid(4.0, 400);
    let settings = IntegratorSettings { truncation_levels: Some(60), ..Default::default() };
    let numeric = oracle::integrate(&system, &grid, &settings).unwrap();
    drifts.record("harmonic resonant", &numeric);
    let pops = numeric.populations();
    let levels = numeric.levels();
    let poisson: Vec<Vec<f64>> = grid.iter().map(|&t| poisson_pmf(t * t, levels - 1)).collect();
    c.below("sup |rho - Poisson(t^2)|", max_level_diff(&pops.pops, &poisson), 1e-6);
    let series = summarize(&pops);
    let mean_err = series
        .mean_quanta
        .iter()
        .zip(&grid)
        .map(|(m, t)| (m - t * t).abs())
        .fold(0.0, f64::max);
    c.below("max |<n> - t^2|", mean_err, 1e-6);
    let deficit = series.norm.iter().map(|s| (1.0 - s).abs()).fold(0.0, f64::max);
    c.below("normalization deficit", deficit, 1e-8);
}

fn criterion_5(c: &mut Criterion, drifts: &mut Drifts) {
    let eps = 1.0;
    let system = MultilevelSystem::harmonic(eps).unwrap();
    let steps = 400;
    let grid = uniform_grid(4.0 * PI, steps);
    let closed = closed_form::populations(&system, &grid, None).unwrap();
    let numeric = oracle::integrate(&system, &grid, &IntegratorSettings::default()).unwrap();
    drifts.record("harmonic detuned", &numeric);
    let orc = numeric.populations();
    c.below("sup |rho closed - rho oracle|", closed.max_abs_diff(&orc), 1e-6);
    // grid index k + steps/2 is t + 2 pi
    let half = steps / 2;
    let period_err = |p: &[Vec<f64>]| {
        (0..=half)
            .map(|k| max_level_diff(&p[k..=k], &p[k + half..=k + half]))
            .fold(0.0, f64::max)
    };
    c.below("closed-form |rho(t + 2pi) - rho(t)|", period_err(&closed.pops), 1e-8);
    c.below("oracle |rho(t + 2pi) - rho(t)|", period_err(&orc.pops), 1e-8);
    let amps = closed_form::harmonic_detuned(1.0, 1e-3, 40).unwrap();
    let mean: f64 = amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
    c.below("|<n>(eps=1e-3, t=1) - 1|", (mean - 1.0).abs(), 1e-5);
}

fn criterion_6(c: &mut Criterion) {
    let mut worst = 0f64;
    let mut worst_sin = 0f64;
    for eps in [0.0, 0.5, 2.0] {
        let params = KravchukParameters::from_detuning(1, eps).unwrap();
        for k in 0..=1000 {
            let t = 10.0 * k as f64 / 1000.0;
            let tl = two_level(eps, t);
            let (kr, _) = kravchuk_populations(&params, t);
            worst = worst.max((tl[0] - kr[0]).abs()).max((tl[1] - kr[1]).abs());
            if eps == 0.0 {
                worst_sin = worst_sin.max((tl[1] - t.sin().powi(2)).abs());
            }
        }
    }
    c.below("|two_level - Kravchuk(N=1)|", worst, 1e-14);
    c.below("|rho_1 - sin^2 t| at eps=0", worst_sin, 1e-14);
}

fn criterion_7(c: &mut Criterion) {
    let d = closed_form::poisson_limit(&[25, 50, 100, 200], 1.0, 1.0).unwrap();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    c.check(decreasing, format!("d_N = {:?} strictly decreasing", d.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()));
    c.below("d_200", d[3], 1e-2);
}

fn criterion_8(c: &mut Criterion) {
    let mut worst = 0f64;
    for n in [1usize, 2, 5, 10, 20, 35, 50] {
        for eps in [-2.0, -0.5, 0.0, 0.5, 1.3, 2.0] {
            let params = KravchukParameters::from_detuning(n, eps).unwrap();
            let sol = SpectralSolution::new(params.family());
            for k in 0..=25 {
                let t = 2.0 * k as f64;
                let a = sol.amplitudes_at(t, n).unwrap();
                let b = closed_form::kravchuk_amplitudes(&params, t);
                worst = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(worst, f64::max);
            }
        }
    }
    c.below("Kravchuk spectral sum vs closed form", worst, 1e-10);
    let sol = SpectralSolution::new(PolynomialFamily::hermite());
    let mut worst = 0f64;
    for k in 0..=30 {
        let t = 3.0 * k as f64 / 30.0;
        let a = sol.amplitudes_at(t, 20).unwrap();
        let b = closed_form::harmonic_resonant(t, 20);
        worst = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(worst, f64::max);
    }
    c.below("Hermite quadrature vs closed form", worst, 1e-8);
}

fn criterion_9(c: &mut Criterion) {
    let h = PolynomialFamily::hermite().gram_residual(30, None).unwrap();
    c.below("Hermite gram (n <= 30)", h, 1e-10);
    let mut worst = 0f64;
    for mu in [0.1, 0.5, 1.0, 2.0, 3.0, 4.0] {
        worst = worst.max(PolynomialFamily::charlier(mu).unwrap().gram_residual(30, None).unwrap());
    }
    c.below("Charlier gram (mu <= 4, n <= 30)", worst, 1e-10);
    let mut worst = 0f64;
    for n in [1usize, 2, 5, 10, 20, 30, 40, 50] {
        for p in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95] {
            worst = worst.max(PolynomialFamily::kravchuk(p, n).unwrap().gram_residual(n, None).unwrap());
        }
    }
    c.below("Kravchuk gram (N <= 50, p in [0.05, 0.95])", worst, 1e-10);
    let mut worst = 0f64;
    for n in 1..=10usize {
        for p in [0.05, 0.2, 0.4, 0.5, 0.7, 0.95] {
            let fam = PolynomialFamily::kravchuk(p, n).unwrap();
            for x in 0..=n {
                let rec = fam.eval_sequence(x as f64, n).unwrap();
                for (k, v) in rec.iter().enumerate() {
                    let hyp = kravchuk_hypergeometric(p, n, k, x).unwrap();
                    worst = worst.max((v - hyp).abs() / hyp.abs().max(1.0));
                }
            }
        }
    }
    c.below("Kravchuk recurrence vs hypergeometric (N <= 10)", worst, 1e-10);
}

fn criterion_10(c: &mut Criterion, drifts: &Drifts) {
    // scenarios not covered above
    let mut extra = Drifts::default();
    let s = IntegratorSettings::default();
    for eps in [0.0, 0.5, 2.0] {
        let sys = MultilevelSystem::two_level(eps).unwrap();
        extra.record(&format!("two-level eps={eps}"), &oracle::integrate(&sys, &uniform_grid(10.0, 200), &s).unwrap());
    }
    let worst = drifts.0.iter().chain(&extra.0).fold(("", 0f64), |acc, (l, d)| {
        if *d > acc.1 { (l.as_str(), *d) } else { acc }
    });
    c.below(&format!("max norm drift ({})", worst.0), worst.1, 1e-8);

    let mut rev = 0f64;
    for (n, eps, t_end) in [(20usize, 0.0, 30.0), (20, 0.5, 30.0), (1, 0.5, 10.0)] {
        let sys = MultilevelSystem::kravchuk(&KravchukParameters::from_detuning(n, eps).unwrap());
        let mut init = vec![C64::new(0.0, 0.0); n + 1];
        init[0] = C64::new(1.0, 0.0);
        let fwd = oracle::propagate(&sys, n + 1, &init, 0.0, &[t_end], &s).unwrap();
        let back = oracle::propagate(&sys, n + 1, &fwd[0], t_end, &[0.0], &s).unwrap();
        rev = back[0].iter().zip(&init).map(|(a, b)| (a - b).norm()).fold(rev, f64::max);
    }
    for eps in [0.0, 1.0] {
        let sys = MultilevelSystem::harmonic(eps).unwrap();
        let levels = oracle::default_truncation(&sys, 4.0);
        let mut init = vec![C64::new(0.0, 0.0); levels];
        init[0] = C64::new(1.0, 0.0);
        let fwd = oracle::propagate(&sys, levels, &init, 0.0, &[4.0], &s).unwrap();
        let back = oracle::propagate(&sys, levels, &fwd[0], 4.0, &[0.0], &s).unwrap();
        rev = back[0].iter().zip(&init).map(|(a, b)| (a - b).norm()).fold(rev, f64::max);
    }
    c.below("forward-backward return error", rev, 1e-7);
}

fn main() -> ExitCode {
    let mut drifts = Drifts::default();
    let mut results: Vec<(&str, Criterion)> = Vec::new();

    let mut c = Criterion::default();
    fig2(&mut c, &mut drifts, "fig2a", FIG2A_EPS);
    fig2(&mut c, &mut drifts, "fig2b", FIG2B_EPS);
    results.push(("1 Figure 2 reproduction (Kravchuk N=20)", c));

    let mut c = Criterion::default();
    criterion_2(&mut c);
    results.push(("2 Resonant inversion", c));

    let mut c = Criterion::default();
    criterion_3(&mut c, &mut drifts);
    results.push(("3 Bounded off-resonant excitation", c));

    let mut c = Criterion::default();
    criterion_4(&mut c, &mut drifts);
    results.push(("4 Harmonic resonant (Poisson, <n> = t^2)", c));

    let mut c = Criterion::default();
    criterion_5(&mut c, &mut drifts);
    results.push(("5 Harmonic detuned", c));

    let mut c = Criterion::default();
    criterion_6(&mut c);
    results.push(("6 Two-level identity", c));

    let mut c = Criterion::default();
    criterion_7(&mut c);
    results.push(("7 Poisson limit", c));

    let mut c = Criterion::default();
    criterion_8(&mut c);
    results.push(("8 Spectral-method equivalence", c));

    let mut c = Criterion::default();
    criterion_9(&mut c);
    results.push(("9 Polynomial infrastructure", c));

    let mut c = Criterion::default();
    criterion_10(&mut c, &drifts);
    results.push(("10 Oracle health", c));

    let mut failures = 0;
    for (name, crit) in &results {
        let ok = crit.parts.iter().all(|p| p.ok);
        if !ok {
            failures += 1;
        }
        let details: Vec<String> = crit
            .parts
            .iter()
            .map(|p| format!("{}{}", if p.ok { "" } else { "!! " }, p.detail))
            .collect();
        println!("{} [{}] {}", if ok { "PASS" } else { "FAIL" }, name, details.join("; "));
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failures, results.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
