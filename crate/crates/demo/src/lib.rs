//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Grids are returned flat, row-major over time: entry `k * levels + n` is
//! `rho_n(t_k)` with `t_k = k * t_max / steps`.

use coherent_ladder::oracle::{self, IntegratorSettings};
use coherent_ladder::trajectory::uniform_grid;
use coherent_ladder::{closed_form, KravchukParameters, MultilevelSystem};
use wasm_bindgen::prelude::*;

/// Upper bounds that keep the page responsive.
pub const MAX_LEVELS: usize = 200;
pub const MAX_STEPS: usize = 2000;

fn check_grid(t_max: f64, steps: usize) -> Result<(), String> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(format!("t_max must be positive, got {t_max}"));
    }
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_STEPS}, got {steps}"));
    }
    Ok(())
}

fn kravchuk(n: usize, epsilon: f64) -> Result<KravchukParameters, String> {
    if n > MAX_LEVELS {
        return Err(format!("N must not exceed {MAX_LEVELS}"));
    }
    KravchukParameters::from_detuning(n, epsilon).map_err(|e| e.to_string())
}

/// Closed-form Kravchuk populations, `(steps + 1) x (N + 1)`.
pub fn kravchuk_grid(n: usize, epsilon: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_grid(t_max, steps)?;
    let params = kravchuk(n, epsilon)?;
    Ok(uniform_grid(t_max, steps)
        .into_iter()
        .flat_map(|t| closed_form::kravchuk_populations(&params, t).0)
        .collect())
}

/// Poisson populations of the harmonic ladder, `(steps + 1) x levels`.
pub fn harmonic_grid(epsilon: f64, t_max: f64, steps: usize, levels: usize) -> Result<Vec<f64>, String> {
    check_grid(t_max, steps)?;
    if !(1..=MAX_LEVELS).contains(&levels) || !epsilon.is_finite() {
        return Err(format!("need 1 <= levels <= {MAX_LEVELS} and finite epsilon"));
    }
    Ok(uniform_grid(t_max, steps)
        .into_iter()
        .flat_map(|t| closed_form::harmonic_populations(epsilon, t, levels - 1))
        .collect())
}

/// Per-time `max_n |rho_n closed - rho_n oracle|` for a Kravchuk ladder.
pub fn kravchuk_oracle_error(n: usize, epsilon: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    check_grid(t_max, steps)?;
    let params = kravchuk(n, epsilon)?;
    let system = MultilevelSystem::kravchuk(&params);
    let grid = uniform_grid(t_max, steps);
    let numeric = oracle::integrate(&system, &grid, &IntegratorSettings::default()).map_err(|e| e.to_string())?;
    Ok(grid
        .iter()
        .zip(&numeric.amps)
        .map(|(&t, amps)| {
            let (exact, _) = closed_form::kravchuk_populations(&params, t);
            exact
                .iter()
                .zip(amps)
                .map(|(r, a)| (r - a.norm_sqr()).abs())
                .fold(0.0, f64::max)
        })
        .collect())
}

#[wasm_bindgen(js_name = kravchukGrid)]
pub fn kravchuk_grid_js(n: usize, epsilon: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    kravchuk_grid(n, epsilon, t_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = harmonicGrid)]
pub fn harmonic_grid_js(epsilon: f64, t_max: f64, steps: usize, levels: usize) -> Result<Vec<f64>, JsError> {
    harmonic_grid(epsilon, t_max, steps, levels).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = kravchukOracleError)]
pub fn kravchuk_oracle_error_js(n: usize, epsilon: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    kravchuk_oracle_error(n, epsilon, t_max, steps).map_err(|e| JsError::new(&e))
}
