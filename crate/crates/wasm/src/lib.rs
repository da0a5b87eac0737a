//! Browser bindings: a two-period walk, its limit density and its dispersion.
//!
//! Each export returns a flat `Float64Array`. The `*_impl` functions carry
//! the logic and are what the native tests exercise.

use num_complex::Complex64;
use qwalk_core::spectral::spectrum;
use qwalk_core::{new_walk, theorem1_density, CoinSchedule};
use wasm_bindgen::prelude::*;

const DENSITY_MARGIN: f64 = 0.05;
/// Largest walk the page may request.
pub const MAX_STEPS: usize = 5000;

fn spinor(
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
) -> Result<(Complex64, Complex64), String> {
    let al = Complex64::new(alpha_re, alpha_im);
    let be = Complex64::new(beta_re, beta_im);
    let n = (al.norm_sqr() + be.norm_sqr()).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err("initial spinor must be nonzero".into());
    }
    Ok((al / n, be / n))
}

/// Probabilities at `-t, -t + 2, ..., t`. The initial spinor is normalized first.
pub fn simulate_impl(
    theta0: f64,
    theta1: f64,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    t: usize,
) -> Result<Vec<f64>, String> {
    if t > MAX_STEPS {
        return Err(format!("t = {t} exceeds {MAX_STEPS}"));
    }
    let (al, be) = spinor(alpha_re, alpha_im, beta_re, beta_im)?;
    let sched = CoinSchedule::two_period_angles(theta0, theta1).map_err(|e| e.to_string())?;
    let dist = new_walk(al, be)
        .and_then(|w| w.evolve(&sched, t))
        .map_err(|e| e.to_string())?
        .distribution();
    Ok(dist.entries.iter().map(|e| e.1).collect())
}

/// Interleaved `x0, f0, x1, f1, ...` of the limit density of `X_t / t`.
pub fn density_impl(
    theta0: f64,
    theta1: f64,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let (al, be) = spinor(alpha_re, alpha_im, beta_re, beta_im)?;
    let d = theorem1_density(theta0, theta1, al, be).map_err(|e| e.to_string())?;
    Ok(d.sample_grid(points, DENSITY_MARGIN)
        .into_iter()
        .flat_map(|(x, f)| [x, f])
        .collect())
}

/// Interleaved `k, h0(k)` over `[0, 2pi)`, skipping degenerate wavenumbers.
pub fn dispersion_impl(theta0: f64, theta1: f64, points: usize) -> Result<Vec<f64>, String> {
    let rows = spectrum(theta0, theta1, points).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().flat_map(|r| [r.k, r.velocity[0]]).collect())
}

#[wasm_bindgen]
pub fn simulate(
    theta0: f64,
    theta1: f64,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    t: usize,
) -> Result<Vec<f64>, JsError> {
    simulate_impl(theta0, theta1, alpha_re, alpha_im, beta_re, beta_im, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn limit_density(
    theta0: f64,
    theta1: f64,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    density_impl(theta0, theta1, alpha_re, alpha_im, beta_re, beta_im, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dispersion(theta0: f64, theta1: f64, points: usize) -> Result<Vec<f64>, JsError> {
    dispersion_impl(theta0, theta1, points).map_err(|e| JsError::new(&e))
}
