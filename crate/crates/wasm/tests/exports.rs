use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

use qwalk_wasm::{density_impl, dispersion_impl, simulate_impl, MAX_STEPS};

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn simulate_returns_parity_sites() {
    let p = simulate_impl(FRAC_PI_4, FRAC_PI_6, S, 0.0, 0.0, S, 100).unwrap();
    assert_eq!(p.len(), 101);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let p2 = simulate_impl(FRAC_PI_4, FRAC_PI_6, 1.0, 0.0, 0.0, 1.0, 100).unwrap();
    assert!(p.iter().zip(&p2).all(|(a, b)| (a - b).abs() < 1e-14));
}

#[test]
fn simulate_rejects_bad_input() {
    assert!(simulate_impl(PI / 2.0, FRAC_PI_6, 1.0, 0.0, 0.0, 0.0, 10).is_err());
    assert!(simulate_impl(FRAC_PI_4, FRAC_PI_6, 0.0, 0.0, 0.0, 0.0, 10).is_err());
    assert!(simulate_impl(FRAC_PI_4, FRAC_PI_6, 1.0, 0.0, 0.0, 0.0, MAX_STEPS + 1).is_err());
}

#[test]
fn density_grid_layout() {
    let g = density_impl(FRAC_PI_4, FRAC_PI_6, S, 0.0, 0.0, S, 201).unwrap();
    assert_eq!(g.len(), 402);
    let (x, f) = (g[200], g[201]);
    assert!(x.abs() < 1e-12);
    assert!((f - 1.0 / PI).abs() < 1e-12);
    assert!(density_impl(0.5, 0.5, 1.0, 0.0, 0.0, 0.0, 11).is_err());
}

#[test]
fn dispersion_is_bounded_by_support() {
    let g = dispersion_impl(FRAC_PI_4, FRAC_PI_6, 512).unwrap();
    assert_eq!(g.len() % 2, 0);
    let vmax = g.chunks(2).map(|c| c[1].abs()).fold(0.0, f64::max);
    assert!(vmax <= FRAC_PI_4.cos() + 1e-12);
    assert!(vmax > 0.7);
}
