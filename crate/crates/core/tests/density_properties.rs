use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI};

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use qwalk_core::harness::random;
use qwalk_core::{
    density_cdf, density_moment, konno_density, theorem1_density, theorem2_density, theorem3_density,
    CoinMatrix, DensitySource, LimitDensity,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Plain midpoint rule in the `x = a sin u` variable.
fn midpoint_moment(d: &LimitDensity, r: i32, n: usize) -> f64 {
    let a = d.scale;
    let h = PI / n as f64;
    (0..n)
        .map(|i| {
            let u = -PI / 2.0 + (i as f64 + 0.5) * h;
            let x = a * u.sin();
            x.powi(r) * d.pdf(x) * a * u.cos() * h
        })
        .sum()
}

fn random_densities(seed: u64, n: usize) -> Vec<LimitDensity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (t0, t1) = random::angle_pair(&mut rng);
            let (al, be) = random::spinor(&mut rng);
            theorem1_density(t0, t1, al, be).unwrap()
        })
        .collect()
}

#[test]
fn normalized_and_nonnegative() {
    for d in random_densities(11, 40) {
        assert_abs_diff_eq!(density_moment(&d, 0).unwrap(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(density_cdf(&d, d.scale), 1.0, epsilon = 1e-8);
        assert_eq!(density_cdf(&d, -d.scale), 0.0);
        for (x, f) in d.sample_grid(501, 0.0) {
            assert!(f >= 0.0, "f({x}) = {f}");
        }
    }
}

#[test]
fn symmetrization_recovers_konno() {
    for d in random_densities(12, 20) {
        for i in 1..200 {
            let x = d.scale * (-1.0 + i as f64 / 100.0);
            let k = konno_density(x, d.scale).unwrap();
            assert!((d.pdf(x) + d.pdf(-x) - 2.0 * k).abs() <= 1e-12 * k.max(1.0));
        }
    }
}

#[test]
fn cdf_monotone_and_differentiates_to_pdf() {
    for d in random_densities(13, 10) {
        let xs: Vec<f64> = (0..=400)
            .map(|i| d.scale * (-0.95 + 1.9 * i as f64 / 400.0))
            .collect();
        let fs = d.cdf_sorted(&xs);
        assert!(fs.windows(2).all(|w| w[1] >= w[0]));
        for (&x, &f) in xs.iter().zip(&fs) {
            assert!((f - d.cdf(x)).abs() < 1e-10);
            let h = 1e-6;
            let deriv = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
            assert!((deriv - d.pdf(x)).abs() < 1e-4, "x = {x}");
        }
    }
}

#[test]
fn second_moment_against_midpoint_oracle() {
    let d = theorem1_density(FRAC_PI_4, FRAC_PI_6, c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
    let oracle = midpoint_moment(&d, 2, 1_000_000);
    assert_abs_diff_eq!(density_moment(&d, 2).unwrap(), oracle, epsilon = 1e-9);
    assert_abs_diff_eq!(oracle, 1.0 - FRAC_1_SQRT_2, epsilon = 1e-9);
    for d in random_densities(14, 5) {
        for r in 1..=4 {
            assert_abs_diff_eq!(
                d.moment(r).unwrap(),
                midpoint_moment(&d, r as i32, 200_000),
                epsilon = 1e-9
            );
        }
    }
}

#[test]
fn linear_phase_with_pi_step_agrees_with_two_period() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let theta = random::angle(&mut rng, 0.1);
        let (al, be) = random::spinor(&mut rng);
        let h = CoinMatrix::orthogonal(theta).unwrap();
        let d3 = theorem3_density(h.a(), h.b(), al, be, 0.0).unwrap();
        // coin_at(1) of the linear-phase schedule with step pi is [[a, -b], [-c, d]],
        // the reflection coin at angle -theta.
        let d1 = theorem1_density(theta, -theta, al, be).unwrap();
        assert_abs_diff_eq!(d3.scale, d1.scale, epsilon = 1e-15);
        assert_abs_diff_eq!(d3.weight, d1.weight, epsilon = 1e-12);
    }
}

#[test]
fn phase_families_coincide_at_zero_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let u = random::unitary(&mut rng);
        let (al, be) = random::spinor(&mut rng);
        let w0 = rng.gen_range(-PI..PI);
        let f2 = theorem2_density(u.a(), u.b(), al, be, 0.0).unwrap();
        let f3 = theorem3_density(u.a(), u.b(), al, be, 0.0).unwrap();
        assert_eq!(f2.weight, f3.weight);
        let g2 = theorem2_density(u.a(), u.b(), al, be, w0).unwrap();
        let g3 = theorem3_density(u.a(), u.b(), al, be, -w0).unwrap();
        assert_abs_diff_eq!(g2.weight, g3.weight, epsilon = 1e-12);
    }
}

#[test]
fn branch_selection_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let (t0, t1) = random::angle_pair(&mut rng);
        let d = theorem1_density(t0, t1, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        // Two reflection coins always give det(H1 H0) = +1.
        assert_eq!(d.source, DensitySource::TwoPeriodPositiveDet);
        assert_abs_diff_eq!(d.scale, t0.cos().abs().min(t1.cos().abs()), epsilon = 1e-15);
    }
    let rot = CoinMatrix::rotation(FRAC_PI_4).unwrap();
    let refl = CoinMatrix::orthogonal(FRAC_PI_6).unwrap();
    let d = qwalk_core::theorem1_density_for_coins(&rot, &refl, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    assert_eq!(d.source, DensitySource::TwoPeriodNegativeDet);
    assert_abs_diff_eq!(d.scale, FRAC_PI_4.cos() * FRAC_PI_6.cos(), epsilon = 1e-15);
}

#[test]
fn round_trips_through_json() {
    for d in random_densities(18, 5) {
        let s = serde_json::to_string(&d).unwrap();
        let back: LimitDensity = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
