use std::f64::consts::{PI, TAU};

use qwalk_core::harness::random;
use qwalk_core::{CoinMatrix, CoinSchedule, Mat2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn circular(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    r.min(TAU - r)
}

fn schedules(rng: &mut ChaCha8Rng) -> Vec<CoinSchedule> {
    let u = random::unitary(rng);
    vec![
        CoinSchedule::one_period(u),
        CoinSchedule::n_period(vec![u, CoinMatrix::hadamard(), random::unitary(rng)]).unwrap(),
        CoinSchedule::two_period_angles(0.4, 1.2).unwrap(),
        CoinSchedule::case1(u, rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)).unwrap(),
        CoinSchedule::case2(u, rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)).unwrap(),
    ]
}

#[test]
fn every_coin_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sched in schedules(&mut rng) {
        for t in 0..=1000 {
            assert!(
                sched.coin_at(t).matrix().unitarity_defect() < 1e-12,
                "{:?} t = {t}",
                sched.kind()
            );
        }
    }
}

/// Phase carried by an entry relative to the unmodulated coin.
fn extracted(z: num_complex::Complex64, base: num_complex::Complex64) -> f64 {
    (z / base).arg()
}

#[test]
fn alternating_phase_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let u = random::unitary(&mut rng);
        let kappa = rng.gen_range(-10.0..10.0);
        let sched = CoinSchedule::case1(u, rng.gen_range(-10.0..10.0), kappa).unwrap();
        for t in 0..1000 {
            let w = extracted(sched.coin_at(t).a(), u.a());
            let w1 = extracted(sched.coin_at(t + 1).a(), u.a());
            assert!(circular(w1 + w - kappa) < 1e-12, "t = {t}");
            assert!(sched.conjugation_identity_check(t).unwrap());
        }
    }
}

#[test]
fn linear_phase_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let u = random::unitary(&mut rng);
        let kappa = rng.gen_range(-10.0..10.0);
        let sched = CoinSchedule::case2(u, rng.gen_range(-10.0..10.0), kappa).unwrap();
        for t in 0..1000 {
            let w = extracted(sched.coin_at(t).b(), u.b());
            let w1 = extracted(sched.coin_at(t + 1).b(), u.b());
            assert!(circular(w1 - w - kappa) < 1e-12, "t = {t}");
            assert!(sched.conjugation_identity_check(t).unwrap());
        }
    }
}

#[test]
fn phase_rotation_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let k1 = rng.gen_range(0.0..TAU);
        let k2 = rng.gen_range(0.0..TAU);
        let prod = Mat2::phase(k1) * Mat2::phase(k2);
        assert!(prod.max_abs_diff(&Mat2::phase(k1 + k2)) <= 1e-15);
        assert!(Mat2::phase(k1).adjoint().max_abs_diff(&Mat2::phase(-k1)) <= 1e-15);
    }
}

#[test]
fn linear_phase_with_pi_step_is_two_period_orthogonal() {
    let base = CoinMatrix::orthogonal(PI / 5.0).unwrap();
    let sched = CoinSchedule::case2(base, 0.0, PI).unwrap();
    for t in 0..100 {
        let u = sched.coin_at(t);
        assert!(u.is_real());
        assert!(u.matrix().max_abs_diff(sched.coin_at(t % 2).matrix()) < 1e-12);
    }
}
