//! Verification of simulated walks against their limit laws and exact
//! reductions.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::coin::{CoinMatrix, CoinSchedule, ScheduleSpec};
use crate::density::{theorem1_density, theorem1_density_for_coins, theorem3_density, LimitDensity};
use crate::error::{domain, Error, Result};
use crate::spectral;
use crate::walk::{new_walk, Distribution};

/// Moment orders recorded per time in a [`ConvergenceReport`].
pub const REPORT_MOMENTS: u32 = 4;

/// Sup-distance between the CDF of `X_t / t` and the limit CDF.
///
/// Both one-sided limits of the empirical step function are compared at
/// every atom, so this is the exact supremum over the real line.
pub fn ks_distance(dist: &Distribution, d: &LimitDensity) -> Result<f64> {
    if dist.time == 0 {
        return Err(domain("KS distance needs t >= 1"));
    }
    let t = dist.time as f64;
    let atoms: Vec<(f64, f64)> = dist.entries.iter().map(|&(x, p)| (x as f64 / t, p)).collect();
    Ok(ks_distance_atoms(&atoms, d))
}

/// Sup-distance between an atomic measure (`(location, mass)`, sorted by
/// location) and the CDF of `d`.
pub fn ks_distance_atoms(atoms: &[(f64, f64)], d: &LimitDensity) -> f64 {
    let xs: Vec<f64> = atoms.iter().map(|a| a.0).collect();
    let cdf = d.cdf_sorted(&xs);
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (&(_, p), f) in atoms.iter().zip(cdf) {
        let above = below + p;
        worst = worst.max((below - f).abs()).max((above - f).abs());
        below = above;
    }
    worst.min(1.0)
}

/// Largest absolute difference in `P(X_t = x)` between two distributions at
/// the same time.
pub fn max_probability_difference(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.time != b.time || a.entries.len() != b.entries.len() {
        return Err(domain("distributions at different times"));
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(p, q)| (p.1 - q.1).abs())
        .fold(0.0, f64::max))
}

/// Compares the alternating-phase walk with the one-period walk under `U`
/// started from `(e^{i w0/2} alpha, e^{-i w0/2} beta)`; returns the max
/// absolute probability difference at time `t`.
#[allow(clippy::too_many_arguments)]
pub fn case1_reduction_check(
    coin: &CoinMatrix,
    w0: f64,
    kappa1: f64,
    alpha: Complex64,
    beta: Complex64,
    t: usize,
) -> Result<f64> {
    let modulated = CoinSchedule::case1(*coin, w0, kappa1)?;
    let lhs = new_walk(alpha, beta)?.evolve(&modulated, t)?.distribution();
    let half = Complex64::cis(w0 / 2.0);
    let plain = CoinSchedule::one_period(*coin);
    let rhs = new_walk(half * alpha, half.conj() * beta)?
        .evolve(&plain, t)?
        .distribution();
    max_probability_difference(&lhs, &rhs)
}

/// Max over a 1001-point grid on the support of `|f_lin(x) - f_two(x)|`, where
/// `f_lin` is the linear-phase density with `w_t = pi t` and `f_two` the
/// two-period density of the coins that schedule produces.
pub fn theorem_equivalence_check(entries: [f64; 4], alpha: Complex64, beta: Complex64) -> Result<f64> {
    let [a, b, c, d] = entries.map(|v| Complex64::new(v, 0.0));
    let base = CoinMatrix::new(a, b, c, d)?;
    let sched = CoinSchedule::case2(base, 0.0, std::f64::consts::PI)?;
    let real = |m: CoinMatrix| {
        let e = m.matrix().entries().map(|z| Complex64::new(z.re, 0.0));
        CoinMatrix::new(e[0], e[1], e[2], e[3])
    };
    let h0 = real(sched.coin_at(0))?;
    let h1 = real(sched.coin_at(1))?;
    let two = theorem1_density_for_coins(&h0, &h1, alpha, beta)?;
    let lin = theorem3_density(a, b, alpha, beta, 0.0)?;
    if two.source != crate::density::DensitySource::TwoPeriodPositiveDet {
        return Err(Error::Internal(
            "w_t = pi t produced a negative-determinant pair".into(),
        ));
    }
    let s = two.scale.max(lin.scale);
    Ok((0..1001)
        .map(|i| {
            let x = -s + 2.0 * s * i as f64 / 1000.0;
            (lin.pdf(x) - two.pdf(x)).abs()
        })
        .fold(0.0, f64::max))
}

/// Thresholds applied by [`convergence_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceCriteria {
    /// KS distance at the largest time must fall below this.
    pub ks_threshold: f64,
    /// Allowed increase of KS between consecutive times.
    pub monotone_slack: f64,
}

impl Default for ConvergenceCriteria {
    fn default() -> Self {
        Self {
            ks_threshold: 0.05,
            monotone_slack: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub t: usize,
    pub ks: f64,
    /// `|E[(X_t/t)^r] - int x^r f|` for `r = 1..=4`.
    pub moment_err: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub schedule: CoinSchedule,
    pub density: LimitDensity,
    pub criteria: ConvergenceCriteria,
    pub records: Vec<ConvergenceRecord>,
    pub final_ks_ok: bool,
    pub ks_nonincreasing: bool,
    pub pass: bool,
}

fn record_for(
    schedule: &CoinSchedule,
    d: &LimitDensity,
    limits: &[f64],
    t: usize,
    alpha: Complex64,
    beta: Complex64,
) -> Result<ConvergenceRecord> {
    let dist = new_walk(alpha, beta)?.evolve(schedule, t)?.distribution();
    let ks = ks_distance(&dist, d)?;
    let moment_err = (1..=REPORT_MOMENTS)
        .zip(limits)
        .map(|(r, lim)| Ok((dist.moment(r, true)? - lim).abs()))
        .collect::<Result<_>>()?;
    Ok(ConvergenceRecord { t, ks, moment_err })
}

/// Simulates `schedule` at each time in `t_list` and measures the distance
/// of `X_t / t` from `d`.
pub fn convergence_report(
    schedule: &CoinSchedule,
    d: &LimitDensity,
    t_list: &[usize],
    alpha: Complex64,
    beta: Complex64,
    criteria: ConvergenceCriteria,
) -> Result<ConvergenceReport> {
    if t_list.is_empty() || t_list.windows(2).any(|w| w[0] >= w[1]) || t_list[0] == 0 {
        return Err(domain("t_list must be nonempty, positive and strictly ascending"));
    }
    let limits: Vec<f64> = (1..=REPORT_MOMENTS).map(|r| d.moment(r)).collect::<Result<_>>()?;

    #[cfg(feature = "parallel")]
    let records: Vec<ConvergenceRecord> = {
        use rayon::prelude::*;
        t_list
            .par_iter()
            .map(|&t| record_for(schedule, d, &limits, t, alpha, beta))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<ConvergenceRecord> = t_list
        .iter()
        .map(|&t| record_for(schedule, d, &limits, t, alpha, beta))
        .collect::<Result<_>>()?;

    let final_ks_ok = records.last().unwrap().ks < criteria.ks_threshold;
    let ks_nonincreasing = records
        .windows(2)
        .all(|w| w[1].ks <= w[0].ks + criteria.monotone_slack);
    Ok(ConvergenceReport {
        schedule: schedule.clone(),
        density: *d,
        criteria,
        records,
        final_ks_ok,
        ks_nonincreasing,
        pass: final_ks_ok && ks_nonincreasing,
    })
}

/// Outcome of a fixed battery of randomized checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub check: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Runs [`case1_reduction_check`] on `cases` random parameter sets.
pub fn case1_reduction_suite<R: Rng>(rng: &mut R, cases: usize, t: usize) -> Result<SuiteReport> {
    let mut max_error: f64 = 0.0;
    for _ in 0..cases {
        let p = random::case1_params(rng);
        let e = case1_reduction_check(&p.coin, p.w0, p.kappa, p.alpha, p.beta, t)?;
        max_error = max_error.max(e);
    }
    let tolerance = 1e-12;
    Ok(SuiteReport {
        check: "case1-reduction",
        cases,
        max_error,
        tolerance,
        pass: max_error < tolerance,
    })
}

/// Runs [`theorem_equivalence_check`] on `cases` random real orthogonal coins.
pub fn theorem_equivalence_suite<R: Rng>(rng: &mut R, cases: usize) -> Result<SuiteReport> {
    let mut max_error: f64 = 0.0;
    for _ in 0..cases {
        let entries = random::real_orthogonal_entries(rng);
        let (alpha, beta) = random::spinor(rng);
        max_error = max_error.max(theorem_equivalence_check(entries, alpha, beta)?);
    }
    let tolerance = 1e-12;
    Ok(SuiteReport {
        check: "theorem3-equiv",
        cases,
        max_error,
        tolerance,
        pass: max_error < tolerance,
    })
}

/// Maximum deviations measured by [`spectral_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub theta0: f64,
    pub theta1: f64,
    /// Closed-form vs numeric eigenvalues over random `(theta0, theta1, k)`.
    pub eigenvalue_dev: f64,
    /// `max | |lambda_j| - 1 |` on a 4096-point grid.
    pub modulus_dev: f64,
    /// Analytic vs finite-difference group velocity.
    pub gradient_dev: f64,
    /// `|max_k |h(k)| - min(|cos theta0|, |cos theta1|)|`.
    pub support_edge_dev: f64,
    /// Momentum-space vs closed-form density moments, `r = 0..=6`.
    pub moment_dev: f64,
    pub pass: bool,
}

/// Momentum-space identities of the two-period walk at `(theta0, theta1)`,
/// plus closed-form eigenvalue checks on `triples` random parameter sets.
pub fn spectral_suite<R: Rng>(
    rng: &mut R,
    theta0: f64,
    theta1: f64,
    alpha: Complex64,
    beta: Complex64,
    triples: usize,
) -> Result<SpectralReport> {
    use std::f64::consts::TAU;
    let psi = crate::walk::Spinor::new(alpha, beta);

    let mut eigenvalue_dev: f64 = 0.0;
    for _ in 0..triples {
        let (t0, t1) = random::angle_pair(rng);
        let k = rng.gen_range(0.0..TAU);
        let es = spectral::two_period_eigensystem(t0, t1, k, psi)?;
        for j in 0..2 {
            let closed = spectral::closed_form_eigenvalue(t0, t1, k, j)?;
            eigenvalue_dev = eigenvalue_dev.max((es.lambda[j] - closed).norm());
        }
    }

    let mut modulus_dev: f64 = 0.0;
    for i in 0..4096 {
        let k = TAU * (i as f64 + 0.5) / 4096.0;
        match spectral::two_period_eigensystem(theta0, theta1, k, psi) {
            Ok(es) => {
                for l in es.lambda {
                    modulus_dev = modulus_dev.max((l.norm() - 1.0).abs());
                }
            }
            Err(Error::DegenerateSymbol { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let step = 1e-6;
    let mut gradient_dev: f64 = 0.0;
    for i in 0..256 {
        let k = TAU * (i as f64 + 0.37) / 256.0;
        for j in 0..2 {
            let h = match spectral::group_velocity(theta0, theta1, k, j) {
                Ok(h) => h,
                Err(Error::DegenerateSymbol { .. }) => continue,
                Err(e) => return Err(e),
            };
            let lp = spectral::closed_form_eigenvalue(theta0, theta1, k + step, j)?;
            let lm = spectral::closed_form_eigenvalue(theta0, theta1, k - step, j)?;
            let fd = -(lp / lm).arg() / (4.0 * step);
            gradient_dev = gradient_dev.max((h - fd).abs());
        }
    }

    let edge = theta0.cos().abs().min(theta1.cos().abs());
    let support_edge_dev = (spectral::max_group_velocity(theta0, theta1, 100_000)? - edge).abs();

    let d = theorem1_density(theta0, theta1, alpha, beta)?;
    let mut moment_dev: f64 = 0.0;
    for r in 0..=6 {
        let fourier = spectral::limit_moment_integral(theta0, theta1, alpha, beta, r)?;
        moment_dev = moment_dev.max((fourier - d.moment(r)?).abs());
    }

    let pass = eigenvalue_dev < 1e-10
        && modulus_dev < 1e-12
        && gradient_dev < 1e-5
        && support_edge_dev < 1e-6
        && moment_dev < 1e-5;
    Ok(SpectralReport {
        theta0,
        theta1,
        eigenvalue_dev,
        modulus_dev,
        gradient_dev,
        support_edge_dev,
        moment_dev,
        pass,
    })
}

/// Builds the limit density matching a schedule, when one is known.
pub fn limit_density_for(schedule: &CoinSchedule, alpha: Complex64, beta: Complex64) -> Result<LimitDensity> {
    use crate::coin::ScheduleKind;
    match schedule.kind() {
        ScheduleKind::TwoPeriodOrthogonal => {
            theorem1_density_for_coins(&schedule.coin_at(0), &schedule.coin_at(1), alpha, beta)
        }
        ScheduleKind::OnePeriod => {
            // A one-period walk is the alternating-phase family with w_t = 0.
            let u = schedule.coin_at(0);
            crate::density::theorem2_density(u.a(), u.b(), alpha, beta, 0.0)
        }
        ScheduleKind::Case1 => {
            let u = schedule.base_coin().unwrap();
            crate::density::theorem2_density(u.a(), u.b(), alpha, beta, schedule.phase_at(0).unwrap())
        }
        ScheduleKind::Case2 => {
            let u = schedule.base_coin().unwrap();
            theorem3_density(u.a(), u.b(), alpha, beta, schedule.phase_at(0).unwrap())
        }
        ScheduleKind::NPeriod => Err(domain("no limit density is available for n-period schedules")),
    }
}

/// Descriptor for [`ScheduleSpec`]-driven callers.
pub fn limit_density_for_spec(
    spec: &ScheduleSpec,
    alpha: Complex64,
    beta: Complex64,
) -> Result<LimitDensity> {
    limit_density_for(&spec.build()?, alpha, beta)
}

/// Seeded generators of valid random parameters.
pub mod random {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    use num_complex::Complex64;
    use rand::Rng;

    use crate::coin::CoinMatrix;

    /// Angle at least `margin` away from every multiple of pi/2.
    pub fn angle<R: Rng>(rng: &mut R, margin: f64) -> f64 {
        let quadrant = rng.gen_range(0..4) as f64;
        quadrant * FRAC_PI_2 + rng.gen_range(margin..FRAC_PI_2 - margin) - PI
    }

    /// Two admissible angles whose symbol stays well away from degeneracy.
    pub fn angle_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
        loop {
            let t0 = angle(rng, 0.15);
            let t1 = angle(rng, 0.15);
            let near_multiple_of_pi = |x: f64| {
                let r = x.rem_euclid(PI);
                r.min(PI - r) < 0.2
            };
            if !near_multiple_of_pi(t0 - t1) && !near_multiple_of_pi(t0 + t1) {
                return (t0, t1);
            }
        }
    }

    /// Normalized spinor with random moduli and phases.
    pub fn spinor<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
        let mix: f64 = rng.gen_range(0.0..FRAC_PI_2);
        let (s, c) = mix.sin_cos();
        (
            Complex64::from_polar(c, rng.gen_range(0.0..TAU)),
            Complex64::from_polar(s, rng.gen_range(0.0..TAU)),
        )
    }

    /// Unitary with all entries of modulus at least `sin 0.15`.
    pub fn unitary<R: Rng>(rng: &mut R) -> CoinMatrix {
        let theta = rng.gen_range(0.15..FRAC_PI_2 - 0.15);
        let (s, c) = f64::sin_cos(theta);
        let (p, q, g) = (
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        );
        let e = Complex64::cis(g);
        CoinMatrix::new(
            e * Complex64::from_polar(c, p),
            e * Complex64::from_polar(s, q),
            -e * Complex64::from_polar(s, -q),
            e * Complex64::from_polar(c, -p),
        )
        .expect("construction is unitary")
    }

    /// Real orthogonal entries `[a, b, c, d]`, reflection or rotation form.
    pub fn real_orthogonal_entries<R: Rng>(rng: &mut R) -> [f64; 4] {
        let (s, c) = angle(rng, 0.1).sin_cos();
        if rng.gen_bool(0.5) {
            [c, s, s, -c]
        } else {
            [c, s, -s, c]
        }
    }

    #[derive(Debug, Clone, Copy)]
    pub struct Case1Params {
        pub coin: CoinMatrix,
        pub w0: f64,
        pub kappa: f64,
        pub alpha: Complex64,
        pub beta: Complex64,
    }

    pub fn case1_params<R: Rng>(rng: &mut R) -> Case1Params {
        let coin = unitary(rng);
        let (alpha, beta) = spinor(rng);
        Case1Params {
            coin,
            w0: rng.gen_range(-TAU..TAU),
            kappa: rng.gen_range(-TAU..TAU),
            alpha,
            beta,
        }
    }
}
