//! Fourier-space analysis of the two-period walk.
//!
//! In momentum space one step acts as the symbol `R(k) U`. Two steps of the
//! two-period walk act as `M(k) = R(k) H1 R(k) H0`, whose eigenvalues are
//! `lambda_j = A + (-1)^j i sqrt(1 - A^2)` with `A = c0 c1 cos 2k + s0 s1`.
//! The per-step group velocity `h_j(k) = i lambda_j' / (2 lambda_j)` and the
//! overlaps of the initial spinor with the eigenvectors determine every
//! asymptotic moment of `X_t / t`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::coin::CoinMatrix;
use crate::error::{domain, Error, Result};
use crate::matrix::{Mat2, UNITARY_TOL};
use crate::walk::{Spinor, MAX_MOMENT_ORDER};

/// Eigenvalues closer than this are treated as coincident.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Half-width of the interval excluded around each degenerate wavenumber.
const EXCLUSION_HALF_WIDTH: f64 = 5e-5;

const CLOSED_FORM_TOL: f64 = 1e-10;

/// `R(k) U` at a fixed wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolMatrix {
    pub k: f64,
    pub matrix: Mat2,
}

/// One-step symbol `R(k) coin`.
pub fn symbol(k: f64, coin: &CoinMatrix) -> Result<SymbolMatrix> {
    let defect = coin.matrix().unitarity_defect();
    if !(defect <= UNITARY_TOL) {
        return Err(Error::Unitarity { defect });
    }
    Ok(SymbolMatrix {
        k,
        matrix: Mat2::phase(k) * *coin.matrix(),
    })
}

/// Eigenpairs of the two-step symbol, labelled so that `j = 0` has
/// `Im lambda >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub lambda: [Complex64; 2],
    pub vectors: [[Complex64; 2]; 2],
    /// `|<v_j | psi0>|^2`.
    pub overlaps: [f64; 2],
}

/// Validated pair of reflection-form angles.
#[derive(Debug, Clone, Copy)]
struct Angles {
    c0: f64,
    s0: f64,
    c1: f64,
    s1: f64,
}

impl Angles {
    fn new(theta0: f64, theta1: f64) -> Result<Self> {
        CoinMatrix::orthogonal(theta0)?;
        CoinMatrix::orthogonal(theta1)?;
        if theta0 == theta1 {
            return Err(Error::EqualAngle);
        }
        let (s0, c0) = theta0.sin_cos();
        let (s1, c1) = theta1.sin_cos();
        Ok(Self { c0, s0, c1, s1 })
    }

    /// `A(k) = c0 c1 cos 2k + s0 s1`, the real part of both eigenvalues.
    fn real_part(&self, k: f64) -> f64 {
        self.c0 * self.c1 * (2.0 * k).cos() + self.s0 * self.s1
    }

    fn imag_magnitude(&self, k: f64) -> f64 {
        let a = self.real_part(k);
        (1.0 - a * a).max(0.0).sqrt()
    }

    fn product(&self, k: f64) -> Mat2 {
        let h0 = Mat2::real(self.c0, self.s0, self.s0, -self.c0);
        let h1 = Mat2::real(self.c1, self.s1, self.s1, -self.c1);
        let r = Mat2::phase(k);
        r * h1 * r * h0
    }

    fn velocity(&self, k: f64, j: usize) -> Result<f64> {
        let root = self.imag_magnitude(k);
        if 2.0 * root < DEGENERACY_TOL {
            return Err(Error::DegenerateSymbol { k, gap: 2.0 * root });
        }
        let sign = if j == 0 { 1.0 } else { -1.0 };
        Ok(-sign * self.c0 * self.c1 * (2.0 * k).sin() / root)
    }

    /// Wavenumbers in `[0, 2pi)` where `A(k) = +-1`.
    fn degenerate_points(&self) -> Vec<f64> {
        let cc = self.c0 * self.c1;
        let mut out = Vec::new();
        for target in [1.0, -1.0] {
            let v = (target - self.s0 * self.s1) / cc;
            if v.abs() > 1.0 + 1e-9 {
                continue;
            }
            let base = v.clamp(-1.0, 1.0).acos() / 2.0;
            for k in [base, -base, base + PI, PI - base] {
                out.push(k.rem_euclid(TAU));
            }
        }
        out
    }
}

/// `R(k) H1 R(k) H0` for reflection-form coins at `theta0`, `theta1`.
pub fn two_period_symbol(theta0: f64, theta1: f64, k: f64) -> Result<SymbolMatrix> {
    let ang = Angles::new(theta0, theta1)?;
    Ok(SymbolMatrix {
        k,
        matrix: ang.product(k),
    })
}

/// Closed-form eigenvalue `lambda_j(k)`.
pub fn closed_form_eigenvalue(theta0: f64, theta1: f64, k: f64, j: usize) -> Result<Complex64> {
    let ang = Angles::new(theta0, theta1)?;
    let sign = if j == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::new(ang.real_part(k), sign * ang.imag_magnitude(k)))
}

/// Closed-form (unnormalized) eigenvector
/// `(s0 c1 e^{2ik} - c0 s1, i(-c0 c1 sin 2k + (-1)^j sqrt(1 - A^2)))`.
pub fn closed_form_eigenvector(theta0: f64, theta1: f64, k: f64, j: usize) -> Result<[Complex64; 2]> {
    let ang = Angles::new(theta0, theta1)?;
    let sign = if j == 0 { 1.0 } else { -1.0 };
    let first = Complex64::cis(2.0 * k) * (ang.s0 * ang.c1) - ang.c0 * ang.s1;
    let second = Complex64::new(
        0.0,
        -ang.c0 * ang.c1 * (2.0 * k).sin() + sign * ang.imag_magnitude(k),
    );
    Ok([first, second])
}

/// Eigenvalues of a 2x2 matrix from the centred discriminant
/// `((a - d)/2)^2 + b c`, which stays accurate near a double eigenvalue.
fn eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let mean = (m.a + m.d) * 0.5;
    let half = (m.a - m.d) * 0.5;
    let disc = (half * half + m.b * m.c).sqrt();
    [mean + disc, mean - disc]
}

fn eigenvector(m: &Mat2, lambda: Complex64) -> [Complex64; 2] {
    let u = [m.b, lambda - m.a];
    let v = [lambda - m.d, m.c];
    let nu = u[0].norm_sqr() + u[1].norm_sqr();
    let nv = v[0].norm_sqr() + v[1].norm_sqr();
    let (w, n) = if nu >= nv { (u, nu) } else { (v, nv) };
    let n = n.sqrt();
    [w[0] / n, w[1] / n]
}

fn overlap(v: &[Complex64; 2], psi: &[Complex64; 2]) -> f64 {
    (v[0].conj() * psi[0] + v[1].conj() * psi[1]).norm_sqr()
}

fn eigensystem(ang: &Angles, k: f64, psi: &[Complex64; 2]) -> Result<EigenSystem> {
    let m = ang.product(k);
    let [mut l0, mut l1] = eigenvalues(&m);
    if l0.im < l1.im {
        std::mem::swap(&mut l0, &mut l1);
    }
    let gap = (l0 - l1).norm();
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateSymbol { k, gap });
    }
    let root = ang.imag_magnitude(k);
    let a = ang.real_part(k);
    let closed = [Complex64::new(a, root), Complex64::new(a, -root)];
    let dev = (l0 - closed[0]).norm().max((l1 - closed[1]).norm());
    if dev > CLOSED_FORM_TOL {
        return Err(Error::Internal(format!(
            "numeric eigenvalues deviate from closed form by {dev:e} at k = {k}"
        )));
    }
    let v0 = eigenvector(&m, l0);
    let v1 = eigenvector(&m, l1);
    Ok(EigenSystem {
        lambda: [l0, l1],
        vectors: [v0, v1],
        overlaps: [overlap(&v0, psi), overlap(&v1, psi)],
    })
}

/// Eigen-decomposition of `R(k) H1 R(k) H0` with overlaps against `psi0`.
pub fn two_period_eigensystem(theta0: f64, theta1: f64, k: f64, psi0: Spinor) -> Result<EigenSystem> {
    let ang = Angles::new(theta0, theta1)?;
    eigensystem(&ang, k, &psi0.as_array())
}

/// Per-step group velocity `h_j(k) = -(1/2) d arg(lambda_j) / dk`.
pub fn group_velocity(theta0: f64, theta1: f64, k: f64, j: usize) -> Result<f64> {
    if j > 1 {
        return Err(domain(format!("branch index {j} must be 0 or 1")));
    }
    Angles::new(theta0, theta1)?.velocity(k, j)
}

/// `max_k |h_0(k)|` over a uniform grid of `points` wavenumbers in `[0, pi)`.
pub fn max_group_velocity(theta0: f64, theta1: f64, points: usize) -> Result<f64> {
    let ang = Angles::new(theta0, theta1)?;
    let mut best: f64 = 0.0;
    for i in 0..points {
        let k = PI * i as f64 / points as f64;
        if let Ok(h) = ang.velocity(k, 0) {
            best = best.max(h.abs());
        }
    }
    Ok(best)
}

/// One row of the dispersion table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub k: f64,
    pub lambda: [Complex64; 2],
    pub velocity: [f64; 2],
}

/// Eigenvalues and group velocities on `points` uniform wavenumbers in
/// `[0, 2pi)`; degenerate wavenumbers are skipped.
pub fn spectrum(theta0: f64, theta1: f64, points: usize) -> Result<Vec<SpectrumRow>> {
    let ang = Angles::new(theta0, theta1)?;
    let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let k = TAU * i as f64 / points as f64;
        let es = match eigensystem(&ang, k, &psi) {
            Ok(es) => es,
            Err(Error::DegenerateSymbol { .. }) => continue,
            Err(e) => return Err(e),
        };
        rows.push(SpectrumRow {
            k,
            lambda: es.lambda,
            velocity: [ang.velocity(k, 0)?, ang.velocity(k, 1)?],
        });
    }
    Ok(rows)
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn midpoint_sum(ang: &Angles, psi: &[Complex64; 2], r: u32, n: usize, skip: &[f64]) -> Result<f64> {
    let dk = TAU / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let k = (i as f64 + 0.5) * dk;
        if skip
            .iter()
            .any(|&s| circular_distance(k, s) < EXCLUSION_HALF_WIDTH)
        {
            continue;
        }
        let es = match eigensystem(ang, k, psi) {
            Ok(es) => es,
            Err(Error::DegenerateSymbol { .. }) => continue,
            Err(e) => return Err(e),
        };
        for j in 0..2 {
            total += ang.velocity(k, j)?.powi(r as i32) * es.overlaps[j];
        }
    }
    Ok(total / n as f64)
}

/// `int_0^{2pi} dk/2pi sum_j h_j(k)^r |<v_j(k)|psi0>|^2`, the limit of
/// `E[(X_t / t)^r]` computed in momentum space.
pub fn limit_moment_integral(
    theta0: f64,
    theta1: f64,
    alpha: Complex64,
    beta: Complex64,
    r: u32,
) -> Result<f64> {
    if r > MAX_MOMENT_ORDER {
        return Err(domain(format!("moment order {r} exceeds {MAX_MOMENT_ORDER}")));
    }
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > crate::walk::NORMALIZATION_TOL {
        return Err(Error::Normalization { norm });
    }
    let ang = Angles::new(theta0, theta1)?;
    let psi = [alpha, beta];
    let skip = ang.degenerate_points();

    let mut n = 4096;
    let mut prev = midpoint_sum(&ang, &psi, r, n, &skip)?;
    loop {
        n *= 2;
        let next = midpoint_sum(&ang, &psi, r, n, &skip)?;
        let diff = (next - prev).abs();
        if diff <= 1e-12 {
            return Ok(next);
        }
        if n >= 1 << 21 {
            if diff > 1e-6 {
                return Err(Error::Internal(format!(
                    "momentum quadrature did not settle: successive grids differ by {diff:e}"
                )));
            }
            return Ok(next);
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6};

    const P4: f64 = FRAC_PI_4;
    const P6: f64 = FRAC_PI_6;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symbol_at_zero_and_pi() {
        let h = CoinMatrix::hadamard();
        assert_eq!(symbol(0.0, &h).unwrap().matrix.max_abs_diff(h.matrix()), 0.0);
        let s = symbol(PI, &h).unwrap().matrix;
        let m = h.matrix();
        let neg = Mat2::new(-m.a, -m.b, -m.c, -m.d);
        assert!(s.max_abs_diff(&neg) < 1e-15);
        assert!(s.is_unitary());
    }

    #[test]
    fn symbol_composition() {
        let u = CoinMatrix::orthogonal(0.4).unwrap();
        let ru = CoinMatrix::from_mat(Mat2::phase(0.7) * *u.matrix()).unwrap();
        let lhs = symbol(0.3, &ru).unwrap().matrix;
        let rhs = Mat2::phase(1.0) * *u.matrix();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn eigenvalues_at_k_zero() {
        let psi = Spinor::new(c(1.0, 0.0), c(0.0, 0.0));
        let es = two_period_eigensystem(P4, P6, 0.0, psi).unwrap();
        let a = (PI / 12.0).cos();
        assert!((es.lambda[0] - c(a, (PI / 12.0).sin())).norm() < 1e-12);
        assert!((es.lambda[1] - c(a, -(PI / 12.0).sin())).norm() < 1e-12);
        assert!((a - 0.96593).abs() < 1e-5);
        assert!(((es.lambda[0] * es.lambda[1]) - 1.0).norm() < 1e-12);
        assert!((es.overlaps[0] + es.overlaps[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_vectors_are_parallel_to_closed_form() {
        let psi = Spinor::new(c(0.6, 0.0), c(0.0, 0.8));
        for &k in &[0.1, 0.7, 2.0, 4.4] {
            let es = two_period_eigensystem(0.5, 1.2, k, psi).unwrap();
            for j in 0..2 {
                let v = closed_form_eigenvector(0.5, 1.2, k, j).unwrap();
                let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                let ip = es.vectors[j][0].conj() * v[0] + es.vectors[j][1].conj() * v[1];
                assert!((ip.norm() / n - 1.0).abs() < 1e-12);
            }
            let ip = es.vectors[0][0].conj() * es.vectors[1][0] + es.vectors[0][1].conj() * es.vectors[1][1];
            assert!(ip.norm() < 1e-10);
        }
    }

    #[test]
    fn group_velocity_examples() {
        let h = group_velocity(P4, P6, P4, 0).unwrap();
        let step = 1e-6;
        let arg = |k: f64| {
            two_period_symbol(P4, P6, k)
                .map(|s| eigenvalues(&s.matrix))
                .unwrap()
        };
        let pick = |l: [Complex64; 2]| if l[0].im >= l[1].im { l[0] } else { l[1] };
        let fd = -(pick(arg(P4 + step)) / pick(arg(P4 - step))).arg() / (4.0 * step);
        assert!((h - fd).abs() < 1e-8, "{h} vs {fd}");
        assert!((h + 0.6547).abs() < 1e-4, "{h}");
        for &k in &[0.2, 1.3, 3.9] {
            let h0 = group_velocity(0.3, 1.1, k, 0).unwrap();
            let h1 = group_velocity(0.3, 1.1, k, 1).unwrap();
            assert!((h0 + h1).abs() < 1e-15);
        }
        assert!(group_velocity(P4, P6, 0.0, 2).is_err());
    }

    #[test]
    fn degenerate_wavenumbers_detected() {
        // theta1 = theta0 + pi makes H1 = -H0, so A(0) = 1.
        let t0 = 0.4;
        let t1 = 0.4 + PI;
        let psi = Spinor::new(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            two_period_eigensystem(t0, t1, 0.0, psi),
            Err(Error::DegenerateSymbol { .. })
        ));
        assert!(matches!(
            group_velocity(t0, t1, 0.0, 0),
            Err(Error::DegenerateSymbol { .. })
        ));
        let ang = Angles::new(t0, t1).unwrap();
        assert!(ang
            .degenerate_points()
            .iter()
            .any(|&k| circular_distance(k, 0.0) < 1e-6));
    }

    #[test]
    fn moment_integral_basics() {
        let (al, be) = (c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2));
        assert!((limit_moment_integral(P4, P6, al, be, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!(limit_moment_integral(P4, P6, al, be, 1).unwrap().abs() < 1e-8);
        let m2 = limit_moment_integral(P4, P6, al, be, 2).unwrap();
        assert!((m2 - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-6);
        assert!(limit_moment_integral(P4, P6, al, be, 17).is_err());
    }

    #[test]
    fn spectrum_rows_cover_grid() {
        let rows = spectrum(P4, P6, 64).unwrap();
        assert_eq!(rows.len(), 64);
        for r in rows {
            assert!((r.lambda[0].norm() - 1.0).abs() < 1e-12);
            assert!((r.velocity[0] + r.velocity[1]).abs() < 1e-15);
        }
    }
}
