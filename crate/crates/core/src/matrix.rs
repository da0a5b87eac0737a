//! Dense 2x2 complex matrices and the phase rotation `R(k) = diag(e^{ik}, e^{-ik})`.

use std::ops::Mul;

use num_complex::Complex64;

/// Unitarity tolerance: max absolute entry of `U U* - I`.
pub const UNITARY_TOL: f64 = 1e-12;

/// Row-major 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(p: Complex64, q: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(p, z, z, q)
    }

    /// `R(k) = diag(e^{ik}, e^{-ik})`.
    pub fn phase(k: f64) -> Self {
        Self::diag(Complex64::cis(k), Complex64::cis(-k))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Max absolute deviation of `U U*` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Mat2::identity())
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARY_TOL
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Mat2) -> Mat2 {
        Mat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Reduce an angle into `[-pi, pi)` before it reaches a trig call.
pub(crate) fn reduce_angle(w: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    (w + PI).rem_euclid(TAU) - PI
}

/// Low part of 2π beyond `f64::consts::TAU`.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `(w0 + kappa * t)` reduced into `[-π, π)`, accurate to a few ulps of π
/// even when `kappa * t` is large.
pub(crate) fn reduce_linear_phase(w0: f64, kappa: f64, t: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let exact_mod = |x: f64| {
        let n = (x / TAU).round();
        (-n).mul_add(TAU, x) - n * TAU_LO
    };
    let k = exact_mod(kappa);
    let p = k * t;
    let err = k.mul_add(t, -p);
    let r = exact_mod(p) + err + exact_mod(w0);
    (r + PI).rem_euclid(TAU) - PI
}
