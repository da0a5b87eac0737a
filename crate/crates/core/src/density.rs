//! Closed-form weak-limit densities of `X_t / t`.
//!
//! Every density here has the shape `f(x) = f_K(x; a) (1 - w x)` on `(-a, a)`,
//! where `f_K` is the Konno density and `w` the skew weight fixed by the
//! initial coin state. Integrals are taken after substituting `x = a sin u`,
//! which cancels the inverse square-root divergence at `x = +-a`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinMatrix, ZERO_ENTRY_TOL};
use crate::error::{domain, Error, Result};
use crate::quadrature::integrate;
use crate::walk::{MAX_MOMENT_ORDER, NORMALIZATION_TOL};

const QUAD_TOL: f64 = 1e-13;

/// Which closed form produced a [`LimitDensity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensitySource {
    /// Plain `f_K(x; a)`.
    Konno,
    /// Two-period orthogonal walk with `det(H1 H0) > 0`: scale `min(|a0|, |a1|)`.
    TwoPeriodPositiveDet,
    /// Two-period orthogonal walk with `det(H1 H0) < 0`: scale `|a0 a1|`.
    TwoPeriodNegativeDet,
    /// Alternating-phase family, `w_{t+1} + w_t = kappa1`.
    AlternatingPhase,
    /// Linear-phase family, `w_{t+1} = w_t + kappa2`.
    LinearPhase,
}

/// `f(x) = f_K(x; scale) (1 - weight x)` on `(-scale, scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitDensity {
    pub scale: f64,
    pub weight: f64,
    pub source: DensitySource,
}

/// Konno density `sqrt(1 - a^2) / (pi (1 - x^2) sqrt(a^2 - x^2))` on `(-a, a)`.
/// Zero outside the open support, including at `x = +-a`.
pub fn konno_density(x: f64, a_mod: f64) -> Result<f64> {
    check_scale(a_mod)?;
    Ok(konno_unchecked(x, a_mod))
}

fn konno_unchecked(x: f64, a: f64) -> f64 {
    if !(x.abs() < a) {
        return 0.0;
    }
    (1.0 - a * a).sqrt() / (PI * (1.0 - x * x) * (a * a - x * x).sqrt())
}

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("density scale {a} outside (0, 1)")))
    }
}

fn check_spinor(alpha: Complex64, beta: Complex64) -> Result<()> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Normalization { norm });
    }
    Ok(())
}

impl LimitDensity {
    /// Fails unless `0 < scale < 1` and `1 - weight x >= 0` on the support.
    pub fn new(scale: f64, weight: f64, source: DensitySource) -> Result<Self> {
        check_scale(scale)?;
        if !weight.is_finite() || weight.abs() * scale > 1.0 + 1e-12 {
            return Err(domain(format!(
                "skew weight {weight} makes the density negative on (-{scale}, {scale})"
            )));
        }
        Ok(Self {
            scale,
            weight,
            source,
        })
    }

    pub fn konno(scale: f64) -> Result<Self> {
        Self::new(scale, 0.0, DensitySource::Konno)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        konno_unchecked(x, self.scale) * (1.0 - self.weight * x)
    }

    /// `x^r f(x) dx/du` at `x = a sin u`; smooth on `[-pi/2, pi/2]`.
    fn transformed(&self, u: f64, r: u32) -> f64 {
        let a = self.scale;
        let x = a * u.sin();
        let base = (1.0 - a * a).sqrt() / (PI * (1.0 - x * x));
        base * (1.0 - self.weight * x) * x.powi(r as i32)
    }

    fn angle_of(&self, x: f64) -> f64 {
        (x / self.scale).clamp(-1.0, 1.0).asin()
    }

    /// `F(x) = int_{-scale}^x f`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= -self.scale {
            return 0.0;
        }
        if x >= self.scale {
            return 1.0;
        }
        let u = self.angle_of(x);
        integrate(|v| self.transformed(v, 0), -FRAC_PI_2, u, QUAD_TOL).clamp(0.0, 1.0)
    }

    /// CDF at each of `xs`, which must be sorted ascending; integrates
    /// incrementally between successive points.
    pub fn cdf_sorted(&self, xs: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        let mut prev = -FRAC_PI_2;
        xs.iter()
            .map(|&x| {
                if x <= -self.scale {
                    return 0.0;
                }
                if x >= self.scale {
                    return 1.0;
                }
                let u = self.angle_of(x).max(prev);
                acc += integrate(|v| self.transformed(v, 0), prev, u, QUAD_TOL);
                prev = u;
                acc.clamp(0.0, 1.0)
            })
            .collect()
    }

    /// `int x^r f(x) dx` over the support.
    pub fn moment(&self, r: u32) -> Result<f64> {
        if r > MAX_MOMENT_ORDER {
            return Err(domain(format!("moment order {r} exceeds {MAX_MOMENT_ORDER}")));
        }
        Ok(integrate(
            |u| self.transformed(u, r),
            -FRAC_PI_2,
            FRAC_PI_2,
            QUAD_TOL,
        ))
    }

    /// Uniform sample of `(x, f(x))` over `[-scale - margin, scale + margin]`.
    pub fn sample_grid(&self, points: usize, margin: f64) -> Vec<(f64, f64)> {
        let lo = -self.scale - margin;
        let hi = self.scale + margin;
        match points {
            0 => vec![],
            1 => vec![(0.0, self.pdf(0.0))],
            n => (0..n)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    (x, self.pdf(x))
                })
                .collect(),
        }
    }

    /// CSV with header `x,f`.
    pub fn write_grid_csv<W: Write>(&self, mut w: W, points: usize, margin: f64) -> io::Result<()> {
        writeln!(w, "x,f")?;
        for (x, f) in self.sample_grid(points, margin) {
            writeln!(w, "{x:?},{f:?}")?;
        }
        Ok(())
    }
}

/// `F(x)` of `d`.
pub fn density_cdf(d: &LimitDensity, x: f64) -> f64 {
    d.cdf(x)
}

/// `int x^r f(x) dx` of `d`.
pub fn density_moment(d: &LimitDensity, r: u32) -> Result<f64> {
    d.moment(r)
}

/// `|alpha|^2 - |beta|^2 + (alpha conj(beta) + conj(alpha) beta) b0 / a0`.
fn two_period_weight(alpha: Complex64, beta: Complex64, ratio: f64) -> f64 {
    alpha.norm_sqr() - beta.norm_sqr() + 2.0 * (alpha * beta.conj()).re * ratio
}

/// Limit density of the two-period walk alternating the reflection-form
/// coins at `theta0` and `theta1`.
pub fn theorem1_density(theta0: f64, theta1: f64, alpha: Complex64, beta: Complex64) -> Result<LimitDensity> {
    let h0 = CoinMatrix::orthogonal(theta0)?;
    let h1 = CoinMatrix::orthogonal(theta1)?;
    if theta0 == theta1 {
        return Err(Error::EqualAngle);
    }
    theorem1_density_for_coins(&h0, &h1, alpha, beta)
}

/// Limit density of the two-period walk `H0, H1, H0, ...` for arbitrary real
/// orthogonal coins. The sign of `det(H1 H0)` picks the support:
/// `min(|a0|, |a1|)` when positive, `|a0 a1|` when negative.
pub fn theorem1_density_for_coins(
    h0: &CoinMatrix,
    h1: &CoinMatrix,
    alpha: Complex64,
    beta: Complex64,
) -> Result<LimitDensity> {
    if !h0.is_real() || !h1.is_real() {
        return Err(domain("two-period limit density requires real orthogonal coins"));
    }
    h0.require_nonzero_entries()?;
    h1.require_nonzero_entries()?;
    if h0.matrix().max_abs_diff(h1.matrix()) <= ZERO_ENTRY_TOL {
        return Err(Error::EqualAngle);
    }
    check_spinor(alpha, beta)?;
    let det = (*h1.matrix() * *h0.matrix()).det().re;
    if (det.abs() - 1.0).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "det(H1 H0) = {det} for orthogonal coins"
        )));
    }
    let (a0, a1) = (h0.a().re, h1.a().re);
    let weight = two_period_weight(alpha, beta, h0.b().re / a0);
    if det > 0.0 {
        LimitDensity::new(
            a0.abs().min(a1.abs()),
            weight,
            DensitySource::TwoPeriodPositiveDet,
        )
    } else {
        LimitDensity::new((a0 * a1).abs(), weight, DensitySource::TwoPeriodNegativeDet)
    }
}

fn phase_family_weight(
    a: Complex64,
    b: Complex64,
    alpha: Complex64,
    beta: Complex64,
    phase: Complex64,
) -> Result<f64> {
    let am = a.norm();
    if !(am > 0.0 && am < 1.0) {
        return Err(domain(format!("|a| = {am} outside (0, 1)")));
    }
    check_spinor(alpha, beta)?;
    let cross = a * alpha * (b * beta).conj() * phase + (a * alpha).conj() * b * beta * phase.conj();
    let cross = cross / a.norm_sqr();
    if cross.im.abs() > 1e-12 {
        return Err(Error::Internal(format!(
            "skew weight has imaginary part {}",
            cross.im
        )));
    }
    Ok(alpha.norm_sqr() - beta.norm_sqr() + cross.re)
}

/// Limit density of the alternating-phase walk `[[a e^{iw_t}, b], [c, d e^{-iw_t}]]`.
pub fn theorem2_density(
    a: Complex64,
    b: Complex64,
    alpha: Complex64,
    beta: Complex64,
    w0: f64,
) -> Result<LimitDensity> {
    let w = phase_family_weight(a, b, alpha, beta, Complex64::cis(w0))?;
    LimitDensity::new(a.norm(), w, DensitySource::AlternatingPhase)
}

/// Limit density of the linear-phase walk `[[a, b e^{iw_t}], [c e^{-iw_t}, d]]`.
pub fn theorem3_density(
    a: Complex64,
    b: Complex64,
    alpha: Complex64,
    beta: Complex64,
    w0: f64,
) -> Result<LimitDensity> {
    let w = phase_family_weight(a, b, alpha, beta, Complex64::cis(-w0))?;
    LimitDensity::new(a.norm(), w, DensitySource::LinearPhase)
}
