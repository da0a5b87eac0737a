//! Coin matrices and time-dependent coin schedules `t -> U_t`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{reduce_angle, reduce_linear_phase, Mat2, UNITARY_TOL};

/// Entries with modulus below this count as zero.
pub const ZERO_ENTRY_TOL: f64 = 1e-12;

/// Angles within this distance of a multiple of pi/2 are rejected.
pub const ANGLE_TOL: f64 = 1e-12;

/// A validated 2x2 unitary coin `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(Mat2);

impl CoinMatrix {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::from_mat(Mat2::new(a, b, c, d))
    }

    pub fn from_mat(m: Mat2) -> Result<Self> {
        let defect = m.unitarity_defect();
        if !defect.is_finite() || defect > UNITARY_TOL {
            return Err(Error::Unitarity { defect });
        }
        Ok(Self(m))
    }

    /// Reflection form `[[cos t, sin t], [sin t, -cos t]]`, determinant -1.
    pub fn orthogonal(theta: f64) -> Result<Self> {
        check_angle(theta)?;
        let (s, c) = theta.sin_cos();
        Ok(Self(Mat2::real(c, s, s, -c)))
    }

    /// Rotation form `[[cos t, sin t], [-sin t, cos t]]`, determinant +1.
    pub fn rotation(theta: f64) -> Result<Self> {
        check_angle(theta)?;
        let (s, c) = theta.sin_cos();
        Ok(Self(Mat2::real(c, s, -s, c)))
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self(Mat2::real(h, h, h, -h))
    }

    pub fn a(&self) -> Complex64 {
        self.0.a
    }
    pub fn b(&self) -> Complex64 {
        self.0.b
    }
    pub fn c(&self) -> Complex64 {
        self.0.c
    }
    pub fn d(&self) -> Complex64 {
        self.0.d
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// Fails with [`Error::ZeroEntry`] if any entry vanishes.
    pub fn require_nonzero_entries(&self) -> Result<()> {
        for (name, z) in ["a", "b", "c", "d"].into_iter().zip(self.0.entries()) {
            if z.norm() < ZERO_ENTRY_TOL {
                return Err(Error::ZeroEntry { entry: name });
            }
        }
        Ok(())
    }

    /// True when every entry is real within the unitarity tolerance.
    pub fn is_real(&self) -> bool {
        self.0.entries().iter().all(|z| z.im.abs() <= UNITARY_TOL)
    }

    pub fn to_spec(&self) -> CoinSpec {
        let p = |z: Complex64| [z.re, z.im];
        CoinSpec::Entries {
            a: p(self.0.a),
            b: p(self.0.b),
            c: p(self.0.c),
            d: p(self.0.d),
        }
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::DegenerateCoin { theta });
    }
    let q = theta / FRAC_PI_2;
    if ((q - q.round()) * FRAC_PI_2).abs() < ANGLE_TOL {
        return Err(Error::DegenerateCoin { theta });
    }
    Ok(())
}

/// Shorthand for [`CoinMatrix::orthogonal`].
pub fn orthogonal_coin(theta: f64) -> Result<CoinMatrix> {
    CoinMatrix::orthogonal(theta)
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Covers both one-period (`n = 1`) and general n-period lists.
    Periodic(Vec<CoinMatrix>),
    TwoPeriodOrthogonal {
        h0: CoinMatrix,
        h1: CoinMatrix,
    },
    Case1 {
        base: CoinMatrix,
        w0: f64,
        kappa: f64,
    },
    Case2 {
        base: CoinMatrix,
        w0: f64,
        kappa: f64,
    },
}

/// Which family a schedule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    OnePeriod,
    NPeriod,
    TwoPeriodOrthogonal,
    Case1,
    Case2,
}

/// An immutable rule `t -> U_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSchedule {
    kind: Kind,
}

impl CoinSchedule {
    pub fn one_period(coin: CoinMatrix) -> Self {
        Self {
            kind: Kind::Periodic(vec![coin]),
        }
    }

    /// Cycles through `coins`; `coin_at(t) = coins[t mod n]`.
    pub fn n_period(coins: Vec<CoinMatrix>) -> Result<Self> {
        if coins.is_empty() {
            return Err(crate::error::domain("n-period schedule needs at least one coin"));
        }
        Ok(Self {
            kind: Kind::Periodic(coins),
        })
    }

    /// `U_{2s} = h0`, `U_{2s+1} = h1`.
    pub fn two_period(h0: CoinMatrix, h1: CoinMatrix) -> Result<Self> {
        h0.require_nonzero_entries()?;
        h1.require_nonzero_entries()?;
        Ok(Self {
            kind: Kind::TwoPeriodOrthogonal { h0, h1 },
        })
    }

    /// Two-period walk alternating reflection-form coins at `theta0`, `theta1`.
    pub fn two_period_angles(theta0: f64, theta1: f64) -> Result<Self> {
        Self::two_period(CoinMatrix::orthogonal(theta0)?, CoinMatrix::orthogonal(theta1)?)
    }

    /// `U_t = [[a e^{i w_t}, b], [c, d e^{-i w_t}]]` with `w_{t+1} + w_t = kappa1`.
    pub fn case1(base: CoinMatrix, w0: f64, kappa1: f64) -> Result<Self> {
        base.require_nonzero_entries()?;
        check_finite(&[w0, kappa1])?;
        Ok(Self {
            kind: Kind::Case1 {
                base,
                w0,
                kappa: kappa1,
            },
        })
    }

    /// `U_t = [[a, b e^{i w_t}], [c e^{-i w_t}, d]]` with `w_{t+1} = w_t + kappa2`.
    pub fn case2(base: CoinMatrix, w0: f64, kappa2: f64) -> Result<Self> {
        base.require_nonzero_entries()?;
        check_finite(&[w0, kappa2])?;
        Ok(Self {
            kind: Kind::Case2 {
                base,
                w0,
                kappa: kappa2,
            },
        })
    }

    pub fn kind(&self) -> ScheduleKind {
        match &self.kind {
            Kind::Periodic(c) if c.len() == 1 => ScheduleKind::OnePeriod,
            Kind::Periodic(_) => ScheduleKind::NPeriod,
            Kind::TwoPeriodOrthogonal { .. } => ScheduleKind::TwoPeriodOrthogonal,
            Kind::Case1 { .. } => ScheduleKind::Case1,
            Kind::Case2 { .. } => ScheduleKind::Case2,
        }
    }

    /// Period of the coin sequence, when it is periodic by construction.
    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            Kind::Periodic(c) => Some(c.len()),
            Kind::TwoPeriodOrthogonal { .. } | Kind::Case1 { .. } => Some(2),
            Kind::Case2 { .. } => None,
        }
    }

    /// The phase `w_t` of a Case-1/Case-2 schedule, from its closed form.
    pub fn phase_at(&self, t: usize) -> Option<f64> {
        match self.kind {
            Kind::Case1 { w0, kappa, .. } => {
                let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
                Some(sign * (w0 - kappa / 2.0) + kappa / 2.0)
            }
            Kind::Case2 { w0, kappa, .. } => Some(kappa * t as f64 + w0),
            _ => None,
        }
    }

    /// The unmodulated coin `U` of a Case-1/Case-2 schedule.
    pub fn base_coin(&self) -> Option<CoinMatrix> {
        match self.kind {
            Kind::Case1 { base, .. } | Kind::Case2 { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn coin_at(&self, t: usize) -> CoinMatrix {
        match &self.kind {
            Kind::Periodic(coins) => coins[t % coins.len()],
            Kind::TwoPeriodOrthogonal { h0, h1 } => {
                if t.is_multiple_of(2) {
                    *h0
                } else {
                    *h1
                }
            }
            Kind::Case1 { base, .. } => {
                let e = Complex64::cis(reduce_angle(self.phase_at(t).unwrap()));
                let m = base.matrix();
                CoinMatrix(Mat2::new(m.a * e, m.b, m.c, m.d * e.conj()))
            }
            Kind::Case2 { base, w0, kappa } => {
                let e = Complex64::cis(reduce_linear_phase(*w0, *kappa, t as f64));
                let m = base.matrix();
                CoinMatrix(Mat2::new(m.a, m.b * e, m.c * e.conj(), m.d))
            }
        }
    }

    /// The factorized form of `coin_at(t)` for phase `w`:
    /// `R(w/2) U R(w/2)` for Case 1, `R(w/2) U R(-w/2)` for Case 2.
    pub fn factorized_coin(&self, w: f64) -> Result<Mat2> {
        let half = reduce_angle(w) / 2.0;
        match self.kind {
            Kind::Case1 { base, .. } => Ok(Mat2::phase(half) * base.0 * Mat2::phase(half)),
            Kind::Case2 { base, .. } => Ok(Mat2::phase(half) * base.0 * Mat2::phase(-half)),
            _ => Err(Error::Kind {
                expected: "case1 or case2",
            }),
        }
    }

    /// Whether `coin_at(t)` equals its diagonal-phase factorization within 1e-12.
    pub fn conjugation_identity_check(&self, t: usize) -> Result<bool> {
        let w = self.phase_at(t).ok_or(Error::Kind {
            expected: "case1 or case2",
        })?;
        let f = self.factorized_coin(w)?;
        Ok(f.max_abs_diff(self.coin_at(t).matrix()) <= UNITARY_TOL)
    }

    pub fn to_spec(&self) -> ScheduleSpec {
        match &self.kind {
            Kind::Periodic(coins) if coins.len() == 1 => ScheduleSpec::OnePeriod {
                coin: coins[0].to_spec(),
            },
            Kind::Periodic(coins) => ScheduleSpec::NPeriod {
                coins: coins.iter().map(CoinMatrix::to_spec).collect(),
            },
            Kind::TwoPeriodOrthogonal { h0, h1 } => ScheduleSpec::TwoPeriod(TwoPeriodSpec::Coins {
                h0: h0.to_spec(),
                h1: h1.to_spec(),
            }),
            Kind::Case1 { base, w0, kappa } => ScheduleSpec::Case1 {
                coin: base.to_spec(),
                w0: *w0,
                kappa: *kappa,
            },
            Kind::Case2 { base, w0, kappa } => ScheduleSpec::Case2 {
                coin: base.to_spec(),
                w0: *w0,
                kappa: *kappa,
            },
        }
    }
}

impl Serialize for CoinSchedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(crate::error::domain("schedule phases must be finite"))
    }
}

/// Serializable coin descriptor: either a reflection-form angle or explicit
/// entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Angle {
        theta: f64,
    },
    Entries {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
        d: [f64; 2],
    },
}

impl CoinSpec {
    pub fn build(&self) -> Result<CoinMatrix> {
        match self {
            CoinSpec::Angle { theta } => CoinMatrix::orthogonal(*theta),
            CoinSpec::Entries { a, b, c, d } => {
                let z = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
                CoinMatrix::new(z(a), z(b), z(c), z(d))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwoPeriodSpec {
    Angles { theta0: f64, theta1: f64 },
    Coins { h0: CoinSpec, h1: CoinSpec },
}

/// Serializable schedule descriptor, e.g.
/// `{"kind":"two-period","theta0":0.785,"theta1":0.524}` or
/// `{"kind":"case2","coin":{"a":[re,im],...},"w0":0.0,"kappa":3.14159}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScheduleSpec {
    OnePeriod {
        coin: CoinSpec,
    },
    NPeriod {
        coins: Vec<CoinSpec>,
    },
    TwoPeriod(TwoPeriodSpec),
    #[serde(rename = "case1")]
    Case1 {
        coin: CoinSpec,
        w0: f64,
        kappa: f64,
    },
    #[serde(rename = "case2")]
    Case2 {
        coin: CoinSpec,
        w0: f64,
        kappa: f64,
    },
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<CoinSchedule> {
        match self {
            ScheduleSpec::OnePeriod { coin } => Ok(CoinSchedule::one_period(coin.build()?)),
            ScheduleSpec::NPeriod { coins } => {
                CoinSchedule::n_period(coins.iter().map(CoinSpec::build).collect::<Result<_>>()?)
            }
            ScheduleSpec::TwoPeriod(TwoPeriodSpec::Angles { theta0, theta1 }) => {
                CoinSchedule::two_period_angles(*theta0, *theta1)
            }
            ScheduleSpec::TwoPeriod(TwoPeriodSpec::Coins { h0, h1 }) => {
                CoinSchedule::two_period(h0.build()?, h1.build()?)
            }
            ScheduleSpec::Case1 { coin, w0, kappa } => CoinSchedule::case1(coin.build()?, *w0, *kappa),
            ScheduleSpec::Case2 { coin, w0, kappa } => CoinSchedule::case2(coin.build()?, *w0, *kappa),
        }
    }
}
