//! Amplitude field of the walker on the integer line and its one-step evolution.
//!
//! The state at time `t` is stored densely over positions `-t..=t`. Sites with
//! `x != t (mod 2)` are kept as explicit zeros.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::coin::{CoinMatrix, CoinSchedule};
use crate::error::{domain, Error, Result};
use crate::matrix::UNITARY_TOL;

/// Tolerance on `|alpha|^2 + |beta|^2 = 1` for initial states.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Largest supported moment order.
pub const MAX_MOMENT_ORDER: u32 = 16;

/// Two-component coin amplitude at one lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor {
        up: Complex64::new(0.0, 0.0),
        down: Complex64::new(0.0, 0.0),
    };

    pub fn new(up: Complex64, down: Complex64) -> Self {
        Self { up, down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.up, self.down]
    }

    pub fn is_finite(&self) -> bool {
        self.up.is_finite() && self.down.is_finite()
    }
}

/// Amplitudes `psi_t(x)` for `x` in `-t..=t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    time: usize,
    amplitudes: Vec<Spinor>,
}

/// Walk started at the origin with coin state `(alpha, beta)`.
pub fn new_walk(alpha: Complex64, beta: Complex64) -> Result<WalkState> {
    WalkState::new(alpha, beta)
}

impl WalkState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization { norm });
        }
        Ok(Self {
            time: 0,
            amplitudes: vec![Spinor::new(alpha, beta)],
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Leftmost represented position, `-time`.
    pub fn offset(&self) -> i64 {
        -(self.time as i64)
    }

    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amplitudes
    }

    /// `psi_t(x)`, zero outside the light cone.
    pub fn amplitude(&self, x: i64) -> Spinor {
        let i = x - self.offset();
        if i < 0 {
            return Spinor::ZERO;
        }
        self.amplitudes.get(i as usize).copied().unwrap_or(Spinor::ZERO)
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(Spinor::norm_sqr).sum()
    }

    /// One step `psi_{t+1}(x) = P psi_t(x+1) + Q psi_t(x-1)`, where `P` and `Q`
    /// are the top and bottom rows of `coin`.
    pub fn step(&self, coin: &CoinMatrix) -> Result<WalkState> {
        let defect = coin.matrix().unitarity_defect();
        if !(defect <= UNITARY_TOL) {
            return Err(Error::Unitarity { defect });
        }
        Ok(self.step_unchecked(coin))
    }

    fn step_unchecked(&self, coin: &CoinMatrix) -> WalkState {
        let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
        let old = &self.amplitudes;
        let n = old.len() + 2;
        // New index j holds x = j - (t + 1); psi_t(x + 1) sits at old[j] and
        // psi_t(x - 1) at old[j - 2].
        let amplitudes = (0..n)
            .map(|j| {
                let up = old
                    .get(j)
                    .map_or(Complex64::new(0.0, 0.0), |s| a * s.up + b * s.down);
                let down = j
                    .checked_sub(2)
                    .and_then(|i| old.get(i))
                    .map_or(Complex64::new(0.0, 0.0), |s| c * s.up + d * s.down);
                Spinor { up, down }
            })
            .collect();
        WalkState {
            time: self.time + 1,
            amplitudes,
        }
    }

    /// Applies `schedule.coin_at(t)` for `t = time .. time + steps`.
    pub fn evolve(&self, schedule: &CoinSchedule, steps: usize) -> Result<WalkState> {
        let mut state = self.clone();
        for _ in 0..steps {
            state = state.step(&schedule.coin_at(state.time))?;
        }
        Ok(state)
    }

    /// `P(X_t = x)` over parity-consistent sites, positions ascending.
    pub fn distribution(&self) -> Distribution {
        let entries = self
            .amplitudes
            .iter()
            .step_by(2)
            .enumerate()
            .map(|(i, s)| (self.offset() + 2 * i as i64, s.norm_sqr()))
            .collect();
        Distribution {
            time: self.time,
            entries,
        }
    }
}

/// Position distribution `P(X_t = x)` at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub time: usize,
    pub entries: Vec<(i64, f64)>,
}

impl Distribution {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn probability(&self, x: i64) -> f64 {
        self.entries
            .binary_search_by_key(&x, |e| e.0)
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// `E[X_t^r]`, or `E[(X_t / t)^r]` when `rescale` is set.
    pub fn moment(&self, r: u32, rescale: bool) -> Result<f64> {
        if r == 0 || r > MAX_MOMENT_ORDER {
            return Err(domain(format!("moment order {r} outside 1..={MAX_MOMENT_ORDER}")));
        }
        let scale = if rescale {
            if self.time == 0 {
                return Err(domain("rescaled moment undefined at t = 0"));
            }
            self.time as f64
        } else {
            1.0
        };
        Ok(self
            .entries
            .iter()
            .map(|&(x, p)| (x as f64 / scale).powi(r as i32) * p)
            .sum())
    }

    /// Standard deviation `sqrt(E[X^2] - E[X]^2)`.
    pub fn std_dev(&self) -> f64 {
        let m1 = self.moment(1, false).unwrap();
        let m2 = self.moment(2, false).unwrap();
        (m2 - m1 * m1).max(0.0).sqrt()
    }

    /// CSV with header `position,probability`.
    /// CSV with header `position,probability`; probabilities carry 15
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "position,probability")?;
        for &(x, p) in &self.entries {
            writeln!(w, "{x},{:?}", round_significant(p, 15))?;
        }
        Ok(())
    }
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap()
}

/// `E[X_t^r]` of a distribution, optionally rescaled by `t^r`.
pub fn empirical_moment(dist: &Distribution, r: u32, rescale: bool) -> Result<f64> {
    dist.moment(r, rescale)
}

impl Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Distribution", 3)?;
        st.serialize_field("time", &self.time)?;
        st.serialize_field("entries", &self.entries)?;
        st.serialize_field("total", &self.total())?;
        st.end()
    }
}
