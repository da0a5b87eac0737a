use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use qwalk_core::{CoinMatrix, CoinSchedule, ScheduleSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Angles closer than this to a multiple of pi/2 are rejected on input.
pub const ANGLE_INPUT_TOL: f64 = 1e-6;
/// Initial spinors within this of unit norm are renormalized.
pub const SPINOR_INPUT_TOL: f64 = 1e-4;

/// Complex number written `re,im` on the command line and `[re, im]` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "CplxRepr", into = "[f64; 2]")]
pub struct Cplx(pub Complex64);

#[derive(Deserialize)]
#[serde(untagged)]
enum CplxRepr {
    Pair([f64; 2]),
    Real(f64),
}

impl From<CplxRepr> for Cplx {
    fn from(r: CplxRepr) -> Self {
        match r {
            CplxRepr::Pair([re, im]) => Cplx(Complex64::new(re, im)),
            CplxRepr::Real(re) => Cplx(Complex64::new(re, 0.0)),
        }
    }
}

impl From<Cplx> for [f64; 2] {
    fn from(c: Cplx) -> Self {
        [c.0.re, c.0.im]
    }
}

impl FromStr for Cplx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("expected `re,im`, got `{s}`"))
        };
        let mut parts = s.split(',');
        let re = parse(parts.next().unwrap_or(""))?;
        let im = match parts.next() {
            Some(p) => parse(p)?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(format!("expected `re,im`, got `{s}`"));
        }
        Ok(Cplx(Complex64::new(re, im)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Density,
    Spectrum,
    Moments,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleName {
    OnePeriod,
    TwoPeriod,
    NPeriod,
    Case1,
    Case2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Theorem {
    #[serde(rename = "1")]
    #[value(name = "1")]
    One,
    #[serde(rename = "2")]
    #[value(name = "2")]
    Two,
    #[serde(rename = "3")]
    #[value(name = "3")]
    Three,
    #[serde(rename = "konno")]
    #[value(name = "konno")]
    Konno,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Case1Reduction,
    #[value(name = "theorem3-equiv")]
    #[serde(rename = "theorem3-equiv")]
    Theorem3Equiv,
    Spectral,
    Convergence,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().unwrap().get_name())
    }
}

fn parse_spec(s: &str) -> Result<ScheduleSpec, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

/// Every setting of a run. Command-line flags and the `--config` file share
/// this schema; a flag wins over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleName>,
    /// Full schedule descriptor as JSON; overrides the other schedule flags.
    #[arg(long, global = true, value_parser = parse_spec)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_spec: Option<ScheduleSpec>,
    /// Reflection-coin angle of a one-period, case1 or case2 walk.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    /// Comma-separated reflection-coin angles of an n-period walk.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    /// Explicit coin entries as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Cplx>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Cplx>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Cplx>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Cplx>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,

    /// Initial spinor components as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Cplx>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Cplx>,

    /// Number of steps.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<usize>>,
    /// Limit density to use; inferred from the schedule when absent.
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    /// Grid size for density and spectrum output.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,

    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<Check>,
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_threshold: Option<f64>,
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

macro_rules! merge_fields {
    ($self:ident, $other:ident; $($f:ident),*) => {
        $( if $self.$f.is_none() { $self.$f = $other.$f; } )*
    };
}

impl RunConfig {
    /// Fills every unset field from `file`.
    pub fn merge(mut self, file: RunConfig) -> Self {
        merge_fields!(self, file; command, format, out, schedule, schedule_spec, theta, theta0, theta1,
            thetas, a, b, c, d, w0, kappa, alpha, beta, t, t_list, theorem, points, max_order, check,
            ks_threshold, slack, seed, cases);
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn steps(&self) -> usize {
        self.t.unwrap_or(500)
    }

    pub fn spinor(&self) -> Result<(Complex64, Complex64), CliError> {
        let zero = Complex64::new(0.0, 0.0);
        let (al, be) = match (self.alpha, self.beta) {
            (None, None) => (
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, FRAC_1_SQRT_2),
            ),
            (a, b) => (a.map_or(zero, |c| c.0), b.map_or(zero, |c| c.0)),
        };
        let norm = al.norm_sqr() + be.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > SPINOR_INPUT_TOL {
            return Err(CliError::usage(
                "alpha",
                format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"),
            ));
        }
        let s = norm.sqrt();
        Ok((al / s, be / s))
    }

    fn angle(field: &'static str, theta: f64) -> Result<f64, CliError> {
        let off = (theta / FRAC_PI_2).round() * FRAC_PI_2 - theta;
        if !theta.is_finite() || off.abs() < ANGLE_INPUT_TOL {
            return Err(CliError::usage(
                field,
                format!("angle {theta} is a multiple of pi/2; theta = n pi/2 gives a coin with zero entries"),
            ));
        }
        Ok(theta)
    }

    /// Angles of a two-period walk, defaulting to `(pi/4, pi/6)`.
    pub fn two_period_angles(&self) -> Result<(f64, f64), CliError> {
        Ok((
            Self::angle("theta0", self.theta0.unwrap_or(FRAC_PI_4))?,
            Self::angle("theta1", self.theta1.unwrap_or(FRAC_PI_6))?,
        ))
    }

    /// The single coin of one-period and phase-modulated walks.
    fn coin(&self) -> Result<CoinMatrix, CliError> {
        if let Some(theta) = self.theta {
            return CoinMatrix::orthogonal(Self::angle("theta", theta)?)
                .map_err(|e| CliError::usage("theta", e));
        }
        match (self.a, self.b, self.c, self.d) {
            (None, None, None, None) => Ok(CoinMatrix::hadamard()),
            (Some(a), Some(b), Some(c), Some(d)) => {
                CoinMatrix::new(a.0, b.0, c.0, d.0).map_err(|e| CliError::usage("a", e))
            }
            _ => Err(CliError::usage(
                "a",
                "coin entries need all of --a, --b, --c, --d",
            )),
        }
    }

    fn inferred_schedule(&self) -> ScheduleName {
        if self.theta0.is_some() || self.theta1.is_some() {
            ScheduleName::TwoPeriod
        } else if self.thetas.is_some() {
            ScheduleName::NPeriod
        } else if self.kappa.is_some() {
            ScheduleName::Case2
        } else if self.theta.is_some() || self.a.is_some() {
            ScheduleName::OnePeriod
        } else {
            ScheduleName::TwoPeriod
        }
    }

    pub fn schedule_name(&self) -> ScheduleName {
        self.schedule.unwrap_or_else(|| self.inferred_schedule())
    }

    pub fn build_schedule(&self) -> Result<CoinSchedule, CliError> {
        if let Some(spec) = &self.schedule_spec {
            return spec.build().map_err(|e| CliError::usage("schedule-spec", e));
        }
        let kappa = || {
            self.kappa
                .ok_or_else(|| CliError::usage("kappa", "required for case1 and case2 schedules"))
        };
        let w0 = self.w0.unwrap_or(0.0);
        match self.schedule_name() {
            ScheduleName::OnePeriod => Ok(CoinSchedule::one_period(self.coin()?)),
            ScheduleName::TwoPeriod => {
                let (t0, t1) = self.two_period_angles()?;
                CoinSchedule::two_period_angles(t0, t1).map_err(|e| CliError::usage("theta0", e))
            }
            ScheduleName::NPeriod => {
                let thetas = self
                    .thetas
                    .as_ref()
                    .ok_or_else(|| CliError::usage("thetas", "required for n-period schedules"))?;
                let coins = thetas
                    .iter()
                    .map(|&t| {
                        CoinMatrix::orthogonal(Self::angle("thetas", t)?)
                            .map_err(|e| CliError::usage("thetas", e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                CoinSchedule::n_period(coins).map_err(|e| CliError::usage("thetas", e))
            }
            ScheduleName::Case1 => {
                CoinSchedule::case1(self.coin()?, w0, kappa()?).map_err(|e| CliError::usage("a", e))
            }
            ScheduleName::Case2 => {
                CoinSchedule::case2(self.coin()?, w0, kappa()?).map_err(|e| CliError::usage("a", e))
            }
        }
    }
}
