use std::fs::File;
use std::io::{self, BufWriter, Write};

use num_complex::Complex64;
use qwalk_core::harness::{
    case1_reduction_suite, convergence_report, limit_density_for, spectral_suite, theorem_equivalence_suite,
    ConvergenceCriteria,
};
use qwalk_core::spectral::spectrum;
use qwalk_core::{
    new_walk, theorem1_density_for_coins, theorem2_density, theorem3_density, CoinSchedule, LimitDensity,
    ScheduleSpec,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{Check, Command, Format, RunConfig, ScheduleName, Theorem};
use crate::error::CliError;

const DENSITY_MARGIN: f64 = 0.05;
const DEFAULT_GRID: usize = 1001;
const DEFAULT_SPECTRUM_POINTS: usize = 1024;
const DEFAULT_SEED: u64 = 2010;
const DEFAULT_CASES: usize = 20;

fn output(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                CliError::usage("out", format!("{}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.command.expect("command is set by the parser") {
        Command::Simulate => simulate(cfg),
        Command::Density => density(cfg),
        Command::Spectrum => spectrum_cmd(cfg),
        Command::Moments => moments(cfg),
        Command::Verify => verify(cfg),
    }
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let sched = cfg.build_schedule()?;
    let (al, be) = cfg.spinor()?;
    let dist = new_walk(al, be)
        .map_err(|e| CliError::from_core("alpha", e))?
        .evolve(&sched, cfg.steps())
        .map_err(|e| CliError::from_core("schedule", e))?
        .distribution();
    let mut w = output(cfg)?;
    match cfg.format() {
        Format::Csv => dist.write_csv(&mut w)?,
        Format::Json => write_json(&mut w, &dist)?,
    }
    Ok(w.flush()?)
}

/// Limit density selected by `--theorem`, or matched to the schedule.
fn limit_density(
    cfg: &RunConfig,
    sched: &CoinSchedule,
    al: Complex64,
    be: Complex64,
) -> Result<LimitDensity, CliError> {
    let inferred = || limit_density_for(sched, al, be).map_err(|e| CliError::from_core("schedule", e));
    let phase_coin = || {
        let u = sched.base_coin().unwrap_or_else(|| sched.coin_at(0));
        let w0 = sched.phase_at(0).or(cfg.w0).unwrap_or(0.0);
        (u, w0)
    };
    match cfg.theorem {
        None => inferred(),
        Some(Theorem::One) => theorem1_density_for_coins(&sched.coin_at(0), &sched.coin_at(1), al, be)
            .map_err(|e| CliError::from_core("theorem", e)),
        Some(Theorem::Two) => {
            let (u, w0) = phase_coin();
            theorem2_density(u.a(), u.b(), al, be, w0).map_err(|e| CliError::from_core("theorem", e))
        }
        Some(Theorem::Three) => {
            let (u, w0) = phase_coin();
            theorem3_density(u.a(), u.b(), al, be, w0).map_err(|e| CliError::from_core("theorem", e))
        }
        Some(Theorem::Konno) => {
            LimitDensity::konno(inferred()?.scale).map_err(|e| CliError::from_core("theorem", e))
        }
    }
}

#[derive(Serialize)]
struct DensityOutput {
    density: LimitDensity,
    grid: Vec<(f64, f64)>,
}

fn density(cfg: &RunConfig) -> Result<(), CliError> {
    let sched = cfg.build_schedule()?;
    let (al, be) = cfg.spinor()?;
    let d = limit_density(cfg, &sched, al, be)?;
    let points = cfg.points.unwrap_or(DEFAULT_GRID);
    let mut w = output(cfg)?;
    match cfg.format() {
        Format::Csv => d.write_grid_csv(&mut w, points, DENSITY_MARGIN)?,
        Format::Json => write_json(
            &mut w,
            &DensityOutput {
                density: d,
                grid: d.sample_grid(points, DENSITY_MARGIN),
            },
        )?,
    }
    Ok(w.flush()?)
}

fn spectral_angles(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    use qwalk_core::coin::TwoPeriodSpec;
    match &cfg.schedule_spec {
        Some(ScheduleSpec::TwoPeriod(TwoPeriodSpec::Angles { theta0, theta1 })) => Ok((*theta0, *theta1)),
        Some(_) => Err(CliError::usage(
            "schedule-spec",
            "spectral output needs a two-period schedule given by angles",
        )),
        None if cfg.schedule_name() == ScheduleName::TwoPeriod => cfg.two_period_angles(),
        None => Err(CliError::usage(
            "schedule",
            "spectral output needs a two-period schedule",
        )),
    }
}

#[derive(Serialize)]
struct SpectrumOutput {
    k: f64,
    lambda: [[f64; 2]; 2],
    velocity: [f64; 2],
}

fn spectrum_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let (t0, t1) = spectral_angles(cfg)?;
    let rows = spectrum(t0, t1, cfg.points.unwrap_or(DEFAULT_SPECTRUM_POINTS))
        .map_err(|e| CliError::from_core("theta0", e))?;
    let mut w = output(cfg)?;
    match cfg.format() {
        Format::Csv => {
            writeln!(w, "k,re_lambda0,im_lambda0,re_lambda1,im_lambda1,h0,h1")?;
            for r in &rows {
                let [l0, l1] = r.lambda;
                let [h0, h1] = r.velocity;
                writeln!(
                    w,
                    "{:?},{:?},{:?},{:?},{:?},{h0:?},{h1:?}",
                    r.k, l0.re, l0.im, l1.re, l1.im
                )?;
            }
        }
        Format::Json => {
            let out: Vec<SpectrumOutput> = rows
                .iter()
                .map(|r| SpectrumOutput {
                    k: r.k,
                    lambda: r.lambda.map(|l| [l.re, l.im]),
                    velocity: r.velocity,
                })
                .collect();
            write_json(&mut w, &out)?;
        }
    }
    Ok(w.flush()?)
}

#[derive(Serialize)]
struct MomentRow {
    r: u32,
    empirical: f64,
    limit: f64,
}

fn moments(cfg: &RunConfig) -> Result<(), CliError> {
    let sched = cfg.build_schedule()?;
    let (al, be) = cfg.spinor()?;
    let t = cfg.steps();
    if t == 0 {
        return Err(CliError::usage("t", "rescaled moments need t > 0"));
    }
    let max_order = cfg.max_order.unwrap_or(4);
    if !(1..=qwalk_core::walk::MAX_MOMENT_ORDER).contains(&max_order) {
        return Err(CliError::usage(
            "max-order",
            format!("must lie in 1..={}", qwalk_core::walk::MAX_MOMENT_ORDER),
        ));
    }
    let d = limit_density(cfg, &sched, al, be)?;
    let dist = new_walk(al, be)
        .map_err(|e| CliError::from_core("alpha", e))?
        .evolve(&sched, t)
        .map_err(|e| CliError::from_core("schedule", e))?
        .distribution();
    let rows = (1..=max_order)
        .map(|r| {
            Ok(MomentRow {
                r,
                empirical: dist
                    .moment(r, true)
                    .map_err(|e| CliError::from_core("max-order", e))?,
                limit: d.moment(r).map_err(|e| CliError::from_core("max-order", e))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut w = output(cfg)?;
    match cfg.format() {
        Format::Csv => {
            writeln!(w, "r,empirical,limit")?;
            for m in &rows {
                writeln!(w, "{},{:?},{:?}", m.r, m.empirical, m.limit)?;
            }
        }
        Format::Json => write_json(&mut w, &rows)?,
    }
    Ok(w.flush()?)
}

/// Runs the requested check and writes its JSON report. A failed check
/// still writes the report before exiting 1.
fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let check = cfg.check.ok_or_else(|| {
        CliError::usage(
            "check",
            "one of case1-reduction, theorem3-equiv, spectral, convergence",
        )
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(DEFAULT_SEED));
    let cases = cfg.cases.unwrap_or(DEFAULT_CASES);
    let numeric = |e| CliError::from_core("check", e);
    let (report, pass) = match check {
        Check::Case1Reduction => {
            let r = case1_reduction_suite(&mut rng, cases, cfg.steps()).map_err(numeric)?;
            (serde_json::to_value(&r)?, r.pass)
        }
        Check::Theorem3Equiv => {
            let r = theorem_equivalence_suite(&mut rng, cases).map_err(numeric)?;
            (serde_json::to_value(&r)?, r.pass)
        }
        Check::Spectral => {
            let (t0, t1) = spectral_angles(cfg)?;
            let (al, be) = cfg.spinor()?;
            let r = spectral_suite(&mut rng, t0, t1, al, be, cases.max(1) * 50).map_err(numeric)?;
            (serde_json::to_value(&r)?, r.pass)
        }
        Check::Convergence => {
            let sched = cfg.build_schedule()?;
            let (al, be) = cfg.spinor()?;
            let d = limit_density(cfg, &sched, al, be)?;
            let defaults = ConvergenceCriteria::default();
            let criteria = ConvergenceCriteria {
                ks_threshold: cfg.ks_threshold.unwrap_or(defaults.ks_threshold),
                monotone_slack: cfg.slack.unwrap_or(defaults.monotone_slack),
            };
            let t_list = cfg.t_list.clone().unwrap_or_else(|| vec![100, 200, 500]);
            let r = convergence_report(&sched, &d, &t_list, al, be, criteria)
                .map_err(|e| CliError::from_core("t-list", e))?;
            (serde_json::to_value(&r)?, r.pass)
        }
    };
    let mut w = output(cfg)?;
    write_json(&mut w, &report)?;
    w.flush()?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{check} did not pass")))
    }
}
