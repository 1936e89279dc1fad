use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{ScalarField, VelocityField};
use crate::spaces::{bmo_norm_velocity, default_radii, holder_from_lp};
use crate::spectral::AdvectionOperator;

use super::config::{EquationKind, SimConfig, VelocitySpec};
use super::history::{frame_bytes, Checkpointed, FrameSeries, VelocityHistory, DEFAULT_MEMORY_CAP};
use super::integrator::{all_finite, sqg_operator, velocity_from_hat, Stepper};

#[derive(Clone, Debug)]
pub struct EvolutionState {
    pub step: usize,
    pub t: f64,
    pub theta: ScalarField,
    pub velocity: VelocityField,
}

/// One row of the forward time series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesRow {
    pub step: usize,
    pub t: f64,
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub bmo_u: Option<f64>,
    pub beta_hat: Option<f64>,
}

impl SeriesRow {
    fn new(state: &EvolutionState, opts: &ForwardOptions) -> SeriesRow {
        let theta = &state.theta;
        let norms = theta.norms();
        let bmo_u = opts.bmo_u.then(|| {
            let grid = theta.grid();
            let stride = (grid.n() / 32).max(1);
            bmo_norm_velocity(&state.velocity, &default_radii(grid), stride).unwrap_or(f64::NAN)
        });
        let beta_hat = if opts.beta_hat {
            holder_from_lp(theta).ok().map(|f| f.beta)
        } else {
            None
        };
        SeriesRow {
            step: state.step,
            t: state.t,
            linf: norms.linf,
            l1: norms.l1,
            l2: norms.l2,
            mean: theta.mean(),
            max: theta.max(),
            min: theta.min(),
            bmo_u,
            beta_hat,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ForwardOptions {
    /// Steps between retained snapshots; 0 keeps none.
    pub snapshot_every: usize,
    /// Sampled BMO norm of the velocity at each row (centres every N/32
    /// nodes per axis, dyadic radii).
    pub bmo_u: bool,
    /// Littlewood–Paley Hölder exponent of the scalar at each row.
    pub beta_hat: bool,
    /// Keep the velocity history for a subsequent dual run.
    pub record_history: bool,
    /// Byte cap for stored frames before switching to re-simulation.
    pub memory_cap: u64,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions {
            snapshot_every: 0,
            bmo_u: false,
            beta_hat: false,
            record_history: false,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

#[derive(Debug)]
pub struct ForwardRun {
    pub dt: f64,
    pub steps: usize,
    pub rows: Vec<SeriesRow>,
    pub snapshots: Vec<EvolutionState>,
    pub final_state: EvolutionState,
    pub history: Option<VelocityHistory>,
}

fn speed_bound(cfg: &SimConfig, theta_hat: &[Complex64]) -> Result<f64> {
    Ok(match (cfg.kind, &cfg.velocity) {
        (EquationKind::Sqg, _) => sqg_operator(cfg.grid, theta_hat).max_speed(),
        (_, VelocitySpec::Recorded(s)) => s.frames().iter().map(|u| u.max_speed()).fold(0.0, f64::max),
        (_, spec) => spec.velocity_at(cfg.grid, 0.0)?.max_speed(),
    })
}

fn prescribed_operator(cfg: &SimConfig, t: f64) -> Result<AdvectionOperator> {
    let u = cfg.velocity.velocity_at(cfg.grid, t)?;
    if !u.is_divergence_free() {
        return Err(Error::Precondition("velocity must be divergence free".into()));
    }
    Ok(AdvectionOperator::new(&u))
}

fn check_input(cfg: &SimConfig, theta: &ScalarField) -> Result<()> {
    cfg.validate()?;
    if theta.grid() != cfg.grid {
        return Err(Error::GridMismatch(format!(
            "initial field on d={} N={}, config on d={} N={}",
            theta.grid().dim(),
            theta.grid().n(),
            cfg.grid.dim(),
            cfg.grid.n()
        )));
    }
    Ok(())
}

/// Advances one step from `state` with the configured (or default) `dt`.
pub fn step_forward(state: &EvolutionState, cfg: &SimConfig) -> Result<EvolutionState> {
    check_input(cfg, &state.theta)?;
    let grid = cfg.grid;
    let hat = fft::forward_real(grid, state.theta.values());
    let sigma = cfg.sign.sigma();
    let (next, velocity, dt) = match cfg.kind {
        EquationKind::Sqg => {
            let op = sqg_operator(grid, &hat);
            let dt = cfg.dt.unwrap_or_else(|| cfg.default_dt(op.max_speed()));
            cfg.check_cfl(dt, op.max_speed())?;
            let stepper = Stepper::new(grid, cfg.alpha, dt);
            let next = stepper.step(&hat, sigma, &op, |s| Ok(sqg_operator(grid, s)))?;
            let u = velocity_from_hat(grid, &next);
            (next, u, dt)
        }
        EquationKind::Drift => {
            let op = prescribed_operator(cfg, state.t)?;
            let dt = cfg.dt.unwrap_or_else(|| cfg.default_dt(op.max_speed()));
            cfg.check_cfl(dt, op.max_speed())?;
            let stepper = Stepper::new(grid, cfg.alpha, dt);
            let next = stepper.step(&hat, sigma, &op, |_| prescribed_operator(cfg, state.t + dt))?;
            (next, cfg.velocity.velocity_at(grid, state.t + dt)?, dt)
        }
    };
    if !all_finite(&next) {
        return Err(Error::NumericalAbort { step: state.step + 1 });
    }
    Ok(EvolutionState {
        step: state.step + 1,
        t: state.t + dt,
        theta: ScalarField::from_raw(grid, fft::inverse_real(grid, &next)),
        velocity,
    })
}

enum Recorder {
    None,
    Frames(Vec<VelocityField>),
    Checkpoints { segment: usize, hats: Vec<Vec<Complex64>> },
}

/// Integrates `θ_t = σ(u·∇)θ - Λ^α θ` from `θ₀` to `cfg.t_end`.
pub fn run_forward(cfg: &SimConfig, theta0: &ScalarField, opts: &ForwardOptions) -> Result<ForwardRun> {
    check_input(cfg, theta0)?;
    let grid = cfg.grid;
    let sigma = cfg.sign.sigma();
    let mut hat = fft::forward_real(grid, theta0.values());
    let speed = speed_bound(cfg, &hat)?;
    let (steps, dt) = cfg.schedule(speed);
    let sqg = cfg.kind == EquationKind::Sqg;
    if !sqg {
        cfg.check_cfl(dt, speed)?;
    }
    let stepper = Stepper::new(grid, cfg.alpha, dt);
    let static_op = match (sqg, cfg.velocity.is_static()) {
        (false, true) => Some(prescribed_operator(cfg, 0.0)?),
        _ => None,
    };
    let static_u = if sqg { None } else { Some(cfg.velocity.velocity_at(grid, 0.0)?) };

    let mut recorder = match (opts.record_history, sqg) {
        (true, true) => {
            if frame_bytes(grid, steps + 1) <= opts.memory_cap {
                Recorder::Frames(vec![velocity_from_hat(grid, &hat)])
            } else {
                let per = (opts.memory_cap / frame_bytes(grid, 1).max(1)).max(2) as usize - 1;
                Recorder::Checkpoints {
                    segment: per,
                    hats: vec![hat.clone()],
                }
            }
        }
        _ => Recorder::None,
    };

    let velocity_of = |hat: &[Complex64], t: f64| -> Result<VelocityField> {
        if sqg {
            Ok(velocity_from_hat(grid, hat))
        } else if cfg.velocity.is_static() {
            Ok(static_u.clone().expect("static velocity"))
        } else {
            cfg.velocity.velocity_at(grid, t)
        }
    };

    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let mut state = EvolutionState {
        step: 0,
        t: 0.0,
        theta: theta0.clone(),
        velocity: velocity_of(&hat, 0.0)?,
    };
    rows.push(SeriesRow::new(&state, opts));
    if opts.snapshot_every > 0 {
        snapshots.push(state.clone());
    }
    let mut prev_op: Option<AdvectionOperator> = None;
    for n in 0..steps {
        let t = n as f64 * dt;
        let t_next = (n + 1) as f64 * dt;
        hat = if sqg {
            let op = sqg_operator(grid, &hat);
            cfg.check_cfl(dt, op.max_speed())?;
            stepper.step(&hat, sigma, &op, |s| Ok(sqg_operator(grid, s)))?
        } else if let Some(op) = &static_op {
            stepper.step(&hat, sigma, op, |_| Ok(op.clone()))?
        } else {
            let first = match prev_op.take() {
                Some(op) => op,
                None => prescribed_operator(cfg, t)?,
            };
            let second = prescribed_operator(cfg, t_next)?;
            let next = stepper.step(&hat, sigma, &first, |_| Ok(second.clone()))?;
            prev_op = Some(second);
            next
        };
        let step = n + 1;
        if !all_finite(&hat) {
            return Err(Error::NumericalAbort { step });
        }
        match &mut recorder {
            Recorder::None => {}
            Recorder::Frames(frames) => frames.push(velocity_from_hat(grid, &hat)),
            Recorder::Checkpoints { segment, hats } => {
                if step % *segment == 0 && step < steps {
                    hats.push(hat.clone());
                }
            }
        }
        let row_due = step % cfg.cadence == 0 || step == steps;
        let snap_due = opts.snapshot_every > 0 && (step % opts.snapshot_every == 0 || step == steps);
        if row_due || snap_due || step == steps {
            state = EvolutionState {
                step,
                t: t_next,
                theta: ScalarField::from_raw(grid, fft::inverse_real(grid, &hat)),
                velocity: velocity_of(&hat, t_next)?,
            };
            if row_due {
                rows.push(SeriesRow::new(&state, opts));
            }
            if snap_due {
                snapshots.push(state.clone());
            }
        }
    }

    let history = if !opts.record_history {
        None
    } else {
        Some(match recorder {
            Recorder::None => VelocityHistory::prescribed(grid, cfg.velocity.clone(), cfg.t_end),
            Recorder::Frames(frames) => VelocityHistory::Stored(Arc::new(FrameSeries::new(grid, dt, frames)?)),
            Recorder::Checkpoints { segment, hats } => {
                VelocityHistory::Checkpointed(Arc::new(Checkpointed::new(cfg.clone(), dt, steps, segment, hats)))
            }
        })
    };

    Ok(ForwardRun {
        dt,
        steps,
        rows,
        snapshots,
        final_state: state,
        history,
    })
}
