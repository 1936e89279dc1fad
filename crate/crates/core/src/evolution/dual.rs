use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::ScalarField;
use crate::spaces::{check_class_membership, ClassParams, MembershipReport};
use crate::spectral::AdvectionOperator;

use super::config::SimConfig;
use super::history::VelocityHistory;
use super::integrator::{all_finite, Stepper};

#[derive(Clone, Debug)]
pub struct DualOptions {
    /// Dual steps per forward step; values above 1 sample the velocity
    /// history between frames.
    pub substeps: usize,
    /// Dual steps between recorded rows.
    pub cadence: usize,
    /// Keep the field at every recorded row.
    pub keep_fields: bool,
    /// Evaluate class membership at every recorded row.
    pub membership: Option<ClassParams>,
    /// Stop after this many dual steps; the schedule is still that of the
    /// full horizon.
    pub stop_after: Option<usize>,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            substeps: 1,
            cadence: 1,
            keep_fields: false,
            membership: None,
            stop_after: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualRow {
    pub step: usize,
    pub s: f64,
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
    pub mean: f64,
    pub membership: Option<MembershipReport>,
}

#[derive(Debug)]
pub struct DualRun {
    pub horizon: f64,
    pub ds: f64,
    pub steps: usize,
    pub rows: Vec<DualRow>,
    /// Fields at the recorded rows when requested.
    pub fields: Vec<ScalarField>,
    pub final_field: ScalarField,
}

fn row(step: usize, s: f64, f: &ScalarField, params: Option<ClassParams>) -> DualRow {
    let norms = f.norms();
    DualRow {
        step,
        s,
        linf: norms.linf,
        l1: norms.l1,
        l2: norms.l2,
        mean: f.mean(),
        membership: params.map(|p| check_class_membership(f, p)),
    }
}

/// Dual step count and size for `horizon`: the forward schedule of `cfg`
/// over `[0, horizon]` refined by `substeps`.
pub fn dual_schedule(cfg: &SimConfig, horizon: f64, history: &VelocityHistory, substeps: usize) -> Result<(usize, f64)> {
    let mut c = cfg.clone();
    c.t_end = horizon;
    if c.dt.is_none() {
        c.dt = Some(match history {
            VelocityHistory::Stored(s) => s.dt(),
            _ => c.default_dt(history.velocity_at(0.0)?.max_speed()),
        });
    }
    let (steps, dt) = c.schedule(0.0);
    Ok((steps * substeps, dt / substeps as f64))
}

/// Integrates `φ_s = -σ(u(t - s)·∇)φ - Λ^α φ` for `s ∈ [0, t]`.
pub fn run_dual(
    cfg: &SimConfig,
    phi: &ScalarField,
    horizon: f64,
    history: &VelocityHistory,
    opts: &DualOptions,
) -> Result<DualRun> {
    cfg.validate()?;
    let grid = cfg.grid;
    if phi.grid() != grid || history.grid() != grid {
        return Err(Error::GridMismatch("dual field, history and config must share a grid".into()));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::OutOfRange {
            what: "horizon",
            value: horizon,
            allowed: ">= 0",
        });
    }
    if opts.substeps == 0 || opts.cadence == 0 {
        return Err(Error::Precondition("substeps and cadence must be >= 1".into()));
    }
    if horizon > history.covered() * (1.0 + 1e-12) {
        return Err(Error::HistoryGap {
            covered: history.covered(),
            requested: horizon,
        });
    }
    let mut rows = vec![row(0, 0.0, phi, opts.membership)];
    let mut fields = Vec::new();
    if opts.keep_fields {
        fields.push(phi.clone());
    }
    if horizon == 0.0 {
        return Ok(DualRun {
            horizon,
            ds: 0.0,
            steps: 0,
            rows,
            fields,
            final_field: phi.clone(),
        });
    }

    let (steps, ds) = dual_schedule(cfg, horizon, history, opts.substeps)?;
    let stepper = Stepper::new(grid, cfg.alpha, ds);
    let sigma = -cfg.sign.sigma();
    let forward_time = |m: usize| (horizon - m as f64 * ds).max(0.0);
    let static_op = if history.is_static() { Some(history.operator_at(0.0)?) } else { None };
    if let Some(op) = &static_op {
        cfg.check_cfl(ds, op.max_speed())?;
    }
    let mut hat = fft::forward_real(grid, phi.values());
    let mut prev: Option<AdvectionOperator> = None;
    let mut final_field = phi.clone();
    let last = opts.stop_after.map_or(steps, |k| k.min(steps));
    for m in 0..last {
        hat = if let Some(op) = &static_op {
            stepper.step(&hat, sigma, op, |_| Ok(op.clone()))?
        } else {
            let first = match prev.take() {
                Some(op) => op,
                None => history.operator_at(forward_time(m))?,
            };
            cfg.check_cfl(ds, first.max_speed())?;
            let second = history.operator_at(forward_time(m + 1))?;
            let next = stepper.step(&hat, sigma, &first, |_| Ok(second.clone()))?;
            prev = Some(second);
            next
        };
        let step = m + 1;
        if !all_finite(&hat) {
            return Err(Error::NumericalAbort { step });
        }
        if step % opts.cadence == 0 || step == last {
            let f = ScalarField::from_raw(grid, fft::inverse_real(grid, &hat));
            rows.push(row(step, step as f64 * ds, &f, opts.membership));
            if opts.keep_fields {
                fields.push(f.clone());
            }
            final_field = f;
        }
    }
    Ok(DualRun {
        horizon,
        ds,
        steps,
        rows,
        fields,
        final_field,
    })
}
