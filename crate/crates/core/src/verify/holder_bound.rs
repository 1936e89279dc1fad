//! Uniform-in-time Hölder bounds along the forward evolution, and the
//! `t^{-(d+β)}` smoothing rate for rough data.

use crate::error::{Error, Result};
use crate::evolution::{run_forward, EquationKind, ForwardOptions, SimConfig, VelocitySpec};
use crate::field::ScalarField;
use crate::spaces::{
    bmo_norm_velocity, default_radii, holder_from_lp, holder_seminorm_direct, holder_seminorm_subsampled,
    DIRECT_PAIR_LIMIT,
};

use super::linfty::max_increase;
use super::report::{Relation, VerificationReport};

/// `max H` over the second half may exceed `max H` over the first half by at
/// most this factor.
pub const GROWTH_FACTOR: f64 = 3.0;
/// Relative slack for `H` nonincreasing without velocity.
pub const MONOTONE_TOLERANCE: f64 = 1e-6;
/// SQG: `B(t) <= B(0) + 0.1`.
pub const BMO_DRIFT: f64 = 0.1;
/// Rough data: `sup H t^{d+β*}` within this factor of its value at `t = 0.1`.
pub const SMOOTHING_FACTOR: f64 = 10.0;
/// Start of the smoothing window.
pub const SMOOTHING_START: f64 = 0.1;
/// Sub-grid nodes per axis when the full pair count exceeds the guard.
pub const SUBSAMPLE_PER_AXIS: usize = 64;
const BETA_RANGE: (f64, f64) = (0.05, 0.45);

#[derive(Clone, Debug)]
pub struct HolderBoundOptions {
    /// Number of snapshot intervals over `[0, T]`.
    pub snapshots: usize,
    /// Treat `θ₀` as rough data and check the smoothing rate.
    pub rough: bool,
}

impl Default for HolderBoundOptions {
    fn default() -> Self {
        HolderBoundOptions {
            snapshots: 20,
            rough: false,
        }
    }
}

/// `β* = clamp(min β̂ / 2, 0.05, 0.45)`.
pub fn tracking_exponent(beta_hats: &[f64]) -> f64 {
    let min = beta_hats.iter().copied().fold(f64::INFINITY, f64::min);
    (0.5 * min).clamp(BETA_RANGE.0, BETA_RANGE.1)
}

/// Direct seminorm, or its sub-grid version above the pair guard.
pub fn tracked_seminorm(f: &ScalarField, beta: f64) -> Result<f64> {
    if (f.grid().len() as u64).pow(2) > DIRECT_PAIR_LIMIT {
        holder_seminorm_subsampled(f, beta, SUBSAMPLE_PER_AXIS)
    } else {
        holder_seminorm_direct(f, beta)
    }
}

pub fn verify_holder_bound(cfg: &SimConfig, theta0: &ScalarField, opts: &HolderBoundOptions) -> Result<VerificationReport> {
    if opts.snapshots < 2 {
        return Err(Error::Precondition("at least two snapshot intervals are required".into()));
    }
    let grid = cfg.grid;
    let dim = grid.dim() as i32;
    let t_end = cfg.t_end;
    let mut report = VerificationReport::new(
        "holder-bound",
        format!("{} | snapshots={} rough={}", cfg.describe(), opts.snapshots, opts.rough),
    );
    let speed = match (&cfg.kind, &cfg.velocity) {
        (EquationKind::Sqg, _) => None,
        (_, spec) => Some(spec.velocity_at(grid, 0.0)?.max_speed()),
    };
    let steps = match speed {
        Some(v) => cfg.schedule(v).0,
        None => cfg.dt.map_or(1, |dt| (t_end / dt - 1e-9).ceil().max(1.0) as usize),
    };
    let fwd = run_forward(
        cfg,
        theta0,
        &ForwardOptions {
            snapshot_every: steps.div_ceil(opts.snapshots).max(1),
            ..ForwardOptions::default()
        },
    )?;
    let mut states: Vec<_> = fwd.snapshots.iter().collect();
    if states.last().map(|s| s.step) != Some(fwd.final_state.step) {
        states.push(&fwd.final_state);
    }
    let t: Vec<f64> = states.iter().map(|s| s.t).collect();
    report.series("t", t.clone());
    report.series("linf", states.iter().map(|s| s.theta.norms().linf).collect());
    report.series("l1", states.iter().map(|s| s.theta.norms().l1).collect());

    let radii = default_radii(grid);
    let stride = (grid.n() / 32).max(1);
    let b: Vec<f64> = states
        .iter()
        .map(|s| bmo_norm_velocity(&s.velocity, &radii, stride))
        .collect::<Result<_>>()?;
    report.series("B", b.clone());

    let fits: Vec<Option<f64>> = states.iter().map(|s| holder_from_lp(&s.theta).ok().map(|f| f.beta)).collect();
    let fitted: Vec<f64> = fits.iter().flatten().copied().collect();
    report.series("beta_hat", fits.iter().map(|b| b.unwrap_or(f64::NAN)).collect());
    let names = ["H_bounded", "H_nonincreasing", "bmo_controlled", "smoothing_rate"];
    if fitted.is_empty() {
        report.note("β̂ could not be fitted at any snapshot; tracking L∞ and L¹ only");
        for name in names {
            report.not_applicable(name, "no Hölder exponent fit");
        }
        return Ok(report);
    }
    let beta_star = tracking_exponent(&fitted);
    report.constant("beta_star", beta_star);
    let h: Vec<f64> = states
        .iter()
        .map(|s| tracked_seminorm(&s.theta, beta_star))
        .collect::<Result<_>>()?;
    report.series("H", h.clone());
    if (grid.len() as u64).pow(2) > DIRECT_PAIR_LIMIT {
        report.note(format!("H evaluated on a {SUBSAMPLE_PER_AXIS}-per-axis sub-grid"));
    }

    let half = h.len() / 2;
    let first = h[..half.max(1)].iter().copied().fold(0.0, f64::max);
    let second = h[half..].iter().copied().fold(0.0, f64::max);
    report.constant("H_sup", h.iter().copied().fold(0.0, f64::max));
    if first > 0.0 {
        report.check(
            "H_bounded",
            second / first,
            Relation::Le,
            GROWTH_FACTOR,
            "max H over the second half over max H over the first half",
        );
    } else {
        report.check("H_bounded", second, Relation::Le, 0.0, "H vanishes initially and must stay zero");
    }

    if matches!((cfg.kind, &cfg.velocity), (EquationKind::Drift, VelocitySpec::Zero)) && h[0] > 0.0 {
        report.check(
            "H_nonincreasing",
            max_increase(&h) / h[0],
            Relation::Le,
            MONOTONE_TOLERANCE,
            "largest snapshot-to-snapshot increase of H relative to H(0), zero velocity",
        );
    } else {
        report.not_applicable("H_nonincreasing", "only asserted without velocity");
    }

    if cfg.kind == EquationKind::Sqg {
        let worst = b.iter().map(|bt| bt - b[0]).fold(f64::NEG_INFINITY, f64::max);
        report.check("bmo_controlled", worst, Relation::Le, BMO_DRIFT, "max_t B(t) - B(0)");
    } else {
        report.not_applicable("bmo_controlled", "velocity is prescribed");
    }

    if opts.rough {
        let weight = |k: usize| t[k].min(1.0).powf(dim as f64 + beta_star);
        let window: Vec<usize> = (0..t.len()).filter(|&k| t[k] >= SMOOTHING_START - 1e-9).collect();
        if window.len() < 2 {
            report.not_applicable("smoothing_rate", "fewer than two snapshots after t = 0.1");
        } else {
            let scaled: Vec<f64> = window.iter().map(|&k| h[k] * weight(k)).collect();
            let linf_scaled: Vec<f64> = window
                .iter()
                .map(|&k| states[k].theta.norms().linf * t[k].min(1.0).powi(dim))
                .collect();
            report.series("smoothing_t", window.iter().map(|&k| t[k]).collect());
            report.series("H_scaled", scaled.clone());
            report.series("linf_scaled", linf_scaled);
            let reference = scaled[0];
            let sup = scaled.iter().copied().fold(0.0, f64::max);
            report.constant("H_scaled_ref", reference);
            report.constant("H_scaled_min_ratio", scaled.iter().copied().fold(f64::INFINITY, f64::min) / reference);
            report.check(
                "smoothing_rate",
                sup / reference,
                Relation::Le,
                SMOOTHING_FACTOR,
                "sup over [0.1, T] of H t^{d+β*} relative to its value at t = 0.1",
            );
        }
    } else {
        report.not_applicable("smoothing_rate", "smooth initial data");
    }
    Ok(report)
}
