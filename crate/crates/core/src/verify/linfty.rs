//! `L^∞` decay of the dual solution while the maximum is large compared
//! with the `L¹` norm: `M' <= -C M^{(d+1)/d}`.

use crate::error::Result;
use crate::evolution::{dual_schedule, run_dual, DualOptions, SimConfig, VelocityHistory};
use crate::field::ScalarField;
use crate::fit::{ols_through_origin, transient_len};

use super::report::{Relation, VerificationReport};

/// Upper bound on recorded samples per run.
pub(crate) const MAX_SAMPLES: usize = 400;
/// Window condition `M >= 10 ‖ψ‖₁`.
pub const WINDOW_FACTOR: f64 = 10.0;
/// Per-sample relative slack for the monotonicity verdict.
pub const MONOTONE_TOLERANCE: f64 = 1e-8;

pub(crate) fn sample_cadence(cfg: &SimConfig, horizon: f64, history: &VelocityHistory) -> Result<usize> {
    let (steps, _) = dual_schedule(cfg, horizon, history, 1)?;
    Ok(steps.div_ceil(MAX_SAMPLES).max(1))
}

/// Largest increase between consecutive samples.
pub(crate) fn max_increase(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

pub fn verify_linfty_decay(
    psi0: &ScalarField,
    cfg: &SimConfig,
    history: &VelocityHistory,
    horizon: f64,
) -> Result<VerificationReport> {
    let dim = cfg.grid.dim() as i32;
    let mut report = VerificationReport::new("linfty", format!("{} | horizon={horizon:e}", cfg.describe()));
    let opts = DualOptions {
        cadence: sample_cadence(cfg, horizon, history)?,
        ..DualOptions::default()
    };
    let run = run_dual(cfg, psi0, horizon, history, &opts)?;
    let s: Vec<f64> = run.rows.iter().map(|r| r.s).collect();
    let m: Vec<f64> = run.rows.iter().map(|r| r.linf).collect();
    let l1: Vec<f64> = run.rows.iter().map(|r| r.l1).collect();
    report.series("s", s.clone());
    report.series("M", m.clone());
    report.series("l1", l1.clone());

    let m0 = m[0];
    if m0 == 0.0 {
        for name in ["M_nonincreasing", "fitted_C_positive", "closed_form_bound"] {
            report.not_applicable(name, "ψ₀ vanishes");
        }
        return Ok(report);
    }
    report.check(
        "M_nonincreasing",
        max_increase(&m) / m0,
        Relation::Le,
        MONOTONE_TOLERANCE,
        "largest step-to-step increase of M relative to M(0)",
    );

    let window = m.iter().zip(&l1).take_while(|(mi, li)| **mi >= WINDOW_FACTOR * **li).count();
    report.constant("window_samples", window as f64);
    if window < 4 {
        report.not_applicable("fitted_C_positive", "M never exceeds 10 |ψ|₁ long enough to fit");
        report.not_applicable("closed_form_bound", "empty window");
        return Ok(report);
    }
    report.constant("window_end", s[window - 1]);

    let p = (dim + 1) as f64 / dim as f64;
    let skip = transient_len(window - 1);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (skip..window - 1)
        .map(|k| {
            let ds = s[k + 1] - s[k];
            let mid = 0.5 * (m[k] + m[k + 1]);
            (mid.powf(p), -(m[k + 1] - m[k]) / ds)
        })
        .unzip();
    let c = ols_through_origin(&xs, &ys).unwrap_or(f64::NAN);
    report.constant("C_fit", c);
    report.check("fitted_C_positive", c, Relation::Gt, 0.0, "least squares of -M' against M^{(d+1)/d}");

    let c_hat = 0.5 * c;
    report.constant("C_hat", c_hat);
    let worst = (0..window)
        .map(|k| {
            let bound = m0 / (1.0 + c_hat * m0.powf(1.0 / dim as f64) * s[k]).powi(dim);
            m[k] / bound
        })
        .fold(0.0, f64::max);
    report.check(
        "closed_form_bound",
        worst,
        Relation::Le,
        1.0 + 1e-9,
        "max over the window of M(s) (1 + Ĉ M(0)^{1/d} s)^d / M(0), Ĉ = C/2",
    );
    Ok(report)
}
