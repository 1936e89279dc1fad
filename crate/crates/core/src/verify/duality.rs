//! Transfer of the evolution onto the test function:
//! `⟨θ(t), φ⟩ = ⟨θ₀, φ^t(·, t)⟩`.

use crate::error::{Error, Result};
use crate::evolution::{run_dual, run_forward, DualOptions, ForwardOptions, SimConfig};
use crate::field::ScalarField;

use super::report::{Relation, VerificationReport};

/// Relative discrepancy budget at the base step.
pub const DUALITY_TOLERANCE: f64 = 1e-4;
/// Minimum reduction of `D` per halving of `dt`.
pub const HALVING_RATIO: f64 = 3.5;

#[derive(Clone, Debug)]
pub struct DualityOptions {
    /// Number of `dt` halvings in the convergence table.
    pub halvings: usize,
}

impl Default for DualityOptions {
    fn default() -> Self {
        DualityOptions { halvings: 2 }
    }
}

/// `D = |⟨θ(t), φ⟩ - ⟨θ₀, φ^t(·,t)⟩|` with the dual run on `substeps` dual
/// steps per forward step.
fn discrepancy(cfg: &SimConfig, theta0: &ScalarField, phi: &ScalarField, substeps: usize) -> Result<(f64, f64)> {
    let opts = ForwardOptions {
        record_history: true,
        ..ForwardOptions::default()
    };
    let fwd = run_forward(cfg, theta0, &opts)?;
    let history = fwd.history.as_ref().expect("history recorded");
    let dual_opts = DualOptions {
        substeps,
        cadence: usize::MAX,
        ..DualOptions::default()
    };
    let dual = run_dual(cfg, phi, cfg.t_end, history, &dual_opts)?;
    let lhs = fwd.final_state.theta.inner(phi)?;
    let rhs = theta0.inner(&dual.final_field)?;
    Ok(((lhs - rhs).abs(), fwd.dt))
}

/// Runs the duality check at the configured step and a `dt`-halving table.
///
/// At matched cadence the dual step is the exact transpose of the forward
/// step, so the verdict discrepancy sits at round-off. The convergence table
/// runs the dual at half the forward step, sampling the velocity history
/// between frames, which exposes the second-order consistency of the pair.
pub fn verify_duality(
    cfg: &SimConfig,
    theta0: &ScalarField,
    phi: &ScalarField,
    t: f64,
    opts: &DualityOptions,
) -> Result<VerificationReport> {
    let mut cfg = cfg.clone();
    cfg.t_end = t;
    cfg.cadence = usize::MAX;
    if theta0.grid() != cfg.grid || phi.grid() != cfg.grid {
        return Err(Error::GridMismatch("θ₀ and φ must live on the configured grid".into()));
    }
    let mut report = VerificationReport::new(
        "duality",
        format!("{} | t={t:e} | halvings={}", cfg.describe(), opts.halvings),
    );
    let scale = theta0.norms().l2 * phi.norms().l2;
    report.constant("norm_product", scale);

    let (d, dt) = discrepancy(&cfg, theta0, phi, 1)?;
    report.constant("dt", dt);
    report.constant("D", d);
    report.check(
        "pairing_discrepancy",
        d,
        Relation::Le,
        DUALITY_TOLERANCE * scale,
        "D <= 1e-4 |θ₀|₂ |φ|₂ at matched cadence",
    );

    let mut dts = Vec::new();
    let mut ds = Vec::new();
    for k in 0..=opts.halvings {
        let mut c = cfg.clone();
        c.dt = Some(dt / 2f64.powi(k as i32));
        let (dk, dtk) = discrepancy(&c, theta0, phi, 2)?;
        dts.push(dtk);
        ds.push(dk);
    }
    let floor = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut ratios = Vec::new();
    for (k, w) in ds.windows(2).enumerate() {
        let name = format!("halving_ratio_{k}");
        if w[0] <= floor || w[1] <= floor {
            ratios.push(f64::NAN);
            report.not_applicable(&name, "discrepancy at round-off on both resolutions");
        } else {
            let ratio = w[0] / w[1];
            ratios.push(ratio);
            report.check(&name, ratio, Relation::Ge, HALVING_RATIO, "D(dt)/D(dt/2), dual at half step");
        }
    }
    report.series("halving_dt", dts);
    report.series("halving_D", ds);
    report.series("halving_ratio", ratios);
    Ok(report)
}
