//! Growth of the `Ω`-weighted mass about the moving centre `x(s)`:
//! `G(s) <= G(0) + C s r^{-1/2}` for `s <= γ r`.

use crate::error::{Error, Result};
use crate::evolution::{run_dual, track_center, DualOptions, SimConfig, VelocityHistory};
use crate::field::{ScalarField, VelocityField};
use crate::fit::ols_through_origin;
use crate::spaces::{
    ball_oscillations, bmo_norm, bmo_norm_velocity, check_class_membership, concentration_at, default_radii, ClassParams,
};

use super::linfty::sample_cadence;
use super::report::{Relation, VerificationReport};

/// The bound slope is this multiple of the least-squares slope: a line fitted
/// through a curved series cannot bound it from above by itself.
pub const BOUND_SLOPE_FACTOR: f64 = 2.0;
/// Ceiling for the fitted constant in `‖f - f̄_B‖_{L²(B)} <= c₂|B|^{1/2}‖f‖_BMO`.
pub const OSCILLATION_CONSTANT_LIMIT: f64 = 10.0;
/// Velocity snapshots sampled for the BMO diagnostics.
const BMO_SNAPSHOTS: usize = 5;

fn diagnostic_stride(n: usize) -> usize {
    (n / 32).max(1)
}

/// `max ‖f - f̄_B‖_{L²(B)} / (|B|^{1/2} ‖f‖_BMO)` over sampled balls and
/// components; `None` for a constant field.
pub(crate) fn oscillation_constant(u: &VelocityField) -> Result<Option<f64>> {
    let grid = u.grid();
    let radii = default_radii(grid);
    let stride = diagnostic_stride(grid.n());
    let mut worst: Option<f64> = None;
    for comp in u.components() {
        let b = bmo_norm(comp, &radii, stride)?;
        if b <= 1e-14 * comp.max_abs() || b == 0.0 {
            continue;
        }
        for ball in ball_oscillations(comp, &radii, stride)? {
            let c = ball.l2_deviation / (ball.measure.sqrt() * b);
            worst = Some(worst.map_or(c, |w: f64| w.max(c)));
        }
    }
    Ok(worst)
}

pub fn verify_concentration(
    psi0: &ScalarField,
    cfg: &SimConfig,
    history: &VelocityHistory,
    horizon: f64,
    r: f64,
    gamma: f64,
) -> Result<VerificationReport> {
    if !(gamma > 0.0) {
        return Err(Error::OutOfRange {
            what: "gamma",
            value: gamma,
            allowed: "> 0",
        });
    }
    let grid = cfg.grid;
    let mut report = VerificationReport::new(
        "concentration",
        format!("{} | horizon={horizon:e} r={r:e} gamma={gamma:e}", cfg.describe()),
    );
    let params = ClassParams::new(r, crate::spaces::DEFAULT_A)?;
    let start = check_class_membership(psi0, params);
    let x0 = start.best_center;
    report.constant("x0_1", x0[0]);
    report.constant("x0_2", x0[1]);

    let window_end = (gamma * r).min(horizon);
    let cadence = sample_cadence(cfg, window_end, history)?;
    let opts = DualOptions {
        cadence,
        keep_fields: true,
        ..DualOptions::default()
    };
    let run = run_dual(cfg, psi0, window_end, history, &opts)?;
    let track = track_center(x0, r.min(0.5), history, window_end, cfg.sign, run.steps)?;
    let mut s = Vec::new();
    let mut g = Vec::new();
    let mut xs1 = Vec::new();
    let mut xs2 = Vec::new();
    for (row, field) in run.rows.iter().zip(&run.fields) {
        let x = track[row.step].x;
        s.push(row.s);
        g.push(concentration_at(field, x));
        xs1.push(x[0]);
        xs2.push(x[1]);
    }
    report.series("s", s.clone());
    report.series("G", g.clone());
    report.series("x1", xs1);
    report.series("x2", xs2);

    let sqrt_r = r.sqrt();
    let g0 = g[0];
    let (fx, fy): (Vec<f64>, Vec<f64>) = s.iter().zip(&g).skip(1).map(|(si, gi)| (si / sqrt_r, gi - g0)).unzip();
    let c_ls = ols_through_origin(&fx, &fy).unwrap_or(0.0);
    let c_bound = BOUND_SLOPE_FACTOR * c_ls.max(0.0);
    report.constant("C_ls", c_ls);
    report.constant("C_hat", c_bound);
    let excess = s
        .iter()
        .zip(&g)
        .map(|(si, gi)| gi - (g0 + c_bound * si / sqrt_r))
        .fold(f64::NEG_INFINITY, f64::max);
    report.check(
        "growth_bound",
        excess,
        Relation::Le,
        1e-12,
        "max over s <= γr of G(s) - G(0) - Ĉ s r^{-1/2}, Ĉ = 2 max(C_ls, 0)",
    );

    let snapshot_times: Vec<f64> = if history.is_static() {
        vec![0.0]
    } else {
        (0..BMO_SNAPSHOTS)
            .map(|k| horizon - window_end * k as f64 / (BMO_SNAPSHOTS - 1) as f64)
            .collect()
    };
    let mut b_series = Vec::new();
    let mut c2: Option<f64> = None;
    for &t in &snapshot_times {
        let u = history.velocity_at(t.max(0.0))?;
        b_series.push(bmo_norm_velocity(&u, &default_radii(grid), diagnostic_stride(grid.n()))?);
        if let Some(c) = oscillation_constant(&u)? {
            c2 = Some(c2.map_or(c, |w: f64| w.max(c)));
        }
    }
    let b = b_series.iter().copied().fold(0.0, f64::max);
    report.series("B", b_series);
    report.constant("B", b);
    match c2 {
        Some(c) => {
            report.constant("c2", c);
            report.check(
                "oscillation_constant",
                c,
                Relation::Le,
                OSCILLATION_CONSTANT_LIMIT,
                "single constant c₂ in |v - v̄_B|_{L²(B)} <= c₂|B|^{1/2}|v|_BMO over sampled balls",
            );
        }
        None => report.not_applicable("oscillation_constant", "velocity has no oscillation"),
    }
    Ok(report)
}

