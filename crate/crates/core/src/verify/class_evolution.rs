//! Class evolution `ψ(·,s) ∈ (r/(r+Ks))^{δ/K} U_{r+Ks}` with `δ` and `K`
//! exhibited as fits.

use crate::error::{Error, Result};
use crate::evolution::{run_dual, DualOptions, SimConfig, VelocityHistory};
use crate::field::ScalarField;
use crate::fit::{ols, transient_len};
use crate::spaces::{check_class_membership, ClassParams};

use super::linfty::sample_cadence;
use super::report::{Relation, VerificationReport};

/// Trial growth rates in units of `r / horizon`.
pub const TRIAL_RATES: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];
/// Slack on `a(s) <= 1`.
pub const SCALE_TOLERANCE: f64 = 1e-9;

/// Minimal scales `a(s)` with `ψ(·,s) ∈ a(s)·U_{ρ(s)}`, `ρ = min(r + K̂s, 1)`.
#[derive(Clone, Debug)]
pub struct ScaleSeries {
    pub k_hat: f64,
    pub s: Vec<f64>,
    pub rho: Vec<f64>,
    pub a: Vec<f64>,
}

impl ScaleSeries {
    /// Exponent `ê` of `a ≈ (r/ρ)^ê` from least squares on the uncapped,
    /// post-transient samples with `s > 0`.
    pub fn exponent(&self, r: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .s
            .iter()
            .zip(&self.rho)
            .zip(&self.a)
            .filter(|((s, rho), a)| **s > 0.0 && **rho < 1.0 && **a > 0.0)
            .map(|((_, rho), a)| ((r / rho).ln(), a.ln()))
            .collect();
        let pts = &pts[transient_len(pts.len())..];
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
        ols(&xs, &ys).map(|(slope, _)| slope)
    }

    /// Largest `e` with `a <= (r/ρ)^e` on every uncapped sample with `s > 0`.
    pub fn envelope_exponent(&self, r: f64) -> Option<f64> {
        self.s
            .iter()
            .zip(&self.rho)
            .zip(&self.a)
            .filter(|((s, rho), _)| **s > 0.0 && **rho < 1.0)
            .map(|((_, rho), a)| if *a > 0.0 { a.ln() / (r / rho).ln() } else { f64::INFINITY })
            .reduce(f64::min)
    }

    pub fn max_scale(&self) -> f64 {
        self.a.iter().copied().fold(0.0, f64::max)
    }
}

/// Runs the dual evolution once and evaluates `a(s)` for every trial rate.
/// No membership precondition, so it applies to any multiple of a member.
pub fn class_scale_series(
    psi0: &ScalarField,
    cfg: &SimConfig,
    history: &VelocityHistory,
    horizon: f64,
    params: ClassParams,
    rates: &[f64],
) -> Result<Vec<ScaleSeries>> {
    let opts = DualOptions {
        cadence: sample_cadence(cfg, horizon, history)?,
        membership: Some(params),
        ..DualOptions::default()
    };
    let run = run_dual(cfg, psi0, horizon, history, &opts)?;
    let dim = cfg.grid.dim();
    let r = params.r();
    rates
        .iter()
        .map(|&k_hat| {
            let mut out = ScaleSeries {
                k_hat,
                s: Vec::new(),
                rho: Vec::new(),
                a: Vec::new(),
            };
            for row in &run.rows {
                let m = row.membership.as_ref().expect("membership requested");
                let rho = (r + k_hat * row.s).min(1.0);
                let a = m.minimal_scale_at(rho, dim).ok_or_else(|| {
                    Error::Precondition(format!("dual solution lost its zero mean at s = {:e}", row.s))
                })?;
                out.s.push(row.s);
                out.rho.push(rho);
                out.a.push(a);
            }
            Ok(out)
        })
        .collect()
}

pub fn verify_class_evolution(
    psi0: &ScalarField,
    cfg: &SimConfig,
    history: &VelocityHistory,
    horizon: f64,
    params: ClassParams,
) -> Result<VerificationReport> {
    let start = check_class_membership(psi0, params);
    if !start.member {
        return Err(Error::Precondition(format!(
            "ψ₀ is not in U_r(A) for r = {}, A = {} (minimal scale {:?})",
            params.r(),
            params.a(),
            start.minimal_scale
        )));
    }
    if !(horizon > 0.0) {
        return Err(Error::OutOfRange {
            what: "horizon",
            value: horizon,
            allowed: "> 0",
        });
    }
    let r = params.r();
    let mut report = VerificationReport::new(
        "class-evolution",
        format!("{} | horizon={horizon:e} r={r:e} A={}", cfg.describe(), params.a()),
    );
    let rates: Vec<f64> = TRIAL_RATES.iter().map(|m| m * r / horizon).collect();
    let all = class_scale_series(psi0, cfg, history, horizon, params, &rates)?;
    report.series("s", all[0].s.clone());

    let mut chosen: Option<(usize, f64)> = None;
    let mut fallback = (0, f64::INFINITY);
    for (i, series) in all.iter().enumerate() {
        let a_max = series.max_scale();
        let e = series.exponent(r).unwrap_or(f64::NAN);
        report.series(&format!("a_K{i}"), series.a.clone());
        report.constant(&format!("K_hat_{i}"), series.k_hat);
        report.constant(&format!("a_max_K{i}"), a_max);
        report.constant(&format!("exponent_K{i}"), e);
        if chosen.is_none() && a_max <= 1.0 + SCALE_TOLERANCE && e > 0.0 {
            chosen = Some((i, e));
        }
        if a_max < fallback.1 {
            fallback = (i, a_max);
        }
    }
    let (idx, exponent) = chosen.unwrap_or_else(|| (fallback.0, all[fallback.0].exponent(r).unwrap_or(f64::NAN)));
    let series = &all[idx];
    let k_hat = series.k_hat;
    report.constant("K_hat", k_hat);
    report.constant("exponent", exponent);
    report.constant("delta_hat", exponent * k_hat);
    report.check(
        "scale_at_most_one",
        series.max_scale(),
        Relation::Le,
        1.0 + SCALE_TOLERANCE,
        "max_s a(s) for the first trial K̂ that also has a positive exponent",
    );
    report.check(
        "exponent_positive",
        exponent,
        Relation::Gt,
        0.0,
        "δ̂/K̂ from least squares of ln a against ln(r/(r+K̂s))",
    );

    let tail: Vec<f64> = series.rho.iter().zip(&series.a).filter(|(rho, _)| **rho >= 1.0).map(|(_, a)| *a).collect();
    let envelope = series.envelope_exponent(r);
    if let Some(e) = envelope {
        report.constant("envelope_exponent", e);
    }
    match envelope {
        Some(e) if !tail.is_empty() && e.is_finite() => {
            let worst = tail.iter().copied().fold(0.0, f64::max);
            report.check(
                "tail_bound",
                worst / r.powf(e),
                Relation::Le,
                1.0 + SCALE_TOLERANCE,
                "past the cap, max a(s) / r^e against U_1, e the envelope exponent of the uncapped samples",
            );
        }
        _ => report.not_applicable("tail_bound", "r + K̂s stays below 1 over the horizon"),
    }
    report.note("a finite run exhibits (δ, K) for this datum and velocity; it cannot certify uniformity over U_r and all BMO velocities");
    report.note(format!(
        "stand-ins for the interrelations δ + dK <= C A^(1/d) and K/2 - δ > C(A^(1/2d) + B A^(3/4d)): δ̂ = {:e}, K̂ = {:e}, K̂/2 - δ̂ = {:e}",
        exponent * k_hat,
        k_hat,
        0.5 * k_hat - exponent * k_hat
    ));
    Ok(report)
}
