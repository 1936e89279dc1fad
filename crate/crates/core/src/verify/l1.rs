//! Strict `L¹` decay of mean-zero dual solutions while they stay
//! concentrated near `x(s)`.

use crate::error::{Error, Result};
use crate::evolution::{run_dual, track_center, DualOptions, SimConfig, VelocityHistory};
use crate::field::ScalarField;
use crate::fit::{ols, transient_len};
use crate::grid::torus_distance;
use crate::spaces::{check_class_membership, concentration_at, ClassParams, DEFAULT_A, MEAN_ZERO_TOLERANCE};

use super::linfty::max_increase;
use super::report::{Relation, VerificationReport};

/// Allowed increase of `‖ψ‖₁` per dual step.
pub const STEP_TOLERANCE: f64 = 1e-6;
/// Regime: `‖ψ‖₁ >= 9/10`.
pub const L1_FLOOR: f64 = 0.9;
/// Regime: concentration at most `11/10 r^{1/2}`.
pub const CONCENTRATION_CEILING: f64 = 1.1;
/// Localization radius in units of `r`.
pub const LOCALIZATION: f64 = 400.0;
/// Each signed part keeps at least this much mass near the centre.
pub const SPLIT_FLOOR: f64 = 0.25;
/// Upper bound on retained fields.
const FIELD_SAMPLES: usize = 100;

/// Positive and negative mass of `f` within periodic distance `radius` of `x`.
pub fn signed_masses(f: &ScalarField, x: [f64; 2], radius: f64) -> (f64, f64) {
    let g = f.grid();
    let (mut pos, mut neg) = (0.0, 0.0);
    for (i, &v) in f.values().iter().enumerate() {
        if radius < 0.5 && torus_distance(g.coords(i), x, g.dim()) > radius {
            continue;
        }
        if v > 0.0 {
            pos += v;
        } else {
            neg -= v;
        }
    }
    (pos * g.cell_volume(), neg * g.cell_volume())
}

/// Runs the dual evolution of `ψ₀/‖ψ₀‖₁`.
pub fn verify_l1_decay(
    psi0: &ScalarField,
    cfg: &SimConfig,
    history: &VelocityHistory,
    horizon: f64,
    r: f64,
) -> Result<VerificationReport> {
    let norms = psi0.norms();
    if norms.l1 == 0.0 || psi0.mean().abs() > MEAN_ZERO_TOLERANCE * norms.linf {
        return Err(Error::Precondition(format!(
            "L¹ decay needs nonzero mean-zero data, mean = {:e}",
            psi0.mean()
        )));
    }
    let params = ClassParams::new(r, DEFAULT_A)?;
    let psi = psi0.scaled(1.0 / norms.l1);
    let mut report = VerificationReport::new("l1", format!("{} | horizon={horizon:e} r={r:e}", cfg.describe()));
    report.note("ψ₀ is normalized to unit L¹ norm");

    // Every step, for the monotonicity verdict.
    let every = run_dual(cfg, &psi, horizon, history, &DualOptions::default())?;
    let l1_all: Vec<f64> = every.rows.iter().map(|r| r.l1).collect();
    report.check(
        "l1_nonincreasing",
        max_increase(&l1_all),
        Relation::Le,
        STEP_TOLERANCE,
        "largest increase of |ψ|₁ between consecutive dual steps",
    );
    report.series("l1", l1_all);
    report.series("s", every.rows.iter().map(|r| r.s).collect());

    // Fields only up to the first step below the L¹ floor: the regime cannot
    // extend past it.
    let cut = every.rows.iter().position(|r| r.l1 < L1_FLOOR).unwrap_or(every.steps).max(1);
    let opts = DualOptions {
        cadence: cut.div_ceil(FIELD_SAMPLES).max(1),
        keep_fields: true,
        stop_after: Some(cut),
        ..DualOptions::default()
    };
    let run = run_dual(cfg, &psi, horizon, history, &opts)?;
    let x0 = check_class_membership(&psi, params).best_center;
    let track = track_center(x0, r.min(0.5), history, horizon, cfg.sign, run.steps)?;
    let radius = LOCALIZATION * r;
    if radius >= 0.5 {
        report.note("localization radius 400r exceeds the torus; using the whole torus");
    }
    let mut s = Vec::new();
    let mut l1 = Vec::new();
    let mut conc = Vec::new();
    let mut split = Vec::new();
    for (row, field) in run.rows.iter().zip(&run.fields) {
        let x = track[row.step].x;
        let (pos, neg) = signed_masses(field, x, radius);
        s.push(row.s);
        l1.push(row.l1);
        conc.push(concentration_at(field, x) / r.sqrt());
        split.push(pos.min(neg));
    }
    let window = l1
        .iter()
        .zip(&conc)
        .take_while(|(m, c)| **m >= L1_FLOOR && **c <= CONCENTRATION_CEILING)
        .count();
    report.series("sample_s", s.clone());
    report.series("concentration_ratio", conc);
    report.series("split_mass", split.clone());
    report.constant("window_samples", window as f64);
    if window < 4 {
        report.not_applicable("decay_rate_positive", "regime |ψ|₁ >= 9/10, concentration <= 11/10 r^{1/2} too short");
        report.not_applicable("split_mass", "regime never entered");
        return Ok(report);
    }
    report.constant("window_end", s[window - 1]);
    let skip = transient_len(window);
    let c_hat = ols(&s[skip..window], &l1[skip..window]).map_or(f64::NAN, |(slope, _)| -slope * r);
    report.constant("c_hat", c_hat);
    report.check(
        "decay_rate_positive",
        c_hat,
        Relation::Gt,
        0.0,
        "ĉ from d/ds |ψ|₁ ≈ -ĉ r^{-1} over the regime window",
    );
    let worst_split = split[..window].iter().copied().fold(f64::INFINITY, f64::min);
    report.check(
        "split_mass",
        worst_split,
        Relation::Ge,
        SPLIT_FLOOR,
        "min over the window of the smaller signed mass within 400r of x(s)",
    );
    Ok(report)
}
