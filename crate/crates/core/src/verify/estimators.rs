//! Agreement of the Hölder estimators and uniformity of the test-function
//! family.

use crate::error::Result;
use crate::grid::GridSpec;
use crate::field::ScalarField;
use crate::spaces::{holder_from_classes, holder_from_lp, make_test_function, DEFAULT_A};

use super::report::{Relation, VerificationReport};

/// Half-width of the accepted band around the constructed exponent.
pub const EXPONENT_BAND: f64 = 0.1;
/// Largest accepted gap between the two estimates.
pub const AGREEMENT: f64 = 0.1;
/// `min_j c_j / max_j c_j` must stay above this.
pub const UNIFORMITY_FLOOR: f64 = 0.1;

/// Dyadic radii `2^{-j}` for every level the grid supports.
pub fn dyadic_radii(grid: GridSpec) -> Vec<f64> {
    (0..)
        .take_while(|&j| 2usize.pow(j) <= grid.n() / 8)
        .map(|j| 2f64.powi(-(j as i32)))
        .collect()
}

/// Both estimators on `f`, expected near `beta`.
pub fn verify_holder_estimators(f: &ScalarField, beta: f64) -> Result<VerificationReport> {
    let grid = f.grid();
    let mut report = VerificationReport::new(
        "estimators",
        format!("holder d={} N={} beta={beta}", grid.dim(), grid.n()),
    );
    let lp = holder_from_lp(f)?;
    let classes = holder_from_classes(f, &dyadic_radii(grid), DEFAULT_A)?;
    report.series("lp_levels", lp.bands.iter().map(|b| b.level as f64).collect());
    report.series("lp_sup", lp.bands.iter().map(|b| b.sup).collect());
    report.series("pairing_r", classes.samples.iter().map(|p| p.r).collect());
    report.series("pairing_s", classes.samples.iter().map(|p| p.s).collect());
    let b_lp = lp.beta;
    let b_cl = classes.beta.unwrap_or(f64::NAN);
    report.constant("beta_lp", b_lp);
    report.constant("beta_classes", b_cl);
    let detail = format!("|β̂ - {beta}|");
    report.check("lp_exponent", (b_lp - beta).abs(), Relation::Le, EXPONENT_BAND, detail.clone());
    report.check("classes_exponent", (b_cl - beta).abs(), Relation::Le, EXPONENT_BAND, detail);
    report.check("estimators_agree", (b_lp - b_cl).abs(), Relation::Le, AGREEMENT, "|β̂_lp - β̂_classes|");
    Ok(report)
}

/// `Ψ̃_j ∈ U_{2^{-j}}` for `j = 0..=max_level` with a uniform generator constant.
pub fn verify_class_machinery(grid: GridSpec, max_level: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "estimators",
        format!("classes d={} N={} levels=0..={max_level}", grid.dim(), grid.n()),
    );
    let mut cs = Vec::new();
    let mut members = 0;
    for j in 0..=max_level {
        // make_test_function re-checks membership before returning.
        let tf = make_test_function(j, grid, DEFAULT_A)?;
        members += 1;
        cs.push(tf.c);
    }
    let c_min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let c_max = cs.iter().copied().fold(0.0, f64::max);
    report.series("c", cs);
    report.constant("c_min", c_min);
    report.check(
        "all_members",
        members as f64,
        Relation::Ge,
        (max_level + 1) as f64,
        "levels whose rescaled kernel passes membership",
    );
    report.check(
        "uniform_constant",
        c_min / c_max,
        Relation::Ge,
        UNIFORMITY_FLOOR,
        "min_j c_j / max_j c_j",
    );
    Ok(report)
}
