//! Oracle agreement for the fractional Laplacian and the exact dissipative
//! semigroup.

use std::f64::consts::TAU;

use crate::error::Result;
use crate::evolution::{run_forward, ForwardOptions, SimConfig};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::singular::{default_cell_radius, fractional_laplacian_direct};
use crate::spectral::{fractional_laplacian_spectral, to_spectral};

use super::report::{Relation, VerificationReport};

/// Relative `L²` budget for the quadrature at the base resolution.
pub const ORACLE_TOLERANCE: f64 = 2e-2;
/// Required error reduction when `ε` and `h` are halved together.
pub const REFINEMENT_RATIO: f64 = 1.5;
/// Per-mode agreement with `e^{-2π|n|t}`, relative to the largest coefficient.
pub const SEMIGROUP_TOLERANCE: f64 = 1e-12;

/// `cos(2πx) + ½ sin(6πx)`.
pub fn two_mode(grid: GridSpec) -> ScalarField {
    ScalarField::from_fn(grid, |x| (TAU * x[0]).cos() + 0.5 * (3.0 * TAU * x[0]).sin()).expect("finite")
}

/// Relative `L²` distance of the quadrature from the multiplier.
pub fn oracle_error(f: &ScalarField, eps: f64) -> Result<f64> {
    let direct = fractional_laplacian_direct(f, eps, default_cell_radius(f.grid().dim()))?;
    let spectral = fractional_laplacian_spectral(f, 1.0)?;
    let diff = direct.axpy(-1.0, &spectral)?;
    Ok(diff.norms().l2 / spectral.norms().l2)
}

/// Quadrature against multiplier on a 1-d two-mode field at `N` and `2N`
/// with `ε = eps_cells·h`.
pub fn verify_operator_oracle(n: usize, eps_cells: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("operators", format!("oracle d=1 N={n} eps={eps_cells}h"));
    let coarse = GridSpec::new(1, n)?;
    let fine = GridSpec::new(1, 2 * n)?;
    let e1 = oracle_error(&two_mode(coarse), eps_cells * coarse.spacing())?;
    let e2 = oracle_error(&two_mode(fine), eps_cells * fine.spacing())?;
    report.series("relative_error", vec![e1, e2]);
    report.check(
        "oracle_agreement",
        e1,
        Relation::Le,
        ORACLE_TOLERANCE,
        "relative L² distance between quadrature and multiplier",
    );
    report.check(
        "oracle_refinement",
        e1 / e2,
        Relation::Ge,
        REFINEMENT_RATIO,
        "error reduction when ε and h are halved",
    );
    Ok(report)
}

/// Zero-velocity run against `e^{-t·2π|n|}` mode by mode.
pub fn verify_semigroup(theta0: &ScalarField, t: f64) -> Result<VerificationReport> {
    let grid = theta0.grid();
    let mut cfg = SimConfig::new(grid);
    cfg.t_end = t;
    cfg.cadence = usize::MAX;
    let mut report = VerificationReport::new("operators", format!("semigroup {}", cfg.describe()));
    let run = run_forward(&cfg, theta0, &ForwardOptions::default())?;
    let a = to_spectral(theta0);
    let b = to_spectral(&run.final_state.theta);
    let scale = a.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let worst = (0..grid.len())
        .map(|idx| {
            let m = grid.mode(idx);
            let k = TAU * ((m[0] * m[0] + m[1] * m[1]) as f64).sqrt();
            (b.coeffs()[idx] - a.coeffs()[idx] * (-k * t).exp()).norm()
        })
        .fold(0.0, f64::max);
    report.constant("max_mode_error", worst);
    report.check(
        "exact_semigroup",
        worst / scale.max(f64::MIN_POSITIVE),
        Relation::Le,
        SEMIGROUP_TOLERANCE,
        "max over modes of |θ̂(t) - e^{-2π|n|t} θ̂₀| relative to max |θ̂₀|",
    );
    Ok(report)
}
