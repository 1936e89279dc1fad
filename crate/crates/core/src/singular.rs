//! Real-space quadrature of the periodized principal-value integral
//! `Σ_n ∫ (f(x) - f(y)) / |x - y - n|^{d+1} dy`.
//!
//! This route never touches the FFT; it is the independent oracle for
//! [`crate::spectral::fractional_laplacian_spectral`] at `α = 1`.
//!
//! The excluded core `|x - y| < ε` is restored to second order with the
//! Taylor term `-κ_d ε Δf(x)` (`κ_1 = 1`, `κ_2 = π/2`) using centered
//! differences, and the overall constant is calibrated so that `cos(2πx₁)`
//! is mapped to `2π cos(2πx₁)` on the same grid, `ε` and lattice radius.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;

/// Lattice truncation radius used when callers have no preference.
pub fn default_cell_radius(dim: usize) -> usize {
    if dim == 1 {
        100
    } else {
        20
    }
}

/// Kernel weight of every node offset, summed over lattice images.
fn offset_weights(grid: GridSpec, eps: f64, cell_radius: usize) -> Vec<f64> {
    let d = grid.dim();
    let h = grid.spacing();
    let vol = grid.cell_volume();
    let r = cell_radius as i64;
    let images: Vec<[f64; 2]> = if d == 1 {
        (-r..=r).map(|n| [n as f64, 0.0]).collect()
    } else {
        let mut v = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                if a * a + b * b <= r * r {
                    v.push([a as f64, b as f64]);
                }
            }
        }
        v
    };
    let power = (d + 1) as i32;
    (0..grid.len())
        .into_par_iter()
        .map(|m| {
            let ij = grid.unflatten(m);
            let z = [ij[0] as f64 * h, ij[1] as f64 * h];
            let mut acc = 0.0;
            for n in &images {
                let dist = if d == 1 {
                    (z[0] + n[0]).abs()
                } else {
                    (z[0] + n[0]).hypot(z[1] + n[1])
                };
                if dist >= eps * (1.0 - 1e-12) {
                    acc += dist.powi(-power);
                }
            }
            acc * vol
        })
        .collect()
}

/// Centered second-difference Laplacian.
fn discrete_laplacian(f: &ScalarField) -> Vec<f64> {
    let g = f.grid();
    let h2 = g.spacing().powi(2);
    let v = f.values();
    (0..g.len())
        .map(|idx| {
            let ij = g.unflatten(idx);
            let mut acc = 0.0;
            for axis in 0..g.dim() {
                let mut plus = [0isize; 2];
                let mut minus = [0isize; 2];
                plus[axis] = 1;
                minus[axis] = -1;
                acc += v[g.shifted(ij, plus)] + v[g.shifted(ij, minus)] - 2.0 * v[idx];
            }
            acc / h2
        })
        .collect()
}

fn core_coefficient(dim: usize) -> f64 {
    if dim == 1 {
        1.0
    } else {
        FRAC_PI_2
    }
}

/// Uncalibrated operator: lattice quadrature plus core correction.
fn raw_operator(f: &ScalarField, weights: &[f64], eps: f64) -> Vec<f64> {
    let g = f.grid();
    let v = f.values();
    let lap = discrete_laplacian(f);
    let kappa = core_coefficient(g.dim());
    (0..g.len())
        .into_par_iter()
        .map(|i| {
            let ij = g.unflatten(i);
            let mut acc = 0.0;
            for (m, w) in weights.iter().enumerate() {
                if *w == 0.0 {
                    continue;
                }
                let mj = g.unflatten(m);
                let j = g.shifted(ij, [mj[0] as isize, mj[1] as isize]);
                acc += w * (v[i] - v[j]);
            }
            acc - kappa * eps * lap[i]
        })
        .collect()
}

/// Raw eigenvalue of the quadrature on the mode `cos(2πx₁)`.
fn lowest_mode_symbol(grid: GridSpec, weights: &[f64], eps: f64) -> f64 {
    let h = grid.spacing();
    let mut acc = 0.0;
    for (m, w) in weights.iter().enumerate() {
        let mj = grid.unflatten(m);
        acc += w * (1.0 - (TAU * mj[0] as f64 * h).cos());
    }
    let lap_symbol = (2.0 - 2.0 * (TAU * h).cos()) / (h * h);
    acc + core_coefficient(grid.dim()) * eps * lap_symbol
}

/// Calibrated normalization constant for `(grid, ε, cell_radius)`.
pub fn calibration_constant(grid: GridSpec, eps: f64, cell_radius: usize) -> Result<f64> {
    validate(grid, eps, cell_radius)?;
    let w = offset_weights(grid, eps, cell_radius);
    Ok(TAU / lowest_mode_symbol(grid, &w, eps))
}

fn validate(grid: GridSpec, eps: f64, cell_radius: usize) -> Result<()> {
    if !(eps >= grid.spacing() * (1.0 - 1e-12)) || eps >= 0.5 {
        return Err(Error::OutOfRange {
            what: "eps",
            value: eps,
            allowed: "[h, 1/2)",
        });
    }
    if cell_radius < 1 {
        return Err(Error::OutOfRange {
            what: "cell_radius",
            value: cell_radius as f64,
            allowed: ">= 1",
        });
    }
    Ok(())
}

/// Direct quadrature of `(-Δ)^{1/2} f` excluding `|x - y| < ε`, with the
/// lattice sum truncated at `|n| <= cell_radius`. Cost is `O(N^{2d})`.
pub fn fractional_laplacian_direct(f: &ScalarField, eps: f64, cell_radius: usize) -> Result<ScalarField> {
    let grid = f.grid();
    validate(grid, eps, cell_radius)?;
    let weights = offset_weights(grid, eps, cell_radius);
    let c = TAU / lowest_mode_symbol(grid, &weights, eps);
    let raw = raw_operator(f, &weights, eps);
    Ok(ScalarField::from_raw(grid, raw.into_iter().map(|v| c * v).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_maps_to_zero() {
        let g = GridSpec::new(1, 32).unwrap();
        let out = fractional_laplacian_direct(&ScalarField::zeros(g), 2.0 / 32.0, 10).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn rejects_eps_below_spacing() {
        let g = GridSpec::new(1, 32).unwrap();
        let f = ScalarField::zeros(g);
        assert!(matches!(
            fractional_laplacian_direct(&f, 0.5 / 32.0, 10),
            Err(Error::OutOfRange { what: "eps", .. })
        ));
        assert!(fractional_laplacian_direct(&f, 2.0 / 32.0, 0).is_err());
    }

    #[test]
    fn calibrated_constant_is_near_one_over_pi() {
        // The analytic normalization of the kernel in 1-d is 1/π.
        let g = GridSpec::new(1, 256).unwrap();
        let c = calibration_constant(g, 2.0 / 256.0, 100).unwrap();
        assert!((c * PI - 1.0).abs() < 0.01, "c = {c}");
    }
}
