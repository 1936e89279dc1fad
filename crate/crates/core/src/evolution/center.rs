//! Concentration-centre trajectory `x'(s) = v̄_{B_r(x(s))}` with
//! `v(x, s) = σ u(x, t - s)`, the transport velocity of the dual equation.
//!
//! Ball averages are exact for the trigonometric interpolant of the
//! velocity: averaging `e^{ik·y}` over a ball of radius `r` multiplies the
//! mode by `sin(|k|r)/(|k|r)` in one dimension and `2J₁(|k|r)/(|k|r)` in two.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::VelocityField;
use crate::grid::{wrap_point, GridSpec, Point};
use crate::spectral::wavevector_norm;

use super::config::AdvectionSign;
use super::history::VelocityHistory;

/// Bessel function `J₁`: power series below 1, otherwise the trapezoid rule
/// on `(1/2π)∫₀^{2π} cos(τ - x sin τ) dτ`, which is spectrally accurate for
/// this periodic integrand.
pub fn bessel_j1(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let q = -0.25 * x * x;
        let mut term = 0.5 * x;
        let mut sum = term;
        for m in 1..12 {
            term *= q / (m * (m + 1)) as f64;
            sum += term;
        }
        return sum;
    }
    let m = (x.abs().ceil() as usize + 48).next_multiple_of(2);
    let h = TAU / m as f64;
    (0..m)
        .map(|i| {
            let tau = i as f64 * h;
            (tau - x * tau.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

/// Average of `e^{ik·y}` over the ball of radius `r`, as a function of
/// `|k| r`.
pub fn ball_average_symbol(dim: usize, kr: f64) -> f64 {
    if kr == 0.0 {
        return 1.0;
    }
    if dim == 1 {
        kr.sin() / kr
    } else {
        2.0 * bessel_j1(kr) / kr
    }
}

/// Spectral representation of a velocity with the ball-average multiplier
/// already applied.
struct AveragedVelocity {
    grid: GridSpec,
    coeffs: Vec<Vec<Complex64>>,
}

impl AveragedVelocity {
    fn new(u: &VelocityField, symbol: &[f64]) -> Self {
        let grid = u.grid();
        let coeffs = u
            .components()
            .iter()
            .map(|c| {
                fft::forward_real(grid, c.values())
                    .into_iter()
                    .zip(symbol)
                    .map(|(v, s)| v * s)
                    .collect()
            })
            .collect();
        AveragedVelocity { grid, coeffs }
    }

    fn eval(&self, x: Point) -> [f64; 2] {
        let g = self.grid;
        let n = g.n();
        let phase = |axis: usize| -> Vec<Complex64> {
            (0..n)
                .map(|i| Complex64::from_polar(1.0, TAU * g.wavenumber(i) as f64 * x[axis]))
                .collect()
        };
        let p0 = phase(0);
        let p1 = if g.dim() == 2 { phase(1) } else { vec![Complex64::new(1.0, 0.0)] };
        let mut out = [0.0; 2];
        for (axis, c) in self.coeffs.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &ci) in c.iter().enumerate() {
                let ij = g.unflatten(idx);
                acc += ci * p0[ij[0]] * p1[if g.dim() == 2 { ij[1] } else { 0 }];
            }
            out[axis] = acc.re;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CenterSample {
    pub s: f64,
    pub x: Point,
}

/// Ball-average multipliers for radius `r` on `grid`.
pub fn ball_average_multiplier(grid: GridSpec, r: f64) -> Vec<f64> {
    (0..grid.len())
        .map(|idx| ball_average_symbol(grid.dim(), wavevector_norm(grid, idx) * r))
        .collect()
}

/// `v̄_{B_r(x)}` for a single velocity field.
pub fn ball_average(u: &VelocityField, x: Point, r: f64) -> [f64; 2] {
    AveragedVelocity::new(u, &ball_average_multiplier(u.grid(), r)).eval(x)
}

/// Heun integration of the centre over `steps` equal dual steps covering
/// `[0, horizon]`.
pub fn track_center(
    x0: Point,
    r: f64,
    history: &VelocityHistory,
    horizon: f64,
    sign: AdvectionSign,
    steps: usize,
) -> Result<Vec<CenterSample>> {
    if !(r > 0.0 && r <= 0.5) {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            allowed: "(0, 1/2]",
        });
    }
    if horizon > history.covered() * (1.0 + 1e-12) {
        return Err(Error::HistoryGap {
            covered: history.covered(),
            requested: horizon,
        });
    }
    let grid = history.grid();
    let dim = grid.dim();
    let symbol = ball_average_multiplier(grid, r);
    let sigma = sign.sigma();
    let field_at = |s: f64| -> Result<AveragedVelocity> {
        let u = history.velocity_at((horizon - s).max(0.0))?;
        Ok(AveragedVelocity::new(&u, &symbol))
    };
    let static_field = if history.is_static() { Some(field_at(0.0)?) } else { None };
    let velocity = |field: &AveragedVelocity, x: Point| {
        let v = field.eval(x);
        [sigma * v[0], sigma * v[1]]
    };
    let mut x = wrap_point(x0, dim);
    let mut out = vec![CenterSample { s: 0.0, x }];
    if steps == 0 || horizon == 0.0 {
        return Ok(out);
    }
    let ds = horizon / steps as f64;
    let mut current = match &static_field {
        Some(_) => None,
        None => Some(field_at(0.0)?),
    };
    for m in 0..steps {
        let s = m as f64 * ds;
        let next = match &static_field {
            Some(_) => None,
            None => Some(field_at(s + ds)?),
        };
        let (a, b) = match &static_field {
            Some(f) => (f, f),
            None => (current.as_ref().expect("field"), next.as_ref().expect("field")),
        };
        let v1 = velocity(a, x);
        let mut star = x;
        for k in 0..dim {
            star[k] += ds * v1[k];
        }
        let v2 = velocity(b, wrap_point(star, dim));
        for k in 0..dim {
            x[k] += 0.5 * ds * (v1[k] + v2[k]);
        }
        x = wrap_point(x, dim);
        out.push(CenterSample { s: s + ds, x });
        current = next;
    }
    Ok(out)
}
