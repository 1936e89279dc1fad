//! Integrating-factor Heun scheme shared by the forward and dual equations.
//!
//! With `E = e^{-|k|^α dt}` and `N(f; u) = σ P[(Pu)·∇(Pf)]`:
//!
//! ```text
//! k₁ = N(f_n; u_a)
//! f* = E (f_n + dt k₁)
//! k₂ = N(f*; u_b)
//! f_{n+1} = E (f_n + dt/2 k₁) + dt/2 k₂
//! ```
//!
//! Forward steps use `u_a = u(t_n)`, `u_b = u(t_{n+1})`. A dual step over the
//! same interval runs with `-σ`, `u_a = u(t_{n+1})`, `u_b = u(t_n)`, which
//! makes it the exact transpose of the forward step.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::fft;
use crate::grid::GridSpec;
use crate::spectral::{tables, AdvectionOperator};

pub(crate) struct Stepper {
    dt: f64,
    factor: Vec<f64>,
}

impl Stepper {
    pub(crate) fn new(grid: GridSpec, alpha: f64, dt: f64) -> Self {
        let factor = tables(grid)
            .knorm
            .iter()
            .map(|k| (-dt * k.powf(alpha)).exp())
            .collect();
        Stepper { dt, factor }
    }

    pub(crate) fn step(
        &self,
        hat: &[Complex64],
        sigma: f64,
        first: &AdvectionOperator,
        second: impl FnOnce(&[Complex64]) -> Result<AdvectionOperator>,
    ) -> Result<Vec<Complex64>> {
        let dt = self.dt;
        let k1 = first.apply_hat(hat);
        let star: Vec<Complex64> = hat
            .iter()
            .zip(&k1)
            .zip(&self.factor)
            .map(|((f, k), e)| (f + k * (sigma * dt)) * e)
            .collect();
        let op = second(&star)?;
        let k2 = op.apply_hat(&star);
        Ok(hat
            .iter()
            .zip(&k1)
            .zip(&k2)
            .zip(&self.factor)
            .map(|(((f, a), b), e)| (f + a * (0.5 * sigma * dt)) * e + b * (0.5 * sigma * dt))
            .collect())
    }
}

pub(crate) fn all_finite(hat: &[Complex64]) -> bool {
    hat.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Spectral SQG velocity components `(-R₂θ̂, R₁θ̂)`.
pub(crate) fn sqg_velocity_hat(grid: GridSpec, theta_hat: &[Complex64]) -> Vec<Vec<Complex64>> {
    // R_j θ̂ = -i k_j/|k| θ̂, so -R₂θ̂ = i (k₂/|k|) θ̂ and R₁θ̂ = -i (k₁/|k|) θ̂.
    let t = tables(grid);
    let times_i = |v: &Complex64, w: f64| Complex64::new(-v.im * w, v.re * w);
    let component = |axis: usize, sign: f64| -> Vec<Complex64> {
        theta_hat
            .iter()
            .zip(&t.odd[axis])
            .zip(&t.knorm)
            .map(|((v, &k), &kn)| if kn == 0.0 { Complex64::new(0.0, 0.0) } else { times_i(v, sign * k / kn) })
            .collect()
    };
    vec![component(1, 1.0), component(0, -1.0)]
}

pub(crate) fn sqg_operator(grid: GridSpec, theta_hat: &[Complex64]) -> AdvectionOperator {
    AdvectionOperator::from_spectral(grid, sqg_velocity_hat(grid, theta_hat))
}

/// SQG velocity `u = (-R₂θ, R₁θ)`; requires `d = 2`.
pub fn sqg_velocity(theta: &ScalarField) -> Result<VelocityField> {
    let grid = theta.grid();
    if grid.dim() != 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: grid.dim(),
        });
    }
    let hat = fft::forward_real(grid, theta.values());
    Ok(velocity_from_hat(grid, &hat))
}

pub(crate) fn velocity_from_hat(grid: GridSpec, theta_hat: &[Complex64]) -> VelocityField {
    let comps = sqg_velocity_hat(grid, theta_hat)
        .iter()
        .map(|c| ScalarField::from_raw(grid, fft::inverse_real(grid, c)))
        .collect();
    VelocityField::from_raw(grid, comps, true)
}
