//! Fourier representation of grid fields and the pseudo-spectral operators
//! built on it: fractional Laplacian, gradient, dealiased advection and the
//! Riesz transforms.
//!
//! Angular wave vectors are `k = 2πn` with `n ∈ {-N/2, …, N/2-1}^d`. Odd
//! multipliers (derivatives, Riesz transforms) vanish on the Nyquist index
//! of their axis so that real fields stay real.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, LazyLock, Mutex};

pub use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{check_same_grid, ScalarField, VelocityField};
use crate::grid::GridSpec;

/// Fourier coefficients of a real grid field, stored in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of the integer wave vector `n` (components beyond `d` ignored).
    pub fn coefficient(&self, n: [i64; 2]) -> Complex64 {
        let g = self.grid;
        let size = g.n() as i64;
        let axis = |k: i64| k.rem_euclid(size) as usize;
        let idx = if g.dim() == 1 {
            axis(n[0])
        } else {
            axis(n[0]) * g.n() + axis(n[1])
        };
        self.coeffs[idx]
    }

    /// `Σ_n |c_n|²`, equal to `‖f‖₂²` on the unit torus.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn to_physical(&self) -> ScalarField {
        ScalarField::from_raw(self.grid, fft::inverse_real(self.grid, &self.coeffs))
    }
}

pub fn to_spectral(f: &ScalarField) -> SpectralField {
    SpectralField {
        grid: f.grid(),
        coeffs: fft::forward_real(f.grid(), f.values()),
    }
}

/// Angular wave vector `2πn` of a flat index.
pub(crate) fn wavevector(grid: GridSpec, idx: usize) -> [f64; 2] {
    let m = grid.mode(idx);
    [TAU * m[0] as f64, TAU * m[1] as f64]
}

pub(crate) fn wavevector_norm(grid: GridSpec, idx: usize) -> f64 {
    let k = wavevector(grid, idx);
    k[0].hypot(k[1])
}

/// `k_axis` with the Nyquist index of that axis zeroed.
pub(crate) fn odd_symbol(grid: GridSpec, idx: usize, axis: usize) -> f64 {
    let m = grid.mode(idx);
    if m[axis] == -((grid.n() / 2) as i64) {
        0.0
    } else {
        TAU * m[axis] as f64
    }
}

/// Per-grid symbol tables shared by the hot loops.
#[derive(Debug)]
pub(crate) struct Tables {
    pub(crate) mask: Vec<bool>,
    /// `odd_symbol` for each axis.
    pub(crate) odd: Vec<Vec<f64>>,
    /// `|k|`.
    pub(crate) knorm: Vec<f64>,
}

static TABLES: LazyLock<Mutex<HashMap<GridSpec, Arc<Tables>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn tables(grid: GridSpec) -> Arc<Tables> {
    let mut cache = TABLES.lock().expect("symbol table cache poisoned");
    cache
        .entry(grid)
        .or_insert_with(|| {
            Arc::new(Tables {
                mask: dealias_mask(grid),
                odd: (0..grid.dim())
                    .map(|axis| (0..grid.len()).map(|idx| odd_symbol(grid, idx, axis)).collect())
                    .collect(),
                knorm: (0..grid.len()).map(|idx| wavevector_norm(grid, idx)).collect(),
            })
        })
        .clone()
}

/// 2/3-rule mask: keeps modes with `3|n_j| < N` on every axis.
pub fn dealias_mask(grid: GridSpec) -> Vec<bool> {
    let n = grid.n() as i64;
    (0..grid.len())
        .map(|idx| {
            let m = grid.mode(idx);
            m[..grid.dim()].iter().all(|&k| 3 * k.abs() < n)
        })
        .collect()
}

/// Applies a Fourier multiplier given per flat FFT index.
pub fn apply_multiplier(f: &ScalarField, m: impl Fn(usize) -> Complex64) -> ScalarField {
    let grid = f.grid();
    let mut c = fft::forward_real(grid, f.values());
    for (idx, v) in c.iter_mut().enumerate() {
        *v *= m(idx);
    }
    ScalarField::from_raw(grid, fft::inverse_real(grid, &c))
}

/// `(-Δ)^{α/2} f` as the multiplier `|k|^α` (zero mode annihilated).
pub fn fractional_laplacian_spectral(f: &ScalarField, alpha: f64) -> Result<ScalarField> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
            allowed: "(0, 2]",
        });
    }
    let grid = f.grid();
    Ok(apply_multiplier(f, |idx| {
        Complex64::new(wavevector_norm(grid, idx).powf(alpha), 0.0)
    }))
}

/// Exact semigroup `e^{-tΛ^α} f`.
pub fn dissipation_semigroup(f: &ScalarField, t: f64, alpha: f64) -> ScalarField {
    let grid = f.grid();
    apply_multiplier(f, |idx| {
        Complex64::new((-t * wavevector_norm(grid, idx).powf(alpha)).exp(), 0.0)
    })
}

/// Spectral gradient; component `j` multiplies by `i k_j`.
pub fn gradient(f: &ScalarField) -> Vec<ScalarField> {
    let grid = f.grid();
    let c = fft::forward_real(grid, f.values());
    (0..grid.dim())
        .map(|axis| {
            let d: Vec<Complex64> = c
                .iter()
                .enumerate()
                .map(|(idx, v)| v * Complex64::new(0.0, odd_symbol(grid, idx, axis)))
                .collect();
            ScalarField::from_raw(grid, fft::inverse_real(grid, &d))
        })
        .collect()
}

/// Spectral divergence `Σ_j ∂_j u_j`.
pub fn divergence(u: &VelocityField) -> ScalarField {
    let grid = u.grid();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (axis, comp) in u.components().iter().enumerate() {
        let c = fft::forward_real(grid, comp.values());
        for (idx, v) in c.iter().enumerate() {
            acc[idx] += v * Complex64::new(0.0, odd_symbol(grid, idx, axis));
        }
    }
    ScalarField::from_raw(grid, fft::inverse_real(grid, &acc))
}

/// `max_k |k·û(k)| / |k|`, relative to `‖u‖₂`.
pub(crate) fn divergence_residual(u: &VelocityField) -> f64 {
    let grid = u.grid();
    let norm = u.l2_norm();
    if norm == 0.0 {
        return 0.0;
    }
    let coeffs: Vec<Vec<Complex64>> = u
        .components()
        .iter()
        .map(|c| fft::forward_real(grid, c.values()))
        .collect();
    let mut worst: f64 = 0.0;
    for idx in 1..grid.len() {
        let mut s = Complex64::new(0.0, 0.0);
        for (axis, c) in coeffs.iter().enumerate() {
            s += c[idx] * odd_symbol(grid, idx, axis);
        }
        worst = worst.max(s.norm() / wavevector_norm(grid, idx));
    }
    worst / norm
}

/// Riesz transform `R_axis`: multiplier `-i k_axis / |k|`, zero mode to 0.
/// `axis` is zero-based; only defined for `d = 2`.
pub fn riesz_transform(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let grid = f.grid();
    if grid.dim() != 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: grid.dim(),
        });
    }
    if axis >= 2 {
        return Err(Error::OutOfRange {
            what: "riesz axis",
            value: axis as f64,
            allowed: "0 or 1",
        });
    }
    Ok(apply_multiplier(f, |idx| riesz_symbol(grid, idx, axis)))
}

pub(crate) fn riesz_symbol(grid: GridSpec, idx: usize, axis: usize) -> Complex64 {
    if idx == 0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, -odd_symbol(grid, idx, axis) / wavevector_norm(grid, idx))
}

/// Pseudo-spectral `(u·∇)` with a velocity that has been dealiased once.
///
/// Velocity and gradient are truncated by the 2/3 rule before the product and
/// the product is truncated again, so for divergence-free `u` the operator is
/// exactly skew-adjoint in the grid inner product.
#[derive(Clone, Debug)]
pub struct AdvectionOperator {
    grid: GridSpec,
    tables: Arc<Tables>,
    velocity: Vec<Vec<f64>>,
    divergence_free: bool,
    is_zero: bool,
}

impl AdvectionOperator {
    pub fn new(u: &VelocityField) -> Self {
        let grid = u.grid();
        let tables = tables(grid);
        let velocity = u
            .components()
            .iter()
            .map(|c| {
                let mut hat = fft::forward_real(grid, c.values());
                truncate(&mut hat, &tables.mask);
                fft::inverse_real(grid, &hat)
            })
            .collect();
        Self::from_dealiased(grid, tables, velocity, u.is_divergence_free())
    }

    /// Builds the operator from spectral velocity components; the mask is
    /// applied here.
    pub(crate) fn from_spectral(grid: GridSpec, mut comps: Vec<Vec<Complex64>>) -> Self {
        let tables = tables(grid);
        let velocity = comps
            .iter_mut()
            .map(|hat| {
                truncate(hat, &tables.mask);
                fft::inverse_real(grid, hat)
            })
            .collect();
        Self::from_dealiased(grid, tables, velocity, true)
    }

    fn from_dealiased(grid: GridSpec, tables: Arc<Tables>, velocity: Vec<Vec<f64>>, divergence_free: bool) -> Self {
        let is_zero = velocity.iter().all(|c| c.iter().all(|&v| v == 0.0));
        AdvectionOperator {
            grid,
            tables,
            velocity,
            divergence_free,
            is_zero,
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    /// Maximum nodal speed of the dealiased velocity.
    pub fn max_speed(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.velocity.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Coefficients of `(u·∇)f` given the coefficients of `f`.
    pub fn apply_hat(&self, f_hat: &[Complex64]) -> Vec<Complex64> {
        let grid = self.grid;
        if self.is_zero {
            return vec![Complex64::new(0.0, 0.0); grid.len()];
        }
        let mask = &self.tables.mask;
        let mut product = vec![0.0; grid.len()];
        for (axis, u) in self.velocity.iter().enumerate() {
            let d: Vec<Complex64> = f_hat
                .iter()
                .zip(mask)
                .zip(&self.tables.odd[axis])
                .map(|((v, &keep), &k)| {
                    if keep {
                        Complex64::new(-v.im * k, v.re * k)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let g = fft::inverse_real(grid, &d);
            for ((p, ui), gi) in product.iter_mut().zip(u).zip(&g) {
                *p += ui * gi;
            }
        }
        let mut hat = fft::forward_real(grid, &product);
        truncate(&mut hat, mask);
        if self.divergence_free {
            hat[0] = Complex64::new(0.0, 0.0);
        }
        hat
    }
}

pub(crate) fn truncate(hat: &mut [Complex64], mask: &[bool]) {
    for (v, &keep) in hat.iter_mut().zip(mask) {
        if !keep {
            *v = Complex64::new(0.0, 0.0);
        }
    }
}

/// `(u·∇)f` computed pseudo-spectrally with 2/3-rule dealiasing.
pub fn advect(u: &VelocityField, f: &ScalarField) -> Result<ScalarField> {
    check_same_grid(u.grid(), f.grid())?;
    let op = AdvectionOperator::new(u);
    let hat = op.apply_hat(&fft::forward_real(f.grid(), f.values()));
    Ok(ScalarField::from_raw(f.grid(), fft::inverse_real(f.grid(), &hat)))
}
