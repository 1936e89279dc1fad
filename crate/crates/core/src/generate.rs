//! Deterministic initial data.
//!
//! Random band-limited fields use `ChaCha8Rng::seed_from_u64(seed)`. Modes are
//! visited in FFT order; for every mode with `1 <= |n|_∞ <= kmax` whose
//! conjugate partner has not been assigned yet, the real and imaginary parts
//! are drawn uniformly from `[-1, 1)` and scaled by `(1 + |n|²)^{-1}`. The
//! partner receives the complex conjugate. The result is normalized to
//! `max |f| = 1`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::ScalarField;
use crate::grid::GridSpec;

pub fn random_band_limited(grid: GridSpec, kmax: usize, seed: u64) -> Result<ScalarField> {
    if kmax == 0 || 3 * kmax >= grid.n() {
        return Err(Error::OutOfRange {
            what: "kmax",
            value: kmax as f64,
            allowed: "1 <= kmax < N/3",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = grid.n() as i64;
    let mut hat = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut assigned = vec![false; grid.len()];
    let index_of = |m: [i64; 2]| {
        let a = m[0].rem_euclid(size) as usize;
        if grid.dim() == 1 {
            a
        } else {
            a * grid.n() + m[1].rem_euclid(size) as usize
        }
    };
    for idx in 0..grid.len() {
        let m = grid.mode(idx);
        let sup = m[0].abs().max(m[1].abs()) as usize;
        if sup == 0 || sup > kmax || assigned[idx] {
            continue;
        }
        let weight = 1.0 / (1.0 + (m[0] * m[0] + m[1] * m[1]) as f64);
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * weight;
        let partner = index_of([-m[0], -m[1]]);
        hat[idx] = c;
        hat[partner] = c.conj();
        assigned[idx] = true;
        assigned[partner] = true;
    }
    let values = fft::inverse_real(grid, &hat);
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ScalarField::new(grid, values.into_iter().map(|v| v / peak).collect())
}

/// `Σ_{j=1}^{levels} 2^{-βj} cos(2π 2^j x₁)`: band `j` of the dyadic
/// decomposition has sup norm exactly `2^{-βj}`.
pub fn weierstrass(grid: GridSpec, beta: f64, levels: u32) -> Result<ScalarField> {
    if 2usize.pow(levels) > grid.n() / 2 {
        return Err(Error::OutOfRange {
            what: "levels",
            value: levels as f64,
            allowed: "2^levels <= N/2",
        });
    }
    ScalarField::from_fn(grid, |x| {
        (1..=levels)
            .map(|j| {
                let f = 2f64.powi(j as i32);
                f.powf(-beta) * (TAU * f * x[0]).cos()
            })
            .sum()
    })
}

/// Periodized Gaussian bump of width `sigma` centred at `center`,
/// normalized to unit grid L¹ mass.
pub fn gaussian_bump(grid: GridSpec, center: [f64; 2], sigma: f64) -> Result<ScalarField> {
    if !(sigma > 0.0) {
        return Err(Error::OutOfRange {
            what: "sigma",
            value: sigma,
            allowed: "> 0",
        });
    }
    let f = ScalarField::from_fn(grid, |x| {
        let r2 = crate::grid::torus_distance(x, center, grid.dim()).powi(2);
        (-r2 / (2.0 * sigma * sigma)).exp()
    })?;
    let mass = f.norms().l1;
    Ok(f.scaled(1.0 / mass))
}

/// `cos(2π n·x)`.
pub fn cosine_mode(grid: GridSpec, n: [i64; 2]) -> ScalarField {
    ScalarField::from_fn(grid, |x| {
        (TAU * (n[0] as f64 * x[0] + n[1] as f64 * x[1])).cos()
    })
    .expect("cosine samples are finite")
}
