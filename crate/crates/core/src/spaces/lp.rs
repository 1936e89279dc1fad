//! Littlewood–Paley bands on the torus.
//!
//! `η` is the fixed smooth cutoff `η(ξ) = g(2-|ξ|) / (g(2-|ξ|) + g(|ξ|-1))`
//! with `g(s) = exp(-1/s)` for `s > 0`: exactly 1 on `|ξ| <= 1`, exactly 0 on
//! `|ξ| >= 2`, monotone and `C^∞` in between. The band multiplier is
//! `Ψ̂(ξ) = η(ξ) - η(2ξ)` evaluated at `ξ = 2^{-j} n`.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::ScalarField;
use crate::grid::GridSpec;

fn bridge(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

pub fn eta(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let up = bridge(2.0 - a);
        up / (up + bridge(a - 1.0))
    }
}

pub fn psi_hat(xi: f64) -> f64 {
    eta(xi) - eta(2.0 * xi)
}

/// `|n|` of a flat FFT index.
pub(crate) fn mode_norm(grid: GridSpec, idx: usize) -> f64 {
    let m = grid.mode(idx);
    (m[0] as f64).hypot(m[1] as f64)
}

/// Band multiplier of level `j` for every flat index.
pub fn band_symbol(grid: GridSpec, j: u32) -> Vec<f64> {
    let scale = 2f64.powi(-(j as i32));
    (0..grid.len())
        .map(|idx| psi_hat(scale * mode_norm(grid, idx)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct LpBand {
    pub level: u32,
    pub field: ScalarField,
    pub sup: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandSup {
    pub level: u32,
    pub sup: f64,
}

fn check_level(grid: GridSpec, j: u32) -> Result<()> {
    if j > grid.max_level() {
        return Err(Error::OutOfRange {
            what: "band level",
            value: j as f64,
            allowed: "2^j <= N/2",
        });
    }
    Ok(())
}

fn band_from_hat(grid: GridSpec, hat: &[Complex64], j: u32) -> LpBand {
    let sym = band_symbol(grid, j);
    let c: Vec<Complex64> = hat.iter().zip(&sym).map(|(v, s)| v * s).collect();
    let field = ScalarField::from_raw(grid, fft::inverse_real(grid, &c));
    let sup = field.max_abs();
    LpBand { level: j, field, sup }
}

/// `Δ_j f`.
pub fn lp_projection(f: &ScalarField, j: u32) -> Result<LpBand> {
    check_level(f.grid(), j)?;
    let hat = fft::forward_real(f.grid(), f.values());
    Ok(band_from_hat(f.grid(), &hat, j))
}

/// All resolvable bands `j = 0..=log₂(N/2)`.
pub fn lp_decomposition(f: &ScalarField) -> Vec<LpBand> {
    let grid = f.grid();
    let hat = fft::forward_real(grid, f.values());
    (0..=grid.max_level())
        .map(|j| band_from_hat(grid, &hat, j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cosine_mode;

    #[test]
    fn cutoff_plateaus_and_monotone_bridge() {
        assert_eq!(eta(0.0), 1.0);
        assert_eq!(eta(1.0), 1.0);
        assert_eq!(eta(2.0), 0.0);
        assert_eq!(eta(3.0), 0.0);
        let mut prev = 1.0;
        for i in 1..100 {
            let v = eta(1.0 + i as f64 / 100.0);
            assert!(v <= prev && v > 0.0);
            prev = v;
        }
        assert!((eta(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(psi_hat(0.0), 0.0);
    }

    #[test]
    fn dyadic_mode_lives_in_one_band() {
        let g = GridSpec::new(1, 64).unwrap();
        let f = cosine_mode(g, [8, 0]);
        let band = lp_projection(&f, 3).unwrap();
        let err = band
            .field
            .values()
            .iter()
            .zip(f.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-13);
        for j in [0, 1, 2, 4, 5] {
            assert!(lp_projection(&f, j).unwrap().sup < 1e-14);
        }
    }

    #[test]
    fn constants_have_empty_bands() {
        let g = GridSpec::new(2, 32).unwrap();
        let f = ScalarField::constant(g, 2.0);
        assert!(lp_decomposition(&f).iter().all(|b| b.sup < 1e-14));
    }

    #[test]
    fn unresolvable_level_rejected() {
        let g = GridSpec::new(1, 32).unwrap();
        assert!(lp_projection(&ScalarField::zeros(g), 5).is_err());
        assert!(lp_projection(&ScalarField::zeros(g), 4).is_ok());
    }
}
