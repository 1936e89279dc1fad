//! Test-function classes `U_r`: mean-zero functions with `‖φ‖_∞ <= A r^{-d}`,
//! `‖φ‖₁ <= 1` and `∫ Ω(x - x₀)|φ| <= r^{1/2}` for some centre `x₀`.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{check_same_grid, ScalarField};
use crate::grid::{GridSpec, Point};
use crate::spaces::lp::band_symbol;
use crate::spaces::omega::concentration_map;

/// Default `L^∞` constant `A`.
pub const DEFAULT_A: f64 = 4.0;

/// Relative mean-zero tolerance, `|mean| <= 1e-8 · ‖φ‖_∞`.
pub const MEAN_ZERO_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassParams {
    r: f64,
    a: f64,
}

impl ClassParams {
    pub fn new(r: f64, a: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::OutOfRange {
                what: "r",
                value: r,
                allowed: "(0, 1]",
            });
        }
        if !(a > 1.0) {
            return Err(Error::OutOfRange {
                what: "A",
                value: a,
                allowed: "> 1",
            });
        }
        Ok(ClassParams { r, a })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `A r^{-d}`.
    pub fn linf_bound(&self, dim: usize) -> f64 {
        self.a * self.r.powi(-(dim as i32))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub params: ClassParams,
    pub linf_ratio: f64,
    pub mean_abs: f64,
    pub mean_tolerance: f64,
    pub l1_value: f64,
    pub concentration_best: f64,
    pub best_center: Point,
    pub member: bool,
    /// Smallest `a` with `φ ∈ a·U_r`; `None` when the mean is not zero.
    pub minimal_scale: Option<f64>,
}

impl MembershipReport {
    pub fn concentration_ratio(&self) -> f64 {
        self.concentration_best / self.params.r.sqrt()
    }

    /// Smallest `a` with the same field in `a·U_ρ(A)`. None of the measured
    /// quantities depend on the radius, so only the bounds are rescaled.
    pub fn minimal_scale_at(&self, rho: f64, dim: usize) -> Option<f64> {
        self.minimal_scale?;
        let linf = self.linf_ratio * self.params.linf_bound(dim);
        let linf_ratio = linf * rho.powi(dim as i32) / self.params.a;
        Some(linf_ratio.max(self.l1_value).max(self.concentration_best / rho.sqrt()))
    }
}

/// Evaluates the four class conditions. The concentration centre is the
/// grid node minimizing `∫ Ω(x - x₀)|f|`; ties go to the smallest row-major
/// index.
pub fn check_class_membership(f: &ScalarField, params: ClassParams) -> MembershipReport {
    let g = f.grid();
    let norms = f.norms();
    let linf_ratio = norms.linf / params.linf_bound(g.dim());
    let mean_abs = f.mean().abs();
    let mean_tolerance = MEAN_ZERO_TOLERANCE * norms.linf;
    let map = concentration_map(f);
    let (best_idx, best) = map
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    // FFT round-off can leave tiny negatives for f ≡ 0.
    let concentration_best = best.max(0.0);
    let sqrt_r = params.r.sqrt();
    let mean_ok = mean_abs <= mean_tolerance;
    let member = linf_ratio <= 1.0 && mean_ok && norms.l1 <= 1.0 && concentration_best <= sqrt_r;
    let minimal_scale = mean_ok.then(|| linf_ratio.max(norms.l1).max(concentration_best / sqrt_r));
    MembershipReport {
        params,
        linf_ratio,
        mean_abs,
        mean_tolerance,
        l1_value: norms.l1,
        concentration_best,
        best_center: g.coords(best_idx),
        member,
        minimal_scale,
    }
}

/// A rescaled Littlewood–Paley kernel certified to lie in `U_{2^{-j}}`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub level: u32,
    /// Rescaling constant applied to the raw band kernel.
    pub c: f64,
    pub params: ClassParams,
    /// Centred at the origin node.
    pub field: ScalarField,
}

/// Periodized band kernel `Σ_n Ψ̂(2^{-j} n) e^{2πi n·x}`, i.e. `Δ_j` applied
/// to the grid delta of unit mass.
pub fn band_kernel(grid: GridSpec, j: u32) -> ScalarField {
    let sym = band_symbol(grid, j);
    let hat: Vec<Complex64> = sym.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    ScalarField::from_raw(grid, fft::inverse_real(grid, &hat))
}

/// `Ψ̃_j`: the band kernel of level `j` rescaled by the largest `c` for
/// which it passes membership in `U_{2^{-j}}` with constant `a`.
pub fn make_test_function(j: u32, grid: GridSpec, a: f64) -> Result<TestFunction> {
    if 2usize.pow(j) > grid.n() / 8 {
        return Err(Error::OutOfRange {
            what: "test function level",
            value: j as f64,
            allowed: "2^j <= N/8",
        });
    }
    let params = ClassParams::new(2f64.powi(-(j as i32)), a)?;
    let kernel = band_kernel(grid, j);
    let raw = check_class_membership(&kernel, params);
    let scale = raw
        .minimal_scale
        .ok_or_else(|| Error::Precondition("band kernel is not mean zero".into()))?;
    let c = (1.0 - 1e-12) / scale;
    let field = kernel.scaled(c);
    if !check_class_membership(&field, params).member {
        return Err(Error::Precondition(format!("rescaled kernel of level {j} failed membership")));
    }
    Ok(TestFunction {
        level: j,
        c,
        params,
        field,
    })
}

/// `P(y) = ∫ f(x) φ(x - y) dx` for every node `y`.
pub fn pairing_map(f: &ScalarField, phi: &ScalarField) -> Result<Vec<f64>> {
    check_same_grid(f.grid(), phi.grid())?;
    let g = f.grid();
    let a = fft::forward_real(g, f.values());
    let b = fft::forward_real(g, phi.values());
    let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y.conj()).collect();
    Ok(fft::inverse_real(g, &prod))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_member_with_zero_scale() {
        let g = GridSpec::new(2, 16).unwrap();
        for (r, a) in [(1.0, 2.0), (0.1, 10.0)] {
            let rep = check_class_membership(&ScalarField::zeros(g), ClassParams::new(r, a).unwrap());
            assert!(rep.member);
            assert_eq!(rep.minimal_scale, Some(0.0));
        }
    }

    #[test]
    fn double_mass_is_not_member() {
        let g = GridSpec::new(1, 64).unwrap();
        let f = ScalarField::from_fn(g, |x| if x[0] < 0.5 { 2.0 } else { -2.0 }).unwrap();
        let rep = check_class_membership(&f, ClassParams::new(1.0, 4.0).unwrap());
        assert!((rep.l1_value - 2.0).abs() < 1e-12);
        assert!(!rep.member);
        assert!(rep.minimal_scale.unwrap() >= 2.0);
    }

    #[test]
    fn one_signed_has_no_scale() {
        let g = GridSpec::new(1, 32).unwrap();
        let rep = check_class_membership(&ScalarField::constant(g, 0.5), ClassParams::new(1.0, 4.0).unwrap());
        assert!(!rep.member);
        assert!(rep.minimal_scale.is_none());
    }

    #[test]
    fn class_params_validated() {
        assert!(ClassParams::new(0.0, 4.0).is_err());
        assert!(ClassParams::new(1.5, 4.0).is_err());
        assert!(ClassParams::new(0.5, 1.0).is_err());
    }

    #[test]
    fn test_function_level_guard() {
        let g = GridSpec::new(1, 64).unwrap();
        assert!(make_test_function(3, g, DEFAULT_A).is_ok());
        assert!(make_test_function(4, g, DEFAULT_A).is_err());
    }
}
