use rustfft::num_complex::Complex64;

use crate::fft;
use crate::field::ScalarField;
use crate::grid::{torus_distance, GridSpec, Point};

/// `Ω(x - x₀)`: `|x - x₀|^{1/2}` below periodic distance 1/2, else `1/√2`.
/// Unused trailing coordinates must be zero in both points.
pub fn omega_weight(x: Point, x0: Point) -> f64 {
    let d = torus_distance(x, x0, 2);
    if d < 0.5 {
        d.sqrt()
    } else {
        std::f64::consts::FRAC_1_SQRT_2
    }
}

/// `Ω` sampled at every node, centred at the origin.
pub fn omega_kernel(grid: GridSpec) -> Vec<f64> {
    (0..grid.len())
        .map(|i| omega_weight(grid.coords(i), [0.0, 0.0]))
        .collect()
}

/// `∫ Ω(x - x₀) |f(x)| dx` by grid quadrature, for an arbitrary point `x₀`.
pub fn concentration_at(f: &ScalarField, x0: Point) -> f64 {
    let g = f.grid();
    let s: f64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| omega_weight(g.coords(i), x0) * v.abs())
        .sum();
    s * g.cell_volume()
}

/// The concentration integral for every node taken as centre, computed as a
/// circular convolution of `|f|` with `Ω`.
pub fn concentration_map(f: &ScalarField) -> Vec<f64> {
    let g = f.grid();
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let a = fft::forward_real(g, &abs);
    let b = fft::forward_real(g, &omega_kernel(g));
    let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    fft::inverse_real(g, &prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert_eq!(omega_weight([0.3, 0.0], [0.3, 0.0]), 0.0);
        assert!((omega_weight([0.25, 0.0], [0.0, 0.0]) - 0.5).abs() < 1e-15);
        assert!((omega_weight([0.0, 0.0], [0.5, 0.0]) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((omega_weight([0.1, 0.1], [0.6, 0.6]) - 0.5f64.sqrt()).abs() < 1e-15);
        // periodic: distance from 0.9 to 0.15 is 0.25
        assert!((omega_weight([0.9, 0.0], [0.15, 0.0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let g = GridSpec::new(2, 16).unwrap();
        let f = ScalarField::from_fn(g, |x| (6.0 * x[0]).sin() * (x[1] - 0.3)).unwrap();
        let map = concentration_map(&f);
        for idx in [0, 17, 100, 255] {
            let direct = concentration_at(&f, g.coords(idx));
            assert!((map[idx] - direct).abs() < 1e-12, "{} vs {}", map[idx], direct);
        }
    }
}
