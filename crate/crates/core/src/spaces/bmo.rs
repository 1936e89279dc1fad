//! Sampled BMO seminorm: the maximum mean oscillation over periodic balls
//! centred at grid nodes with radii from a finite list. Always a lower bound
//! of the continuum supremum.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VelocityField};
use crate::grid::{torus_distance, GridSpec};

/// Dyadic radii `2^{-m}`, `m = 1..log₂N - 2`.
pub fn default_radii(grid: GridSpec) -> Vec<f64> {
    let top = grid.n().trailing_zeros().saturating_sub(2).max(1);
    (1..=top).map(|m| 2f64.powi(-(m as i32))).collect()
}

/// Node offsets within periodic distance `r` of the origin. Each node
/// appears once.
pub fn ball_offsets(grid: GridSpec, r: f64) -> Vec<[isize; 2]> {
    let n = grid.n() as isize;
    let signed = |i: usize| {
        let i = i as isize;
        if i > n / 2 {
            i - n
        } else {
            i
        }
    };
    (0..grid.len())
        .filter(|&m| torus_distance(grid.coords(m), [0.0, 0.0], grid.dim()) <= r * (1.0 + 1e-12))
        .map(|m| {
            let ij = grid.unflatten(m);
            [signed(ij[0]), signed(ij[1])]
        })
        .collect()
}

/// Oscillation statistics of one sampled ball.
#[derive(Clone, Debug, Serialize)]
pub struct BallOscillation {
    pub center: usize,
    pub radius: f64,
    pub nodes: usize,
    /// `|B|⁻¹ ∫_B |f - f̄_B|`.
    pub mean_oscillation: f64,
    /// `‖f - f̄_B‖_{L²(B)}`.
    pub l2_deviation: f64,
    /// Grid measure of the ball, `nodes · h^d`.
    pub measure: f64,
}

fn validate(radii: &[f64], stride: usize) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::Precondition("empty radius list".into()));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r <= 0.5)) {
        return Err(Error::OutOfRange {
            what: "radius",
            value: r,
            allowed: "(0, 1/2]",
        });
    }
    if stride == 0 {
        return Err(Error::OutOfRange {
            what: "stride",
            value: 0.0,
            allowed: ">= 1",
        });
    }
    Ok(())
}

fn centers(grid: GridSpec, stride: usize) -> Vec<usize> {
    (0..grid.len())
        .filter(|&i| {
            let ij = grid.unflatten(i);
            ij[..grid.dim()].iter().all(|&k| k % stride == 0)
        })
        .collect()
}

/// Oscillation of a vector-valued grid function (Euclidean norm of the
/// deviation) over one ball.
fn oscillation(grid: GridSpec, comps: &[&[f64]], center: usize, offsets: &[[isize; 2]]) -> (f64, f64) {
    let ij = grid.unflatten(center);
    let nodes: Vec<usize> = offsets.iter().map(|&o| grid.shifted(ij, o)).collect();
    let count = nodes.len() as f64;
    let means: Vec<f64> = comps
        .iter()
        .map(|c| nodes.iter().map(|&i| c[i]).sum::<f64>() / count)
        .collect();
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    for &i in &nodes {
        let dev2: f64 = comps.iter().zip(&means).map(|(c, m)| (c[i] - m).powi(2)).sum();
        l1 += dev2.sqrt();
        l2 += dev2;
    }
    (l1 / count, l2)
}

fn sampled_max(grid: GridSpec, comps: &[&[f64]], radii: &[f64], stride: usize) -> Result<f64> {
    validate(radii, stride)?;
    let cs = centers(grid, stride);
    let mut best: f64 = 0.0;
    for &r in radii {
        let offsets = ball_offsets(grid, r);
        let m = cs
            .par_iter()
            .map(|&c| oscillation(grid, comps, c, &offsets).0)
            .reduce(|| 0.0, f64::max);
        best = best.max(m);
    }
    Ok(best)
}

/// `max_B |B|⁻¹ ∫_B |f - f̄_B|` over balls of the given radii centred at
/// every `stride`-th node per axis.
pub fn bmo_norm(f: &ScalarField, radii: &[f64], stride: usize) -> Result<f64> {
    sampled_max(f.grid(), &[f.values()], radii, stride)
}

/// Vector version using the Euclidean norm of `u - ū_B`.
pub fn bmo_norm_velocity(u: &VelocityField, radii: &[f64], stride: usize) -> Result<f64> {
    let comps: Vec<&[f64]> = u.components().iter().map(|c| c.values()).collect();
    sampled_max(u.grid(), &comps, radii, stride)
}

/// Per-ball statistics for every sampled ball.
pub fn ball_oscillations(f: &ScalarField, radii: &[f64], stride: usize) -> Result<Vec<BallOscillation>> {
    validate(radii, stride)?;
    let grid = f.grid();
    let cs = centers(grid, stride);
    let vol = grid.cell_volume();
    let mut out = Vec::new();
    for &r in radii {
        let offsets = ball_offsets(grid, r);
        for &c in &cs {
            let (mo, l2) = oscillation(grid, &[f.values()], c, &offsets);
            out.push(BallOscillation {
                center: c,
                radius: r,
                nodes: offsets.len(),
                mean_oscillation: mo,
                l2_deviation: (l2 * vol).sqrt(),
                measure: offsets.len() as f64 * vol,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_zero_bmo() {
        let g = GridSpec::new(2, 16).unwrap();
        let f = ScalarField::constant(g, 3.0);
        assert_eq!(bmo_norm(&f, &default_radii(g), 1).unwrap(), 0.0);
    }

    #[test]
    fn rejects_empty_radii() {
        let g = GridSpec::new(1, 16).unwrap();
        assert!(bmo_norm(&ScalarField::zeros(g), &[], 1).is_err());
        assert!(bmo_norm(&ScalarField::zeros(g), &[0.7], 1).is_err());
    }

    #[test]
    fn default_radii_are_dyadic() {
        let g = GridSpec::new(1, 256).unwrap();
        assert_eq!(default_radii(g), vec![0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]);
    }

    #[test]
    fn half_radius_ball_covers_each_node_once() {
        let g = GridSpec::new(1, 16).unwrap();
        assert_eq!(ball_offsets(g, 0.5).len(), 16);
        assert_eq!(ball_offsets(g, 2.0 / 16.0).len(), 5);
    }
}
