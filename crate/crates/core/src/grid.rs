//! Uniform periodic grids on the unit torus `[0,1)^d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the torus. Only the first `d` components are meaningful; the
/// rest are kept at zero.
pub type Point = [f64; 2];

/// Uniform grid with `n` points per axis on `[0,1)^d`, `d ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    n: usize,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!("d = {dim}, expected 1 or 2")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "N = {n}, expected a power of two >= 8"
            )));
        }
        Ok(GridSpec { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of nodes, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Quadrature weight of one node, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Signed wave number of an FFT-ordered axis index, in `[-N/2, N/2)`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Per-axis indices of a flat row-major index.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }

    pub fn flatten(&self, ij: [usize; 2]) -> usize {
        if self.dim == 1 {
            ij[0]
        } else {
            ij[0] * self.n + ij[1]
        }
    }

    /// Flat index of the node at `ij + offset` with periodic wrap.
    pub fn shifted(&self, ij: [usize; 2], offset: [isize; 2]) -> usize {
        let n = self.n as isize;
        let a = (ij[0] as isize + offset[0]).rem_euclid(n) as usize;
        if self.dim == 1 {
            a
        } else {
            let b = (ij[1] as isize + offset[1]).rem_euclid(n) as usize;
            a * self.n + b
        }
    }

    pub fn coords(&self, idx: usize) -> Point {
        let ij = self.unflatten(idx);
        let h = self.spacing();
        if self.dim == 1 {
            [ij[0] as f64 * h, 0.0]
        } else {
            [ij[0] as f64 * h, ij[1] as f64 * h]
        }
    }

    /// Integer wave vector of a flat FFT-ordered index.
    pub fn mode(&self, idx: usize) -> [i64; 2] {
        let ij = self.unflatten(idx);
        if self.dim == 1 {
            [self.wavenumber(ij[0]), 0]
        } else {
            [self.wavenumber(ij[0]), self.wavenumber(ij[1])]
        }
    }

    /// Whether the mode touches the Nyquist index on some axis.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let m = self.mode(idx);
        let half = (self.n / 2) as i64;
        m[..self.dim].iter().any(|&k| k == -half)
    }

    /// Node of the grid closest to `x` (ties to the lower index).
    pub fn nearest_node(&self, x: Point) -> usize {
        let n = self.n as f64;
        let snap = |c: f64| ((c.rem_euclid(1.0) * n).round() as usize) % self.n;
        if self.dim == 1 {
            snap(x[0])
        } else {
            snap(x[0]) * self.n + snap(x[1])
        }
    }

    /// Number of resolvable dyadic levels `j` with `2^j <= N/2`.
    pub fn max_level(&self) -> u32 {
        (self.n / 2).trailing_zeros()
    }
}

/// Difference `a - b` wrapped into `[-1/2, 1/2)`.
pub fn periodic_delta(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    if d >= 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// Euclidean distance on the torus between the first `dim` components.
pub fn torus_distance(x: Point, y: Point, dim: usize) -> f64 {
    (0..dim)
        .map(|j| periodic_delta(x[j], y[j]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Wrap every active coordinate of `x` into `[0,1)`.
pub fn wrap_point(x: Point, dim: usize) -> Point {
    let mut out = [0.0; 2];
    for j in 0..dim {
        out[j] = x[j].rem_euclid(1.0);
        if out[j] >= 1.0 {
            out[j] = 0.0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(1, 100).is_err());
        assert!(GridSpec::new(1, 4).is_err());
        assert!(GridSpec::new(3, 16).is_err());
        assert!(GridSpec::new(2, 16).is_ok());
    }

    #[test]
    fn wavenumbers_cover_half_open_range() {
        let g = GridSpec::new(1, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn periodic_distance_wraps() {
        assert!((periodic_delta(0.9, 0.1) + 0.2).abs() < 1e-15);
        assert!((torus_distance([0.95, 0.0], [0.05, 0.0], 1) - 0.1).abs() < 1e-12);
        let d = torus_distance([0.0, 0.0], [0.5, 0.5], 2);
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn flatten_roundtrip() {
        let g = GridSpec::new(2, 16).unwrap();
        for idx in [0, 5, 17, 255] {
            assert_eq!(g.flatten(g.unflatten(idx)), idx);
        }
        assert_eq!(g.shifted([0, 0], [-1, -1]), 255);
    }
}
