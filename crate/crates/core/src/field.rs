//! Grid functions on the torus and the `torusfield v1` snapshot format.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Point};
use crate::spectral;

/// Real-valued grid function, row-major over `N^d` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        ScalarField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: GridSpec, f: impl Fn(Point) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self::new(grid, values)
    }

    /// Internal constructor for values produced by trusted numerics.
    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, a: f64) -> ScalarField {
        self.map(|v| a * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise `self + a * other`.
    pub fn axpy(&self, a: f64, other: &ScalarField) -> Result<ScalarField> {
        check_same_grid(self.grid, other.grid)?;
        Ok(ScalarField::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + a * y)
                .collect(),
        ))
    }

    /// Grid quadrature of `∫ f g dx`.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        check_same_grid(self.grid, other.grid)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// Integer translation by `offset` nodes: `out(x) = f(x - offset·h)`.
    pub fn shift_nodes(&self, offset: [isize; 2]) -> ScalarField {
        let g = self.grid;
        let mut out = vec![0.0; g.len()];
        for (idx, v) in self.values.iter().enumerate() {
            out[g.shifted(g.unflatten(idx), offset)] = *v;
        }
        ScalarField::from_raw(g, out)
    }

    pub fn norms(&self) -> Norms {
        norms(self)
    }

    /// Writes the `torusfield v1` text format.
    pub fn to_snapshot_string(&self) -> String {
        let mut s = format!("torusfield v1 d={} N={}\n", self.grid.dim(), self.grid.n());
        write_values(&mut s, &self.values, self.grid.n());
        s
    }

    pub fn from_snapshot_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty snapshot".into()))?;
        let (dim, n) = parse_header(header, "torusfield")?;
        let grid = GridSpec::new(dim, n)?;
        let values = parse_values(lines.flat_map(str::split_whitespace), grid.len())?;
        ScalarField::new(grid, values)
    }

    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_snapshot_string())?;
        Ok(())
    }

    pub fn read_snapshot(path: &Path) -> Result<Self> {
        Self::from_snapshot_str(&std::fs::read_to_string(path)?)
    }
}

pub(crate) fn check_same_grid(a: GridSpec, b: GridSpec) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!("{a:?} vs {b:?}")));
    }
    Ok(())
}

/// `{:.16e}` gives 17 significant digits, enough for an exact f64 round trip.
pub(crate) fn write_values(out: &mut String, values: &[f64], per_line: usize) {
    for row in values.chunks(per_line) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
}

pub(crate) fn parse_header(header: &str, magic: &str) -> Result<(usize, usize)> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some(magic) || parts.next() != Some("v1") {
        return Err(Error::Parse(format!("expected `{magic} v1` header, got `{header}`")));
    }
    let mut dim = None;
    let mut n = None;
    for p in parts {
        if let Some(v) = p.strip_prefix("d=") {
            dim = v.parse().ok();
        } else if let Some(v) = p.strip_prefix("N=") {
            n = v.parse().ok();
        }
    }
    match (dim, n) {
        (Some(d), Some(n)) => Ok((d, n)),
        _ => Err(Error::Parse(format!("header `{header}` lacks d= or N="))),
    }
}

pub(crate) fn parse_values<'a>(
    tokens: impl Iterator<Item = &'a str>,
    expected: usize,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(expected);
    for tok in tokens {
        let v: f64 = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad number `{tok}`")))?;
        values.push(v);
    }
    if values.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} values, found {}",
            values.len()
        )));
    }
    Ok(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Grid-quadrature L¹ and L² norms and the nodal maximum.
pub fn norms(f: &ScalarField) -> Norms {
    let w = f.grid.cell_volume();
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf: f64 = 0.0;
    for &v in &f.values {
        l1 += v.abs();
        l2 += v * v;
        linf = linf.max(v.abs());
    }
    Norms {
        l1: l1 * w,
        l2: (l2 * w).sqrt(),
        linf,
    }
}

/// A `d`-component vector field on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    grid: GridSpec,
    components: Vec<ScalarField>,
    divergence_free: bool,
}

/// Relative tolerance for the spectral divergence of an asserted
/// divergence-free field.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

impl VelocityField {
    /// Builds a velocity field. When `divergence_free` is asserted the
    /// spectral divergence is checked against [`DIVERGENCE_TOLERANCE`].
    pub fn new(grid: GridSpec, components: Vec<ScalarField>, divergence_free: bool) -> Result<Self> {
        if components.len() != grid.dim() {
            return Err(Error::GridMismatch(format!(
                "{} velocity components on a {}-d grid",
                components.len(),
                grid.dim()
            )));
        }
        for c in &components {
            check_same_grid(grid, c.grid())?;
        }
        let u = VelocityField {
            grid,
            components,
            divergence_free,
        };
        if divergence_free {
            let residual = spectral::divergence_residual(&u);
            if residual > DIVERGENCE_TOLERANCE {
                return Err(Error::NotDivergenceFree { residual });
            }
        }
        Ok(u)
    }

    pub(crate) fn from_raw(grid: GridSpec, components: Vec<ScalarField>, divergence_free: bool) -> Self {
        VelocityField {
            grid,
            components,
            divergence_free,
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        VelocityField::from_raw(grid, vec![ScalarField::zeros(grid); grid.dim()], true)
    }

    pub fn constant(grid: GridSpec, c: &[f64]) -> Result<Self> {
        if c.len() != grid.dim() {
            return Err(Error::GridMismatch(format!(
                "constant velocity with {} components on a {}-d grid",
                c.len(),
                grid.dim()
            )));
        }
        let comps = c.iter().map(|&v| ScalarField::constant(grid, v)).collect();
        Ok(VelocityField::from_raw(grid, comps, true))
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// Maximum Euclidean speed over the nodes.
    pub fn max_speed(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.values()[i].powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.norms().l2.powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, a: f64) -> VelocityField {
        VelocityField::from_raw(
            self.grid,
            self.components.iter().map(|c| c.scaled(a)).collect(),
            self.divergence_free,
        )
    }

    /// `(1 - w) * self + w * other`, used for linear-in-time interpolation.
    pub fn lerp(&self, other: &VelocityField, w: f64) -> Result<VelocityField> {
        check_same_grid(self.grid, other.grid)?;
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                ScalarField::from_raw(
                    self.grid,
                    a.values()
                        .iter()
                        .zip(b.values())
                        .map(|(x, y)| (1.0 - w) * x + w * y)
                        .collect(),
                )
            })
            .collect();
        Ok(VelocityField::from_raw(
            self.grid,
            comps,
            self.divergence_free && other.divergence_free,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn rejects_non_finite() {
        let g = GridSpec::new(1, 8).unwrap();
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert!(matches!(ScalarField::new(g, v), Err(Error::NonFinite { index: 3 })));
    }

    #[test]
    fn norms_of_constant_and_zero() {
        let g = GridSpec::new(2, 16).unwrap();
        let n = ScalarField::constant(g, 1.0).norms();
        assert!((n.l1 - 1.0).abs() < 1e-14 && (n.l2 - 1.0).abs() < 1e-14 && n.linf == 1.0);
        let z = ScalarField::zeros(g).norms();
        assert_eq!((z.l1, z.l2, z.linf), (0.0, 0.0, 0.0));
    }

    #[test]
    fn norms_of_cosine() {
        let g = GridSpec::new(1, 256).unwrap();
        let f = ScalarField::from_fn(g, |x| (TAU * x[0]).cos()).unwrap();
        let n = f.norms();
        assert!((n.l1 - 2.0 / PI).abs() < 1e-3);
        assert!((n.l2 - 0.5f64.sqrt()).abs() < 1e-6);
        assert!((n.linf - 1.0).abs() < 1e-15);
    }

    #[test]
    fn snapshot_roundtrip_is_exact() {
        let g = GridSpec::new(2, 8).unwrap();
        let f = ScalarField::from_fn(g, |x| (x[0] * 7.3).sin() / 3.0 + x[1].exp() * 1e-7).unwrap();
        let text = f.to_snapshot_string();
        assert!(text.starts_with("torusfield v1 d=2 N=8\n"));
        let back = ScalarField::from_snapshot_str(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn snapshot_rejects_wrong_count() {
        assert!(ScalarField::from_snapshot_str("torusfield v1 d=1 N=8\n1 2 3").is_err());
        assert!(ScalarField::from_snapshot_str("other v1 d=1 N=8\n").is_err());
    }

    #[test]
    fn shear_is_divergence_free_and_gradient_field_is_not() {
        let g = GridSpec::new(2, 16).unwrap();
        let shear = vec![
            ScalarField::zeros(g),
            ScalarField::from_fn(g, |x| (TAU * x[0]).sin()).unwrap(),
        ];
        assert!(VelocityField::new(g, shear, true).is_ok());
        let grad = vec![
            ScalarField::from_fn(g, |x| (TAU * x[0]).sin()).unwrap(),
            ScalarField::zeros(g),
        ];
        assert!(matches!(
            VelocityField::new(g, grad, true),
            Err(Error::NotDivergenceFree { .. })
        ));
    }
}
