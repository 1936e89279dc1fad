//! Hölder seminorms by three routes: direct pair enumeration, dyadic
//! band decay, and pairings against the canonical test-function family.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::fit::ols;
use crate::grid::{torus_distance, GridSpec};
use crate::spaces::classes::{make_test_function, pairing_map};
use crate::spaces::lp::{lp_decomposition, BandSup};

/// Largest pair count the direct seminorm will enumerate.
pub const DIRECT_PAIR_LIMIT: u64 = 1 << 26;

/// Bands or pairings below this fraction of `‖f‖_∞` are treated as noise.
pub const NOISE_FLOOR: f64 = 1e-12;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            allowed: "(0, 1/2)",
        });
    }
    Ok(())
}

/// Max of `|f(x) - f(y)| / |x - y|^β` over nodes `x` on the sub-grid of
/// the given stride and all offsets `y - x` on that same sub-grid.
fn pair_max(f: &ScalarField, beta: f64, stride: usize) -> f64 {
    let g = f.grid();
    let v = f.values();
    let nodes: Vec<usize> = (0..g.len())
        .filter(|&i| g.unflatten(i)[..g.dim()].iter().all(|k| k % stride == 0))
        .collect();
    let offsets: Vec<[isize; 2]> = nodes
        .iter()
        .skip(1)
        .map(|&m| {
            let ij = g.unflatten(m);
            [ij[0] as isize, ij[1] as isize]
        })
        .collect();
    offsets
        .par_iter()
        .map(|&o| {
            let dist = torus_distance(g.coords(g.shifted([0, 0], o)), [0.0, 0.0], g.dim());
            let w = dist.powf(-beta);
            nodes
                .iter()
                .map(|&i| (v[i] - v[g.shifted(g.unflatten(i), o)]).abs())
                .fold(0.0, f64::max)
                * w
        })
        .reduce(|| 0.0, f64::max)
}

/// Exact grid seminorm `max_{x≠y} |f(x) - f(y)| / |x - y|^β`.
pub fn holder_seminorm_direct(f: &ScalarField, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let pairs = (f.grid().len() as u64).pow(2);
    if pairs > DIRECT_PAIR_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "{pairs} node pairs exceed {DIRECT_PAIR_LIMIT}; use holder_from_lp or the subsampled seminorm"
        )));
    }
    Ok(pair_max(f, beta, 1))
}

/// Direct seminorm restricted to a sub-grid with at most `per_axis` nodes
/// per axis. A lower bound of the full grid value.
pub fn holder_seminorm_subsampled(f: &ScalarField, beta: f64, per_axis: usize) -> Result<f64> {
    check_beta(beta)?;
    let n = f.grid().n();
    if per_axis == 0 {
        return Err(Error::OutOfRange {
            what: "per_axis",
            value: 0.0,
            allowed: ">= 1",
        });
    }
    let stride = n.div_ceil(per_axis).max(1);
    Ok(pair_max(f, beta, stride))
}

#[derive(Clone, Debug, Serialize)]
pub struct LpHolderFit {
    /// Fitted decay exponent of `‖Δ_j f‖_∞ ≈ Q 2^{-βj}`.
    pub beta: f64,
    pub q: f64,
    /// Bands used in the fit.
    pub bands: Vec<BandSup>,
}

fn usable(sup: f64, scale: f64) -> bool {
    sup > NOISE_FLOOR * scale
}

/// Fits `log ‖Δ_j f‖_∞ = log Q - β j log 2` over the bands above the noise
/// floor.
pub fn holder_from_lp(f: &ScalarField) -> Result<LpHolderFit> {
    let grid = f.grid();
    if grid.max_level() + 1 < 4 {
        return Err(Error::Precondition("at least 4 resolvable bands are required".into()));
    }
    let scale = f.max_abs();
    let bands: Vec<BandSup> = lp_decomposition(f)
        .into_iter()
        .filter(|b| usable(b.sup, scale))
        .map(|b| BandSup {
            level: b.level,
            sup: b.sup,
        })
        .collect();
    if bands.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} usable band(s)", bands.len())));
    }
    let xs: Vec<f64> = bands.iter().map(|b| b.level as f64).collect();
    let ys: Vec<f64> = bands.iter().map(|b| b.sup.ln()).collect();
    let (slope, intercept) =
        ols(&xs, &ys).ok_or_else(|| Error::DegenerateFit("collinear levels".into()))?;
    Ok(LpHolderFit {
        beta: -slope / std::f64::consts::LN_2,
        q: intercept.exp(),
        bands,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairingSample {
    pub r: f64,
    pub level: u32,
    /// Rescaling constant of the test function used.
    pub c: f64,
    /// `max_y |⟨f, Ψ̃_j(· - y)⟩|`.
    pub s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassHolderFit {
    pub samples: Vec<PairingSample>,
    /// Slope of `log S(r)` against `log r`; absent with fewer than two
    /// samples above the noise floor.
    pub beta: Option<f64>,
}

fn level_of(grid: GridSpec, r: f64) -> Result<u32> {
    let j = (-r.log2()).round();
    if !(j >= 0.0) || (2f64.powf(-j) - r).abs() > 1e-12 * r {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            allowed: "dyadic 2^{-j}",
        });
    }
    let j = j as u32;
    if 2usize.pow(j) > grid.n() / 8 {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            allowed: "2^{-j} with 2^j <= N/8",
        });
    }
    Ok(j)
}

/// For each dyadic `r = 2^{-j}`, the largest pairing of `f` with `Ψ̃_j`
/// shifted to any node, followed by a log-log fit of `S(r)` against `r`.
pub fn holder_from_classes(f: &ScalarField, r_list: &[f64], a: f64) -> Result<ClassHolderFit> {
    if r_list.is_empty() {
        return Err(Error::Precondition("empty r list".into()));
    }
    let grid = f.grid();
    let levels = r_list
        .iter()
        .map(|&r| level_of(grid, r))
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::with_capacity(levels.len());
    for (&r, &j) in r_list.iter().zip(&levels) {
        let tf = make_test_function(j, grid, a)?;
        let s = pairing_map(f, &tf.field)?
            .into_iter()
            .fold(0.0, |m: f64, v| m.max(v.abs()));
        samples.push(PairingSample { r, level: j, c: tf.c, s });
    }
    let scale = f.max_abs();
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|p| usable(p.s, scale))
        .map(|p| (p.r.ln(), p.s.ln()))
        .unzip();
    let beta = if xs.len() >= 2 { ols(&xs, &ys).map(|(slope, _)| slope) } else { None };
    Ok(ClassHolderFit { samples, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cosine_mode;

    #[test]
    fn constant_has_zero_seminorm() {
        let g = GridSpec::new(2, 16).unwrap();
        assert_eq!(holder_seminorm_direct(&ScalarField::constant(g, 1.5), 0.3).unwrap(), 0.0);
    }

    #[test]
    fn guard_rejects_large_grids() {
        let g = GridSpec::new(2, 128).unwrap();
        let err = holder_seminorm_direct(&ScalarField::zeros(g), 0.3).unwrap_err();
        assert!(err.to_string().contains("holder_from_lp"));
    }

    #[test]
    fn beta_range_enforced() {
        let g = GridSpec::new(1, 16).unwrap();
        assert!(holder_seminorm_direct(&ScalarField::zeros(g), 0.5).is_err());
        assert!(holder_seminorm_direct(&ScalarField::zeros(g), 0.0).is_err());
    }

    #[test]
    fn subsampling_is_a_lower_bound() {
        let g = GridSpec::new(1, 256).unwrap();
        let f = cosine_mode(g, [3, 0]);
        let full = holder_seminorm_direct(&f, 0.25).unwrap();
        let sub = holder_seminorm_subsampled(&f, 0.25, 64).unwrap();
        assert!(sub <= full && sub > 0.5 * full);
    }

    #[test]
    fn dyadic_mode_gives_degenerate_lp_fit() {
        let g = GridSpec::new(1, 256).unwrap();
        assert!(matches!(holder_from_lp(&cosine_mode(g, [4, 0])), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn class_fit_rejects_bad_radii() {
        let g = GridSpec::new(1, 256).unwrap();
        let f = ScalarField::zeros(g);
        assert!(holder_from_classes(&f, &[], 4.0).is_err());
        assert!(holder_from_classes(&f, &[0.3], 4.0).is_err());
        assert!(holder_from_classes(&f, &[1.0 / 64.0], 4.0).is_err());
    }
}
