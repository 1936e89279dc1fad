//! Named diagnostics of a single snapshot.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::spaces::{bmo_norm, default_radii, holder_from_classes, holder_from_lp, DEFAULT_A};
use crate::verify::{dyadic_radii, tracked_seminorm};

pub const NORM_NAMES: [&str; 8] = ["linf", "l1", "l2", "mean", "bmo", "lp", "classes", "holder"];

/// Evaluates each requested diagnostic; `holder` is the seminorm of order
/// `beta`. Failing estimators report the error text instead of a number.
pub fn diagnose(f: &ScalarField, names: &[String], beta: f64) -> Result<Vec<(String, Result<f64>)>> {
    for n in names {
        if !NORM_NAMES.contains(&n.as_str()) {
            return Err(Error::Precondition(format!(
                "unknown norm `{n}`; valid names: {}",
                NORM_NAMES.join(", ")
            )));
        }
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            allowed: "(0, 1)",
        });
    }
    let norms = f.norms();
    let grid = f.grid();
    Ok(names
        .iter()
        .map(|n| {
            let v = match n.as_str() {
                "linf" => Ok(norms.linf),
                "l1" => Ok(norms.l1),
                "l2" => Ok(norms.l2),
                "mean" => Ok(f.mean()),
                "bmo" => bmo_norm(f, &default_radii(grid), (grid.n() / 32).max(1)),
                "lp" => holder_from_lp(f).map(|fit| fit.beta),
                "classes" => holder_from_classes(f, &dyadic_radii(grid), DEFAULT_A).and_then(|fit| {
                    fit.beta
                        .ok_or_else(|| Error::DegenerateFit("no positive pairings to fit".into()))
                }),
                _ => tracked_seminorm(f, beta),
            };
            (n.clone(), v)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cosine_mode;
    use crate::grid::GridSpec;

    #[test]
    fn unknown_name_lists_valid_names() {
        let f = ScalarField::zeros(GridSpec::new(1, 16).unwrap());
        let err = diagnose(&f, &["sup".into()], 0.3).unwrap_err().to_string();
        assert!(err.contains("sup") && err.contains("linf, l1"));
    }

    #[test]
    fn cosine_norms() {
        let f = cosine_mode(GridSpec::new(1, 64).unwrap(), [1, 0]);
        let names: Vec<String> = ["linf", "l2", "mean"].iter().map(|s| s.to_string()).collect();
        let out = diagnose(&f, &names, 0.3).unwrap();
        assert!((out[0].1.as_ref().unwrap() - 1.0).abs() < 1e-12);
        assert!((out[1].1.as_ref().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(out[2].1.as_ref().unwrap().abs() < 1e-15);
    }
}
