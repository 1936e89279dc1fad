use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use driftlab::evolution::{shear, sqg_velocity};
use driftlab::generate::{cosine_mode, random_band_limited};
use driftlab::singular::{default_cell_radius, fractional_laplacian_direct};
use driftlab::spectral::{
    advect, divergence, fractional_laplacian_spectral, gradient, riesz_transform, to_spectral, Complex64,
};
use driftlab::{GridSpec, ScalarField, VelocityField};

fn grid(d: usize, n: usize) -> GridSpec {
    GridSpec::new(d, n).unwrap()
}

fn rel_l2(a: &ScalarField, b: &ScalarField) -> f64 {
    a.axpy(-1.0, b).unwrap().norms().l2 / b.norms().l2
}

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.axpy(-1.0, b).unwrap().max_abs()
}

#[test]
fn constant_and_single_mode_coefficients() {
    let g = grid(2, 16);
    let one = to_spectral(&ScalarField::constant(g, 1.0));
    assert!((one.coefficient([0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((one.energy() - 1.0).abs() < 1e-14);

    let g = grid(1, 32);
    let c = to_spectral(&cosine_mode(g, [1, 0]));
    for n in -16i64..16 {
        let expect = if n.abs() == 1 { 0.5 } else { 0.0 };
        assert!((c.coefficient([n, 0]) - Complex64::new(expect, 0.0)).norm() < 1e-15, "n={n}");
    }
}

#[test]
fn fractional_laplacian_on_modes() {
    let g = grid(2, 32);
    let f = ScalarField::from_fn(g, |x| (TAU * (x[0] + 2.0 * x[1])).cos()).unwrap();
    let lf = fractional_laplacian_spectral(&f, 1.0).unwrap();
    assert!(max_diff(&lf, &f.scaled(TAU * 5f64.sqrt())) < 1e-11);
    let c = fractional_laplacian_spectral(&ScalarField::constant(g, 3.0), 1.0).unwrap();
    assert!(c.max_abs() < 1e-14);
    assert!(fractional_laplacian_spectral(&f, 2.5).is_err());
    assert!(fractional_laplacian_spectral(&f, 0.0).is_err());
}

#[test]
fn direct_operator_tracks_the_multiplier() {
    let n = 128;
    let g = grid(1, n);
    let f = ScalarField::from_fn(g, |x| (TAU * x[0]).cos() + 0.3 * (3.0 * TAU * x[0]).cos()).unwrap();
    let direct = fractional_laplacian_direct(&f, 2.0 * g.spacing(), default_cell_radius(1)).unwrap();
    let spectral = fractional_laplacian_spectral(&f, 1.0).unwrap();
    let coarse = rel_l2(&direct, &spectral);
    assert!(coarse < 2e-2, "{coarse}");

    let g2 = grid(1, 2 * n);
    let f2 = ScalarField::from_fn(g2, |x| (TAU * x[0]).cos() + 0.3 * (3.0 * TAU * x[0]).cos()).unwrap();
    let direct2 = fractional_laplacian_direct(&f2, 2.0 * g2.spacing(), default_cell_radius(1)).unwrap();
    let fine = rel_l2(&direct2, &fractional_laplacian_spectral(&f2, 1.0).unwrap());
    assert!(coarse / fine >= 1.5, "{coarse} -> {fine}");

    assert!(fractional_laplacian_direct(&ScalarField::zeros(g), 2.0 * g.spacing(), 10).unwrap().max_abs() == 0.0);
    assert!(fractional_laplacian_direct(&f, 0.5 * g.spacing(), 10).is_err());
}

#[test]
fn gradient_and_advection_examples() {
    let g = grid(2, 32);
    let f = ScalarField::from_fn(g, |x| (TAU * x[0]).sin() * (TAU * x[1]).cos()).unwrap();
    let grad = gradient(&f);
    let gx = ScalarField::from_fn(g, |x| TAU * (TAU * x[0]).cos() * (TAU * x[1]).cos()).unwrap();
    let gy = ScalarField::from_fn(g, |x| -TAU * (TAU * x[0]).sin() * (TAU * x[1]).sin()).unwrap();
    assert!(max_diff(&grad[0], &gx) < 1e-11);
    assert!(max_diff(&grad[1], &gy) < 1e-11);

    let c = 0.7;
    let u = VelocityField::constant(g, &[c, 0.0]).unwrap();
    let s = ScalarField::from_fn(g, |x| (TAU * x[0]).sin()).unwrap();
    let expect = ScalarField::from_fn(g, |x| TAU * c * (TAU * x[0]).cos()).unwrap();
    assert!(max_diff(&advect(&u, &s).unwrap(), &expect) < 1e-11);

    let level = cosine_mode(g, [1, 0]);
    assert!(advect(&shear(g, 1.0).unwrap(), &level).unwrap().max_abs() < 1e-12);
    assert!(advect(&VelocityField::zeros(g), &level).unwrap().max_abs() == 0.0);
    assert!(advect(&u, &ScalarField::zeros(grid(2, 16))).is_err());
}

#[test]
fn riesz_examples() {
    let g = grid(2, 32);
    let f = cosine_mode(g, [1, 0]);
    let sin = ScalarField::from_fn(g, |x| (TAU * x[0]).sin()).unwrap();
    assert!(max_diff(&riesz_transform(&f, 0).unwrap(), &sin) < 1e-13);
    assert!(riesz_transform(&f, 1).unwrap().max_abs() < 1e-13);
    assert!(riesz_transform(&ScalarField::constant(g, 2.0), 0).unwrap().max_abs() < 1e-14);
    assert!(riesz_transform(&cosine_mode(grid(1, 32), [1, 0]), 0).is_err());
}

#[test]
fn cosine_norms_by_quadrature() {
    let n = cosine_mode(grid(1, 256), [1, 0]).norms();
    assert!((n.l1 - 2.0 / PI).abs() < 1e-3);
    assert!((n.l2 - 0.5f64.sqrt()).abs() < 1e-6);
    assert!((n.linf - 1.0).abs() < 1e-15);
}

fn any_grid() -> impl Strategy<Value = (GridSpec, usize)> {
    prop_oneof![
        (Just(1usize), prop::sample::select(vec![16usize, 32, 64])),
        (Just(2usize), prop::sample::select(vec![16usize, 32])),
    ]
    .prop_flat_map(|(d, n)| (Just(grid(d, n)), 1..=(n - 1) / 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_round_trip((g, kmax) in any_grid(), seed in any::<u64>()) {
        let f = random_band_limited(g, kmax, seed).unwrap();
        let back = to_spectral(&f).to_physical();
        prop_assert!(max_diff(&back, &f) <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn parseval((g, kmax) in any_grid(), seed in any::<u64>()) {
        let f = random_band_limited(g, kmax, seed).unwrap();
        let l2 = f.norms().l2;
        let e = to_spectral(&f).energy();
        prop_assert!((l2 * l2 - e).abs() <= 1e-10 * e);
    }

    #[test]
    fn fractional_laplacian_is_self_adjoint(
        (g, kmax) in any_grid(),
        seeds in (any::<u64>(), any::<u64>()),
        alpha in 0.1f64..=2.0,
    ) {
        let f = random_band_limited(g, kmax, seeds.0).unwrap();
        let h = random_band_limited(g, kmax, seeds.1).unwrap();
        let a = fractional_laplacian_spectral(&f, alpha).unwrap().inner(&h).unwrap();
        let b = f.inner(&fractional_laplacian_spectral(&h, alpha).unwrap()).unwrap();
        let scale = fractional_laplacian_spectral(&f, alpha).unwrap().norms().l2 * h.norms().l2;
        prop_assert!((a - b).abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn advection_is_antisymmetric(
        kmax in 1usize..=4,
        seeds in (any::<u64>(), any::<u64>(), any::<u64>()),
    ) {
        let g = grid(2, 32);
        let theta = random_band_limited(g, kmax, seeds.0).unwrap();
        let u = sqg_velocity(&theta).unwrap();
        let f = random_band_limited(g, 6, seeds.1).unwrap();
        let h = random_band_limited(g, 6, seeds.2).unwrap();
        let lhs = advect(&u, &f).unwrap().inner(&h).unwrap() + f.inner(&advect(&u, &h).unwrap()).unwrap();
        let scale = advect(&u, &f).unwrap().norms().l2 * h.norms().l2;
        prop_assert!(lhs.abs() <= 1e-10 * scale);
    }

    #[test]
    fn riesz_velocity_is_divergence_free(kmax in 1usize..=10, seed in any::<u64>()) {
        let g = grid(2, 32);
        let theta = random_band_limited(g, kmax, seed).unwrap();
        let u = sqg_velocity(&theta).unwrap();
        prop_assert!(divergence(&u).norms().l2 <= 1e-10 * theta.norms().l2);
    }

    #[test]
    fn snapshots_round_trip_exactly((g, kmax) in any_grid(), seed in any::<u64>(), scale in -1e6f64..1e6) {
        let f = random_band_limited(g, kmax, seed).unwrap().scaled(scale);
        let back = ScalarField::from_snapshot_str(&f.to_snapshot_string()).unwrap();
        prop_assert_eq!(back, f);
    }
}
