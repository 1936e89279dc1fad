use driftlab::evolution::{AdvectionSign, EquationKind, SimConfig, VelocityHistory, VelocitySpec};
use driftlab::generate::{cosine_mode, random_band_limited};
use driftlab::spaces::{make_test_function, ClassParams, DEFAULT_A};
use driftlab::verify::{
    class_scale_series, run_suite, verify_class_evolution, verify_concentration, verify_duality,
    verify_holder_bound, verify_invariants, verify_l1_decay, verify_linfty_decay, DualityOptions,
    HolderBoundOptions, Outcome, VerificationReport, TRIAL_RATES,
};
use driftlab::{Error, GridSpec, ScalarField};

fn grid(d: usize, n: usize) -> GridSpec {
    GridSpec::new(d, n).unwrap()
}

fn drift(g: GridSpec, velocity: VelocitySpec, t_end: f64) -> SimConfig {
    let mut cfg = SimConfig::new(g);
    cfg.velocity = velocity;
    cfg.t_end = t_end;
    cfg
}

fn history(cfg: &SimConfig, covered: f64) -> VelocityHistory {
    VelocityHistory::prescribed(cfg.grid, cfg.velocity.clone(), covered)
}

fn outcome(r: &VerificationReport, name: &str) -> Outcome {
    r.verdict(name).unwrap_or_else(|| panic!("no verdict {name}")).outcome
}

#[test]
fn duality_is_exact_for_prescribed_translations() {
    let g = grid(1, 64);
    let f = cosine_mode(g, [1, 0]);
    let opts = DualityOptions { halvings: 0 };
    let mut cfg = drift(g, VelocitySpec::Zero, 0.5);
    cfg.dt = Some(1e-2);
    let r = verify_duality(&cfg, &f, &f, 0.5, &opts).unwrap();
    assert!(r.constants["D"] <= 1e-10, "{}", r.constants["D"]);

    let g = grid(2, 32);
    let mut cfg = drift(g, VelocitySpec::Constant([0.6, -0.2]), 0.5);
    cfg.dt = Some(1e-2);
    let theta = random_band_limited(g, 5, 1).unwrap();
    let phi = random_band_limited(g, 5, 2).unwrap();
    let r = verify_duality(&cfg, &theta, &phi, 0.5, &opts).unwrap();
    assert!(r.constants["D"] <= 1e-8, "{}", r.constants["D"]);
    assert!(r.passed());
}

#[test]
fn linfty_verdicts_do_not_depend_on_velocity() {
    let horizon = 0.05;
    for cfg in [
        drift(grid(1, 256), VelocitySpec::Zero, horizon),
        drift(grid(2, 128), VelocitySpec::Shear { amplitude: 1.0 }, horizon),
    ] {
        let psi = make_test_function(4, cfg.grid, DEFAULT_A).unwrap().field;
        let r = verify_linfty_decay(&psi, &cfg, &history(&cfg, horizon), horizon).unwrap();
        assert_eq!(outcome(&r, "M_nonincreasing"), Outcome::Pass);
        assert_eq!(outcome(&r, "fitted_C_positive"), Outcome::Pass);
    }
    let cfg = drift(grid(1, 64), VelocitySpec::Zero, horizon);
    let r = verify_linfty_decay(&ScalarField::zeros(cfg.grid), &cfg, &history(&cfg, horizon), horizon).unwrap();
    assert_eq!(outcome(&r, "M_nonincreasing"), Outcome::NotApplicable);
}

#[test]
fn concentration_rides_a_constant_flow() {
    // c·dt = h/64: every 64th step shifts the dual field by a whole node and
    // the centre lands on a node.
    // RK2 transport has a phase error of order (c k dt)^3 per step, so the
    // step is small enough that the kernel's top band moves almost exactly.
    let g = grid(1, 256);
    let r = 1.0 / 16.0;
    let dt = 1.0 / 8192.0;
    let c = 0.5;
    let psi = make_test_function(4, g, DEFAULT_A).unwrap().field;
    let run = |v: VelocitySpec| {
        let mut cfg = drift(g, v, r);
        cfg.dt = Some(dt);
        verify_concentration(&psi, &cfg, &history(&cfg, r), r, r, 1.0).unwrap()
    };
    let still = run(VelocitySpec::Zero);
    let moving = run(VelocitySpec::Constant([c, 0.0]));
    assert!(still.passed() && moving.passed());
    let s = &still.series["s"];
    let mut compared = 0;
    for (k, si) in s.iter().enumerate() {
        let nodes = c * si / g.spacing();
        if (nodes - nodes.round()).abs() < 1e-9 {
            let (a, b) = (still.series["G"][k], moving.series["G"][k]);
            assert!((a - b).abs() <= 1e-6, "s={si}: {a} vs {b}");
            compared += 1;
        }
    }
    assert!(compared >= 8);
}

#[test]
fn concentration_growth_is_monotone_in_shear_amplitude() {
    let g = grid(2, 64);
    let r = 1.0 / 8.0;
    let psi = make_test_function(3, g, DEFAULT_A).unwrap().field;
    let c_ls = |amplitude: f64| {
        let cfg = drift(g, VelocitySpec::Shear { amplitude }, r);
        let rep = verify_concentration(&psi, &cfg, &history(&cfg, r), r, r, 1.0).unwrap();
        assert_eq!(outcome(&rep, "growth_bound"), Outcome::Pass);
        rep.constants["C_ls"]
    };
    let (one, two) = (c_ls(1.0), c_ls(2.0));
    assert!(two >= one, "{one} -> {two}");
}

#[test]
fn l1_decay_examples() {
    let g = grid(1, 256);
    let r = 1.0 / 16.0;
    let horizon = 0.02;
    let mut cfg = drift(g, VelocitySpec::Zero, horizon);
    cfg.dt = Some(2e-5);
    let psi = make_test_function(4, g, DEFAULT_A).unwrap().field.scaled(3.0);
    let rep = verify_l1_decay(&psi, &cfg, &history(&cfg, horizon), horizon, r).unwrap();
    assert!(rep.passed());
    assert!(rep.constants["c_hat"] > 0.0);
    let l1 = &rep.series["l1"];
    assert!((l1[0] - 1.0).abs() < 1e-12, "normalized to unit L¹");
    assert!(l1.windows(2).all(|w| w[1] < w[0]));

    let one_signed = ScalarField::constant(g, 1.0);
    assert!(matches!(
        verify_l1_decay(&one_signed, &cfg, &history(&cfg, horizon), horizon, r),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn class_evolution_without_velocity_uses_the_smallest_rate() {
    let g = grid(1, 256);
    let tf = make_test_function(4, g, DEFAULT_A).unwrap();
    let horizon = 0.25;
    let cfg = drift(g, VelocitySpec::Zero, horizon);
    let rep = verify_class_evolution(&tf.field, &cfg, &history(&cfg, horizon), horizon, tf.params).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.constants["K_hat"], TRIAL_RATES[0] * tf.params.r() / horizon);
    assert!(rep.constants["exponent"] > 0.0);
}

#[test]
fn class_evolution_checks_the_tail_against_u1() {
    let g = grid(1, 64);
    let tf = make_test_function(1, g, DEFAULT_A).unwrap();
    let horizon = 0.1;
    let cfg = drift(g, VelocitySpec::Zero, horizon);
    let rep = verify_class_evolution(&tf.field, &cfg, &history(&cfg, horizon), horizon, tf.params).unwrap();
    assert_eq!(outcome(&rep, "tail_bound"), Outcome::Pass);
}

#[test]
fn class_evolution_rejects_non_members() {
    let g = grid(1, 128);
    let tf = make_test_function(2, g, DEFAULT_A).unwrap();
    let cfg = drift(g, VelocitySpec::Zero, 0.1);
    let big = tf.field.scaled(2.0);
    assert!(matches!(
        verify_class_evolution(&big, &cfg, &history(&cfg, 0.1), 0.1, tf.params),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn class_scales_are_equivariant() {
    let g = grid(2, 64);
    let tf = make_test_function(2, g, DEFAULT_A).unwrap();
    let horizon = 0.1;
    let cfg = drift(g, VelocitySpec::Shear { amplitude: 1.0 }, horizon);
    let h = history(&cfg, horizon);
    let rates = [1.0, 4.0];
    let base = class_scale_series(&tf.field, &cfg, &h, horizon, tf.params, &rates).unwrap();
    for lambda in [0.1, 3.0, 250.0] {
        let scaled = class_scale_series(&tf.field.scaled(lambda), &cfg, &h, horizon, tf.params, &rates).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            for (x, y) in a.a.iter().zip(&b.a) {
                assert!((y / lambda - x).abs() <= 1e-8 * x.max(1e-300), "{lambda}: {x} vs {y}");
            }
        }
    }
    let params = ClassParams::new(0.25, DEFAULT_A).unwrap();
    assert_eq!(params, tf.params);
}

#[test]
fn holder_bound_without_velocity_is_monotone() {
    let g = grid(2, 32);
    let cfg = drift(g, VelocitySpec::Zero, 0.5);
    let theta = driftlab::generate::gaussian_bump(g, [0.5, 0.5], 0.1).unwrap();
    let rep = verify_holder_bound(&cfg, &theta, &HolderBoundOptions { snapshots: 10, rough: false }).unwrap();
    assert_eq!(outcome(&rep, "H_nonincreasing"), Outcome::Pass);
    assert_eq!(outcome(&rep, "H_bounded"), Outcome::Pass);
}

#[test]
fn holder_bound_degrades_without_a_fit() {
    let g = grid(2, 32);
    let cfg = drift(g, VelocitySpec::Zero, 0.2);
    let rep = verify_holder_bound(&cfg, &cosine_mode(g, [1, 0]), &HolderBoundOptions::default()).unwrap();
    assert!(rep.verdicts.iter().all(|v| v.outcome == Outcome::NotApplicable));
    assert!(rep.series.contains_key("linf") && rep.series.contains_key("l1"));
}

#[test]
fn invariants_hold_for_both_signs() {
    let g = grid(2, 32);
    for sign in [AdvectionSign::Paper, AdvectionSign::Standard] {
        let mut cfg = drift(g, VelocitySpec::Shear { amplitude: 2.0 }, 0.3);
        cfg.sign = sign;
        assert!(verify_invariants(&cfg, &random_band_limited(g, 6, 4).unwrap()).unwrap().passed());
        cfg.kind = EquationKind::Sqg;
        cfg.velocity = VelocitySpec::Zero;
        assert!(verify_invariants(&cfg, &random_band_limited(g, 6, 5).unwrap()).unwrap().passed());
    }
}

#[test]
fn reports_are_reproducible() {
    let a = run_suite("operators", 11).unwrap();
    let b = run_suite("operators", 11).unwrap();
    let json = |rs: &[VerificationReport]| rs.iter().map(|r| r.to_json()).collect::<Vec<_>>();
    assert_eq!(json(&a), json(&b));
    let c = run_suite("operators", 12).unwrap();
    assert_ne!(a[1].digest, c[1].digest);
    assert!(matches!(run_suite("bogus", 0), Err(Error::Precondition(_))));
}
