use proptest::prelude::*;

use driftlab::evolution::{
    run_dual, run_forward, AdvectionSign, DualOptions, EquationKind, ForwardOptions, SimConfig, VelocityHistory,
    VelocitySpec,
};
use driftlab::generate::random_band_limited;
use driftlab::spaces::{make_test_function, DEFAULT_A};
use driftlab::verify::check_invariants;
use driftlab::verify::VerificationReport;
use driftlab::GridSpec;

fn sign() -> impl Strategy<Value = AdvectionSign> {
    prop_oneof![Just(AdvectionSign::Paper), Just(AdvectionSign::Standard)]
}

fn velocity() -> impl Strategy<Value = VelocitySpec> {
    prop_oneof![
        Just(VelocitySpec::Zero),
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| VelocitySpec::Constant([a, b])),
        (0.1f64..3.0).prop_map(|amplitude| VelocitySpec::Shear { amplitude }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forward_runs_keep_the_invariants(
        v in velocity(),
        sign in sign(),
        sqg in any::<bool>(),
        kmax in 1usize..=8,
        seed in any::<u64>(),
        amplitude in 0.1f64..10.0,
    ) {
        let g = GridSpec::new(2, 32).unwrap();
        let mut cfg = SimConfig::new(g);
        cfg.sign = sign;
        cfg.t_end = 0.1;
        if sqg {
            cfg.kind = EquationKind::Sqg;
            cfg.dt = Some(2e-3 / amplitude);
        } else {
            cfg.velocity = v;
        }
        let theta0 = random_band_limited(g, kmax, seed).unwrap().scaled(amplitude);
        let run = run_forward(&cfg, &theta0, &ForwardOptions::default()).unwrap();
        let mut report = VerificationReport::new("invariants", "property");
        check_invariants(&mut report, &run.rows);
        for v in &report.verdicts {
            prop_assert!(v.outcome != driftlab::verify::Outcome::Fail, "{} = {:?}", v.name, v.value);
        }
    }

    #[test]
    fn dual_runs_contract_l1_and_keep_zero_mean(
        amplitude in 0.0f64..3.0,
        sign in sign(),
        j in 1u32..=3,
    ) {
        let g = GridSpec::new(2, 64).unwrap();
        let mut cfg = SimConfig::new(g);
        cfg.sign = sign;
        cfg.velocity = VelocitySpec::Shear { amplitude };
        cfg.t_end = 0.05;
        let psi = make_test_function(j, g, DEFAULT_A).unwrap().field;
        let h = VelocityHistory::prescribed(g, cfg.velocity.clone(), 0.05);
        let run = run_dual(&cfg, &psi, 0.05, &h, &DualOptions::default()).unwrap();
        for w in run.rows.windows(2) {
            prop_assert!(w[1].l1 <= w[0].l1 + 1e-6, "{} -> {}", w[0].l1, w[1].l1);
        }
        prop_assert!(run.rows.iter().all(|r| r.mean.abs() <= 1e-12));
    }
}
