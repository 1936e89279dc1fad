//! Executable checks of the duality transfer, the dual-solution estimates,
//! class evolution and the Hölder bounds, each producing a self-describing
//! report.

mod class_evolution;
mod concentration;
mod duality;
mod estimators;
mod holder_bound;
mod invariants;
mod l1;
mod linfty;
mod operators;
mod report;
mod suites;

pub use class_evolution::{class_scale_series, verify_class_evolution, ScaleSeries, TRIAL_RATES};
pub use concentration::verify_concentration;
pub use duality::{verify_duality, DualityOptions, DUALITY_TOLERANCE, HALVING_RATIO};
pub use estimators::{dyadic_radii, verify_class_machinery, verify_holder_estimators};
pub use holder_bound::{tracked_seminorm, tracking_exponent, verify_holder_bound, HolderBoundOptions};
pub use invariants::{check_invariants, verify_invariants};
pub use l1::{signed_masses, verify_l1_decay};
pub use linfty::verify_linfty_decay;
pub use operators::{oracle_error, two_mode, verify_operator_oracle, verify_semigroup};
pub use report::{Outcome, Relation, Verdict, VerificationReport};
pub use suites::{
    cosine_l1_report, near_delta, registry, run_suite, smoothing_report, sqg_cosine_report, sqg_random_reports,
    suite_names, SuiteSpec,
};
