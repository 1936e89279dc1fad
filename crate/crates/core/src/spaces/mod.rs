//! Norms, seminorms and test-function classes.

pub mod bmo;
pub mod classes;
pub mod holder;
pub mod lp;
pub mod omega;

pub use bmo::{ball_oscillations, bmo_norm, bmo_norm_velocity, default_radii, BallOscillation};
pub use classes::{
    band_kernel, check_class_membership, make_test_function, pairing_map, ClassParams, MembershipReport,
    TestFunction, DEFAULT_A, MEAN_ZERO_TOLERANCE,
};
pub use holder::{
    holder_from_classes, holder_from_lp, holder_seminorm_direct, holder_seminorm_subsampled, ClassHolderFit,
    LpHolderFit, PairingSample, DIRECT_PAIR_LIMIT,
};
pub use lp::{lp_decomposition, lp_projection, BandSup, LpBand};
pub use omega::{concentration_at, concentration_map, omega_weight};
