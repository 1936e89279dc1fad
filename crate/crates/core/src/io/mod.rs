//! Configuration, file formats and run artifacts.

pub mod config;
pub mod diagnose;
pub mod history;
pub mod manifest;
pub mod series;

pub use config::{key_reference, parse_config, parse_config_str, DualSpec, InitialSpec, RunConfig, KEYS};
pub use diagnose::{diagnose, NORM_NAMES};
pub use history::{history_from_str, history_to_string, read_history, write_history};
pub use manifest::{sha256_hex, Artifacts, MANIFEST_NAME};
pub use series::{dual_csv, forward_csv, DUAL_HEADER, FORWARD_HEADER};
