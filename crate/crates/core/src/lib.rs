//! Physical-layer secrecy toolkit for a vehicle-to-vehicle link in which a
//! source serves two NOMA users through a full-duplex decode-and-forward
//! relay while an eavesdropper overhears both hops.
//!
//! The crate has three layers:
//!
//! - a link-level simulator: block-Rayleigh channel sampling ([`channel`]),
//!   per-realization SINRs and rates ([`sinr`]), and seeded Monte Carlo
//!   estimation of every ergodic quantity ([`mc`]);
//! - closed-form / quadrature evaluation of the ergodic achievable and
//!   eavesdropping capacities and the secrecy sum-rate lower bound
//!   ([`analysis`]), backed by the special functions in [`numerics`];
//! - a per-realization secrecy sum-rate maximizer over the two power
//!   allocation parameters, built on successive convex approximation of the
//!   difference-of-concave rate expressions ([`optimizer`]).
//!
//! [`scenario`] and [`figures`] provide the experiment harness used by the
//! CLI: scenario files, canned sweep recipes and deterministic CSV output.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod figures;
pub mod mc;
pub mod numerics;
pub mod optimizer;
pub mod params;
pub mod scenario;
pub mod sinr;

pub use analysis::{analytical_report, AnalyticalReport, RateParams};
pub use channel::ChannelRealization;
pub use error::Error;
pub use figures::{run_figure, write_csv, Overrides, Provenance, ResultTable};
pub use mc::{ErgodicTerms, McEstimate};
pub use optimizer::{DcCoefficients, OptimizerTrace, SurrogateModel};
pub use params::{FadingProfile, SystemParams, Topology};
pub use scenario::{parse_scenario, McMode, Scenario};
pub use sinr::{RateSet, SinrSet};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
