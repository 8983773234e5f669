//! Link-level Monte Carlo simulation of cooperative amplify-and-forward
//! relaying between in-body nano-devices at terahertz frequencies.
//!
//! The crate is layered bottom-up:
//!
//! - [`quantities`]: unit-carrying scalars and the scenario [`SystemConfig`].
//! - [`pathloss`]: the empirical in-body path-loss fit and per-hop mean SNR.
//! - [`topology`]: relay layouts and hop distances.
//! - [`link`]: Rayleigh gains and the AF/MRC combined SNR.
//! - [`outage`]: reproducible parallel outage estimation and analytic references.
//! - [`harness`]: parameter sweeps, figure presets and CSV/JSON output.

pub mod error;
pub mod harness;
pub mod link;
pub mod outage;
pub mod pathloss;
pub mod quantities;
pub mod topology;

pub use error::{Error, Result};
pub use outage::{estimate_outage, OutageEstimate};
pub use quantities::SystemConfig;
pub use topology::PlacementSpec;
