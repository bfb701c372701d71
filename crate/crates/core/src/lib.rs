//! Link-level performance of a vehicular ad hoc network whose roads form a
//! Poisson line process and whose nodes form a 1D Poisson process on each
//! road, with slotted ALOHA access and Rayleigh fading.
//!
//! * [`params`]: validated model parameters and the `key=value` config format.
//! * [`quadrature`]: adaptive integration over the half-line.
//! * [`analytic`]: success probability, its 1D/2D limits, ASE and optimum ALOHA `p`.
//! * [`simulate`]: an independent Monte-Carlo engine for the same quantities.

pub mod analytic;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod simulate;

pub use analytic::{ase, optimal_p, success_probability, AseResult, OptimalP, PcModel};
pub use error::{AnalyticError, ParamError, QuadratureError, SimError};
pub use params::{NetworkParams, RawParams};
pub use quadrature::QuadratureSpec;
pub use simulate::{estimate_pc, estimate_pc_thresholds, EstimateRecord};
