//! Stable multi-matching of one-dimensional point processes.
//!
//! Points on a line carry integer degrees (stub counts). In each round every
//! mutually closest compatible pair is joined by an edge; the process repeats
//! until no compatible pair remains. This crate provides:
//!
//! * [`point_process`]: windows, Poisson sampling, palm insertion, ball and
//!   annulus counts;
//! * [`degree`]: degree distributions, including the dyadic family with
//!   atoms `10 * 4^i` and masses `2^-i`, and stochastic-dominance checks;
//! * [`matching`]: an incremental matching engine plus two independent
//!   reference implementations used as cross-checking oracles;
//! * [`graph`]: connected components and the strong-connection criterion;
//! * [`events`]: the crowding/annulus/corridor events used to certify long
//!   chains of strongly connected vertices, their analytic bounds, and Monte
//!   Carlo estimators with palm conditioning.
//!
//! All geometry is generic over the scalar type via [`Scalar`]; the `*64`
//! aliases below fix `f64`, which is what the command-line driver uses.

pub mod degree;
mod error;
pub mod events;
pub mod graph;
pub mod matching;
pub mod point_process;
pub mod poisson;
mod rng;
mod scalar;
mod text;

pub use error::{Error, Result};
pub use rng::{rng_from_seed, trial_rng};
pub use scalar::Scalar;
pub use text::{format_real, format_real_result, parse_real};

/// `f64` window.
pub type Window64 = point_process::Window<f64>;
/// `f64` point configuration.
pub type PointConfiguration64 = point_process::PointConfiguration<f64>;
/// `f64` match state.
pub type MatchState64 = matching::MatchState<f64>;
/// `f64` matching.
pub type Matching64 = matching::Matching<f64>;

/// `f32` window, for reduced-precision experiments.
pub type Window32 = point_process::Window<f32>;
/// `f32` point configuration.
pub type PointConfiguration32 = point_process::PointConfiguration<f32>;
