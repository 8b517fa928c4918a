//! Guaranteed-safe open-loop motion horizons for differential-drive robots
//! commanded by a central decision maker over a failure-prone channel.
//!
//! The library is organised bottom-up:
//!
//! - [`geometry`] — the convex-hull boundary of the reachable set of a
//!   unit-speed differential-drive robot, the disk-and-slab enclosing set,
//!   exact and sampled areas, and Jaccard-distance diagnostics.
//! - [`ellipse`] — the analytic minimum-area ellipse circumscribing the
//!   enclosing set, pose transforms, and membership tests.
//! - [`horizon`] — open-loop trajectory prediction and the pairwise /
//!   fleet safe-time-horizon computation.
//! - [`sim`] — a deterministic discrete-time multi-robot simulation with a
//!   central decision maker, a lossy command channel, and CSV logging.
//! - [`verify`] — self-contained check suites that compare the analytic
//!   routes against independent numerical ones.
//!
//! All internals use the normalized model: linear and angular speeds are
//! bounded by 1, so one time unit equals one length unit along a straight
//! line. [`horizon::UnitScale`] maps physical robot limits onto these units.

pub mod ellipse;
pub mod error;
mod format;
pub mod geometry;
pub mod horizon;
pub mod pose;
pub mod sim;
pub mod vec2;
pub mod verify;

pub use error::{Error, Result};
pub use format::sig9;
pub use pose::{Pose, VelocityCommand};
pub use vec2::Vec2;
