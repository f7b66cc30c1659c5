//! Thurston-metric numerics on explicit hyperbolic surfaces.
//!
//! * [`hyp`]: trace/length conversions, spiralling horocycle series, the holonomy trace and a
//!   universal-cover development used as an independent oracle.
//! * [`annulus`]: stretch and antistretch flows on crowned annuli, stretch vectors, twist widths,
//!   and the named registry of spiralling laws.
//! * [`surface`]: the once-punctured torus through Fricke traces, truncated-supremum Thurston
//!   distance and Finsler norm, surface flows and the back-time / length-extraction experiments.
//! * [`convex`]: exact rational face lattices, abstract face posets and the adherence calculus.

pub mod annulus;
pub mod convex;
pub mod error;
pub mod hyp;
pub mod numeric;
pub mod surface;

pub use error::{Error, Result};
