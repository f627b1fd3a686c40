//! Optimal transport maps between log-concave measures and uniform measures
//! on convex bodies, the explicit Hölder and second-derivative bound
//! functions for them, and empirical checks of those bounds.

pub mod concentration;
pub mod envelope;
pub mod error;
pub mod measures;
pub mod optim;
pub mod quad;
pub mod rng;
pub mod special;
pub mod suite;
pub mod transport1d;
pub mod transport_nd;
pub mod verify;

pub use error::{Error, Result};
