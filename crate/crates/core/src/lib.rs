//! Finite-dimensional moment-map stability toolkit.
//!
//! The crate computes with matrix reductive groups acting linearly or
//! projectively on complex vector spaces: spectral calculus for vectors of
//! Hermitian type, moment maps and maximal-weight functions, exact rational
//! polystability classification for torus actions, a continuity-method solver
//! that either reaches a moment-map zero or extracts a destabilizing
//! direction, plus two desk-scale gauge-theory specializations (the abelian
//! vortex equation on a periodic grid and split-bundle pair stability).

pub mod action;
pub mod cone;
pub mod dexp;
pub mod error;
pub mod group;
pub mod linalg;
pub mod pairs;
pub mod sampling;
pub mod scalar;
pub mod solver;
pub mod stability;
pub mod suite;
pub mod vortex;
pub mod spectral;

pub use error::Error;
