//! Expansion properties of quiver representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`quiver`]: quivers, dimension vectors, Euler/Cartan forms and the
//!   exact Dynkin / extended Dynkin / wild classification.
//! * [`subrep`]: the recursive general-subrepresentation test `e ↪ d`.
//! * [`stability`]: slope functions, expansion coefficients and the
//!   expander existence criterion.
//! * [`spectral`]: Cartan spectra and the uniform-expansion certificate for
//!   wild quivers.
//! * [`kronecker`]: closed forms for generalized Kronecker quivers.
//! * [`coxeter`]: Coxeter transformation, preprojective orbits and slope
//!   convergence.
//! * [`sampler`]: representations over prime fields and brute-force
//!   subrepresentation search (heuristic).
//! * [`cli`]: the command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coxeter;
pub mod error;
pub mod ff;
pub mod kronecker;
pub mod lattice;
pub mod poly;
pub mod quiver;
pub mod rational;
pub mod sampler;
pub mod spectral;
pub mod stability;
pub mod subrep;

pub use error::{Error, Result};
pub use quiver::{Classification, DimVector, Quiver};
pub use rational::Rational;
pub use stability::{EpsilonResult, EpsilonValue, SlopeFunction};
pub use subrep::{Budget, EmbedCache};
