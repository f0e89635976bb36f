//! Planar flexible-cable shapes modelled as inflectional elastica.
//!
//! The crate is `no_std` (it needs `alloc`). It covers the elliptic function
//! kernel, closed-form shape evaluation, the endpoint boundary-value solver,
//! self-intersection and stability tests, quadratic Bézier approximation with
//! polygon collision, the precomputed endpoint grid and an A* planner over the
//! five-dimensional configuration grid.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bezier;
pub mod elastica;
pub mod elliptic;
mod error;
mod num;
pub mod geometry;
pub mod grid;
pub mod planner;
pub mod self_intersection;
pub mod solver;
pub mod stability;
pub mod visibility;

pub use elastica::{BaseFrame, CableSpec, ElasticaParams, Triplet};
pub use elliptic::Modulus;
pub use error::{Error, Result};
pub use geometry::{Polygon, Vec2};
pub use self_intersection::{ModulusRegion, K_MAX};
pub use stability::{StabilityLabel, K_C};
