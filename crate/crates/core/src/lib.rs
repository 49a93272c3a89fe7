//! Numerical engine for geometries that are defined entirely by a world
//! function σ(P, Q), i.e. half the squared distance between two points.
//!
//! Every geometric notion in the crate (scalar product, vector equivalence,
//! collinearity, segments, cylinders) is written through σ alone, so the
//! same code runs on the Euclidean and Minkowski world functions, on user
//! deformations of either, on tabulated discrete carrier sets, and on the
//! world function induced by a Riemannian metric through its geodesics.
//!
//! Module map:
//!
//! * [`point`]: points, point-pair vectors, the [`WorldFunction`] contract.
//! * [`geometries`]: built-in world functions and their constructors.
//! * [`algebra`]: σ-level algebra (scalar product, equivalence, Gram, F0..F3).
//! * [`solvers`]: grid seeding, Gauss–Newton refinement, clustering and
//!   multivariance classification of solution sets.
//! * [`objects`]: segments, straights and cylinders as sampled point sets.
//! * [`riemann`]: metric fields, Christoffel symbols, geodesics, σ_R,
//!   conventional transport and the collinearity cone.
//! * [`config`]: JSON geometry descriptions.
//! * [`verify`]: randomised identity/axiom suite and the intransitivity search.

// Index loops mirror tensor notation; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod config;
pub mod error;
pub mod expr;
pub mod geometries;
pub mod objects;
pub mod point;
pub mod riemann;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use point::{world_function, BoundingBox, Domain, Geometry, Point, PointPairVector, WorldFunction};
