//! Exact monoid, cone and local-model computations for manifolds with
//! generalized corners.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: big-integer and rational vectors and matrices.
//! * [`latcone`]: Hermite/Smith normal forms, rational polyhedral cones,
//!   face lattices and Hilbert bases.
//! * [`monoid`]: affine and presented monoids, duality, faces, fibre products
//!   and pushouts.
//! * [`model`]: the local models `X_P x R^m`, their strata, corners and
//!   iterated boundaries.
//! * [`germ`]: interior map germs at the vertex and their classification.
//! * [`trans`]: transversality of germ pairs and fibre-product local models.

pub mod arith;
pub mod error;
pub mod germ;
pub mod latcone;
pub mod model;
pub mod monoid;
pub mod trans;

pub use error::{Error, Result};
