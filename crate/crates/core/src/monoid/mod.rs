//! Affine monoids inside `Z^n`, presented monoids, and the constructions
//! between them.

mod affine;
mod ops;
mod presented;

pub use affine::{AffineMonoid, DoubleDual, MonoidClassification, MonoidFace, PrimeIdeal, UnitSplit};
pub use ops::{fibre_product, is_isomorphic, pushout_fg, pushout_toric, Isomorphism, MonoidMorphism};
pub use presented::{GroupStructure, PresentedClassification, PresentedMonoid, Verdict, WordResult};
