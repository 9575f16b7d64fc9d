//! Integer lattices, normal forms and rational polyhedral cones.

mod cone;
mod dd;
mod hilbert;
mod lattice;
mod normal_form;

pub use cone::{Cone, FaceHandle};
pub use dd::{double_description, Generators};
pub use hilbert::{hilbert_basis, hilbert_basis_standard};
pub use lattice::Lattice;
pub use normal_form::{
    column_lattice_basis, cokernel_torsion_free, elementary_divisors, hermite_normal_form, hnf_rank,
    kernel_basis, smith_normal_form, solve_integer,
};

/// Free-function form of [`Cone::dual`].
pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}

/// Free-function form of [`Cone::faces`].
pub fn cone_faces(c: &Cone) -> Vec<FaceHandle> {
    c.faces()
}

/// Free-function form of [`Cone::relative_interior_contains`].
pub fn relative_interior_contains(c: &Cone, v: &[crate::arith::Int]) -> bool {
    c.relative_interior_contains(v)
}
