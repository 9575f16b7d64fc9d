use num_traits::Zero;

use crate::arith::{self, Int, IntMatrix, IntVec, Rat};
use crate::error::{Error, Result};

use super::normal_form::column_lattice_basis;

/// A sublattice of `Z^ambient`, stored by its Hermite-form basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<IntVec>,
}

impl Lattice {
    pub fn standard(n: usize) -> Self {
        Lattice { ambient: n, basis: (0..n).map(|i| arith::unit_vec(n, i)).collect() }
    }

    /// The lattice generated by `gens`.
    pub fn from_generators(gens: &[IntVec], ambient: usize) -> Result<Self> {
        if gens.is_empty() {
            return Ok(Lattice { ambient, basis: Vec::new() });
        }
        let m = IntMatrix::from_columns(gens, ambient)?;
        Ok(Lattice { ambient, basis: column_lattice_basis(&m) })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `ambient x rank` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.basis, self.ambient).expect("basis lengths")
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<IntVec> {
        if v.len() != self.ambient {
            return None;
        }
        if self.basis.is_empty() {
            return arith::is_zero(v).then(Vec::new);
        }
        let b = self.basis_matrix().to_rat();
        let rhs: Vec<Rat> = arith::to_rat(v);
        let c = b.solve(&rhs)?;
        if c.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let c: IntVec = c.iter().map(|x| x.to_integer()).collect();
        // solve() returns a solution of the full system only when consistent
        (self.basis_matrix().apply(&c) == v).then_some(c)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether the lattice equals `(span of the lattice) ∩ Z^ambient`.
    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        super::normal_form::cokernel_torsion_free(&self.basis_matrix())
    }

    pub fn point(&self, coords: &[Int]) -> Result<IntVec> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension(format!("{} coordinates for a rank {} lattice", coords.len(), self.rank())));
        }
        let mut v = arith::zero_vec(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                v = arith::add(&v, &arith::scale(b, c));
            }
        }
        Ok(v)
    }
}
