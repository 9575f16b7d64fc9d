//! Local models `X_P x R^m` at the combinatorial level.
//!
//! A point of `X_P` is a monoid morphism `P -> [0, inf)`, recorded by its
//! values on the generators. Corners, strata and iterated boundaries are all
//! indexed by faces or chains of faces of `P`.

use num_traits::{ToPrimitive, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};
use crate::monoid::{AffineMonoid, MonoidFace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    monoid: AffineMonoid,
    real_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPoint {
    generator_values: Vec<Rat>,
    real_coords: Vec<Rat>,
    support: MonoidFace,
}

/// A connected component of the codimension-`k` corners `C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerComponent {
    pub face: MonoidFace,
    pub codim: usize,
}

/// A chain `P = F_0 ⊋ F_1 ⊋ ... ⊋ F_k` with `codim F_i = i`, one component of
/// the iterated boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlagChain {
    /// Indices into [`LocalModel::faces`], starting with the whole monoid.
    pub faces: Vec<usize>,
}

impl FlagChain {
    pub fn depth(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn last(&self) -> usize {
        *self.faces.last().expect("flags are nonempty")
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl LocalModel {
    pub fn new(monoid: AffineMonoid, real_dim: usize) -> Result<Self> {
        monoid.require_weakly_toric("a local model")?;
        Ok(LocalModel { monoid, real_dim })
    }

    pub fn monoid(&self) -> &AffineMonoid {
        &self.monoid
    }

    pub fn real_dim(&self) -> usize {
        self.real_dim
    }

    pub fn dimension(&self) -> usize {
        self.monoid.rank() + self.real_dim
    }

    /// `X_{P^# x Z^l} x R^m ≅ X_{P^#} x R^(m + l)`.
    pub fn sharpen(&self) -> LocalModel {
        let split = self.monoid.units_and_split().expect("weakly toric by construction");
        LocalModel { monoid: split.sharp, real_dim: self.real_dim + split.unit_rank }
    }

    pub fn faces(&self) -> Vec<MonoidFace> {
        self.monoid.faces().expect("weakly toric by construction")
    }

    fn check_codim(&self, k: usize) -> Result<()> {
        let max = self.monoid.rank();
        if k > max {
            return Err(Error::OutOfRange { index: k, max });
        }
        Ok(())
    }

    /// Validates generator values against the relations of the monoid.
    pub fn point(&self, values: Vec<Rat>, reals: Vec<Rat>) -> Result<ModelPoint> {
        let gens = self.monoid.generators();
        if values.len() != gens.len() {
            return Err(Error::Dimension(format!("expected {} generator values, got {}", gens.len(), values.len())));
        }
        if reals.len() != self.real_dim {
            return Err(Error::Dimension(format!("expected {} real coordinates, got {}", self.real_dim, reals.len())));
        }
        if let Some(i) = values.iter().position(|v| v < &Rat::zero()) {
            return Err(Error::InvalidPoint(format!("generator value {i} is negative")));
        }
        for (u, v) in self.monoid.relations() {
            if monomial(&values, &u) != monomial(&values, &v) {
                return Err(Error::InvalidPoint(format!("relation {u:?} = {v:?} is violated")));
            }
        }
        let nonzero: Vec<usize> = (0..values.len()).filter(|&i| !values[i].is_zero()).collect();
        let support = self
            .faces()
            .into_iter()
            .find(|f| f.generators == nonzero)
            .ok_or_else(|| Error::InvalidPoint("the support is not a face".into()))?;
        Ok(ModelPoint { generator_values: values, real_coords: reals, support })
    }

    /// Points per depth: the number of faces of each codimension.
    pub fn strata_census(&self) -> Vec<usize> {
        self.monoid.face_census().expect("weakly toric by construction")
    }

    pub fn corners(&self, k: usize) -> Result<Vec<CornerComponent>> {
        self.check_codim(k)?;
        Ok(self.faces().into_iter().filter(|f| f.codim == k).map(|face| CornerComponent { face, codim: k }).collect())
    }

    /// All flags of length `k`, in lexicographic order of face indices.
    pub fn iterated_boundary(&self, k: usize) -> Result<Vec<FlagChain>> {
        self.check_codim(k)?;
        let faces = self.faces();
        let mut flags = vec![FlagChain { faces: vec![0] }];
        for step in 1..=k {
            let mut next = Vec::new();
            for flag in &flags {
                let top = &faces[flag.last()];
                for (j, f) in faces.iter().enumerate() {
                    if f.codim == step && is_subset(&f.generators, &top.generators) {
                        let mut chain = flag.faces.clone();
                        chain.push(j);
                        next.push(FlagChain { faces: chain });
                    }
                }
            }
            flags = next;
        }
        flags.sort();
        Ok(flags)
    }

    /// The monoid fibre `F^ = {b in P^v : b|F = 0}` over the corner with
    /// face `F`, together with the rank of the b-normal fibre, `codim F`.
    pub fn corner_fibre_monoid(&self, face: &MonoidFace) -> Result<(AffineMonoid, usize)> {
        if !self.faces().contains(face) {
            return Err(Error::InvalidFace(format!("{:?} is not a face of the model", face.generators)));
        }
        let (dual, dual_face) = self.monoid.face_dual(face)?;
        Ok((dual.face_monoid(&dual_face), face.codim))
    }

    /// Ordinary corners: every corner fibre is free.
    pub fn is_manifold_with_corners(&self) -> bool {
        self.faces().iter().all(|f| self.corner_fibre_monoid(f).map(|(m, _)| m.is_free()).unwrap_or(false))
    }

    pub fn btangent_rank(&self) -> usize {
        self.dimension()
    }
}

fn monomial(values: &[Rat], exponents: &[Int]) -> Rat {
    values.iter().zip(exponents).fold(Rat::from_integer(1.into()), |acc, (v, e)| {
        let e = e.to_usize().expect("relation exponents are small naturals");
        acc * num_traits::pow(v.clone(), e)
    })
}

impl ModelPoint {
    pub fn generator_values(&self) -> &[Rat] {
        &self.generator_values
    }

    pub fn real_coords(&self) -> &[Rat] {
        &self.real_coords
    }

    /// `supp x` and `depth x = codim supp x`.
    pub fn support_and_depth(&self) -> (&MonoidFace, usize) {
        (&self.support, self.support.codim)
    }

    pub fn is_interior(&self) -> bool {
        self.support.codim == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_integer(x.into())).collect()
    }

    fn pyramid() -> LocalModel {
        let p = AffineMonoid::from_i64(3, &[&[1, 0, 0], &[0, 1, 1], &[0, 1, 0], &[1, 0, 1]]).unwrap();
        LocalModel::new(p, 0).unwrap()
    }

    #[test]
    fn pyramid_points() {
        let m = pyramid();
        // generators p1, p2, p3, p4 satisfy p1 + p2 = p3 + p4
        let x = m.point(rats(&[2, 3, 1, 6]), vec![]).unwrap();
        assert_eq!(x.support_and_depth().1, 0);
        assert!(m.point(rats(&[1, 1, 1, 2]), vec![]).is_err());
        let vertex = m.point(rats(&[0, 0, 0, 0]), vec![]).unwrap();
        assert_eq!(vertex.support_and_depth().1, 3);
        let edge = m.point(rats(&[5, 0, 0, 0]), vec![]).unwrap();
        assert_eq!(edge.support_and_depth().1, 2);
        let facet = m.point(rats(&[2, 0, 7, 0]), vec![]).unwrap();
        assert_eq!(facet.support_and_depth().0.generators, vec![0, 2]);
        assert_eq!(facet.support_and_depth().1, 1);
        assert!(m.point(rats(&[-1, 0, 0, 0]), vec![]).is_err());
        assert!(m.point(rats(&[1, 1, 1]), vec![]).is_err());
    }

    #[test]
    fn pyramid_corners_and_flags() {
        let m = pyramid();
        assert_eq!(m.strata_census(), vec![1, 4, 4, 1]);
        assert_eq!(m.corners(0).unwrap().len(), 1);
        assert_eq!(m.corners(1).unwrap().len(), 4);
        assert_eq!(m.corners(3).unwrap().len(), 1);
        assert!(m.corners(4).is_err());
        assert_eq!(m.iterated_boundary(1).unwrap().len(), 4);
        assert_eq!(m.iterated_boundary(2).unwrap().len(), 8);
        assert_eq!(m.iterated_boundary(3).unwrap().len(), 8);
        assert!(!m.is_manifold_with_corners());
        assert_eq!(m.btangent_rank(), 3);
    }

    #[test]
    fn corner_fibres() {
        let m = pyramid();
        let faces = m.faces();
        let (top, r) = m.corner_fibre_monoid(&faces[0]).unwrap();
        assert!(top.is_zero_monoid());
        assert_eq!(r, 0);
        let (facet, r) = m.corner_fibre_monoid(&faces[1]).unwrap();
        assert!(facet.is_free());
        assert_eq!((facet.rank(), r), (1, 1));
        let (bottom, r) = m.corner_fibre_monoid(faces.last().unwrap()).unwrap();
        assert_eq!(bottom.hilbert_basis().len(), 4);
        assert_eq!(r, 3);
    }

    #[test]
    fn free_and_lattice_models() {
        let orthant = LocalModel::new(AffineMonoid::free(2).product(&AffineMonoid::lattice(1)), 0).unwrap();
        assert!(orthant.is_manifold_with_corners());
        assert_eq!(orthant.strata_census(), vec![1, 2, 1, 0]);
        assert_eq!(orthant.btangent_rank(), 3);
        let sharp = orthant.sharpen();
        assert_eq!((sharp.monoid().rank(), sharp.real_dim()), (2, 1));

        let lattice = LocalModel::new(AffineMonoid::lattice(3), 0).unwrap();
        assert_eq!(lattice.strata_census(), vec![1, 0, 0, 0]);
        assert!(lattice.is_manifold_with_corners());

        let plain = LocalModel::new(AffineMonoid::zero(0), 5).unwrap();
        assert!(plain.is_manifold_with_corners());
        assert_eq!(plain.btangent_rank(), 5);
        assert_eq!(plain.iterated_boundary(0).unwrap().len(), 1);

        let cube = LocalModel::new(AffineMonoid::free(3), 0).unwrap();
        assert_eq!(cube.iterated_boundary(2).unwrap().len(), 6);
        assert_eq!(cube.iterated_boundary(3).unwrap().len(), 6);
    }

    #[test]
    fn non_saturated_model_is_rejected() {
        let p = AffineMonoid::from_i64(1, &[&[2], &[3]]).unwrap();
        assert!(LocalModel::new(p, 0).is_err());
    }
}
