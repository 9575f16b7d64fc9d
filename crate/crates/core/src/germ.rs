//! Interior map germs `X_Q x R^m -> X_S x R^q` at the vertex.
//!
//! Near the vertex an interior germ `f` satisfies
//! `lambda_s o f = (positive smooth factor) * lambda_{alpha(s)}` for a monoid
//! morphism `alpha: S -> Q`. The germ records `alpha` together with the first
//! derivatives of the logarithms of the positive factors (`D`) and of the
//! real coordinates (`C`), both with respect to the real source coordinates.
//! The b-derivative at the vertex is then the block matrix
//!
//! ```text
//! L = [ A  D ]
//!     [ 0  C ]
//! ```
//!
//! with `A` the transpose of `alpha`.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::arith::{dot, IntMatrix, IntVec, RatMatrix};
use crate::error::{Error, Result};
use crate::latcone;
use crate::model::LocalModel;
use crate::monoid::{AffineMonoid, MonoidFace, MonoidMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapGerm {
    source: LocalModel,
    target: LocalModel,
    exponent: MonoidMorphism,
    mixed: RatMatrix,
    stratum: RatMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplicity {
    pub at_vertex: bool,
    pub local: bool,
    /// Generator indices of a face of `Q` where the corner fibre map is not
    /// an isomorphism.
    pub failing_face: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Immersion {
    pub immersion: bool,
    pub stratum_injective: bool,
    pub dual_injective: bool,
    pub cokernel_torsion_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermClassification {
    pub interior: bool,
    pub simple_at_vertex: bool,
    pub simple_local: bool,
    pub b_normal: bool,
    pub b_submersion: bool,
    pub b_fibration: bool,
    pub immersion_at_vertex: bool,
    pub etale_at_vertex: bool,
    pub diagnostics: Vec<String>,
}

fn require_toric_full_rank(m: &LocalModel, what: &str) -> Result<()> {
    let p = m.monoid();
    if !p.is_toric() {
        return Err(Error::Precondition(format!("the {what} monoid of a germ must be toric")));
    }
    if !p.is_full_rank() {
        return Err(Error::Precondition(format!("the {what} monoid of a germ must generate its ambient lattice")));
    }
    Ok(())
}

fn faces_of(p: &AffineMonoid) -> Vec<MonoidFace> {
    p.faces().expect("toric monoids have faces")
}

/// Hilbert basis of `F^ ⊂ P^v` for a full-rank toric `P`.
fn vanishing_dual(p: &AffineMonoid, dual: &[IntVec], face: &MonoidFace) -> Vec<IntVec> {
    dual.iter()
        .filter(|l| face.generators.iter().all(|&i| dot(l, &p.generators()[i]).is_zero()))
        .cloned()
        .collect()
}

impl MapGerm {
    /// `exponent` is the `ambient(Q) x ambient(S)` matrix of `alpha`, `mixed`
    /// is `rank(S) x m` and `stratum` is `q x m`.
    pub fn new(
        source: LocalModel,
        target: LocalModel,
        exponent: IntMatrix,
        mixed: RatMatrix,
        stratum: RatMatrix,
    ) -> Result<Self> {
        require_toric_full_rank(&source, "source")?;
        require_toric_full_rank(&target, "target")?;
        let m = source.real_dim();
        let (rs, q) = (target.monoid().ambient(), target.real_dim());
        if mixed.rows() != rs || mixed.cols() != m {
            return Err(Error::Dimension(format!(
                "mixed block is {}x{} but expected {rs}x{m}",
                mixed.rows(),
                mixed.cols()
            )));
        }
        if stratum.rows() != q || stratum.cols() != m {
            return Err(Error::Dimension(format!(
                "stratum block is {}x{} but expected {q}x{m}",
                stratum.rows(),
                stratum.cols()
            )));
        }
        let exponent = MonoidMorphism::new(target.monoid().clone(), source.monoid().clone(), exponent)?;
        Ok(MapGerm { source, target, exponent, mixed, stratum })
    }

    /// Germ with zero derivative blocks.
    pub fn monomial(source: LocalModel, target: LocalModel, exponent: IntMatrix) -> Result<Self> {
        let mixed = RatMatrix::zeros(target.monoid().ambient(), source.real_dim());
        let stratum = RatMatrix::zeros(target.real_dim(), source.real_dim());
        Self::new(source, target, exponent, mixed, stratum)
    }

    pub fn identity(model: &LocalModel) -> Result<Self> {
        let n = model.monoid().ambient();
        let m = model.real_dim();
        Self::new(model.clone(), model.clone(), IntMatrix::identity(n), RatMatrix::zeros(n, m), RatMatrix::identity(m))
    }

    pub fn source(&self) -> &LocalModel {
        &self.source
    }
    pub fn target(&self) -> &LocalModel {
        &self.target
    }
    pub fn exponent(&self) -> &MonoidMorphism {
        &self.exponent
    }
    pub fn mixed_block(&self) -> &RatMatrix {
        &self.mixed
    }
    pub fn stratum_block(&self) -> &RatMatrix {
        &self.stratum
    }

    /// `A`, the map `Hom(Q^gp, R) -> Hom(S^gp, R)` given by composition with `alpha`.
    pub fn monoid_block(&self) -> RatMatrix {
        self.exponent.matrix().transpose().to_rat()
    }

    /// The b-derivative at the vertex.
    pub fn b_derivative(&self) -> RatMatrix {
        let a = self.monoid_block();
        let zero = RatMatrix::zeros(self.target.real_dim(), a.cols());
        RatMatrix::block(&a, &self.mixed, &zero, &self.stratum)
    }

    /// `{s in S : alpha(s) in G}`, the face of `S` receiving the corner with face `G`.
    pub fn corner_image_face(&self, face: &MonoidFace) -> Result<MonoidFace> {
        let q = self.source.monoid();
        if !faces_of(q).contains(face) {
            return Err(Error::InvalidFace(format!("{:?} is not a face of the source", face.generators)));
        }
        let cone = q.cone();
        let in_face = |v: &IntVec| face.handle.inequalities.iter().all(|&t| dot(&cone.facets()[t], v).is_zero());
        let s = self.target.monoid();
        let idx: Vec<usize> =
            (0..s.generators().len()).filter(|&i| in_face(&self.exponent.apply(&s.generators()[i]))).collect();
        Ok(faces_of(s).into_iter().find(|f| f.generators == idx).expect("preimages of faces are faces"))
    }

    fn vertex_face(&self) -> MonoidFace {
        faces_of(self.source.monoid()).pop().expect("nonempty face list")
    }

    /// Whether the vertex of the source goes to the vertex of the target.
    pub fn preserves_vertex(&self) -> bool {
        let h = self.corner_image_face(&self.vertex_face()).expect("vertex is a face");
        h.codim == self.target.monoid().rank()
    }

    /// Whether `alpha^v` restricts to an isomorphism `G^ -> H^` with `H` the
    /// image face of `G`.
    fn fibre_map_is_iso(&self, face: &MonoidFace, qd: &[IntVec], sd: &[IntVec]) -> bool {
        let q = self.source.monoid();
        let s = self.target.monoid();
        let h = self.corner_image_face(face).expect("face checked");
        let from = vanishing_dual(q, qd, face);
        let to: BTreeSet<IntVec> = vanishing_dual(s, sd, &h).into_iter().collect();
        let at = self.exponent.matrix().transpose();
        let images: BTreeSet<IntVec> = from.iter().map(|l| at.apply(l)).collect();
        images.len() == from.len()
            && images == to
            && arith_rank(&images.iter().cloned().collect::<Vec<_>>(), s.ambient())
                == arith_rank(&from, q.ambient())
    }

    pub fn is_simple(&self) -> Simplicity {
        let qd = self.source.monoid().dual().generators().to_vec();
        let sd = self.target.monoid().dual().generators().to_vec();
        let at_vertex = self.fibre_map_is_iso(&self.vertex_face(), &qd, &sd);
        let failing = faces_of(self.source.monoid()).into_iter().find(|f| !self.fibre_map_is_iso(f, &qd, &sd));
        Simplicity { at_vertex, local: failing.is_none(), failing_face: failing.map(|f| f.generators) }
    }

    /// A face `G` of `Q` whose image face has larger codimension, if any.
    pub fn b_normal_witness(&self) -> Option<MonoidFace> {
        faces_of(self.source.monoid()).into_iter().find(|g| {
            let h = self.corner_image_face(g).expect("face of the source");
            h.codim > g.codim
        })
    }

    pub fn is_b_normal(&self) -> bool {
        self.b_normal_witness().is_none()
    }

    pub fn is_b_submersion(&self) -> bool {
        let l = self.b_derivative();
        l.rank() == l.rows()
    }

    pub fn is_b_fibration(&self) -> bool {
        self.is_b_normal() && self.is_b_submersion()
    }

    pub fn is_immersion_at_vertex(&self) -> Immersion {
        let stratum_injective = self.stratum.rank() == self.stratum.cols();
        let at = self.exponent.matrix().transpose();
        let dual_injective = at.rank() == at.cols();
        let cokernel_torsion_free = latcone::cokernel_torsion_free(&at);
        Immersion {
            immersion: stratum_injective && dual_injective && cokernel_torsion_free,
            stratum_injective,
            dual_injective,
            cokernel_torsion_free,
        }
    }

    pub fn is_etale_at_vertex(&self) -> bool {
        let l = self.b_derivative();
        l.rows() == l.cols() && l.rank() == l.rows() && self.is_simple().local
    }

    /// The germ induced on the corner component with face `G`.
    pub fn restrict(&self, face: &MonoidFace) -> Result<MapGerm> {
        let h = self.corner_image_face(face)?;
        let (g_mon, _) = self.source.monoid().face_monoid(face).full_rank_form();
        let g_lattice = self.source.monoid().face_monoid(face).groupification();
        let (h_mon, bh) = self.target.monoid().face_monoid(&h).full_rank_form();
        let image = self.exponent.matrix().mul(&bh);
        let cols: Vec<IntVec> = image
            .column_vecs()
            .iter()
            .map(|c| g_lattice.coordinates(c).expect("the image face maps into the face"))
            .collect();
        let exponent = if cols.is_empty() {
            IntMatrix::zeros(g_lattice.rank(), 0)
        } else {
            IntMatrix::from_columns(&cols, g_lattice.rank())?
        };
        let mixed = bh.transpose().to_rat().mul(&self.mixed);
        MapGerm::new(
            LocalModel::new(g_mon, self.source.real_dim())?,
            LocalModel::new(h_mon, self.target.real_dim())?,
            exponent,
            mixed,
            self.stratum.clone(),
        )
    }

    pub fn classify(&self) -> GermClassification {
        let simple = self.is_simple();
        let b_normal_witness = self.b_normal_witness();
        let b_submersion = self.is_b_submersion();
        let immersion = self.is_immersion_at_vertex();
        let l = self.b_derivative();
        let etale = simple.local && l.rows() == l.cols() && l.rank() == l.rows();
        let mut diagnostics = Vec::new();
        if let Some(f) = &simple.failing_face {
            diagnostics.push(format!("corner fibre map is not an isomorphism at face {f:?}"));
        }
        if let Some(g) = &b_normal_witness {
            diagnostics.push(format!("face {:?} of codimension {} raises codimension", g.generators, g.codim));
        }
        if !b_submersion {
            diagnostics.push(format!("b-derivative has rank {} < {}", l.rank(), l.rows()));
        }
        if !immersion.stratum_injective {
            diagnostics.push("stratum derivative is not injective".into());
        }
        if !immersion.dual_injective {
            diagnostics.push("dual monoid map is not injective".into());
        }
        if !immersion.cokernel_torsion_free {
            diagnostics.push("cokernel of the dual lattice map has torsion".into());
        }
        GermClassification {
            interior: true,
            simple_at_vertex: simple.at_vertex,
            simple_local: simple.local,
            b_normal: b_normal_witness.is_none(),
            b_submersion,
            b_fibration: b_normal_witness.is_none() && b_submersion,
            immersion_at_vertex: immersion.immersion,
            etale_at_vertex: etale,
            diagnostics,
        }
    }
}

fn arith_rank(v: &[IntVec], n: usize) -> usize {
    crate::arith::rank_of(v, n)
}
