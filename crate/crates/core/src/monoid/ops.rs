use std::collections::BTreeSet;

use num_traits::Signed;

use crate::arith::{self, Int, IntMatrix, IntVec};
use crate::error::{Error, Result};
use crate::latcone;

use super::affine::AffineMonoid;
use super::presented::PresentedMonoid;

/// A monoid morphism given by an integer matrix on ambient lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMorphism {
    source: AffineMonoid,
    target: AffineMonoid,
    matrix: IntMatrix,
}

impl MonoidMorphism {
    /// Checks that `matrix` is `target.ambient x source.ambient` and sends
    /// every source generator into the target monoid.
    pub fn new(source: AffineMonoid, target: AffineMonoid, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ambient() || matrix.cols() != source.ambient() {
            return Err(Error::Dimension(format!(
                "morphism matrix is {}x{} but expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient(),
                source.ambient()
            )));
        }
        for (i, g) in source.generators().iter().enumerate() {
            let img = matrix.apply(g);
            if !target.membership(&img) {
                return Err(Error::NotMorphism(format!(
                    "generator {i} maps to {} outside the target",
                    arith::fmt_vec(&img)
                )));
            }
        }
        Ok(MonoidMorphism { source, target, matrix })
    }

    pub fn identity(p: &AffineMonoid) -> Self {
        MonoidMorphism { source: p.clone(), target: p.clone(), matrix: IntMatrix::identity(p.ambient()) }
    }

    pub fn source(&self) -> &AffineMonoid {
        &self.source
    }
    pub fn target(&self) -> &AffineMonoid {
        &self.target
    }
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Int]) -> IntVec {
        self.matrix.apply(v)
    }

    /// The matrix in coordinates of `source^gp` and `target^gp`.
    pub fn gp_matrix(&self) -> IntMatrix {
        let (_, bs) = self.source.full_rank_form();
        let lt = self.target.groupification();
        let img = self.matrix.mul(&bs);
        let cols: Vec<IntVec> = img
            .column_vecs()
            .iter()
            .map(|c| lt.coordinates(c).expect("image of the group lies in the target group"))
            .collect();
        IntMatrix::from_columns(&cols, lt.rank()).expect("lengths")
    }

    /// `alpha^v: target^v -> source^v`, with both duals in the coordinates
    /// used by [`AffineMonoid::dual`].
    pub fn dual(&self) -> MonoidMorphism {
        MonoidMorphism {
            source: self.target.dual(),
            target: self.source.dual(),
            matrix: self.gp_matrix().transpose(),
        }
    }
}

/// `{(p, q) in P x Q : mu(p) = nu(q)}` inside `Z^(a + b)`.
///
/// Computed as the lattice points of `{(x, y) in cone(P) x cone(Q) : mu x = nu y}`
/// in `P^gp x Q^gp`; exact because both sources must be saturated.
pub fn fibre_product(mu: &MonoidMorphism, nu: &MonoidMorphism) -> Result<AffineMonoid> {
    if mu.target.ambient() != nu.target.ambient() {
        return Err(Error::Dimension("fibre product legs have different targets".into()));
    }
    mu.source.require_weakly_toric("fibre_product")?;
    nu.source.require_weakly_toric("fibre_product")?;
    let (p, bp) = mu.source.full_rank_form();
    let (q, bq) = nu.source.full_rank_form();
    let (rp, rq) = (p.ambient(), q.ambient());
    let a = mu.matrix.mul(&bp);
    let b = nu.matrix.mul(&bq);
    let mut ineqs = Vec::new();
    for f in p.cone().facets() {
        let mut v = f.clone();
        v.extend(arith::zero_vec(rq));
        ineqs.push(v);
    }
    for f in q.cone().facets() {
        let mut v = arith::zero_vec(rp);
        v.extend(f.iter().cloned());
        ineqs.push(v);
    }
    let mut eqs = Vec::new();
    for e in p.cone().equations() {
        let mut v = e.clone();
        v.extend(arith::zero_vec(rq));
        eqs.push(v);
    }
    for e in q.cone().equations() {
        let mut v = arith::zero_vec(rp);
        v.extend(e.iter().cloned());
        eqs.push(v);
    }
    for i in 0..a.rows() {
        let mut v = a.row(i);
        v.extend(arith::neg(&b.row(i)));
        eqs.push(v);
    }
    let cone = latcone::Cone::from_constraints(&ineqs, &eqs, rp + rq)?;
    let hb = latcone::hilbert_basis_standard(&cone);
    let gens = hb
        .into_iter()
        .map(|v| {
            let mut out = bp.apply(&v[..rp]);
            out.extend(bq.apply(&v[rp..]));
            out
        })
        .collect();
    AffineMonoid::new(mu.source.ambient() + nu.source.ambient(), gens)
}

/// Presentation of the pushout `Q ⊔_P R` of `alpha: P -> Q`, `beta: P -> R`.
pub fn pushout_fg(alpha: &MonoidMorphism, beta: &MonoidMorphism) -> Result<PresentedMonoid> {
    if alpha.source != beta.source {
        return Err(Error::Dimension("pushout legs have different sources".into()));
    }
    let q = &alpha.target;
    let r = &beta.target;
    let (kq, kr) = (q.generators().len(), r.generators().len());
    let m = kq + kr;
    let pad = |u: &IntVec, left: bool| -> IntVec {
        let mut v = arith::zero_vec(m);
        let off = if left { 0 } else { kq };
        for (i, x) in u.iter().enumerate() {
            v[off + i] = x.clone();
        }
        v
    };
    let mut rels = Vec::new();
    for (u, v) in q.relations() {
        rels.push((pad(&u, true), pad(&v, true)));
    }
    for (u, v) in r.relations() {
        rels.push((pad(&u, false), pad(&v, false)));
    }
    for (i, p) in alpha.source.generators().iter().enumerate() {
        let a = q
            .express(&alpha.apply(p))
            .ok_or_else(|| Error::NotMorphism(format!("alpha(p{i}) not in Q")))?;
        let b = r
            .express(&beta.apply(p))
            .ok_or_else(|| Error::NotMorphism(format!("beta(p{i}) not in R")))?;
        rels.push((pad(&a, true), pad(&b, false)));
    }
    PresentedMonoid::new(m, rels)
}

/// The pushout in toric monoids: the dual of `Q^v x_{P^v} R^v`.
pub fn pushout_toric(alpha: &MonoidMorphism, beta: &MonoidMorphism) -> Result<AffineMonoid> {
    if alpha.source != beta.source {
        return Err(Error::Dimension("pushout legs have different sources".into()));
    }
    for m in [&alpha.source, &alpha.target, &beta.target] {
        m.require_toric("pushout_toric")?;
    }
    let w = fibre_product(&alpha.dual(), &beta.dual())?;
    Ok(w.dual())
}

/// A lattice isomorphism between two toric monoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// Unimodular matrix from `P^gp` coordinates to `Q^gp` coordinates.
    pub matrix: IntMatrix,
    /// `map[i] = j` when the i-th Hilbert-basis element of `P` goes to the j-th of `Q`.
    pub hilbert_map: Vec<usize>,
}

/// Decides `P ≅ Q` for toric monoids: invariants first, then a search over
/// images of a fixed independent subset of the Hilbert basis.
pub fn is_isomorphic(p: &AffineMonoid, q: &AffineMonoid) -> Result<Option<Isomorphism>> {
    p.require_toric("is_isomorphic")?;
    q.require_toric("is_isomorphic")?;
    let (pp, _) = p.full_rank_form();
    let (qq, _) = q.full_rank_form();
    let r = pp.ambient();
    if r != qq.ambient() {
        return Ok(None);
    }
    let hp = latcone::hilbert_basis_standard(&pp.cone());
    let hq = latcone::hilbert_basis_standard(&qq.cone());
    if hp.len() != hq.len() || pp.face_census()? != qq.face_census()? {
        return Ok(None);
    }
    if r == 0 {
        return Ok(Some(Isomorphism { matrix: IntMatrix::zeros(0, 0), hilbert_map: Vec::new() }));
    }
    let mut basis_idx = Vec::new();
    let mut chosen: Vec<IntVec> = Vec::new();
    for (i, h) in hp.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(h.clone());
        if arith::rank_of(&trial, r) == trial.len() {
            chosen = trial;
            basis_idx.push(i);
        }
        if chosen.len() == r {
            break;
        }
    }
    let bm = IntMatrix::from_columns(&chosen, r).expect("lengths");
    let binv = bm.inverse_rat().expect("independent");
    let target: BTreeSet<&IntVec> = hq.iter().collect();
    let mut tuple = Vec::new();
    Ok(search_images(&hp, &hq, &target, &binv, r, &mut tuple))
}

fn search_images(
    hp: &[IntVec],
    hq: &[IntVec],
    target: &BTreeSet<&IntVec>,
    binv: &arith::RatMatrix,
    r: usize,
    tuple: &mut Vec<usize>,
) -> Option<Isomorphism> {
    if tuple.len() == r {
        let cols: Vec<IntVec> = tuple.iter().map(|&j| hq[j].clone()).collect();
        let c = IntMatrix::from_columns(&cols, r).expect("lengths");
        let t = c.to_rat().mul(binv).to_int()?;
        if t.det().abs() != Int::from(1) {
            return None;
        }
        let mut map = Vec::with_capacity(hp.len());
        for h in hp {
            let img = t.apply(h);
            if !target.contains(&img) {
                return None;
            }
            map.push(hq.iter().position(|x| *x == img).expect("present"));
        }
        return Some(Isomorphism { matrix: t, hilbert_map: map });
    }
    for j in 0..hq.len() {
        if tuple.contains(&j) {
            continue;
        }
        tuple.push(j);
        if let Some(found) = search_images(hp, hq, target, binv, r, tuple) {
            return Some(found);
        }
        tuple.pop();
    }
    None
}
