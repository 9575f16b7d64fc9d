//! Transversality of two interior germs `g: X -> Z`, `h: Y -> Z` meeting at
//! the vertices, and the local model of their fibre product.
//!
//! Throughout, `Q`, `R` and `S` are the monoids of `X`, `Y` and `Z`. The
//! dual fibre monoid is `W^v = {(l, u) in Q^v x R^v : l o alpha_g = u o alpha_h}`
//! and the fibre product is modelled on `X_P x R^m'` with `P = (W^v)^v`.

use num_traits::Zero;

use crate::arith::{self, IntVec, RatMatrix};
use crate::error::{Error, Result};
use crate::germ::MapGerm;
use crate::monoid::{fibre_product, is_isomorphic, AffineMonoid, MonoidFace, MonoidMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalityReport {
    pub b_transverse: bool,
    pub btilde_surjective: bool,
    pub monoid_condition: bool,
    pub c_transverse: bool,
    /// The same conditions at every pair of nearby points over a common
    /// target stratum, one pair of supports `(G, H)` at a time.
    pub c_transverse_near_vertex: bool,
    /// Supports `(G, H)`, as generator indices, where a condition fails.
    pub failing_faces: Option<(Vec<usize>, Vec<usize>)>,
    /// Sum of the Hilbert basis of `W^v`; it lies in the interior of
    /// `cone(Q^v x R^v)` exactly when the monoid condition holds.
    pub witness: IntVec,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreModel {
    pub monoid: AffineMonoid,
    pub dual_fibre: AffineMonoid,
    /// `dimension - rank P`, set only when the vertex pair lies in the fibre product.
    pub extra_real_dim: Option<usize>,
    pub vertex_in_fibre: bool,
    pub dimension: i64,
}

/// Per-codimension comparison of corner components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerFormula {
    pub codim: usize,
    pub left: usize,
    pub right: usize,
    /// The multisets of isomorphism classes agree.
    pub matches: bool,
    /// The multisets of component dimensions agree.
    pub dimensions_match: bool,
    /// Some component on the left has a non-free monoid.
    pub left_has_nonfree: bool,
}

fn check_pair(g: &MapGerm, h: &MapGerm) -> Result<()> {
    if g.target() != h.target() {
        return Err(Error::Dimension("germs have different targets".into()));
    }
    for (name, f) in [("g", g), ("h", h)] {
        if !f.preserves_vertex() {
            return Err(Error::Precondition(format!("{name} does not send the vertex to the vertex")));
        }
    }
    Ok(())
}

fn full_row_rank(m: &RatMatrix) -> bool {
    m.rank() == m.rows()
}

fn b_transverse_unchecked(g: &MapGerm, h: &MapGerm) -> bool {
    full_row_rank(&g.b_derivative().hstack(&h.b_derivative()))
}

/// `L_g + L_h` is surjective.
pub fn is_b_transverse(g: &MapGerm, h: &MapGerm) -> Result<bool> {
    check_pair(g, h)?;
    Ok(b_transverse_unchecked(g, h))
}

/// `Q^v x_{S^v} R^v` in `Z^(rank Q + rank R)`.
pub fn dual_fibre_monoid(g: &MapGerm, h: &MapGerm) -> Result<AffineMonoid> {
    check_pair(g, h)?;
    fibre_product(&g.exponent().dual(), &h.exponent().dual())
}

/// Sum of the Hilbert basis of `W^v` and whether it is interior to `Q^v x R^v`.
fn monoid_condition(g: &MapGerm, h: &MapGerm, w: &AffineMonoid) -> (IntVec, bool) {
    let ambient = product_dual(g, h);
    let sum = w.hilbert_basis().iter().fold(arith::zero_vec(w.ambient()), |acc, v| arith::add(&acc, v));
    let interior = ambient.cone().relative_interior_contains(&sum);
    (sum, interior)
}

fn product_dual(g: &MapGerm, h: &MapGerm) -> AffineMonoid {
    g.source().monoid().dual().product(&h.source().monoid().dual())
}

pub fn is_c_transverse(g: &MapGerm, h: &MapGerm) -> Result<TransversalityReport> {
    let w = dual_fibre_monoid(g, h)?;
    let b_transverse = b_transverse_unchecked(g, h);
    let btilde_surjective = full_row_rank(&g.monoid_block().hstack(&h.monoid_block()));
    let (witness, monoid_ok) = monoid_condition(g, h, &w);
    let mut failures = Vec::new();
    if !b_transverse {
        failures.push("b-derivatives do not jointly span the target".into());
    }
    if !btilde_surjective {
        failures.push("monoid blocks do not jointly span the target b-normal space".into());
    }
    if !monoid_ok {
        failures.push(format!("dual fibre monoid lies in a proper face; Hilbert-basis sum {}", arith::fmt_vec(&witness)));
    }
    let c_transverse = b_transverse && btilde_surjective && monoid_ok;
    let failing_faces = if c_transverse { first_failing_supports(g, h)? } else { None };
    if let Some((a, b)) = &failing_faces {
        failures.push(format!("conditions fail at nearby points with supports {a:?} and {b:?}"));
    }
    Ok(TransversalityReport {
        b_transverse,
        btilde_surjective,
        monoid_condition: monoid_ok,
        c_transverse,
        c_transverse_near_vertex: c_transverse && failing_faces.is_none(),
        failing_faces,
        witness,
        failures,
    })
}

/// `F^ ⊂ P^v` for a full-rank toric `P`, in dual ambient coordinates.
fn vanishing_dual(p: &AffineMonoid, face: &MonoidFace) -> AffineMonoid {
    let gens = p
        .dual()
        .generators()
        .iter()
        .filter(|l| face.generators.iter().all(|&i| arith::dot(l, &p.generators()[i]).is_zero()))
        .cloned()
        .collect();
    AffineMonoid::new(p.ambient(), gens).expect("dual generators have the ambient length")
}

/// The normal conditions at points with supports `G` and `H`: the corner
/// fibres `G^`, `H^` must jointly span `T^` and their fibre product over
/// `S^v` must meet the interior of `G^ x H^`.
fn normal_conditions_hold(g: &MapGerm, h: &MapGerm, gf: &MonoidFace, hf: &MonoidFace, t: &MonoidFace) -> Result<bool> {
    let s = g.target().monoid();
    let sd = s.dual();
    let (ga, ha) = (vanishing_dual(g.source().monoid(), gf), vanishing_dual(h.source().monoid(), hf));
    let ta = vanishing_dual(s, t);
    let mu = MonoidMorphism::new(ga.clone(), sd.clone(), g.exponent().matrix().transpose())?;
    let nu = MonoidMorphism::new(ha.clone(), sd, h.exponent().matrix().transpose())?;
    let mut images: Vec<IntVec> = ga.generators().iter().map(|l| mu.apply(l)).collect();
    images.extend(ha.generators().iter().map(|l| nu.apply(l)));
    if arith::rank_of(&images, s.ambient()) != ta.rank() {
        return Ok(false);
    }
    let w = fibre_product(&mu, &nu)?;
    let sum = w.hilbert_basis().iter().fold(arith::zero_vec(w.ambient()), |acc, v| arith::add(&acc, v));
    Ok(ga.product(&ha).cone().relative_interior_contains(&sum))
}

/// Pairs of supports over a common target face whose strata actually meet
/// near the vertex, and where the normal conditions fail.
fn first_failing_supports(g: &MapGerm, h: &MapGerm) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let gfaces = g.source().monoid().faces()?;
    let mut hside = Vec::new();
    for hf in h.source().monoid().faces()? {
        let t = h.corner_image_face(&hf)?;
        let hr = h.restrict(&hf)?;
        hside.push((hf, t, hr));
    }
    for gf in &gfaces {
        let t = g.corner_image_face(gf)?;
        let gr = g.restrict(gf)?;
        for (hf, ht, hr) in &hside {
            if ht.generators != t.generators {
                continue;
            }
            let w = fibre_product(&gr.exponent().dual(), &hr.exponent().dual())?;
            if !monoid_condition(&gr, hr, &w).1 {
                // the strata do not meet near the vertex
                continue;
            }
            if !normal_conditions_hold(g, h, gf, hf, &t)? {
                return Ok(Some((gf.generators.clone(), hf.generators.clone())));
            }
        }
    }
    Ok(None)
}

/// A cheap certificate: b-transverse with one b-normal leg.
pub fn c_transverse_sufficiency(g: &MapGerm, h: &MapGerm) -> Result<bool> {
    check_pair(g, h)?;
    Ok(b_transverse_unchecked(g, h) && (g.is_b_normal() || h.is_b_normal()))
}

pub fn fibre_local_model(g: &MapGerm, h: &MapGerm) -> Result<FibreModel> {
    let w = dual_fibre_monoid(g, h)?;
    if !b_transverse_unchecked(g, h) {
        return Err(Error::Precondition("fibre_local_model requires b-transverse germs".into()));
    }
    let (_, vertex_in_fibre) = monoid_condition(g, h, &w);
    let p = w.dual();
    let dimension = g.source().dimension() as i64 + h.source().dimension() as i64 - g.target().dimension() as i64;
    let extra_real_dim = if vertex_in_fibre {
        let m = dimension - p.rank() as i64;
        if m < 0 {
            return Err(Error::Precondition(format!(
                "fibre monoid rank {} exceeds the expected dimension {dimension}",
                p.rank()
            )));
        }
        Some(m as usize)
    } else {
        None
    };
    Ok(FibreModel { monoid: p, dual_fibre: w, extra_real_dim, vertex_in_fibre, dimension })
}

/// A corner component: its monoid and total dimension.
type Component = (AffineMonoid, usize);

fn multisets_match(left: &[Component], right: &[Component]) -> Result<bool> {
    if left.len() != right.len() {
        return Ok(false);
    }
    let mut used = vec![false; right.len()];
    for (a, da) in left {
        let mut found = false;
        for (j, (b, db)) in right.iter().enumerate() {
            if !used[j] && da == db && is_isomorphic(a, b)?.is_some() {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Codimension-`i` corners of the fibre product two ways: as faces of the
/// fibre monoid, and assembled from pairs of source corners over a common
/// target corner with `i = codim G + codim H - codim T`.
pub fn corner_formula_check(g: &MapGerm, h: &MapGerm, i: usize) -> Result<CornerFormula> {
    let report = is_c_transverse(g, h)?;
    if !report.c_transverse_near_vertex {
        return Err(Error::Precondition("corner_formula_check requires germs c-transverse near the vertex".into()));
    }
    let model = fibre_local_model(g, h)?;
    let m = model.extra_real_dim.expect("c-transverse pairs contain the vertex");
    let left: Vec<Component> = model
        .monoid
        .faces()?
        .into_iter()
        .filter(|f| f.codim == i)
        .map(|f| {
            let mon = model.monoid.face_monoid(&f);
            let d = mon.rank() + m;
            (mon, d)
        })
        .collect();

    let mut right: Vec<Component> = Vec::new();
    let gfaces = g.source().monoid().faces()?;
    let hfaces = h.source().monoid().faces()?;
    for gf in &gfaces {
        let tg = g.corner_image_face(gf)?;
        for hf in &hfaces {
            let th = h.corner_image_face(hf)?;
            if tg.generators != th.generators || gf.codim + hf.codim != i + tg.codim {
                continue;
            }
            let (gr, hr) = (g.restrict(gf)?, h.restrict(hf)?);
            let sub = fibre_local_model(&gr, &hr)?;
            if sub.vertex_in_fibre {
                let d = sub.dimension as usize;
                right.push((sub.monoid, d));
            }
        }
    }
    let matches = multisets_match(&left, &right)?;
    let dims = |v: &[Component]| {
        let mut d: Vec<usize> = v.iter().map(|c| c.1).collect();
        d.sort_unstable();
        d
    };
    Ok(CornerFormula {
        codim: i,
        left: left.len(),
        right: right.len(),
        matches,
        dimensions_match: dims(&left) == dims(&right),
        left_has_nonfree: left.iter().any(|(m, _)| !m.is_free()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{IntMatrix, Rat};
    use crate::model::LocalModel;

    fn free(k: usize, m: usize) -> LocalModel {
        LocalModel::new(AffineMonoid::free(k), m).unwrap()
    }

    fn pyramid() -> AffineMonoid {
        AffineMonoid::from_i64(3, &[&[1, 0, 0], &[0, 1, 1], &[0, 1, 0], &[1, 0, 1]]).unwrap()
    }

    fn product_leg() -> MapGerm {
        MapGerm::monomial(free(2, 0), free(1, 0), IntMatrix::from_i64(&[&[1], &[1]])).unwrap()
    }

    #[test]
    fn product_legs_give_the_pyramid() {
        let g = product_leg();
        let w = dual_fibre_monoid(&g, &g).unwrap();
        assert_eq!((w.hilbert_basis().len(), w.rank()), (4, 3));
        let model = fibre_local_model(&g, &g).unwrap();
        assert!(model.vertex_in_fibre);
        assert_eq!((model.dimension, model.extra_real_dim), (3, Some(0)));
        assert!(is_isomorphic(&model.monoid, &pyramid()).unwrap().is_some());
        let counts: Vec<_> = (0..4).map(|i| corner_formula_check(&g, &g, i).unwrap()).collect();
        assert!(counts.iter().all(|c| c.matches));
        assert_eq!(counts.iter().map(|c| c.left).collect::<Vec<_>>(), vec![1, 4, 4, 1]);
    }

    #[test]
    fn identity_legs() {
        let m = LocalModel::new(pyramid(), 1).unwrap();
        let id = MapGerm::identity(&m).unwrap();
        let model = fibre_local_model(&id, &id).unwrap();
        assert!(is_isomorphic(&model.monoid, &pyramid()).unwrap().is_some());
        assert_eq!((model.dimension, model.extra_real_dim), (4, Some(1)));
        assert!(c_transverse_sufficiency(&id, &id).unwrap());
        for i in 0..4 {
            let c = corner_formula_check(&id, &id, i).unwrap();
            assert!(c.matches);
        }
    }

    #[test]
    fn non_surjective_monoid_blocks() {
        // g = (x1, x1 e^x2), h = (y, y)
        let g = MapGerm::new(
            free(1, 1),
            free(2, 0),
            IntMatrix::from_i64(&[&[1, 1]]),
            RatMatrix::from_rows(vec![vec![Rat::from_integer(0.into())], vec![Rat::from_integer(1.into())]], 1)
                .unwrap(),
            RatMatrix::zeros(0, 1),
        )
        .unwrap();
        let h = MapGerm::monomial(free(1, 0), free(2, 0), IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert!(is_b_transverse(&g, &h).unwrap());
        let r = is_c_transverse(&g, &h).unwrap();
        assert!(!r.btilde_surjective && !r.c_transverse);
        assert!(!c_transverse_sufficiency(&g, &h).unwrap());
    }

    #[test]
    fn empty_dual_fibre() {
        // g = (x, x), h = (y, y^2)
        let g = MapGerm::monomial(free(1, 0), free(2, 0), IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        let h = MapGerm::monomial(free(1, 0), free(2, 0), IntMatrix::from_i64(&[&[1, 2]])).unwrap();
        assert!(is_b_transverse(&g, &h).unwrap());
        assert!(dual_fibre_monoid(&g, &h).unwrap().is_zero_monoid());
        let r = is_c_transverse(&g, &h).unwrap();
        assert!(!r.monoid_condition && !r.c_transverse);
        assert!(!fibre_local_model(&g, &h).unwrap().vertex_in_fibre);
        assert!(corner_formula_check(&g, &h, 0).is_err());
    }

    #[test]
    fn germs_into_the_pyramid() {
        // alpha sends the generator images in the order p1, p3, p2 - p3 of Z^3
        let z = LocalModel::new(pyramid(), 0).unwrap();
        let g = MapGerm::monomial(free(2, 0), z.clone(), IntMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        let h = MapGerm::monomial(free(2, 0), z, IntMatrix::from_i64(&[&[1, 2, -1], &[2, 1, -1]])).unwrap();
        assert!(is_b_transverse(&g, &h).unwrap());
        let r = is_c_transverse(&g, &h).unwrap();
        assert!(!r.monoid_condition && !r.c_transverse);
    }

    #[test]
    fn deeper_strata_can_fail() {
        // g = (x, x) and h = (y1^2, y1 y3): the vertex pair is fine, but
        // points with y1 = 0 also map to the target vertex
        let g = MapGerm::monomial(free(1, 0), free(2, 0), IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        let h =
            MapGerm::monomial(free(3, 0), free(2, 0), IntMatrix::from_i64(&[&[2, 1], &[0, 0], &[0, 1]])).unwrap();
        let r = is_c_transverse(&g, &h).unwrap();
        assert!(r.c_transverse);
        assert!(!r.c_transverse_near_vertex);
        assert_eq!(r.failing_faces, Some((vec![], vec![1, 2])));
        assert!(corner_formula_check(&g, &h, 0).is_err());
        let p = product_leg();
        assert!(is_c_transverse(&p, &p).unwrap().c_transverse_near_vertex);
    }

    #[test]
    fn squared_legs_shift_a_corner_class() {
        // g = x2 x3^2 and h = y1^2 y2: the corner x3 = y1 = 0 carries the
        // extra function sqrt(x2 y2), so its monoid is not free
        let g = MapGerm::monomial(free(3, 0), free(1, 0), IntMatrix::from_i64(&[&[0], &[1], &[2]])).unwrap();
        let h = MapGerm::monomial(free(2, 0), free(1, 0), IntMatrix::from_i64(&[&[2], &[1]])).unwrap();
        assert!(c_transverse_sufficiency(&g, &h).unwrap());
        assert!(is_c_transverse(&g, &h).unwrap().c_transverse_near_vertex);
        let c = corner_formula_check(&g, &h, 1).unwrap();
        assert_eq!((c.left, c.right), (5, 5));
        assert!(c.dimensions_match && c.left_has_nonfree && !c.matches);
    }

    #[test]
    fn mismatched_targets() {
        let g = product_leg();
        let h = MapGerm::identity(&free(1, 0)).unwrap();
        assert!(is_b_transverse(&g, &h).is_ok());
        let k = MapGerm::identity(&free(2, 0)).unwrap();
        assert!(is_b_transverse(&g, &k).is_err());
    }
}
