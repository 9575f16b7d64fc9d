//! Strategies, brute-force oracles and property checks shared by the
//! property and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gcorners::arith::{self, dot, ivec, Int, IntMatrix, IntVec, Rat, RatMatrix};
use gcorners::germ::MapGerm;
use gcorners::latcone::{self, Cone};
use gcorners::model::LocalModel;
use gcorners::monoid::{is_isomorphic, pushout_toric, AffineMonoid, MonoidMorphism};
use gcorners::trans;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

// ---------------------------------------------------------------------------
// strategies

pub fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        vec(vec(-bound..=bound, c), r).prop_map(move |rows| {
            IntMatrix::from_rows(rows.iter().map(|x| ivec(x)).collect(), c).unwrap()
        })
    })
}

pub type UnimodularOps = Vec<(usize, usize, i64, bool)>;

pub fn unimodular_ops() -> impl Strategy<Value = UnimodularOps> {
    vec((0usize..4, 0usize..4, -2i64..=2, any::<bool>()), 0..6)
}

/// Product of elementary row operations on `Z^n`.
pub fn unimodular(n: usize, ops: &UnimodularOps) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 0 {
        return u;
    }
    for &(i, j, k, flip) in ops {
        let (i, j) = (i % n, j % n);
        let mut rows = u.row_vecs();
        if i != j {
            let add = arith::scale(&rows[j], &Int::from(k));
            rows[i] = arith::add(&rows[i], &add);
        }
        if flip {
            rows[j] = arith::neg(&rows[j]);
        }
        u = IntMatrix::from_rows(rows, n).unwrap();
    }
    u
}

pub fn transform(p: &AffineMonoid, u: &IntMatrix) -> AffineMonoid {
    AffineMonoid::new(p.ambient(), p.generators().iter().map(|g| u.apply(g)).collect()).unwrap()
}

fn vectors(n: usize, lo: i64, hi: i64, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<IntVec>> {
    vec(vec(lo..=hi, n), count).prop_map(|g| g.iter().map(|v| ivec(v)).collect())
}

/// Arbitrary finitely generated submonoids of `Z^n`.
pub fn monoid_strategy(max_n: usize) -> impl Strategy<Value = AffineMonoid> {
    (1..=max_n).prop_flat_map(|n| vectors(n, -2, 2, 1..=4).prop_map(move |g| AffineMonoid::new(n, g).unwrap()))
}

/// Toric monoids `cone ∩ Z^n` of pointed cones, in sheared coordinates.
pub fn toric_strategy(max_n: usize) -> impl Strategy<Value = AffineMonoid> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), vectors(n, 0, 2, 1..=4), unimodular_ops()))
        .prop_map(|(n, gens, ops)| {
            let gens: Vec<IntVec> = gens.into_iter().filter(|g| !arith::is_zero(g)).collect();
            let cone = Cone::from_generators(&gens, n).unwrap();
            let p = AffineMonoid::new(n, latcone::hilbert_basis_standard(&cone)).unwrap();
            transform(&p, &unimodular(n, &ops))
        })
}

pub fn cone_strategy(max_n: usize) -> impl Strategy<Value = Cone> {
    (1..=max_n).prop_flat_map(|n| vectors(n, -2, 2, 1..=5).prop_map(move |g| Cone::from_generators(&g, n).unwrap()))
}

pub fn pointed_cone_strategy(max_n: usize) -> impl Strategy<Value = Cone> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), vectors(n, 0, 2, 1..=5), unimodular_ops()))
        .prop_map(|(n, g, ops)| {
            let u = unimodular(n, &ops);
            let g: Vec<IntVec> = g.iter().map(|v| u.apply(v)).collect();
            Cone::from_generators(&g, n).unwrap()
        })
}

pub fn pyramid() -> AffineMonoid {
    AffineMonoid::from_i64(3, &[&[1, 0, 0], &[0, 1, 1], &[0, 1, 0], &[1, 0, 1]]).unwrap()
}

/// Sources for germs: `N`, `N^2`, `N^3` or the 2-dimensional cone
/// spanned by `(1, 0)` and `(a, b)`.
fn source_monoid(kind: u8, a: i64, b: i64) -> AffineMonoid {
    match kind % 4 {
        0 => AffineMonoid::free(1),
        1 => AffineMonoid::free(2),
        2 => AffineMonoid::free(3),
        _ => {
            let cone = Cone::from_generators(&[ivec(&[1, 0]), ivec(&[a, b])], 2).unwrap();
            AffineMonoid::new(2, latcone::hilbert_basis_standard(&cone)).unwrap()
        }
    }
}

/// Raw data for a random germ into a fixed target.
#[derive(Clone, Debug)]
pub struct GermData {
    kind: u8,
    a: i64,
    b: i64,
    real_dim: usize,
    coeffs: Vec<Vec<i64>>,
    mixed: Vec<i64>,
    stratum: Vec<i64>,
}

pub fn germ_data(max_kind: u8) -> impl Strategy<Value = GermData> {
    (
        0..max_kind,
        -2i64..=2,
        1i64..=3,
        0usize..=2,
        vec(vec(0i64..=2, 8), 4),
        vec(-2i64..=2, 12),
        vec(-2i64..=2, 8),
    )
        .prop_map(|(kind, a, b, real_dim, coeffs, mixed, stratum)| GermData {
            kind,
            a,
            b,
            real_dim,
            coeffs,
            mixed,
            stratum,
        })
}

fn rat_matrix(rows: usize, cols: usize, data: &[i64]) -> RatMatrix {
    RatMatrix::from_rows(
        (0..rows).map(|i| (0..cols).map(|j| Rat::from_integer(data[(i * cols + j) % data.len()].into())).collect()).collect(),
        cols,
    )
    .unwrap()
}

/// Builds a germ into `target`, whose monoid is free or the pyramid.
pub fn build_germ(data: &GermData, target: &LocalModel) -> MapGerm {
    let q = source_monoid(data.kind, data.a, data.b);
    let n = q.ambient();
    let image = |i: usize| -> IntVec {
        let mut v = arith::zero_vec(n);
        for (j, g) in q.generators().iter().enumerate() {
            v = arith::add(&v, &arith::scale(g, &Int::from(data.coeffs[i][j])));
        }
        if arith::is_zero(&v) {
            q.generators()[i % q.generators().len()].clone()
        } else {
            v
        }
    };
    let s = target.monoid();
    let columns: Vec<IntVec> = if *s == pyramid() {
        // p1 + p2 = p3 + p4 with p1 = e1, p3 = e2, p2 - p3 = e3
        let (a1, a2, mut a3) = (image(0), image(1), image(2));
        let a4 = arith::sub(&arith::add(&a1, &a2), &a3);
        if arith::is_zero(&a4) || !q.membership(&a4) {
            a3 = a1.clone();
        }
        vec![a1, a3.clone(), arith::sub(&a2, &a3)]
    } else {
        (0..s.ambient()).map(image).collect()
    };
    let exponent = IntMatrix::from_columns(&columns, n).unwrap();
    let m = data.real_dim;
    let source = LocalModel::new(q, m).unwrap();
    let mixed = rat_matrix(s.ambient(), m, &data.mixed);
    let stratum = rat_matrix(target.real_dim(), m, &data.stratum);
    MapGerm::new(source, target.clone(), exponent, mixed, stratum).unwrap()
}

pub fn target_model(kind: u8, q: usize) -> LocalModel {
    let s = match kind % 3 {
        0 => AffineMonoid::free(1),
        1 => AffineMonoid::free(2),
        _ => pyramid(),
    };
    LocalModel::new(s, q).unwrap()
}

pub fn germ_strategy() -> impl Strategy<Value = MapGerm> {
    (0u8..3, 0usize..=1, germ_data(4)).prop_map(|(t, q, d)| build_germ(&d, &target_model(t, q)))
}

/// Pairs of germs into a common target, sources of rank at most 2 when the
/// target is the pyramid and at most 3 otherwise.
pub fn pair_strategy() -> impl Strategy<Value = (MapGerm, MapGerm)> {
    (0u8..3, 0usize..=1, germ_data(4), germ_data(4)).prop_map(|(t, q, mut d1, mut d2)| {
        let target = target_model(t, q);
        if t % 3 == 2 {
            // keep the fibre computations small over the pyramid
            for d in [&mut d1, &mut d2] {
                if d.kind % 4 == 2 {
                    d.kind = 1;
                }
            }
        }
        (build_germ(&d1, &target), build_germ(&d2, &target))
    })
}

/// Re-coordinatizes the source by `u` and the target by `v`.
pub fn recoordinatize(g: &MapGerm, u: &IntMatrix, v: &IntMatrix) -> MapGerm {
    let q = transform(g.source().monoid(), u);
    let s = transform(g.target().monoid(), v);
    let vinv = v.inverse_unimodular().unwrap();
    let exponent = u.mul(g.exponent().matrix()).mul(&vinv);
    let mixed = vinv.transpose().to_rat().mul(g.mixed_block());
    MapGerm::new(
        LocalModel::new(q, g.source().real_dim()).unwrap(),
        LocalModel::new(s, g.target().real_dim()).unwrap(),
        exponent,
        mixed,
        g.stratum_block().clone(),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// oracles

/// All points reachable as natural combinations of `gens` with
/// `w`-degree at most `bound`; every generator must have positive degree.
pub fn reachable(gens: &[IntVec], w: &[Int], bound: &Int, n: usize) -> HashSet<IntVec> {
    let mut seen: HashSet<IntVec> = HashSet::new();
    let mut frontier = vec![arith::zero_vec(n)];
    seen.insert(arith::zero_vec(n));
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = arith::add(&x, g);
            if &dot(w, &y) <= bound && seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Lattice points of the box `[-r, r]^n`.
pub fn box_points(n: usize, r: i64) -> Vec<IntVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for x in -r..=r {
                let mut q: IntVec = p.clone();
                q.push(Int::from(x));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// `gcd` of the `r x r` minors, `r` the rank: the product of the
/// invariant factors.
pub fn determinantal_gcd(m: &IntMatrix) -> Int {
    let r = m.rank();
    if r == 0 {
        return Int::one();
    }
    let mut g = Int::zero();
    for rows in subsets(m.rows(), r) {
        for cols in subsets(m.cols(), r) {
            let sub = IntMatrix::from_rows(
                rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect(),
                r,
            )
            .unwrap();
            g = g.gcd(&sub.det());
        }
    }
    g
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

// ---------------------------------------------------------------------------
// property checks

pub fn check_hnf(m: &IntMatrix) -> Check {
    let (h, u) = latcone::hermite_normal_form(m);
    prop_assert_eq!(u.det().abs(), Int::one());
    prop_assert_eq!(m.mul(&u), h);
    Ok(())
}

pub fn check_snf(m: &IntMatrix) -> Check {
    let (d, u, v) = latcone::smith_normal_form(m);
    prop_assert_eq!(u.mul(m).mul(&v), d.clone());
    prop_assert_eq!(u.det().abs(), Int::one());
    prop_assert_eq!(v.det().abs(), Int::one());
    let diag = latcone::elementary_divisors(m);
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j {
                prop_assert!(d[(i, j)].is_zero());
            }
        }
    }
    for w in diag.windows(2) {
        if !w[0].is_zero() {
            prop_assert!((&w[1] % &w[0]).is_zero());
        } else {
            prop_assert!(w[1].is_zero());
        }
    }
    prop_assert_eq!(latcone::cokernel_torsion_free(m), determinantal_gcd(m).is_one());
    Ok(())
}

pub fn check_double_dual_cone(c: &Cone) -> Check {
    let dd = c.dual().dual();
    for g in c.generators() {
        prop_assert!(dd.contains(&g));
    }
    for g in dd.generators() {
        prop_assert!(c.contains(&g));
    }
    prop_assert_eq!(&dd, c);
    Ok(())
}

pub fn check_hilbert_minimal(c: &Cone) -> Check {
    let n = c.dim();
    let hb = latcone::hilbert_basis_standard(c);
    let w = c.grading();
    for (i, h) in hb.iter().enumerate() {
        prop_assert!(c.contains(h));
        let others: Vec<IntVec> = hb.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        let deg = dot(&w, h);
        prop_assert!(!reachable(&others, &w, &deg, n).contains(h), "{:?} is redundant", h);
    }
    // every lattice point of a small box inside the cone is generated
    let pts: Vec<IntVec> = box_points(n, 2).into_iter().filter(|p| c.contains(p)).collect();
    let bound = pts.iter().map(|p| dot(&w, p)).max().unwrap_or_else(Int::zero);
    let gen = reachable(&hb, &w, &bound, n);
    for p in pts {
        prop_assert!(gen.contains(&p), "{:?} is not generated", p);
    }
    Ok(())
}

pub fn check_diamond(c: &Cone) -> Check {
    let faces = c.faces();
    for g in faces.iter().filter(|f| f.codim == 2) {
        let above = faces
            .iter()
            .filter(|f| f.codim == 1 && f.inequalities.iter().all(|i| g.inequalities.contains(i)))
            .count();
        prop_assert_eq!(above, 2);
    }
    Ok(())
}

/// Faces of a pointed cone by brute force over facet subsets.
pub fn check_face_count(c: &Cone) -> Check {
    let rays = c.rays();
    let facets = c.facets();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mask in 0u32..(1 << facets.len()) {
        let tight: Vec<usize> = (0..rays.len())
            .filter(|&r| (0..facets.len()).all(|f| mask & (1 << f) == 0 || dot(&facets[f], &rays[r]).is_zero()))
            .collect();
        sets.insert(tight);
    }
    prop_assert_eq!(c.faces().len(), sets.len());
    Ok(())
}

pub fn check_double_dual_iff_toric(p: &AffineMonoid) -> Check {
    prop_assert_eq!(p.double_dual_map().iso, p.classify().toric);
    Ok(())
}

pub fn check_triple_dual(p: &AffineMonoid) -> Check {
    let d = p.dual();
    let ddd = d.dual().dual();
    prop_assert!(is_isomorphic(&d, &ddd).unwrap().is_some());
    Ok(())
}

pub fn check_face_ranks(p: &AffineMonoid) -> Check {
    let faces = p.faces().unwrap();
    let r = p.rank();
    let dd = p.double_dual_map();
    let (q, _) = p.full_rank_form();
    for f in &faces {
        prop_assert_eq!(f.rank + f.codim, r);
        prop_assert_eq!(p.face_monoid(f).rank(), f.rank);
        let (d, df) = p.face_dual(f).unwrap();
        prop_assert_eq!(d.face_monoid(&df).rank(), f.codim);
        // the face dual of the face dual is the image of F under eta
        let (ddm, ddf) = d.face_dual(&df).unwrap();
        prop_assert_eq!(ddm.face_monoid(&ddf).rank(), f.rank);
        let image = ddm.face_monoid(&ddf).cone();
        for &i in &f.generators {
            prop_assert!(image.contains(&dd.eta.apply(&q.generators()[i])));
        }
    }
    Ok(())
}

pub fn check_spec(p: &AffineMonoid) -> Check {
    let faces = p.faces().unwrap();
    let spec = p.spec().unwrap();
    prop_assert_eq!(faces.len(), spec.len());
    let sets: BTreeSet<Vec<usize>> = faces.iter().map(|f| f.generators.clone()).collect();
    for a in &spec {
        for b in &spec {
            // the complement of a union of primes is an intersection of faces
            let union: BTreeSet<usize> = a.generators.iter().chain(&b.generators).cloned().collect();
            let rest: Vec<usize> = (0..p.generators().len()).filter(|i| !union.contains(i)).collect();
            prop_assert!(sets.contains(&rest));
        }
    }
    Ok(())
}

pub fn check_classification_invariance(p: &AffineMonoid, ops: &UnimodularOps, seed: usize) -> Check {
    let c = p.classify();
    let q = transform(p, &unimodular(p.ambient(), ops));
    prop_assert_eq!(q.classify(), c);
    let mut gens = p.generators().to_vec();
    let len = gens.len();
    gens.rotate_left(seed % len.max(1));
    gens.reverse();
    let shuffled = AffineMonoid::new(p.ambient(), gens).unwrap();
    prop_assert_eq!(shuffled.classify(), c);
    Ok(())
}

pub fn check_pushout_swap(p: &AffineMonoid, q: &AffineMonoid, coeffs: &[Vec<i64>]) -> Check {
    let s = AffineMonoid::free(2);
    let leg = |t: &AffineMonoid, offset: usize| {
        let cols: Vec<IntVec> = (0..2)
            .map(|i| {
                t.generators().iter().enumerate().fold(arith::zero_vec(t.ambient()), |acc, (j, g)| {
                    arith::add(&acc, &arith::scale(g, &Int::from(coeffs[i + offset][j % coeffs[0].len()])))
                })
            })
            .collect();
        MonoidMorphism::new(s.clone(), t.clone(), IntMatrix::from_columns(&cols, t.ambient()).unwrap()).unwrap()
    };
    let (a, b) = (leg(p, 0), leg(q, 2));
    let ab = pushout_toric(&a, &b).unwrap();
    let ba = pushout_toric(&b, &a).unwrap();
    prop_assert!(is_isomorphic(&ab, &ba).unwrap().is_some());
    Ok(())
}

pub fn check_corner_counts(p: &AffineMonoid) -> Check {
    let m = LocalModel::new(p.clone(), 0).unwrap();
    let faces = m.faces();
    let r = p.rank();
    let total: usize = (0..=r).map(|k| m.corners(k).unwrap().len()).sum();
    prop_assert_eq!(total, faces.len());
    prop_assert_eq!(m.iterated_boundary(1).map(|f| f.len()).unwrap_or(0), m.corners(1).map(|c| c.len()).unwrap_or(0));
    if r >= 2 {
        prop_assert_eq!(m.iterated_boundary(2).unwrap().len(), 2 * m.corners(2).unwrap().len());
    }
    for k in 0..=r {
        let flags = m.iterated_boundary(k).unwrap();
        let corners = m.corners(k).unwrap();
        prop_assert!(flags.len() >= corners.len());
        let ends: BTreeSet<usize> = flags.iter().map(|f| f.last()).collect();
        let codim_k: BTreeSet<usize> = (0..faces.len()).filter(|&i| faces[i].codim == k).collect();
        prop_assert_eq!(ends, codim_k);
    }
    Ok(())
}

pub fn check_vertex_depth(p: &AffineMonoid) -> Check {
    let m = LocalModel::new(p.clone(), 0).unwrap();
    let units = p.units();
    let values: Vec<Rat> = p
        .generators()
        .iter()
        .map(|g| if units.contains(g) { Rat::one() } else { Rat::zero() })
        .collect();
    let x = m.point(values, vec![]).unwrap();
    let (face, depth) = x.support_and_depth();
    prop_assert_eq!(depth, p.rank() - units.rank());
    let faces = m.faces();
    prop_assert_eq!(face, faces.last().unwrap());
    if p.is_sharp() {
        prop_assert_eq!(depth, p.rank());
    }
    Ok(())
}

pub fn check_corners_invariance(p: &AffineMonoid, ops: &UnimodularOps, extra: usize) -> Check {
    let base = LocalModel::new(p.clone(), 0).unwrap().is_manifold_with_corners();
    let moved = LocalModel::new(transform(p, &unimodular(p.ambient(), ops)), extra).unwrap();
    prop_assert_eq!(moved.is_manifold_with_corners(), base);
    let with_line = LocalModel::new(p.product(&AffineMonoid::lattice(1)), 0).unwrap();
    prop_assert_eq!(with_line.is_manifold_with_corners(), base);
    Ok(())
}

pub fn check_germ_implications(g: &MapGerm) -> Check {
    let c = g.classify();
    if c.simple_local {
        prop_assert!(c.b_normal);
    }
    if c.etale_at_vertex {
        prop_assert!(c.simple_at_vertex && c.b_submersion && c.immersion_at_vertex);
    }
    prop_assert_eq!(c.b_fibration, c.b_normal && c.b_submersion);
    // image faces are monotone under inclusion
    let faces = g.source().monoid().faces().unwrap();
    for a in &faces {
        for b in &faces {
            if a.generators.iter().all(|i| b.generators.contains(i)) {
                let (ia, ib) = (g.corner_image_face(a).unwrap(), g.corner_image_face(b).unwrap());
                prop_assert!(ia.generators.iter().all(|i| ib.generators.contains(i)));
            }
        }
    }
    Ok(())
}

pub fn check_germ_invariance(g: &MapGerm, ops_q: &UnimodularOps, ops_s: &UnimodularOps) -> Check {
    let u = unimodular(g.source().monoid().ambient(), ops_q);
    let v = unimodular(g.target().monoid().ambient(), ops_s);
    let h = recoordinatize(g, &u, &v);
    let (a, b) = (g.classify(), h.classify());
    prop_assert_eq!(
        (a.simple_at_vertex, a.simple_local, a.b_normal, a.b_submersion, a.immersion_at_vertex, a.etale_at_vertex),
        (b.simple_at_vertex, b.simple_local, b.b_normal, b.b_submersion, b.immersion_at_vertex, b.etale_at_vertex)
    );
    Ok(())
}

/// With `alpha` the identity on `N^k` the verdicts are the classical ones.
pub fn check_identity_exponent(k: usize, m: usize, q: usize, mixed: &[i64], stratum: &[i64]) -> Check {
    let source = LocalModel::new(AffineMonoid::free(k), m).unwrap();
    let target = LocalModel::new(AffineMonoid::free(k), q).unwrap();
    let c = rat_matrix(q, m, stratum);
    let g = MapGerm::new(source, target, IntMatrix::identity(k), rat_matrix(k, m, mixed), c.clone()).unwrap();
    let cls = g.classify();
    prop_assert!(cls.simple_at_vertex && cls.simple_local && cls.b_normal);
    prop_assert_eq!(cls.b_submersion, c.rank() == q);
    prop_assert_eq!(cls.immersion_at_vertex, c.rank() == m);
    prop_assert_eq!(cls.etale_at_vertex, q == m && c.rank() == m);
    Ok(())
}

pub fn check_sufficiency(g: &MapGerm, h: &MapGerm) -> Check {
    if trans::c_transverse_sufficiency(g, h).unwrap() {
        let r = trans::is_c_transverse(g, h).unwrap();
        prop_assert!(r.c_transverse, "{:?}", r.failures);
        prop_assert!(r.c_transverse_near_vertex, "{:?}", r.failures);
    }
    Ok(())
}

fn swap_halves(v: &IntVec, a: usize) -> IntVec {
    let mut out = v[a..].to_vec();
    out.extend_from_slice(&v[..a]);
    out
}

pub fn check_swap_symmetry(g: &MapGerm, h: &MapGerm) -> Check {
    let a = g.source().monoid().ambient();
    let gh = trans::dual_fibre_monoid(g, h).unwrap();
    let hg = trans::dual_fibre_monoid(h, g).unwrap();
    let left: BTreeSet<IntVec> = gh.hilbert_basis().iter().map(|v| swap_halves(v, a)).collect();
    let right: BTreeSet<IntVec> = hg.hilbert_basis().into_iter().collect();
    prop_assert_eq!(left, right);
    Ok(())
}

/// Adds the redundant generator `s_0 + s_last` to the target.
fn with_redundant_generator(g: &MapGerm) -> MapGerm {
    let s = g.target().monoid();
    let mut gens = s.generators().to_vec();
    let extra = arith::add(&gens[0], gens.last().unwrap());
    gens.push(extra);
    let s2 = AffineMonoid::new(s.ambient(), gens).unwrap();
    MapGerm::new(
        g.source().clone(),
        LocalModel::new(s2, g.target().real_dim()).unwrap(),
        g.exponent().matrix().clone(),
        g.mixed_block().clone(),
        g.stratum_block().clone(),
    )
    .unwrap()
}

pub fn check_generating_set_independence(g: &MapGerm, h: &MapGerm) -> Check {
    if !trans::is_b_transverse(g, h).unwrap() {
        return Ok(());
    }
    let a = trans::fibre_local_model(g, h).unwrap();
    let b = trans::fibre_local_model(&with_redundant_generator(g), &with_redundant_generator(h)).unwrap();
    prop_assert!(is_isomorphic(&a.monoid, &b.monoid).unwrap().is_some());
    prop_assert_eq!(a.vertex_in_fibre, b.vertex_in_fibre);
    Ok(())
}

/// On c-transverse pairs: `rank P = rank Q + rank R - rank S`,
/// `m' = m + n - q`, and hence `rank P + m' = dim X + dim Y - dim Z`.
pub fn check_dimension_identity(g: &MapGerm, h: &MapGerm) -> Check {
    if !trans::is_c_transverse(g, h).unwrap().c_transverse {
        return Ok(());
    }
    let f = trans::fibre_local_model(g, h).unwrap();
    prop_assert!(f.vertex_in_fibre);
    let (rq, rr, rs) = (g.source().monoid().rank(), h.source().monoid().rank(), g.target().monoid().rank());
    prop_assert_eq!(f.monoid.rank() + rs, rq + rr);
    let m = f.extra_real_dim.unwrap();
    prop_assert_eq!(m + g.target().real_dim(), g.source().real_dim() + h.source().real_dim());
    let dims = g.source().dimension() + h.source().dimension();
    prop_assert_eq!((f.monoid.rank() + m + g.target().dimension()) as usize, dims);
    Ok(())
}

pub fn check_corner_formula(g: &MapGerm, h: &MapGerm) -> Check {
    if !trans::is_c_transverse(g, h).unwrap().c_transverse_near_vertex {
        return Ok(());
    }
    let f = trans::fibre_local_model(g, h).unwrap();
    let mut total = 0;
    for i in 0..=f.monoid.rank() {
        let c = trans::corner_formula_check(g, h, i).unwrap();
        prop_assert_eq!(c.left, c.right, "codim {}", i);
        prop_assert!(c.dimensions_match, "codim {}", i);
        // isomorphism classes can only disagree through a non-free corner
        prop_assert!(c.matches || c.left_has_nonfree, "codim {}", i);
        total += c.left;
    }
    prop_assert_eq!(total, f.monoid.faces().unwrap().len());
    Ok(())
}

pub fn check_transversality_invariance(
    g: &MapGerm,
    h: &MapGerm,
    ops_q: &UnimodularOps,
    ops_r: &UnimodularOps,
    ops_s: &UnimodularOps,
) -> Check {
    let v = unimodular(g.target().monoid().ambient(), ops_s);
    let g2 = recoordinatize(g, &unimodular(g.source().monoid().ambient(), ops_q), &v);
    let h2 = recoordinatize(h, &unimodular(h.source().monoid().ambient(), ops_r), &v);
    let (a, b) = (trans::is_c_transverse(g, h).unwrap(), trans::is_c_transverse(&g2, &h2).unwrap());
    prop_assert_eq!(
        (a.b_transverse, a.btilde_surjective, a.monoid_condition, a.c_transverse, a.c_transverse_near_vertex),
        (b.b_transverse, b.btilde_surjective, b.monoid_condition, b.c_transverse, b.c_transverse_near_vertex)
    );
    prop_assert_eq!(
        trans::c_transverse_sufficiency(g, h).unwrap(),
        trans::c_transverse_sufficiency(&g2, &h2).unwrap()
    );
    Ok(())
}
