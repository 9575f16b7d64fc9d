use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};

use crate::arith::{self, dot, Int, IntMatrix, IntVec};
use crate::error::{Error, Result};
use crate::latcone::{self, Cone, FaceHandle, Lattice};

/// A finitely generated submonoid of `Z^ambient`.
///
/// Such a monoid is integral and torsion-free by construction. Generators are
/// kept in input order with zeros and repeats removed; an empty list is the
/// zero monoid.
#[derive(Clone)]
pub struct AffineMonoid {
    ambient: usize,
    generators: Vec<IntVec>,
    memo: Arc<Memo>,
}

/// Derived data, computed on first use and shared between clones.
#[derive(Default)]
struct Memo {
    cone: OnceLock<Cone>,
    lattice: OnceLock<Lattice>,
    full_rank: OnceLock<(AffineMonoid, IntMatrix)>,
    saturated: OnceLock<bool>,
    faces: OnceLock<Vec<MonoidFace>>,
    dual: OnceLock<AffineMonoid>,
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.generators == other.generators
    }
}

impl Eq for AffineMonoid {}

impl Hash for AffineMonoid {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.generators.hash(state);
    }
}

impl fmt::Debug for AffineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineMonoid").field("ambient", &self.ambient).field("generators", &self.generators).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonoidClassification {
    pub finitely_generated: bool,
    pub integral: bool,
    pub saturated: bool,
    pub torsion_free: bool,
    pub sharp: bool,
    pub weakly_toric: bool,
    pub toric: bool,
    pub rank: usize,
}

/// A face of an affine monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoidFace {
    /// Indices into the parent's generators of those lying in the face.
    pub generators: Vec<usize>,
    pub rank: usize,
    pub codim: usize,
    pub handle: FaceHandle,
}

/// The sharp part of a weakly toric monoid and its unit rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSplit {
    pub sharp: AffineMonoid,
    pub unit_rank: usize,
    /// `ambient x rank` unimodular basis of `P^gp`; its first `unit_rank`
    /// columns span the units.
    pub basis: IntMatrix,
}

/// Result of testing `eta(P): P -> (P^v)^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDual {
    pub iso: bool,
    pub double_dual: AffineMonoid,
    /// Matrix of `eta` from coordinates of `P^gp` to the ambient of the double dual.
    pub eta: IntMatrix,
}

/// A prime ideal, stored as the complement of a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    /// Generators of `P` lying in the ideal.
    pub generators: Vec<usize>,
    /// Index into [`AffineMonoid::faces`] of the complementary face.
    pub face: usize,
}

impl AffineMonoid {
    fn raw(ambient: usize, generators: Vec<IntVec>) -> Self {
        AffineMonoid { ambient, generators, memo: Arc::default() }
    }

    pub fn new(ambient: usize, generators: Vec<IntVec>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for (i, g) in generators.into_iter().enumerate() {
            if g.len() != ambient {
                return Err(Error::Dimension(format!(
                    "generator {i} has length {} in ambient rank {ambient}",
                    g.len()
                )));
            }
            if !arith::is_zero(&g) && seen.insert(g.clone()) {
                gens.push(g);
            }
        }
        Ok(AffineMonoid::raw(ambient, gens))
    }

    pub fn from_i64(ambient: usize, generators: &[&[i64]]) -> Result<Self> {
        Self::new(ambient, generators.iter().map(|g| arith::ivec(g)).collect())
    }

    /// `N^k`.
    pub fn free(k: usize) -> Self {
        AffineMonoid::raw(k, (0..k).map(|i| arith::unit_vec(k, i)).collect())
    }

    /// `Z^k`, generated by the unit vectors and `(-1, ..., -1)`.
    pub fn lattice(k: usize) -> Self {
        let mut g: Vec<IntVec> = (0..k).map(|i| arith::unit_vec(k, i)).collect();
        if k > 0 {
            g.push(vec![Int::from(-1); k]);
        }
        AffineMonoid::raw(k, g)
    }

    pub fn zero(ambient: usize) -> Self {
        AffineMonoid::raw(ambient, Vec::new())
    }

    /// `P x Q` inside `Z^(a + b)`.
    pub fn product(&self, other: &AffineMonoid) -> AffineMonoid {
        let n = self.ambient + other.ambient;
        let mut g = Vec::new();
        for p in &self.generators {
            let mut v = p.clone();
            v.extend(arith::zero_vec(other.ambient));
            g.push(v);
        }
        for q in &other.generators {
            let mut v = arith::zero_vec(self.ambient);
            v.extend(q.iter().cloned());
            g.push(v);
        }
        AffineMonoid::raw(n, g)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    pub fn is_zero_monoid(&self) -> bool {
        self.generators.is_empty()
    }

    /// `ambient x k` matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.generators, self.ambient).expect("generator lengths")
    }

    pub fn cone(&self) -> Cone {
        self.memo
            .cone
            .get_or_init(|| Cone::from_generators(&self.generators, self.ambient).expect("generator lengths"))
            .clone()
    }

    pub fn groupification(&self) -> Lattice {
        self.memo
            .lattice
            .get_or_init(|| Lattice::from_generators(&self.generators, self.ambient).expect("generator lengths"))
            .clone()
    }

    pub fn rank(&self) -> usize {
        self.groupification().rank()
    }

    /// Whether `P^gp` is the whole ambient lattice.
    pub fn is_full_rank(&self) -> bool {
        self.groupification() == Lattice::standard(self.ambient)
    }

    /// The same monoid in coordinates of `P^gp`: returns `(P', B)` with
    /// `P' ⊂ Z^rank` of full rank and `B` the `ambient x rank` basis matrix,
    /// so that each generator equals `B` times its image.
    pub fn full_rank_form(&self) -> (AffineMonoid, IntMatrix) {
        self.memo.full_rank.get_or_init(|| self.compute_full_rank_form()).clone()
    }

    fn compute_full_rank_form(&self) -> (AffineMonoid, IntMatrix) {
        let l = self.groupification();
        let b = l.basis_matrix();
        let gens = self
            .generators
            .iter()
            .map(|g| l.coordinates(g).expect("generator lies in its own group"))
            .collect();
        (AffineMonoid::raw(l.rank(), gens), b)
    }

    /// Indices of generators lying in the lineality space of the cone.
    fn unit_generator_indices(&self, cone: &Cone) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| cone.facets().iter().all(|f| dot(f, &self.generators[i]).is_zero()))
            .collect()
    }

    /// `P^x = P ∩ (-P)`, the group generated by the generators in the
    /// lineality space of `cone(P)`.
    pub fn units(&self) -> Lattice {
        let cone = self.cone();
        let gens: Vec<IntVec> =
            self.unit_generator_indices(&cone).into_iter().map(|i| self.generators[i].clone()).collect();
        Lattice::from_generators(&gens, self.ambient).expect("generator lengths")
    }

    pub fn is_sharp(&self) -> bool {
        self.cone().is_pointed()
    }

    /// Writes `v` as a nonnegative integer combination of the generators.
    ///
    /// Coefficients of non-unit generators are bounded by the grading of the
    /// cone; the remainder must then lie in the unit group, where a strictly
    /// positive relation among unit generators makes every coefficient
    /// nonnegative.
    pub fn express(&self, v: &[Int]) -> Option<Vec<Int>> {
        if v.len() != self.ambient {
            return None;
        }
        let k = self.generators.len();
        if arith::is_zero(v) {
            return Some(vec![Int::zero(); k]);
        }
        let cone = self.cone();
        if !cone.contains(v) || !self.groupification().contains(v) {
            return None;
        }
        let units = self.unit_generator_indices(&cone);
        let others: Vec<usize> = (0..k).filter(|i| units.binary_search(i).is_err()).collect();
        let w = cone.grading();
        let degrees: Vec<Int> = others.iter().map(|&i| dot(&w, &self.generators[i])).collect();
        let unit_gens: Vec<IntVec> = units.iter().map(|&i| self.generators[i].clone()).collect();
        let unit_lattice = Lattice::from_generators(&unit_gens, self.ambient).expect("lengths");

        let mut coeffs = vec![Int::zero(); others.len()];
        let mut dead = HashSet::new();
        let found = search(&self.generators, &others, &degrees, &cone, &unit_lattice, v.to_vec(), 0, &mut coeffs, &mut dead);
        let remainder = found?;

        let mut out = vec![Int::zero(); k];
        for (j, &i) in others.iter().enumerate() {
            out[i] = coeffs[j].clone();
        }
        if !units.is_empty() {
            let um = IntMatrix::from_columns(&unit_gens, self.ambient).expect("lengths");
            let mut c = latcone::solve_integer(&um, &remainder).expect("remainder lies in the unit group");
            let positive = positive_relation(&um);
            let deficit = c.iter().filter(|x| x.is_negative()).map(|x| -x).max().unwrap_or_else(Int::zero);
            if !deficit.is_zero() {
                c = arith::add(&c, &arith::scale(&positive, &deficit));
            }
            for (j, &i) in units.iter().enumerate() {
                out[i] = c[j].clone();
            }
        }
        Some(out)
    }

    /// Whether `v` lies in `P`.
    pub fn membership(&self, v: &[Int]) -> bool {
        self.express(v).is_some()
    }

    pub fn classify(&self) -> MonoidClassification {
        let saturated = self.is_saturated();
        let sharp = self.is_sharp();
        let weakly_toric = saturated;
        MonoidClassification {
            finitely_generated: true,
            integral: true,
            saturated,
            torsion_free: true,
            sharp,
            weakly_toric,
            toric: weakly_toric && sharp,
            rank: self.rank(),
        }
    }

    /// Saturation: every Hilbert-basis element of `cone(P) ∩ P^gp` lies in `P`.
    pub fn is_saturated(&self) -> bool {
        *self.memo.saturated.get_or_init(|| {
            let (q, _) = self.full_rank_form();
            latcone::hilbert_basis_standard(&q.cone()).iter().all(|h| q.membership(h))
        })
    }

    pub fn is_weakly_toric(&self) -> bool {
        self.is_saturated()
    }

    pub fn is_toric(&self) -> bool {
        self.is_sharp() && self.is_saturated()
    }

    pub(crate) fn require_weakly_toric(&self, what: &str) -> Result<()> {
        if self.is_saturated() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} requires a weakly toric (saturated) monoid")))
        }
    }

    pub(crate) fn require_toric(&self, what: &str) -> Result<()> {
        if self.is_toric() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} requires a toric monoid")))
        }
    }

    /// Generating set of `cone(P) ∩ P^gp` in ambient coordinates. For a toric
    /// monoid this is its unique minimal generating set.
    pub fn hilbert_basis(&self) -> Vec<IntVec> {
        latcone::hilbert_basis(&self.cone(), &self.groupification()).expect("same ambient")
    }

    /// Irreducible generators of a sharp monoid, in generator order.
    pub fn minimal_generators(&self) -> Vec<IntVec> {
        self.generators
            .iter()
            .filter(|g| {
                !self.generators.iter().any(|h| {
                    let d = arith::sub(g, h);
                    h != *g && !arith::is_zero(&d) && self.membership(&d)
                })
            })
            .cloned()
            .collect()
    }

    /// Splits a weakly toric monoid as `P^# x Z^l`.
    pub fn units_and_split(&self) -> Result<UnitSplit> {
        self.require_weakly_toric("units_and_split")?;
        let (q, b) = self.full_rank_form();
        let r = q.ambient;
        let units = q.units();
        let l = units.rank();
        let (u, comp) = if l == 0 {
            (IntMatrix::identity(r), IntMatrix::identity(r))
        } else {
            // units of a saturated monoid form a saturated sublattice; complete
            // its basis to a unimodular one via the Smith form
            let um = units.basis_matrix();
            let (_, u, _) = latcone::smith_normal_form(&um);
            let comp = u.inverse_unimodular().expect("unimodular");
            (u, comp)
        };
        let proj = IntMatrix::from_rows((l..r).map(|i| u.row(i)).collect(), r).expect("lengths");
        let sharp_gens: Vec<IntVec> = q.generators.iter().map(|g| proj.apply(g)).collect();
        let sharp = AffineMonoid::new(r - l, sharp_gens)?;
        Ok(UnitSplit { sharp, unit_rank: l, basis: b.mul(&comp) })
    }

    /// `P^v = Hom(P, N)`, in coordinates dual to the Hermite basis of `P^gp`.
    /// When `P^gp` is the whole ambient lattice these are the ambient dual
    /// coordinates.
    pub fn dual(&self) -> AffineMonoid {
        self.memo.dual.get_or_init(|| self.compute_dual()).clone()
    }

    fn compute_dual(&self) -> AffineMonoid {
        let (q, _) = self.full_rank_form();
        let hb = latcone::hilbert_basis_standard(&q.cone().dual());
        AffineMonoid::raw(q.ambient, hb)
    }

    pub fn double_dual_map(&self) -> DoubleDual {
        let (q, _) = self.full_rank_form();
        let d = self.dual();
        let dd = d.dual();
        let (_, b2) = d.full_rank_form();
        let eta = b2.transpose();
        let iso = b2.cols() == q.ambient
            && eta.det().abs() == Int::from(1)
            && dd.generators.iter().all(|h| {
                let inv = eta.inverse_unimodular().expect("unimodular");
                q.membership(&inv.apply(h))
            });
        DoubleDual { iso, double_dual: dd, eta }
    }

    /// Faces sorted by codimension, then by generator index set.
    pub fn faces(&self) -> Result<Vec<MonoidFace>> {
        self.require_weakly_toric("faces")?;
        Ok(self.faces_unchecked())
    }

    pub(crate) fn faces_unchecked(&self) -> Vec<MonoidFace> {
        self.memo.faces.get_or_init(|| self.compute_faces()).clone()
    }

    fn compute_faces(&self) -> Vec<MonoidFace> {
        let cone = self.cone();
        let rank = cone.span_dim();
        let mut out: Vec<MonoidFace> = cone
            .faces()
            .into_iter()
            .map(|h| {
                let generators = (0..self.generators.len())
                    .filter(|&i| {
                        h.inequalities.iter().all(|&t| dot(&cone.facets()[t], &self.generators[i]).is_zero())
                    })
                    .collect();
                MonoidFace { generators, rank: rank - h.codim, codim: h.codim, handle: h }
            })
            .collect();
        out.sort_by(|a, b| (a.codim, &a.generators).cmp(&(b.codim, &b.generators)));
        out
    }

    /// `F` as a monoid in the same ambient lattice.
    pub fn face_monoid(&self, face: &MonoidFace) -> AffineMonoid {
        AffineMonoid::raw(self.ambient, face.generators.iter().map(|&i| self.generators[i].clone()).collect())
    }

    /// Number of faces per codimension.
    pub fn face_census(&self) -> Result<Vec<usize>> {
        let faces = self.faces()?;
        let mut v = vec![0; self.rank() + 1];
        for f in faces {
            v[f.codim] += 1;
        }
        Ok(v)
    }

    /// The face `F^ = {a in P^v : a|F = 0}` of `P^v`, returned with `P^v`.
    pub fn face_dual(&self, face: &MonoidFace) -> Result<(AffineMonoid, MonoidFace)> {
        self.require_weakly_toric("face_dual")?;
        let (q, _) = self.full_rank_form();
        let d = self.dual();
        let vanishing: Vec<usize> = (0..d.generators.len())
            .filter(|&j| face.generators.iter().all(|&i| dot(&d.generators[j], &q.generators[i]).is_zero()))
            .collect();
        let df = d
            .faces_unchecked()
            .into_iter()
            .find(|f| f.generators == vanishing)
            .ok_or_else(|| Error::InvalidFace("no face of the dual matches the vanishing set".into()))?;
        Ok((d, df))
    }

    /// Prime ideals, one per face, in face order.
    pub fn spec(&self) -> Result<Vec<PrimeIdeal>> {
        let faces = self.faces()?;
        Ok(faces
            .iter()
            .enumerate()
            .map(|(idx, f)| PrimeIdeal {
                generators: (0..self.generators.len()).filter(|i| f.generators.binary_search(i).is_err()).collect(),
                face: idx,
            })
            .collect())
    }

    /// Free means saturated, sharp, and with a Hilbert basis of exactly
    /// `rank` elements.
    pub fn is_free(&self) -> bool {
        self.is_toric() && self.hilbert_basis().len() == self.rank()
    }

    /// A Markov basis of the relation lattice `{c : sum c_i g_i = 0}` as pairs
    /// `(u, v)` of natural vectors with `sum u_i g_i = sum v_i g_i`.
    pub fn relations(&self) -> Vec<(IntVec, IntVec)> {
        let k = self.generators.len();
        if k == 0 {
            return Vec::new();
        }
        let g = self.generator_matrix();
        let kernel = latcone::kernel_basis(&g);
        if kernel.is_empty() {
            return Vec::new();
        }
        let graver = graver_basis(&kernel, k);
        let mut rels: Vec<(IntVec, IntVec)> = graver
            .into_iter()
            .map(|v| {
                let pos = v.iter().map(|x| if x.is_positive() { x.clone() } else { Int::zero() }).collect();
                let neg = v.iter().map(|x| if x.is_negative() { -x } else { Int::zero() }).collect();
                (pos, neg)
            })
            .collect();
        if !self.is_sharp() {
            return rels;
        }
        let w = self.cone().grading();
        let deg = |u: &IntVec| dot(&w, &g.apply(u));
        rels.sort_by(|a, b| (deg(&a.0), a).cmp(&(deg(&b.0), b)));
        let mut kept: Vec<(IntVec, IntVec)> = Vec::new();
        for (u, v) in rels {
            if !connected(&u, &v, &kept) {
                kept.push((u, v));
            }
        }
        kept
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    gens: &[IntVec],
    others: &[usize],
    degrees: &[Int],
    cone: &Cone,
    units: &Lattice,
    remainder: IntVec,
    idx: usize,
    coeffs: &mut Vec<Int>,
    dead: &mut HashSet<(usize, IntVec)>,
) -> Option<IntVec> {
    if idx == others.len() {
        return units.contains(&remainder).then_some(remainder);
    }
    if dead.contains(&(idx, remainder.clone())) {
        return None;
    }
    let g = &gens[others[idx]];
    let mut c = Int::zero();
    let mut rem = remainder.clone();
    let budget = dot(&cone.grading(), &remainder);
    while cone.contains(&rem) && &c * &degrees[idx] <= budget {
        coeffs[idx] = c.clone();
        if let Some(r) = search(gens, others, degrees, cone, units, rem.clone(), idx + 1, coeffs, dead) {
            return Some(r);
        }
        c += 1;
        rem = arith::sub(&rem, g);
    }
    coeffs[idx] = Int::zero();
    dead.insert((idx, remainder));
    None
}

/// A relation `sum m_i u_i = 0` with every `m_i >= 1`, for generators whose
/// cone is a linear subspace.
fn positive_relation(um: &IntMatrix) -> IntVec {
    let k = um.cols();
    let ineqs: Vec<IntVec> = (0..k).map(|i| arith::unit_vec(k, i)).collect();
    let eqs = um.row_vecs();
    let c = Cone::from_constraints(&ineqs, &eqs, k).expect("lengths");
    let s = c.rays().iter().fold(arith::zero_vec(k), |acc, r| arith::add(&acc, r));
    debug_assert!(s.iter().all(|x| x.is_positive()));
    s
}

/// Graver basis of the saturated lattice spanned by `kernel` in `Z^k`: the
/// union over orthants of the Hilbert bases of lattice-orthant cones, one
/// representative per sign pair.
pub(crate) fn graver_basis(kernel: &[IntVec], k: usize) -> Vec<IntVec> {
    let eqs = {
        let km = IntMatrix::from_columns(kernel, k).expect("lengths");
        latcone::kernel_basis(&km.transpose())
    };
    let mut out: BTreeSet<IntVec> = BTreeSet::new();
    for mask in 0u64..(1u64 << (k - 1)) {
        let ineqs: Vec<IntVec> = (0..k)
            .map(|i| {
                let s = if i + 1 < k && mask >> i & 1 == 1 { -1 } else { 1 };
                arith::scale(&arith::unit_vec(k, i), &Int::from(s))
            })
            .collect();
        let cone = Cone::from_constraints(&ineqs, &eqs, k).expect("lengths");
        for h in latcone::hilbert_basis_standard(&cone) {
            let first = h.iter().find(|x| !x.is_zero()).expect("nonzero");
            out.insert(if first.is_negative() { arith::neg(&h) } else { h });
        }
    }
    out.into_iter().collect()
}

/// Whether `u` and `v` are joined by moves from `rels` (both directions).
/// Moves preserve the fibre, which is finite for sharp monoids.
fn connected(u: &IntVec, v: &IntVec, rels: &[(IntVec, IntVec)]) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(x) = queue.pop_front() {
        if &x == v {
            return true;
        }
        for (a, b) in rels {
            for (from, to) in [(a, b), (b, a)] {
                if x.iter().zip(from).all(|(xi, fi)| xi >= fi) {
                    let y = arith::add(&arith::sub(&x, from), to);
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    false
}
