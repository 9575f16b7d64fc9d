//! Rational polyhedral cones with both representations kept canonical.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::arith::{self, dot, IntMatrix, IntVec};
use crate::error::{Error, Result};

use super::dd::double_description;
use super::normal_form::{column_lattice_basis, kernel_basis};

/// A rational polyhedral cone in `R^dim`.
///
/// Both descriptions are canonical, so two cones describe the same point set
/// exactly when they compare equal:
///
/// * `C = span(lineality) + cone(rays)`,
/// * `C = {x : f.x >= 0 for f in facets, e.x = 0 for e in equations}`.
///
/// `lineality` and `equations` are saturated lattice bases in Hermite form.
/// Rays are primitive and orthogonal to the lineality space, facets are
/// primitive and orthogonal to the equations; both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    dim: usize,
    lineality: Vec<IntVec>,
    rays: Vec<IntVec>,
    equations: Vec<IntVec>,
    facets: Vec<IntVec>,
}

/// A face of a cone, identified by the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceHandle {
    /// Indices into [`Cone::facets`] of all facets containing the face.
    pub inequalities: Vec<usize>,
    /// Indices into [`Cone::rays`] of the rays lying on the face.
    pub rays: Vec<usize>,
    /// Dimension of the cone's span minus dimension of the face.
    pub codim: usize,
}

fn check_len(vs: &[IntVec], dim: usize, what: &str) -> Result<()> {
    match vs.iter().position(|v| v.len() != dim) {
        Some(i) => Err(Error::Dimension(format!(
            "{what} {i} has length {} in ambient rank {dim}",
            vs[i].len()
        ))),
        None => Ok(()),
    }
}

/// Saturated lattice basis in canonical (Hermite) form for a list of vectors
/// spanning a saturated lattice.
fn canonical_basis(vs: &[IntVec], dim: usize) -> Vec<IntVec> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_columns(vs, dim).expect("lengths checked");
    column_lattice_basis(&m)
}

/// Saturated basis of `{x : v.x = 0 for v in vs}`.
fn orthogonal_complement(vs: &[IntVec], dim: usize) -> Vec<IntVec> {
    if vs.is_empty() {
        return (0..dim).map(|i| arith::unit_vec(dim, i)).collect();
    }
    let m = IntMatrix::from_rows(vs.to_vec(), dim).expect("lengths checked");
    kernel_basis(&m)
}

fn normalize_set(vs: impl IntoIterator<Item = IntVec>, against: &[IntVec]) -> Vec<IntVec> {
    let set: BTreeSet<IntVec> = vs
        .into_iter()
        .map(|v| arith::project_out(&v, against))
        .filter(|v| !arith::is_zero(v))
        .collect();
    set.into_iter().collect()
}

impl Cone {
    /// The cone generated by `gens` (the zero cone if empty).
    pub fn from_generators(gens: &[IntVec], dim: usize) -> Result<Self> {
        check_len(gens, dim, "generator")?;
        let gens: Vec<IntVec> = gens.iter().filter(|g| !arith::is_zero(g)).cloned().collect();
        let equations = canonical_basis(&orthogonal_complement(&gens, dim), dim);
        let dual = double_description(&gens, &[], dim);
        let facets = normalize_set(dual.rays, &equations);
        let mut hrep = facets.clone();
        hrep.extend(equations.iter().cloned());
        let lineality = canonical_basis(&orthogonal_complement(&hrep, dim), dim);
        let primal = double_description(&facets, &equations, dim);
        let rays = normalize_set(primal.rays, &lineality);
        Ok(Cone { dim, lineality, rays, equations, facets })
    }

    /// The cone `{x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}`.
    pub fn from_constraints(ineqs: &[IntVec], eqs: &[IntVec], dim: usize) -> Result<Self> {
        check_len(ineqs, dim, "inequality")?;
        check_len(eqs, dim, "equation")?;
        let g = double_description(ineqs, eqs, dim);
        let mut gens = g.rays;
        for l in g.lineality {
            gens.push(arith::neg(&l));
            gens.push(l);
        }
        Self::from_generators(&gens, dim)
    }

    pub fn from_inequalities(ineqs: &[IntVec], dim: usize) -> Result<Self> {
        Self::from_constraints(ineqs, &[], dim)
    }

    pub fn orthant(dim: usize) -> Self {
        let e: Vec<IntVec> = (0..dim).map(|i| arith::unit_vec(dim, i)).collect();
        Cone { dim, lineality: Vec::new(), rays: e.iter().rev().cloned().collect(), equations: Vec::new(), facets: e.into_iter().rev().collect() }
    }

    pub fn full_space(dim: usize) -> Self {
        Self::from_generators(&[], dim).expect("empty input").dual()
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(&[], dim).expect("empty input")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }
    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }
    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }
    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Rays together with both signs of each lineality vector.
    pub fn generators(&self) -> Vec<IntVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(arith::neg(l));
        }
        g
    }

    /// Facets together with both signs of each equation.
    pub fn inequalities(&self) -> Vec<IntVec> {
        let mut g = self.facets.clone();
        for e in &self.equations {
            g.push(e.clone());
            g.push(arith::neg(e));
        }
        g
    }

    /// `{u : u.c >= 0 for all c in C}`.
    pub fn dual(&self) -> Cone {
        Cone {
            dim: self.dim,
            lineality: self.equations.clone(),
            rays: self.facets.clone(),
            equations: self.lineality.clone(),
            facets: self.rays.clone(),
        }
    }

    pub fn contains(&self, v: &[arith::Int]) -> bool {
        self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| !dot(f, v).is_negative())
    }

    /// Whether `v` lies in `C` but on no proper face.
    pub fn relative_interior_contains(&self, v: &[arith::Int]) -> bool {
        self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| dot(f, v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// Sum of the facet normals; strictly positive on `C` minus its lineality
    /// space, within the span.
    pub fn grading(&self) -> IntVec {
        self.facets.iter().fold(arith::zero_vec(self.dim), |acc, f| arith::add(&acc, f))
    }

    /// Intersection of `C` with the linear subspace `{x : e.x = 0}`.
    pub fn intersect_equations(&self, eqs: &[IntVec]) -> Result<Cone> {
        let mut all = self.equations.clone();
        all.extend(eqs.iter().cloned());
        Cone::from_constraints(&self.facets, &all, self.dim)
    }

    fn rays_tight_at(&self, facet: usize) -> BTreeSet<usize> {
        (0..self.rays.len()).filter(|&r| dot(&self.facets[facet], &self.rays[r]).is_zero()).collect()
    }

    fn closure(&self, rays: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| rays.iter().all(|&r| dot(&self.facets[f], &self.rays[r]).is_zero()))
            .collect()
    }

    fn face_dim(&self, rays: &[usize]) -> usize {
        let vs: Vec<IntVec> = rays.iter().map(|&r| self.rays[r].clone()).collect();
        self.lineality.len() + arith::rank_of(&vs, self.dim)
    }

    /// All faces, sorted lexicographically by their facet-index sets.
    pub fn faces(&self) -> Vec<FaceHandle> {
        let tight: Vec<BTreeSet<usize>> = (0..self.facets.len()).map(|f| self.rays_tight_at(f)).collect();
        let top: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(top);
        while let Some(rays) = queue.pop_front() {
            let t = self.closure(&rays);
            if !seen.insert(t.clone()) {
                continue;
            }
            for f in 0..self.facets.len() {
                if t.binary_search(&f).is_err() {
                    queue.push_back(rays.intersection(&tight[f]).copied().collect());
                }
            }
            let rv: Vec<usize> = rays.into_iter().collect();
            let codim = self.span_dim() - self.face_dim(&rv);
            out.push(FaceHandle { inequalities: t, rays: rv, codim });
        }
        out.sort();
        out
    }

    /// The cone spanned by a face.
    pub fn face_cone(&self, face: &FaceHandle) -> Cone {
        let mut gens: Vec<IntVec> = face.rays.iter().map(|&r| self.rays[r].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(arith::neg(l));
        }
        Cone::from_generators(&gens, self.dim).expect("same ambient")
    }

    /// Pulls back along `x = B y`, where `B` is `dim x k`: `{y : B y in C}`.
    pub fn preimage(&self, b: &IntMatrix) -> Result<Cone> {
        if b.rows() != self.dim {
            return Err(Error::Dimension(format!("map has {} rows, cone rank {}", b.rows(), self.dim)));
        }
        let bt = b.transpose();
        let f: Vec<IntVec> = self.facets.iter().map(|v| bt.apply(v)).collect();
        let e: Vec<IntVec> = self.equations.iter().map(|v| bt.apply(v)).collect();
        Cone::from_constraints(&f, &e, b.cols())
    }

    /// Image under the linear map `A` (`k x dim`).
    pub fn image(&self, a: &IntMatrix) -> Result<Cone> {
        if a.cols() != self.dim {
            return Err(Error::Dimension(format!("map has {} columns, cone rank {}", a.cols(), self.dim)));
        }
        let gens: Vec<IntVec> = self.generators().iter().map(|g| a.apply(g)).collect();
        Cone::from_generators(&gens, a.rows())
    }
}
