//! Hilbert bases of `C ∩ L` via pulling triangulations and fundamental
//! parallelepipeds.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{self, dot, Int, IntMatrix, IntVec, Rat};
use crate::error::{Error, Result};

use super::cone::{Cone, FaceHandle};
use super::lattice::Lattice;
use super::normal_form::{kernel_basis, smith_normal_form};

/// Generating set of the monoid `C ∩ L`.
///
/// For pointed `C` this is the Hilbert basis: the unique minimal generating
/// set. Otherwise it is a basis of the lineality lattice, its negatives, and
/// lifts of the Hilbert basis of the pointed quotient. Output is sorted.
pub fn hilbert_basis(c: &Cone, l: &Lattice) -> Result<Vec<IntVec>> {
    if c.dim() != l.ambient() {
        return Err(Error::Dimension(format!("cone in rank {} but lattice in rank {}", c.dim(), l.ambient())));
    }
    let b = l.basis_matrix();
    let local = c.preimage(&b)?;
    let mut out: Vec<IntVec> = hilbert_basis_standard(&local).into_iter().map(|y| b.apply(&y)).collect();
    out.sort();
    Ok(out)
}

/// [`hilbert_basis`] for the standard lattice `Z^dim`.
pub fn hilbert_basis_standard(c: &Cone) -> Vec<IntVec> {
    let n = c.dim();
    let mut out = if c.is_pointed() {
        pointed(c)
    } else {
        let lin = IntMatrix::from_columns(c.lineality(), n).expect("lineality lengths");
        let l = lin.cols();
        let (_, u, _) = smith_normal_form(&lin);
        let b = u.inverse_unimodular().expect("unimodular");
        let mut proj = IntMatrix::zeros(n - l, n);
        for i in l..n {
            for j in 0..n {
                proj[(i - l, j)] = u[(i, j)].clone();
            }
        }
        let quotient = c.image(&proj).expect("dimensions agree");
        let lift = b.column_range(l, n);
        let mut out: Vec<IntVec> = pointed(&quotient).iter().map(|q| lift.apply(q)).collect();
        for v in c.lineality() {
            out.push(v.clone());
            out.push(arith::neg(v));
        }
        out
    };
    out.sort();
    out
}

fn pointed(c: &Cone) -> Vec<IntVec> {
    if c.rays().is_empty() {
        return Vec::new();
    }
    if c.is_full_dimensional() {
        return full_dimensional(c);
    }
    let n = c.dim();
    let eq = IntMatrix::from_rows(c.equations().to_vec(), n).expect("equation lengths");
    let k = IntMatrix::from_columns(&kernel_basis(&eq), n).expect("kernel lengths");
    let local = c.preimage(&k).expect("dimensions agree");
    full_dimensional(&local).iter().map(|w| k.apply(w)).collect()
}

/// Pulling triangulation: every maximal simplex as a sorted list of ray indices.
fn triangulate(c: &Cone) -> Vec<Vec<usize>> {
    let faces = c.faces();
    let top = faces.iter().find(|f| f.codim == 0).expect("cone is a face of itself");
    let mut memo = BTreeMap::new();
    pull(top, &faces, c.span_dim(), &mut memo)
}

fn pull(
    face: &FaceHandle,
    faces: &[FaceHandle],
    span: usize,
    memo: &mut BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(s) = memo.get(&face.rays) {
        return s.clone();
    }
    let d = span - face.codim;
    let result = if face.rays.len() == d {
        vec![face.rays.clone()]
    } else {
        let v = face.rays[0];
        let mut out = Vec::new();
        for g in faces {
            if g.codim != face.codim + 1 || g.rays.contains(&v) {
                continue;
            }
            if !g.rays.iter().all(|r| face.rays.binary_search(r).is_ok()) {
                continue;
            }
            for mut s in pull(g, faces, span, memo) {
                s.push(v);
                s.sort();
                out.push(s);
            }
        }
        out
    };
    memo.insert(face.rays.clone(), result.clone());
    result
}

/// Lattice points of `{sum t_i s_i : t in [0,1)^k}` for a square nonsingular `S`.
fn parallelepiped(s: &IntMatrix) -> Vec<IntVec> {
    let n = s.rows();
    let (d, u, _) = smith_normal_form(s);
    let uinv = u.inverse_unimodular().expect("unimodular");
    let sinv = s.inverse_rat().expect("simplex is nonsingular");
    let divisors: Vec<Int> = (0..n).map(|i| d[(i, i)].clone()).collect();
    let mut y = arith::zero_vec(n);
    let mut out = Vec::new();
    loop {
        let x = uinv.apply(&y);
        let lambda = sinv.apply(&arith::to_rat(&x));
        let frac: Vec<Rat> = lambda.iter().map(|t| t - BigRational::from_integer(t.floor().to_integer())).collect();
        let p = s.to_rat().apply(&frac);
        out.push(p.iter().map(|t| t.to_integer()).collect());
        // odometer over prod [0, d_i)
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            y[i] += Int::one();
            if y[i] < divisors[i] {
                break;
            }
            y[i] = Int::zero();
            i += 1;
        }
    }
}

fn full_dimensional(c: &Cone) -> Vec<IntVec> {
    let n = c.dim();
    let rays = c.rays();
    let mut candidates: BTreeSet<IntVec> = rays.iter().cloned().collect();
    for simplex in triangulate(c) {
        let cols: Vec<IntVec> = simplex.iter().map(|&i| rays[i].clone()).collect();
        let s = IntMatrix::from_columns(&cols, n).expect("ray lengths");
        for p in parallelepiped(&s) {
            if !arith::is_zero(&p) {
                candidates.insert(p);
            }
        }
    }
    let w = c.grading();
    let mut ordered: Vec<(Int, IntVec)> = candidates.into_iter().map(|v| (dot(&w, &v), v)).collect();
    ordered.sort();
    let mut basis: Vec<IntVec> = Vec::new();
    for (_, x) in ordered {
        if !basis.iter().any(|y| c.contains(&arith::sub(&x, y))) {
            basis.push(x);
        }
    }
    basis
}
