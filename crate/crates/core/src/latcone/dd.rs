//! Double description: from `{x : a.x >= 0, e.x = 0}` to lineality + extreme rays.

use num_traits::{Signed, Zero};

use crate::arith::{self, dot, Int, IntVec};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: IntVec,
    tight: Bits,
}

/// Output of the double description method.
#[derive(Clone, Debug)]
pub struct Generators {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

/// Computes lineality vectors and extreme rays of `{x in R^n : a.x >= 0 for a
/// in ineqs, e.x = 0 for e in eqs}`. Rays are primitive but not canonical
/// modulo the lineality space.
pub fn double_description(ineqs: &[IntVec], eqs: &[IntVec], n: usize) -> Generators {
    let total = ineqs.len();
    let mut lin: Vec<IntVec> = (0..n).map(|i| arith::unit_vec(n, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for e in eqs {
        if let Some(k) = lin.iter().position(|l| !dot(e, l).is_zero()) {
            let l0 = lin.remove(k);
            let el0 = dot(e, &l0);
            for l in lin.iter_mut() {
                *l = arith::primitive(&arith::combine(&el0, l, &-dot(e, l), &l0));
            }
            for r in rays.iter_mut() {
                r.v = arith::primitive(&arith::combine(&el0, &r.v, &-dot(e, &r.v), &l0));
            }
            continue;
        }
        rays = split(rays, e, None);
    }

    for (idx, a) in ineqs.iter().enumerate() {
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(k);
            if dot(a, &l0).is_negative() {
                l0 = arith::neg(&l0);
            }
            let al0 = dot(a, &l0);
            for l in lin.iter_mut() {
                *l = arith::primitive(&arith::combine(&al0, l, &-dot(a, l), &l0));
            }
            for r in rays.iter_mut() {
                r.v = arith::primitive(&arith::combine(&al0, &r.v, &-dot(a, &r.v), &l0));
                r.tight.set(idx);
            }
            // l0 is tight at every earlier inequality
            let mut tight = Bits::new(total);
            for j in 0..idx {
                tight.set(j);
            }
            rays.push(Ray { v: l0, tight });
            continue;
        }
        rays = split(rays, a, Some((idx, total)));
    }

    Generators { lineality: lin, rays: rays.into_iter().map(|r| r.v).collect() }
}

/// One DD step for a constraint that does not cut the lineality space.
/// `ineq` is `Some((index, total))` for an inequality and `None` for an equation.
fn split(rays: Vec<Ray>, a: &[Int], ineq: Option<(usize, usize)>) -> Vec<Ray> {
    let vals: Vec<Int> = rays.iter().map(|r| dot(a, &r.v)).collect();
    let mut out = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let keep = if ineq.is_some() { !vals[i].is_negative() } else { vals[i].is_zero() };
        if keep {
            let mut tight = r.tight.clone();
            if let (Some((idx, _)), true) = (ineq, vals[i].is_zero()) {
                tight.set(idx);
            }
            out.push(Ray { v: r.v.clone(), tight });
        }
    }
    for (p, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
        for (q, vq) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
            let common = rays[p].tight.and(&rays[q].tight);
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(k, r)| k == p || k == q || !common.subset_of(&r.tight));
            if !adjacent {
                continue;
            }
            let w = arith::primitive(&arith::combine(vp, &rays[q].v, &-vq, &rays[p].v));
            if arith::is_zero(&w) {
                continue;
            }
            let mut tight = common;
            if let Some((idx, _)) = ineq {
                tight.set(idx);
            }
            out.push(Ray { v: w, tight });
        }
    }
    out
}
