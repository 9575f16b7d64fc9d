//! Hermite and Smith normal forms over the integers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, IntMatrix, IntVec};

/// Returns `(g, s, t)` with `g = gcd(a, b) >= 0` and `s*a + t*b = g`.
/// When `a` divides `b` the coefficients are `(sign a, 0)`, so elimination
/// never disturbs entries already cleared.
fn egcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    if !a.is_zero() && b.is_multiple_of(a) {
        let s = if a.is_negative() { -Int::one() } else { Int::one() };
        return (a.abs(), s, Int::zero());
    }
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column-style Hermite normal form.
///
/// Returns `(H, U)` with `H = M * U`, `U` unimodular and `H` lower-triangular
/// echelon: each pivot is positive, entries right of a pivot are zero and
/// entries left of a pivot lie in `[0, pivot)`. The zero columns of `H` sit at
/// the right, and the matching columns of `U` form a basis of the integer
/// kernel of `M`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let mut r = 0;
    for i in 0..h.rows() {
        if r == h.cols() {
            break;
        }
        for j in r + 1..h.cols() {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, r)].clone();
            let b = h[(i, j)].clone();
            let (g, s, t) = egcd(&a, &b);
            let p = -(&b / &g);
            let q = &a / &g;
            h.combine_cols(r, j, &s, &t, &p, &q);
            u.combine_cols(r, j, &s, &t, &p, &q);
        }
        if h[(i, r)].is_zero() {
            continue;
        }
        if h[(i, r)].is_negative() {
            h.negate_col(r);
            u.negate_col(r);
        }
        let pivot = h[(i, r)].clone();
        for k in 0..r {
            let q = h[(i, k)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.add_col_multiple(k, r, &nq);
                u.add_col_multiple(k, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Number of nonzero columns in a Hermite form, i.e. the rank.
pub fn hnf_rank(h: &IntMatrix) -> usize {
    (0..h.cols()).take_while(|&j| (0..h.rows()).any(|i| !h[(i, j)].is_zero())).count()
}

/// Basis of the integer kernel `{x : M x = 0}`. The basis is saturated: any
/// integer kernel vector is an integer combination of it.
pub fn kernel_basis(m: &IntMatrix) -> Vec<IntVec> {
    let (h, u) = hermite_normal_form(m);
    let r = hnf_rank(&h);
    (r..m.cols()).map(|j| u.column(j)).collect()
}

/// Canonical basis of the lattice spanned by the columns of `M`: the nonzero
/// columns of its Hermite form.
pub fn column_lattice_basis(m: &IntMatrix) -> Vec<IntVec> {
    let (h, _) = hermite_normal_form(m);
    (0..hnf_rank(&h)).map(|j| h.column(j)).collect()
}

/// An integer solution of `M x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[Int]) -> Option<IntVec> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let (h, u) = hermite_normal_form(m);
    let rank = hnf_rank(&h);
    let mut z = vec![Int::zero(); m.cols()];
    let mut r = 0;
    for i in 0..h.rows() {
        let mut acc = b[i].clone();
        for k in 0..r {
            acc -= &h[(i, k)] * &z[k];
        }
        if r < rank && !h[(i, r)].is_zero() {
            let (q, rem) = acc.div_rem(&h[(i, r)]);
            if !rem.is_zero() {
                return None;
            }
            z[r] = q;
            r += 1;
        } else if !acc.is_zero() {
            return None;
        }
    }
    Some(u.apply(&z))
}

/// Smith normal form: `(D, U, V)` with `D = U * M * V` diagonal, nonnegative,
/// and each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());
    for t in 0..n {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..d.rows() {
            for j in t..d.cols() {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            for i in t + 1..d.rows() {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let a = d[(t, t)].clone();
                let b = d[(i, t)].clone();
                let (g, s, x) = egcd(&a, &b);
                let p = -(&b / &g);
                let q = &a / &g;
                d.combine_rows(t, i, &s, &x, &p, &q);
                u.combine_rows(t, i, &s, &x, &p, &q);
            }
            for j in t + 1..d.cols() {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let a = d[(t, t)].clone();
                let b = d[(t, j)].clone();
                let (g, s, x) = egcd(&a, &b);
                let p = -(&b / &g);
                let q = &a / &g;
                d.combine_cols(t, j, &s, &x, &p, &q);
                v.combine_cols(t, j, &s, &x, &p, &q);
            }
            let column_clear = (t + 1..d.rows()).all(|i| d[(i, t)].is_zero());
            if !column_clear {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let bad = (t + 1..d.rows())
                .find(|&i| (t + 1..d.cols()).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = Int::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// The diagonal of the Smith form (length `min(rows, cols)`).
pub fn elementary_divisors(m: &IntMatrix) -> Vec<Int> {
    let (d, _, _) = smith_normal_form(m);
    (0..m.rows().min(m.cols())).map(|i| d[(i, i)].clone()).collect()
}

/// Whether `Z^rows / (column span of M)` is torsion-free.
pub fn cokernel_torsion_free(m: &IntMatrix) -> bool {
    elementary_divisors(m).iter().all(|x| x.is_zero() || x.is_one())
}
