use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Int, IntMatrix, IntVec};
use crate::error::{Error, Result};
use crate::latcone;

use super::affine::AffineMonoid;

/// A commutative monoid `N^m / ~` given by generators and relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedMonoid {
    generators: usize,
    relations: Vec<(IntVec, IntVec)>,
}

/// `P^gp ≅ Z^free_rank x Z/t_1 x ... x Z/t_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

/// Outcome of the bounded word problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordResult {
    Equal,
    /// No chain of relations within the degree bound joins the words.
    /// `exhaustive` is set when both congruence classes were closed before
    /// reaching the bound, so the words are distinct outright.
    DistinctUpToBound { exhaustive: bool },
}

/// A verdict that may only be certified up to a degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    HoldsUpToBound,
    FailsUpToBound,
    Undecided,
}

impl Verdict {
    pub fn exact(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    /// `Some(b)` when the verdict leans one way, exact or bounded.
    pub fn lean(self) -> Option<bool> {
        match self {
            Verdict::Holds | Verdict::HoldsUpToBound => Some(true),
            Verdict::Fails | Verdict::FailsUpToBound => Some(false),
            Verdict::Undecided => None,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        let rank = |v: Verdict| match v {
            Fails => 0,
            FailsUpToBound => 1,
            Undecided => 2,
            HoldsUpToBound => 3,
            Holds => 4,
        };
        if rank(self) <= rank(other) {
            self
        } else {
            other
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HoldsUpToBound => "holds-up-to-bound",
            Verdict::FailsUpToBound => "fails-up-to-bound",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedClassification {
    pub finitely_generated: Verdict,
    pub integral: Verdict,
    pub saturated: Verdict,
    pub torsion_free: Verdict,
    pub sharp: Verdict,
    pub weakly_toric: Verdict,
    pub toric: Verdict,
    pub rank: usize,
    pub group: GroupStructure,
    pub bound: usize,
}

fn degree(v: &[Int]) -> usize {
    v.iter().map(|x| x.to_usize().unwrap_or(usize::MAX)).sum()
}

impl PresentedMonoid {
    pub fn new(generators: usize, relations: Vec<(IntVec, IntVec)>) -> Result<Self> {
        for (i, (a, b)) in relations.iter().enumerate() {
            if a.len() != generators || b.len() != generators {
                return Err(Error::Dimension(format!("relation {i} does not have length {generators}")));
            }
            if a.iter().chain(b).any(|x| x.is_negative()) {
                return Err(Error::Dimension(format!("relation {i} has a negative entry")));
            }
        }
        Ok(PresentedMonoid { generators, relations })
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[(IntVec, IntVec)] {
        &self.relations
    }

    /// The largest degree of a relation side.
    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().map(|(a, b)| degree(a).max(degree(b))).max().unwrap_or(0)
    }

    /// `Z^m` modulo the differences of relation sides.
    fn difference_matrix(&self) -> IntMatrix {
        let cols: Vec<IntVec> = self.relations.iter().map(|(a, b)| arith::sub(a, b)).collect();
        if cols.is_empty() {
            IntMatrix::zeros(self.generators, 0)
        } else {
            IntMatrix::from_columns(&cols, self.generators).expect("lengths checked")
        }
    }

    pub fn groupification(&self) -> GroupStructure {
        let m = self.difference_matrix();
        let divisors = latcone::elementary_divisors(&m);
        let rank = divisors.iter().filter(|d| !d.is_zero()).count();
        GroupStructure {
            free_rank: self.generators - rank,
            torsion: divisors.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
        }
    }

    fn check_bound(&self, bound: usize, words: &[&[Int]]) -> Result<()> {
        let required = words.iter().map(|w| degree(w)).max().unwrap_or(0).max(self.max_relation_degree());
        if bound < required {
            return Err(Error::Bound { bound, required });
        }
        Ok(())
    }

    /// Decides `u ~ v` by congruence closure over words of degree at most `bound`.
    pub fn word_problem(&self, u: &[Int], v: &[Int], bound: usize) -> Result<WordResult> {
        if u.len() != self.generators || v.len() != self.generators {
            return Err(Error::Dimension("word length differs from generator count".into()));
        }
        if u.iter().chain(v).any(|x| x.is_negative()) {
            return Err(Error::Dimension("words must be natural vectors".into()));
        }
        self.check_bound(bound, &[u, v])?;
        let closure = Closure::build(self, bound);
        let (a, b) = (closure.index[u], closure.index[v]);
        let (ra, rb) = (closure.find(a), closure.find(b));
        Ok(if ra == rb {
            WordResult::Equal
        } else {
            WordResult::DistinctUpToBound { exhaustive: !closure.truncated[ra] && !closure.truncated[rb] }
        })
    }

    pub fn classify(&self, bound: usize) -> Result<PresentedClassification> {
        self.check_bound(bound, &[])?;
        let group = self.groupification();
        let torsion_free = Verdict::exact(group.torsion.is_empty());
        if self.relations.is_empty() {
            // free monoid N^m
            let h = Verdict::Holds;
            return Ok(PresentedClassification {
                finitely_generated: h,
                integral: h,
                saturated: h,
                torsion_free: h,
                sharp: h,
                weakly_toric: h,
                toric: h,
                rank: self.generators,
                group,
                bound,
            });
        }
        let closure = Closure::build(self, bound);

        // integrality: within each coset of the relation lattice the
        // congruence must have a single class
        let (_, u, _) = latcone::smith_normal_form(&self.difference_matrix());
        let divisors = latcone::elementary_divisors(&self.difference_matrix());
        let coset = |w: &IntVec| -> IntVec {
            let y = u.apply(w);
            y.iter()
                .enumerate()
                .map(|(i, x)| match divisors.get(i) {
                    Some(d) if !d.is_zero() => x.mod_floor_int(d),
                    _ => x.clone(),
                })
                .collect()
        };
        let mut by_coset: HashMap<IntVec, Vec<usize>> = HashMap::new();
        for (i, w) in closure.words.iter().enumerate() {
            let root = closure.find(i);
            let entry = by_coset.entry(coset(w)).or_default();
            if !entry.contains(&root) {
                entry.push(root);
            }
        }
        let mut integral = Verdict::HoldsUpToBound;
        for roots in by_coset.values() {
            if roots.len() > 1 {
                let exact = roots.iter().filter(|&&r| !closure.truncated[r]).count() >= 1;
                integral = if exact { Verdict::Fails } else { integral.and(Verdict::FailsUpToBound) };
                if exact {
                    break;
                }
            }
        }

        let zero = closure.find(closure.index[&arith::zero_vec(self.generators)]);
        let zero_class_size = (0..closure.words.len()).filter(|&i| closure.find(i) == zero).count();
        let sharp = if self.relations.iter().all(|(a, b)| !arith::is_zero(a) && !arith::is_zero(b)) {
            Verdict::Holds
        } else if zero_class_size > 1 {
            Verdict::Fails
        } else if closure.truncated[zero] {
            Verdict::HoldsUpToBound
        } else {
            Verdict::Holds
        };

        let saturated = if integral == Verdict::Fails || integral == Verdict::FailsUpToBound {
            integral
        } else if !group.torsion.is_empty() {
            if sharp == Verdict::Holds {
                // saturated and sharp force a torsion-free group
                Verdict::Fails
            } else {
                Verdict::Undecided
            }
        } else {
            // integral and torsion-free: P is the affine monoid of generator
            // images in P^gp = Z^r
            match self.affine_image() {
                Some(p) => {
                    if p.is_saturated() {
                        Verdict::HoldsUpToBound
                    } else {
                        Verdict::FailsUpToBound
                    }
                }
                None => Verdict::Undecided,
            }
        };
        let weakly_toric = Verdict::Holds.and(integral).and(saturated).and(torsion_free);
        let toric = weakly_toric.and(sharp);
        Ok(PresentedClassification {
            finitely_generated: Verdict::Holds,
            integral,
            saturated,
            torsion_free,
            sharp,
            weakly_toric,
            toric,
            rank: group.free_rank,
            group,
            bound,
        })
    }

    /// Images of the generators in the free part of `P^gp`.
    pub fn affine_image(&self) -> Option<AffineMonoid> {
        let m = self.difference_matrix();
        let (d, u, _) = latcone::smith_normal_form(&m);
        let rank = (0..m.rows().min(m.cols())).filter(|&i| !d[(i, i)].is_zero()).count();
        if (0..rank).any(|i| !d[(i, i)].is_one()) {
            return None;
        }
        let r = self.generators - rank;
        let gens = (0..self.generators)
            .map(|j| (rank..self.generators).map(|i| u[(i, j)].clone()).collect())
            .collect();
        AffineMonoid::new(r, gens).ok()
    }
}

trait ModFloor {
    fn mod_floor_int(&self, d: &Int) -> Int;
}

impl ModFloor for Int {
    fn mod_floor_int(&self, d: &Int) -> Int {
        use num_integer::Integer;
        self.mod_floor(d)
    }
}

/// Union-find over all words of degree at most `bound`.
struct Closure {
    words: Vec<IntVec>,
    index: HashMap<IntVec, usize>,
    parent: Vec<usize>,
    /// Per root: whether some relation move from the class leaves the bound.
    truncated: Vec<bool>,
}

impl Closure {
    fn build(p: &PresentedMonoid, bound: usize) -> Closure {
        let m = p.generators;
        let mut words = Vec::new();
        let mut current = vec![Int::zero(); m];
        enumerate(&mut current, 0, bound, &mut words);
        let index: HashMap<IntVec, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut c = Closure { parent: (0..words.len()).collect(), truncated: vec![false; words.len()], words, index };
        let mut leaks = vec![false; c.words.len()];
        for i in 0..c.words.len() {
            for (a, b) in &p.relations {
                for (from, to) in [(a, b), (b, a)] {
                    if c.words[i].iter().zip(from).all(|(x, f)| x >= f) {
                        let y = arith::add(&arith::sub(&c.words[i], from), to);
                        match c.index.get(&y) {
                            Some(&j) => c.union(i, j),
                            None => leaks[i] = true,
                        }
                    }
                }
            }
        }
        for i in 0..c.words.len() {
            if leaks[i] {
                let r = c.find(i);
                c.truncated[r] = true;
            }
        }
        c
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn enumerate(current: &mut IntVec, i: usize, budget: usize, out: &mut Vec<IntVec>) {
    if i == current.len() {
        out.push(current.clone());
        return;
    }
    for k in 0..=budget {
        current[i] = Int::from(k);
        enumerate(current, i + 1, budget - k, out);
    }
    current[i] = Int::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;

    fn rel(a: &[i64], b: &[i64]) -> (IntVec, IntVec) {
        (ivec(a), ivec(b))
    }

    /// generators a, b with a + b = 2a and 2b = 2a
    fn example_e() -> PresentedMonoid {
        PresentedMonoid::new(2, vec![rel(&[1, 1], &[2, 0]), rel(&[0, 2], &[2, 0])]).unwrap()
    }

    fn example_f() -> PresentedMonoid {
        PresentedMonoid::new(1, vec![rel(&[2], &[1])]).unwrap()
    }

    fn example_h() -> PresentedMonoid {
        PresentedMonoid::new(2, vec![rel(&[0, 2], &[2, 0])]).unwrap()
    }

    #[test]
    fn groups() {
        let h = example_h().groupification();
        assert_eq!((h.free_rank, h.torsion.clone()), (1, vec![Int::from(2)]));
        let f = example_f().groupification();
        assert_eq!((f.free_rank, f.torsion.len()), (0, 0));
        let free = PresentedMonoid::new(3, vec![]).unwrap().groupification();
        assert_eq!((free.free_rank, free.torsion.len()), (3, 0));
    }

    #[test]
    fn words() {
        let e = example_e();
        assert_eq!(
            e.word_problem(&ivec(&[1, 0]), &ivec(&[0, 1]), 6).unwrap(),
            WordResult::DistinctUpToBound { exhaustive: true }
        );
        assert_eq!(e.word_problem(&ivec(&[1, 1]), &ivec(&[2, 0]), 6).unwrap(), WordResult::Equal);
        assert_eq!(e.word_problem(&ivec(&[3, 1]), &ivec(&[3, 1]), 6).unwrap(), WordResult::Equal);
        assert!(e.word_problem(&ivec(&[1, 0]), &ivec(&[0, 1]), 1).is_err());
    }

    #[test]
    fn classifications() {
        let e = example_e().classify(6).unwrap();
        assert_eq!(e.integral, Verdict::Fails);
        assert_eq!(e.saturated, Verdict::Fails);
        assert_eq!(e.toric, Verdict::Fails);
        assert_eq!(e.sharp, Verdict::Holds);
        assert_eq!(e.torsion_free, Verdict::Holds);

        let f = example_f().classify(6).unwrap();
        assert_eq!(f.integral, Verdict::Fails);
        assert_eq!(f.sharp, Verdict::Holds);

        let h = example_h().classify(6).unwrap();
        assert_eq!(h.torsion_free, Verdict::Fails);
        assert_eq!(h.integral, Verdict::HoldsUpToBound);
        assert_eq!(h.toric, Verdict::Fails);

        let free = PresentedMonoid::new(2, vec![]).unwrap().classify(4).unwrap();
        assert_eq!(free.integral, Verdict::Holds);
        assert_eq!(free.toric, Verdict::Holds);
        assert!(example_e().classify(1).is_err());
    }

    #[test]
    fn affine_presentations() {
        // N^2 / (a = 2b) is N, saturated
        let p = PresentedMonoid::new(2, vec![rel(&[1, 0], &[0, 2])]).unwrap();
        let c = p.classify(6).unwrap();
        assert_eq!(c.integral, Verdict::HoldsUpToBound);
        assert_eq!(c.saturated, Verdict::HoldsUpToBound);
        assert_eq!(c.rank, 1);
        // group with a zero-sided relation: a + b = 0
        let g = PresentedMonoid::new(2, vec![rel(&[1, 1], &[0, 0])]).unwrap().classify(4).unwrap();
        assert_eq!(g.sharp, Verdict::Fails);
    }
}
