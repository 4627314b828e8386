//! Counting admissible covers with lifted markings over a finite group, as
//! exact groupoid cardinalities, together with the gluing, self-gluing and
//! equivariance checks and the boundary-stratum indexing.
//!
//! The count at genus g with monodromy tuple (γ₁..γₙ) is
//!   `(1/|G|) · #{(a⃗, b⃗, h⃗) ∈ G^(2g+n) : ∏[aᵢ,bᵢ] · ∏ hⱼγⱼhⱼ⁻¹ = 1}`,
//! an integer for n ≥ 1 because simultaneous translation of the hⱼ acts
//! freely on solutions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::enumerate::{enumerate_stable_graphs, StratumClass};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::loop_groupoid;
use crate::rational::Rat;
use crate::report::Report;

/// One isomorphism class of covers: a representative tuple
/// (a₁, b₁, .., a_g, b_g, h₁, .., hₙ). Two representatives are in one class
/// when they differ by φ ↦ gφg⁻¹ on the aᵢ, bᵢ and hⱼ ↦ ghⱼ; for n ≥ 1 the
/// representative is normalized to h₁ = identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverClass {
    pub genus: usize,
    pub monodromy: Vec<usize>,
    pub rep: Vec<usize>,
}

pub struct DWTheory {
    pub group: FiniteGroup,
    pub workers: usize,
    /// #{h : hγh⁻¹ = w} indexed by [γ][w]
    conj_count: Vec<Vec<u32>>,
    /// {h : hγh⁻¹ = w} indexed by [γ][w]
    conj_sols: Vec<Vec<Vec<usize>>>,
    /// least conjugate per element
    class_min: Vec<usize>,
    /// flat tables for the counting kernels
    mul_flat: Vec<u16>,
    comm_flat: Vec<u16>,
    conj_flat: Vec<u16>,
    memo: Mutex<BTreeMap<(usize, Vec<usize>), Rat>>,
}

fn stable_or_closed(genus: usize, n: usize) -> Result<()> {
    if 2 * (genus as i64) - 2 + (n as i64) > 0 || (n == 0 && genus >= 2) {
        Ok(())
    } else {
        Err(Error::Unstable {
            genus,
            legs: n,
            extra: " (closed surfaces need g >= 2)",
        })
    }
}

impl DWTheory {
    pub fn new(group: FiniteGroup) -> Self {
        Self::with_workers(group, 1)
    }

    pub fn with_workers(group: FiniteGroup, workers: usize) -> Self {
        let n = group.order;
        let mut conj_count = vec![vec![0u32; n]; n];
        let mut conj_sols = vec![vec![Vec::new(); n]; n];
        for gamma in 0..n {
            for h in 0..n {
                let w = group.conj(h, gamma);
                conj_count[gamma][w] += 1;
                conj_sols[gamma][w].push(h);
            }
        }
        let class_min = (0..n).map(|x| group.class_min(x)).collect();
        let mut mul_flat = vec![0u16; n * n];
        let mut comm_flat = vec![0u16; n * n];
        let mut conj_flat = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul_flat[a * n + b] = group.mul(a, b) as u16;
                comm_flat[a * n + b] = group.commutator(a, b) as u16;
                conj_flat[a * n + b] = group.conj(a, b) as u16;
            }
        }
        DWTheory {
            group,
            workers: workers.max(1),
            conj_count,
            conj_sols,
            class_min,
            mul_flat,
            comm_flat,
            conj_flat,
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    /// Canonical memo key: each monodromy replaced by the least element of
    /// its conjugacy class, then sorted. Sound once leg-wise conjugation and
    /// permutation invariance hold; those invariants are verified separately
    /// against the raw kernel.
    pub fn canonical_key(&self, genus: usize, tuple: &[usize]) -> (usize, Vec<usize>) {
        let mut t: Vec<usize> = tuple.iter().map(|&x| self.class_min[x]).collect();
        t.sort_unstable();
        (genus, t)
    }

    /// Memoized count.
    pub fn count(&self, genus: usize, tuple: &[usize]) -> Result<Rat> {
        stable_or_closed(genus, tuple.len())?;
        let key = self.canonical_key(genus, tuple);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = self.count_raw(genus, &key.1)?;
        let mut memo = self.memo.lock().unwrap();
        let entry = memo.entry(key).or_insert_with(|| value.clone());
        debug_assert_eq!(*entry, value, "memo table must be insert-once");
        Ok(value)
    }

    /// Unmemoized brute-force kernel; the oracle for the equivariance and
    /// memoization invariants.
    pub fn count_raw(&self, genus: usize, tuple: &[usize]) -> Result<Rat> {
        stable_or_closed(genus, tuple.len())?;
        let order = self.group.order as u128;
        let solutions = self.solution_count(genus, tuple);
        if !tuple.is_empty() {
            assert_eq!(
                solutions % order,
                0,
                "translation action must be free for n >= 1"
            );
            return Ok(Rat::from_integer(BigInt::from(solutions / order)));
        }
        Ok(Rat::new(BigInt::from(solutions), BigInt::from(order)))
    }

    /// #solutions of the defining relation; workers partition the first
    /// coordinate and reduce by exact addition.
    ///
    /// Free coordinates are a₁..b_g plus h₁..h_{n−1}; the last lifting is
    /// solved through the conjugation table. For n = 0 all 2g coordinates
    /// are free and the product must be the identity.
    fn solution_count(&self, genus: usize, tuple: &[usize]) -> u128 {
        let n = tuple.len();
        let order = self.group.order;
        let free = 2 * genus + n.saturating_sub(1);
        assert!(free > 0, "no free coordinates at desk scale");
        let chunk = |from: usize, to: usize| -> u128 {
            let mut total = 0u128;
            // depth-first with the running product carried down
            self.kernel(genus, tuple, 0, free, 0, from, to, &mut |p| {
                if n == 0 {
                    total += u128::from(p == 0);
                } else {
                    total +=
                        u128::from(self.conj_count[tuple[n - 1]][self.group.inv(p)]);
                }
            });
            total
        };
        if self.workers == 1 || order == 1 {
            return chunk(0, order);
        }
        let workers = self.workers.min(order);
        let mut bounds = Vec::new();
        for w in 0..workers {
            let from = w * order / workers;
            let to = (w + 1) * order / workers;
            if from < to {
                bounds.push((from, to));
            }
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|&(from, to)| scope.spawn(move || chunk(from, to)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    }

    /// Depth-first enumeration of the free coordinates with the prefix
    /// product carried down; `sink` receives the product of all complete
    /// factors. Handle pairs occupy depths 2i, 2i+1; liftings follow with
    /// monodromies tuple[0..]. Depth 0 ranges over [from, to).
    #[allow(clippy::too_many_arguments)]
    fn kernel(
        &self,
        genus: usize,
        tuple: &[usize],
        depth: usize,
        free: usize,
        prefix: usize,
        from: usize,
        to: usize,
        sink: &mut impl FnMut(usize),
    ) {
        let order = self.group.order;
        if depth == free {
            sink(prefix);
            return;
        }
        let (lo, hi) = if depth == 0 { (from, to) } else { (0, order) };
        if depth < 2 * genus {
            if depth % 2 == 0 {
                // choose `a`; the commutator completes at the partner depth
                for a in lo..hi {
                    self.kernel_pair(genus, tuple, depth, free, prefix, a, sink);
                }
            } else {
                unreachable!("odd handle depths are consumed by kernel_pair");
            }
        } else {
            let j = depth - 2 * genus;
            let gamma = tuple[j];
            for h in lo..hi {
                let q = self.mul_flat
                    [prefix * order + self.conj_flat[h * order + gamma] as usize]
                    as usize;
                self.kernel(genus, tuple, depth + 1, free, q, from, to, sink);
            }
        }
    }

    fn kernel_pair(
        &self,
        genus: usize,
        tuple: &[usize],
        depth: usize,
        free: usize,
        prefix: usize,
        a: usize,
        sink: &mut impl FnMut(usize),
    ) {
        let order = self.group.order;
        for b in 0..order {
            let q = self.mul_flat[prefix * order + self.comm_flat[a * order + b] as usize]
                as usize;
            self.kernel(genus, tuple, depth + 2, free, q, 0, order, sink);
        }
    }

    /// Orbit representatives of the solution set. For n ≥ 1 every orbit has
    /// exactly one representative with h₁ = identity; for n = 0 the orbits
    /// are conjugation orbits and the lexicographically least member is
    /// chosen.
    pub fn enumerate_covers(&self, genus: usize, tuple: &[usize]) -> Result<Vec<CoverClass>> {
        stable_or_closed(genus, tuple.len())?;
        let n = tuple.len();
        let order = self.group.order;
        let size = (order as u128).pow((2 * genus + n) as u32);
        if size > 10_000_000 {
            return Err(Error::BoundExceeded(format!(
                "cover enumeration over |G|^(2g+n) = {size} tuples"
            )));
        }
        let mut out = Vec::new();
        if n == 0 {
            // enumerate all solutions, reduce to lex-least conjugates
            let mut seen = BTreeSet::new();
            let free = 2 * genus;
            let mut coords = vec![0usize; free];
            loop {
                let mut p = 0usize;
                for i in 0..genus {
                    p = self
                        .group
                        .mul(p, self.group.commutator(coords[2 * i], coords[2 * i + 1]));
                }
                if p == 0 {
                    let canon = (0..order)
                        .map(|g| {
                            coords
                                .iter()
                                .map(|&x| self.group.conj(g, x))
                                .collect::<Vec<usize>>()
                        })
                        .min()
                        .unwrap();
                    if seen.insert(canon.clone()) {
                        out.push(CoverClass {
                            genus,
                            monodromy: Vec::new(),
                            rep: canon,
                        });
                    }
                }
                let mut pos = free;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    coords[pos] += 1;
                    if coords[pos] < order {
                        break;
                    }
                    coords[pos] = 0;
                }
                if coords.iter().all(|&x| x == 0) {
                    break;
                }
            }
        } else {
            // h₁ = identity normalizes each orbit exactly once; the last
            // lifting is solved from the relation through the conjugation
            // solution lists
            self.normalized_reps(genus, tuple, |rep| {
                out.push(CoverClass {
                    genus,
                    monodromy: tuple.to_vec(),
                    rep,
                });
            });
        }
        out.sort();
        Ok(out)
    }

    /// |enumerate_covers| for n ≥ 1 without materializing representatives:
    /// the same normalized iteration, counting instead of collecting. This
    /// is an independent path from `count`, which divides the full solution
    /// count by |G|.
    pub fn cover_class_count(&self, genus: usize, tuple: &[usize]) -> Result<u128> {
        stable_or_closed(genus, tuple.len())?;
        assert!(!tuple.is_empty(), "count classes via enumerate_covers for n = 0");
        let mut total = 0u128;
        self.normalized_count(genus, tuple, &mut total);
        Ok(total)
    }

    /// Iterate orbit representatives with h₁ = identity, solving the last
    /// lifting from the relation. Representatives are emitted in
    /// lexicographic coordinate order.
    fn normalized_reps(&self, genus: usize, tuple: &[usize], mut sink: impl FnMut(Vec<usize>)) {
        let n = tuple.len();
        let order = self.group.order;
        if n == 1 {
            let free = 2 * genus;
            let mut coords = vec![0usize; free];
            loop {
                let mut p = 0usize;
                for i in 0..genus {
                    p = self
                        .group
                        .mul(p, self.group.commutator(coords[2 * i], coords[2 * i + 1]));
                }
                if self.group.mul(p, tuple[0]) == 0 {
                    let mut rep = coords.clone();
                    rep.push(0);
                    sink(rep);
                }
                if !advance(&mut coords, order) {
                    break;
                }
            }
            return;
        }
        // free: a⃗, b⃗, h₂..h_{n−1}; h₁ = e; hₙ solved
        let free = 2 * genus + n - 2;
        let mut coords = vec![0usize; free];
        loop {
            let mut p = 0usize;
            for i in 0..genus {
                p = self
                    .group
                    .mul(p, self.group.commutator(coords[2 * i], coords[2 * i + 1]));
            }
            p = self.group.mul(p, tuple[0]); // h₁ = e
            for j in 1..n - 1 {
                let h = coords[2 * genus + j - 1];
                p = self.group.mul(p, self.group.conj(h, tuple[j]));
            }
            let needed = self.group.inv(p);
            for &hn in &self.conj_sols[tuple[n - 1]][needed] {
                let mut rep: Vec<usize> = coords[..2 * genus].to_vec();
                rep.push(0);
                rep.extend_from_slice(&coords[2 * genus..]);
                rep.push(hn);
                sink(rep);
            }
            if !advance(&mut coords, order) {
                break;
            }
        }
    }

    fn normalized_count(&self, genus: usize, tuple: &[usize], total: &mut u128) {
        let n = tuple.len();
        let order = self.group.order;
        if n == 1 {
            // only h₁ = e; the relation pins the commutator product
            self.kernel(genus, &[], 0, 2 * genus, 0, 0, order, &mut |p| {
                *total += u128::from(self.group.mul(p, tuple[0]) == 0);
            });
            return;
        }
        // h₁ = e contributes γ₁ directly; h₂..h_{n−1} free; hₙ solved
        let free = 2 * genus + n - 2;
        let mid = &tuple[1..n - 1];
        let shifted = ShiftedKernel {
            dw: self,
            first: tuple[0],
        };
        shifted.run(genus, mid, free, &mut |p| {
            *total += u128::from(self.conj_count[tuple[n - 1]][self.group.inv(p)]);
        });
    }

    /// The two-vertex gluing identity:
    /// count(g₁+g₂; α⃗, β⃗) = (1/|G|) Σ_γ count(g₁; α⃗, γ) · count(g₂; γ⁻¹, β⃗).
    pub fn check_two_vertex_gluing(
        &self,
        g1: usize,
        alpha: &[usize],
        g2: usize,
        beta: &[usize],
    ) -> Result<Report> {
        let mut rep = Report::new("two-vertex gluing");
        let mut joined = alpha.to_vec();
        joined.extend_from_slice(beta);
        let lhs = self.count(g1 + g2, &joined)?;
        let mut rhs = Rat::new(0.into(), 1.into());
        for gamma in 0..self.group.order {
            let mut left = alpha.to_vec();
            left.push(gamma);
            let mut right = vec![self.group.inv(gamma)];
            right.extend_from_slice(beta);
            rhs += self.count(g1, &left)? * self.count(g2, &right)?;
        }
        rhs /= Rat::from_integer(BigInt::from(self.group.order as i64));
        rep.check(lhs == rhs, || {
            format!(
                "gluing fails at g1={g1} α={alpha:?} g2={g2} β={beta:?}: lhs={lhs}, rhs={rhs}"
            )
        });
        Ok(rep)
    }

    /// The self-gluing identity:
    /// count(g+1; α⃗) = (1/|G|) Σ_γ count(g; α⃗, γ, γ⁻¹).
    pub fn check_self_gluing(&self, genus: usize, alpha: &[usize]) -> Result<Report> {
        let mut rep = Report::new("self gluing");
        let lhs = self.count(genus + 1, alpha)?;
        let mut rhs = Rat::new(0.into(), 1.into());
        for gamma in 0..self.group.order {
            let mut t = alpha.to_vec();
            t.push(gamma);
            t.push(self.group.inv(gamma));
            rhs += self.count(genus, &t)?;
        }
        rhs /= Rat::from_integer(BigInt::from(self.group.order as i64));
        rep.check(lhs == rhs, || {
            format!("self-gluing fails at g={genus} α={alpha:?}: lhs={lhs}, rhs={rhs}")
        });
        Ok(rep)
    }

    /// Invariance of the raw count under per-leg conjugation and leg
    /// permutation. Uses the unmemoized kernel on both sides, so it also
    /// certifies the canonicalization used by the memo table.
    pub fn check_equivariance(&self, genus: usize, tuple: &[usize]) -> Result<Report> {
        let mut rep = Report::new("equivariance");
        let base = self.count_raw(genus, tuple)?;
        for j in 0..tuple.len() {
            for h in 0..self.group.order {
                let mut t = tuple.to_vec();
                t[j] = self.group.conj(h, t[j]);
                let v = self.count_raw(genus, &t)?;
                rep.check(v == base, || {
                    format!("conjugation at leg {j} by {h} changes the count: {v} vs {base}")
                });
            }
        }
        let mut perm: Vec<usize> = (0..tuple.len()).collect();
        loop {
            let t: Vec<usize> = perm.iter().map(|&j| tuple[j]).collect();
            let v = self.count_raw(genus, &t)?;
            rep.check(v == base, || {
                format!("permutation {perm:?} changes the count: {v} vs {base}")
            });
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(rep)
    }

    /// Boundary strata: stable loop-groupoid-decorated graphs with the legs
    /// pinned to the monodromy tuple.
    pub fn boundary_strata(&self, genus: usize, tuple: &[usize]) -> Result<Vec<StratumClass>> {
        let colors = loop_groupoid(&self.group);
        enumerate_stable_graphs(&colors, genus, tuple.len(), Some(tuple))
    }
}

struct ShiftedKernel<'a> {
    dw: &'a DWTheory,
    first: usize,
}

impl ShiftedKernel<'_> {
    /// Enumerate a⃗, b⃗ and the middle liftings, feeding the sink the
    /// product ∏[a,b] · γ₁ · ∏ h γ h⁻¹ over the middle monodromies.
    fn run(&self, genus: usize, mid: &[usize], free: usize, sink: &mut impl FnMut(usize)) {
        let order = self.dw.group.order;
        debug_assert_eq!(free, 2 * genus + mid.len());
        self.dw.kernel(genus, &[], 0, 2 * genus, 0, 0, order, &mut |q| {
            let p = self.dw.group.mul(q, self.first);
            self.dw.lift_rec(mid, 0, p, sink);
        });
    }
}

impl DWTheory {
    fn lift_rec(&self, mid: &[usize], j: usize, prefix: usize, sink: &mut impl FnMut(usize)) {
        if j == mid.len() {
            sink(prefix);
            return;
        }
        let order = self.group.order;
        let gamma = mid[j];
        for h in 0..order {
            let q = self.mul_flat
                [prefix * order + self.conj_flat[h * order + gamma] as usize]
                as usize;
            self.lift_rec(mid, j + 1, q, sink);
        }
    }
}

/// Mixed-radix increment; false when the counter wraps to zero.
fn advance(coords: &mut [usize], base: usize) -> bool {
    let mut pos = coords.len();
    loop {
        if pos == 0 {
            return false;
        }
        pos -= 1;
        coords[pos] += 1;
        if coords[pos] < base {
            return true;
        }
        coords[pos] = 0;
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// All monodromy tuples of a given length.
pub fn all_tuples(order: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for x in 0..order {
                let mut t2 = t.clone();
                t2.push(x);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_by_name;
    use crate::rational::{rat_frac, rat_int};

    #[test]
    fn z2_baselines() {
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        assert_eq!(dw.count(0, &[0, 0, 0]).unwrap(), rat_int(4));
        assert_eq!(dw.count(0, &[0, 0, 1]).unwrap(), rat_int(0));
        assert_eq!(dw.count(1, &[0]).unwrap(), rat_int(4));
        assert_eq!(dw.count(2, &[]).unwrap(), rat_int(8));
    }

    #[test]
    fn s3_baseline() {
        let s3 = group_by_name("S3").unwrap();
        let t12 = s3.parse_element("213").unwrap();
        let dw = DWTheory::new(s3);
        assert_eq!(dw.count(0, &[t12, t12, 0]).unwrap(), rat_int(12));
    }

    #[test]
    fn abelian_counts_follow_product_constraint() {
        for name in ["Z2", "Z3", "Z4"] {
            let g = group_by_name(name).unwrap();
            let order = g.order;
            let dw = DWTheory::new(g);
            for t in all_tuples(order, 3) {
                let product = dw
                    .group
                    .mul(dw.group.mul(t[0], t[1]), t[2]);
                let expected = if product == 0 {
                    rat_int((order * order) as i64)
                } else {
                    rat_int(0)
                };
                assert_eq!(dw.count(0, &t).unwrap(), expected, "{name} {t:?}");
            }
        }
    }

    #[test]
    fn covers_match_counts() {
        for name in ["Z2", "Z3", "S3"] {
            let g = group_by_name(name).unwrap();
            let order = g.order;
            let dw = DWTheory::new(g);
            for t in all_tuples(order, 3) {
                let covers = dw.enumerate_covers(0, &t).unwrap();
                let count = dw.count_raw(0, &t).unwrap();
                assert_eq!(rat_int(covers.len() as i64), count, "{name} {t:?}");
            }
        }
    }

    #[test]
    fn unsatisfiable_abelian_tuple_has_no_covers() {
        let dw = DWTheory::new(group_by_name("Z3").unwrap());
        assert!(dw.enumerate_covers(0, &[1, 1, 0]).unwrap().is_empty());
    }

    #[test]
    fn z2_cover_class_count() {
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        let covers = dw.enumerate_covers(0, &[0, 0, 0]).unwrap();
        assert_eq!(covers.len(), 4);
        for c in &covers {
            assert_eq!(c.rep[0], 0, "normalized to h1 = identity");
        }
    }

    #[test]
    fn closed_surface_cardinality_can_be_fractional() {
        // n = 0 counts are genuine groupoid cardinalities
        let dw = DWTheory::new(group_by_name("S3").unwrap());
        let v = dw.count(2, &[]).unwrap();
        // |Hom(π₁Σ₂, S3)|/6; brute force gives the numerator
        let direct = dw.count_raw(2, &[]).unwrap();
        assert_eq!(v, direct);
        // the value for S3 happens to be integral? assert only exact match
        // with the enumeration-side cardinality
        let covers = dw.enumerate_covers(2, &[]).unwrap();
        let weighted: Rat = covers
            .iter()
            .map(|c| {
                // orbit of size |G|/|stab|: weight 1/|stab| each... sum of
                // 1/|stab| over orbits equals #solutions / |G|
                let stab = (0..dw.group.order)
                    .filter(|&g| {
                        c.rep.iter().all(|&x| dw.group.conj(g, x) == x)
                    })
                    .count();
                rat_frac(1, stab as i64)
            })
            .fold(rat_int(0), |a, b| a + b);
        assert_eq!(weighted, v);
    }

    #[test]
    fn gluing_example_z2() {
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        let rep = dw.check_two_vertex_gluing(0, &[0, 0], 0, &[0, 0]).unwrap();
        assert!(rep.pass, "{:?}", rep.violation);
        // LHS = 8, RHS = (1/2)(4·4 + 0)
        assert_eq!(dw.count(0, &[0, 0, 0, 0]).unwrap(), rat_int(8));
    }

    #[test]
    fn self_gluing_example_z2() {
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        let rep = dw.check_self_gluing(0, &[0]).unwrap();
        assert!(rep.pass, "{:?}", rep.violation);
        let closed = dw.check_self_gluing(1, &[]).unwrap();
        assert!(closed.pass, "{:?}", closed.violation);
    }

    #[test]
    fn equivariance_s3_triples() {
        let s3 = group_by_name("S3").unwrap();
        let dw = DWTheory::new(s3);
        let t12 = dw.group.parse_element("213").unwrap();
        let t13 = dw.group.parse_element("321").unwrap();
        let c132 = dw.group.parse_element("312").unwrap();
        let rep = dw.check_equivariance(0, &[t12, t13, c132]).unwrap();
        assert!(rep.pass, "{:?}", rep.violation);
    }

    #[test]
    fn workers_agree() {
        let s3 = group_by_name("S3").unwrap();
        let dw1 = DWTheory::with_workers(s3.clone(), 1);
        let dw8 = DWTheory::with_workers(s3, 8);
        for t in all_tuples(6, 3).into_iter().step_by(7) {
            assert_eq!(dw1.count_raw(0, &t).unwrap(), dw8.count_raw(0, &t).unwrap());
        }
        assert_eq!(dw1.count_raw(1, &[3]).unwrap(), dw8.count_raw(1, &[3]).unwrap());
        assert_eq!(dw1.count_raw(2, &[]).unwrap(), dw8.count_raw(2, &[]).unwrap());
    }

    #[test]
    fn unstable_inputs_rejected() {
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        assert!(dw.count(0, &[0, 0]).is_err());
        assert!(dw.count(0, &[]).is_err());
        assert!(dw.count(1, &[]).is_err());
        assert!(dw.count(2, &[]).is_ok());
    }

    #[test]
    fn boundary_strata_cases() {
        // (0,3): single stratum
        let dw = DWTheory::new(group_by_name("Z2").unwrap());
        let strata = dw.boundary_strata(0, &[0, 0, 0]).unwrap();
        assert_eq!(strata.len(), 1);
        // (1,1) over Z2 with identity leg: corolla + loop decorated by each
        // γ ∈ {1, σ}
        let strata = dw.boundary_strata(1, &[0]).unwrap();
        assert_eq!(strata.len(), 3);
        // (0,4) over the trivial group: the 4 classical strata
        let dw1 = DWTheory::new(group_by_name("trivial").unwrap());
        let strata = dw1.boundary_strata(0, &[0, 0, 0, 0]).unwrap();
        assert_eq!(strata.len(), 4);
    }

    #[test]
    fn cover_class_count_matches_enumeration() {
        for name in ["Z3", "S3", "Q8"] {
            let g = group_by_name(name).unwrap();
            let order = g.order;
            let dw = DWTheory::new(g);
            for t in all_tuples(order, 3).into_iter().step_by(5) {
                assert_eq!(
                    dw.cover_class_count(0, &t).unwrap(),
                    dw.enumerate_covers(0, &t).unwrap().len() as u128,
                    "{name} {t:?}"
                );
            }
            for t in all_tuples(order, 1) {
                assert_eq!(
                    dw.cover_class_count(1, &t).unwrap(),
                    dw.enumerate_covers(1, &t).unwrap().len() as u128
                );
            }
        }
    }

    #[test]
    fn memoization_matches_raw() {
        let q8 = group_by_name("Q8").unwrap();
        let dw = DWTheory::new(q8);
        for t in all_tuples(8, 3).into_iter().step_by(11) {
            assert_eq!(dw.count(0, &t).unwrap(), dw.count_raw(0, &t).unwrap());
        }
    }
}
