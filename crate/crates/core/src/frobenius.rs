//! Graded Frobenius data attached to a finite group: per-color state
//! spaces with a group action, an inverse-supported metric, three-point
//! correlators, and the axiom checkers that tie them to the counting
//! theory: support/grading, equivariance, metric nondegeneracy, form-level
//! factorization through one-edge strata, trace consistency, state sums
//! over strata, and the module structure over the loop-groupoid algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dw::{all_tuples, DWTheory};
use crate::error::{Error, Result};
use crate::graph::{CGraph, DualGraph};
use crate::group::FiniteGroup;
use crate::groupoid::{groupoid_algebra, loop_groupoid};
use crate::linalg::{multi_indices, MultiForm, RatMatrix};
use crate::rational::Rat;
use crate::report::Report;

/// Graded Frobenius data: dimensions per color, action matrices
/// `action[g][γ] : H_γ → H_{gγg⁻¹}`, metric blocks on inverse color pairs,
/// three-point correlators per color triple, and optionally the one-point
/// genus-one correlator.
#[derive(Debug, Clone)]
pub struct GFrobeniusData {
    pub group: FiniteGroup,
    pub dims: Vec<usize>,
    pub action: Vec<Vec<RatMatrix>>,
    pub metric: BTreeMap<(usize, usize), RatMatrix>,
    pub lambda3: BTreeMap<(usize, usize, usize), MultiForm>,
    pub lambda11: Option<BTreeMap<usize, Vec<Rat>>>,
}

/// Correlators for higher vertices, keyed by (genus, color tuple).
#[derive(Debug, Clone, Default)]
pub struct CorrelatorTable {
    pub entries: BTreeMap<(usize, Vec<usize>), MultiForm>,
}

impl CorrelatorTable {
    /// Build the table of count forms for the given keys.
    pub fn from_counts(dw: &DWTheory, keys: &[(usize, usize)]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for &(genus, n) in keys {
            for t in all_tuples(dw.group.order, n) {
                let mut f = MultiForm::zero(vec![1; n]);
                let value = dw.count(genus, &t)?;
                let idx = vec![0; n];
                f.set(&idx, value);
                entries.insert((genus, t), f);
            }
        }
        Ok(CorrelatorTable { entries })
    }

    /// Wreath equivariance of every entry: simultaneous conjugation of the
    /// colors with the induced action on the factors leaves the form
    /// invariant, and leg permutations act by factor permutation.
    pub fn check_equivariance(&self, a: &GFrobeniusData) -> Report {
        let mut rep = Report::new("correlator table equivariance");
        let group = &a.group;
        for ((genus, colors), f) in &self.entries {
            let n = colors.len();
            for g in 0..group.order {
                let key2: Vec<usize> = colors.iter().map(|&c| group.conj(g, c)).collect();
                let Some(f2) = self.entries.get(&(*genus, key2.clone())) else {
                    rep.fail(format!("table not closed under conjugation at {key2:?}"));
                    return rep;
                };
                let mats: Vec<&RatMatrix> =
                    colors.iter().map(|&c| &a.action[g][c]).collect();
                for idx in multi_indices(&f.dims) {
                    let mut total = Rat::zero();
                    for jdx in multi_indices(&f2.dims) {
                        let mut c = f2.get(&jdx).clone();
                        if c.is_zero() {
                            continue;
                        }
                        for s in 0..n {
                            c *= &mats[s][(jdx[s], idx[s])];
                            if c.is_zero() {
                                break;
                            }
                        }
                        total += c;
                    }
                    rep.check(total == *f.get(&idx), || {
                        format!("entry ({genus}, {colors:?}) not invariant under g = {g}")
                    });
                }
            }
            // adjacent transpositions generate the permutations
            for s in 0..n.saturating_sub(1) {
                let mut key2 = colors.clone();
                key2.swap(s, s + 1);
                let Some(f2) = self.entries.get(&(*genus, key2)) else {
                    rep.fail("table not closed under permutation".to_string());
                    return rep;
                };
                for idx in multi_indices(&f.dims) {
                    let mut jdx = idx.clone();
                    jdx.swap(s, s + 1);
                    rep.check(f.get(&idx) == f2.get(&jdx), || {
                        format!("entry ({genus}, {colors:?}) not permutation invariant")
                    });
                }
            }
        }
        rep
    }
}

impl GFrobeniusData {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Inverse-metric coefficients `κ_δ[i][j]` on H_δ ⊗ H_{δ⁻¹}, defined
    /// by `Σ_j M_δ[i][j] κ_δ[i'][j] = δ_{i,i'}`; the 1/|G| edge weight of the
    /// lifting-forgetting quotient is exactly this inverse on the
    /// one-dimensional blocks.
    pub fn metric_inverse(&self, delta: usize) -> Result<RatMatrix> {
        let inv = self.group.inv(delta);
        let m = self
            .metric
            .get(&(delta, inv))
            .ok_or_else(|| Error::validation(format!("metric block ({delta}, {inv}) missing")))?;
        let k = m
            .inverse()
            .ok_or_else(|| Error::validation(format!("metric block at {delta} is singular")))?;
        Ok(k.transpose())
    }

    /// The correlator attached to a vertex: (0,3) from the three-point
    /// table, (1,1) from the one-point table when present.
    pub fn vertex_correlator(
        &self,
        genus: usize,
        colors: &[usize],
        extra: Option<&CorrelatorTable>,
    ) -> Result<MultiForm> {
        if genus == 0 && colors.len() == 3 {
            if let Some(f) = self.lambda3.get(&(colors[0], colors[1], colors[2])) {
                return Ok(f.clone());
            }
        }
        if genus == 1 && colors.len() == 1 {
            if let Some(l11) = &self.lambda11 {
                if let Some(v) = l11.get(&colors[0]) {
                    return Ok(MultiForm {
                        dims: vec![self.dims[colors[0]]],
                        data: v.clone(),
                    });
                }
            }
        }
        if let Some(t) = extra {
            if let Some(f) = t.entries.get(&(genus, colors.to_vec())) {
                return Ok(f.clone());
            }
        }
        Err(Error::validation(format!(
            "missing vertex correlator at genus {genus}, colors {colors:?}"
        )))
    }

    /// Contract vertex correlators along the edges of a stable stratum
    /// shape, summing each edge over the metric-dual basis. The result is a
    /// multilinear form on the leg factors, ordered by leg label.
    pub fn state_sum(
        &self,
        shape: &DualGraph,
        leg_colors: &[usize],
        extra: Option<&CorrelatorTable>,
    ) -> Result<MultiForm> {
        let graph = &shape.graph;
        if leg_colors.len() != graph.n_legs() {
            return Err(Error::bad_input("one leg color per leg required"));
        }
        let edges = graph.edges();
        let mut result = MultiForm::zero(
            leg_colors.iter().map(|&c| self.dims[c]).collect(),
        );
        let order = self.group.order;
        // edge color assignments: the flag pair of edge e is colored
        // (δ_e, δ_e⁻¹)
        let mut assignment = vec![0usize; edges.len()];
        loop {
            // flag colors under this assignment
            let mut colors = vec![usize::MAX; graph.n_flags];
            for (label, &f) in graph.legs.iter().enumerate() {
                colors[f] = leg_colors[label];
            }
            for (e, &(a, b)) in edges.iter().enumerate() {
                colors[a] = assignment[e];
                colors[b] = self.group.inv(assignment[e]);
            }
            // vertex correlators
            let mut vertex_forms = Vec::with_capacity(graph.n_vertices);
            for v in 0..graph.n_vertices {
                let flags = graph.flags_of(v);
                let vcols: Vec<usize> = flags.iter().map(|&f| colors[f]).collect();
                let f = self.vertex_correlator(shape.genus[v], &vcols, extra)?;
                vertex_forms.push((flags, f));
            }
            // inverse metric per edge
            let kappas: Vec<RatMatrix> = assignment
                .iter()
                .map(|&d| self.metric_inverse(d))
                .collect::<Result<_>>()?;
            // contract: iterate basis indices per flag
            let flag_dims: Vec<usize> = (0..graph.n_flags).map(|f| self.dims[colors[f]]).collect();
            for idx in multi_indices(&flag_dims) {
                let mut coeff = Rat::new(1.into(), 1.into());
                for (flags, form) in &vertex_forms {
                    let local: Vec<usize> = flags.iter().map(|&f| idx[f]).collect();
                    coeff *= form.get(&local);
                    if coeff.is_zero() {
                        break;
                    }
                }
                if coeff.is_zero() {
                    continue;
                }
                for (e, &(a, b)) in edges.iter().enumerate() {
                    coeff *= &kappas[e][(idx[a], idx[b])];
                    if coeff.is_zero() {
                        break;
                    }
                }
                if coeff.is_zero() {
                    continue;
                }
                let leg_idx: Vec<usize> = graph.legs.iter().map(|&f| idx[f]).collect();
                result.add_at(&leg_idx, &coeff);
            }
            // advance assignment
            let mut pos = 0;
            loop {
                if pos == edges.len() {
                    return Ok(result);
                }
                assignment[pos] += 1;
                if assignment[pos] < order {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Convenience wrapper taking a decorated stratum: only its underlying
    /// shape and leg colors enter, the edge sum running over all metric-dual
    /// decorations.
    pub fn state_sum_graph(&self, g: &CGraph, extra: Option<&CorrelatorTable>) -> Result<MultiForm> {
        self.state_sum(&g.dual, &g.leg_colors(), extra)
    }

    /// Derived product constants: the matrix H_{γ₁} ⊗ H_{γ₂} → H_δ obtained
    /// by contracting Λ₀₃(γ₁, γ₂, δ⁻¹) with the inverse metric.
    pub fn product_component(&self, g1: usize, g2: usize, delta: usize) -> Result<RatMatrix> {
        let dinv = self.group.inv(delta);
        let lam = self
            .lambda3
            .get(&(g1, g2, dinv))
            .ok_or_else(|| Error::validation("three-point correlator missing"))?;
        let kappa = self.metric_inverse(dinv)?; // on H_{δ⁻¹} ⊗ H_δ
        let (d1, d2, dk) = (self.dims[g1], self.dims[g2], self.dims[dinv]);
        let dd = self.dims[delta];
        let mut m = RatMatrix::zero(dd, d1 * d2);
        for i in 0..d1 {
            for j in 0..d2 {
                for k in 0..dk {
                    let c = lam.get(&[i, j, k]);
                    if c.is_zero() {
                        continue;
                    }
                    for l in 0..dd {
                        let w = c * &kappa[(k, l)];
                        m[(l, i * d2 + j)] += w;
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Degree-zero data of the counting theory: one-dimensional state spaces
/// H_γ, metric |G|·[δ = γ⁻¹], correlators given by the admissible-cover
/// counts, and the conjugation action.
pub fn dw_frobenius(dw: &DWTheory) -> Result<GFrobeniusData> {
    let group = dw.group.clone();
    let n = group.order;
    let dims = vec![1usize; n];
    let action: Vec<Vec<RatMatrix>> = (0..n)
        .map(|_g| (0..n).map(|_| RatMatrix::identity(1)).collect())
        .collect();
    let mut metric = BTreeMap::new();
    for gamma in 0..n {
        let mut m = RatMatrix::zero(1, 1);
        m[(0, 0)] = Rat::from_integer(BigInt::from(n as i64));
        metric.insert((gamma, group.inv(gamma)), m);
    }
    let mut lambda3 = BTreeMap::new();
    for t in all_tuples(n, 3) {
        let mut f = MultiForm::zero(vec![1, 1, 1]);
        f.set(&[0, 0, 0], dw.count(0, &t)?);
        lambda3.insert((t[0], t[1], t[2]), f);
    }
    let mut lambda11 = BTreeMap::new();
    for gamma in 0..n {
        lambda11.insert(gamma, vec![dw.count(1, &[gamma])?]);
    }
    Ok(GFrobeniusData {
        group,
        dims,
        action,
        metric,
        lambda3,
        lambda11: Some(lambda11),
    })
}

/// Is the monodromy equation γ₁ · h₂γ₂h₂⁻¹ · h₃γ₃h₃⁻¹ = 1 solvable?
fn triple_solvable(group: &FiniteGroup, g1: usize, g2: usize, g3: usize) -> bool {
    for h2 in 0..group.order {
        let c2 = group.conj(h2, g2);
        for h3 in 0..group.order {
            let c3 = group.conj(h3, g3);
            if group.mul(group.mul(g1, c2), c3) == 0 {
                return true;
            }
        }
    }
    false
}

/// Verify the graded-Frobenius axioms. Reports the first witness per axiom.
pub fn check_gfrobenius(a: &GFrobeniusData) -> Report {
    let mut rep = Report::new("g-frobenius");
    let group = &a.group;
    let n = group.order;

    // shape sanity
    if a.dims.len() != n || a.action.len() != n {
        rep.fail("tables not sized by the group");
        return rep;
    }
    for g in 0..n {
        for gamma in 0..n {
            let m = &a.action[g][gamma];
            if m.cols != a.dims[gamma] || m.rows != a.dims[group.conj(g, gamma)] {
                rep.fail(format!("action[{g}][{gamma}] has the wrong shape"));
                return rep;
            }
        }
    }

    // (a) grading/support: nonzero correlators only on solvable monodromy
    // triples; for abelian groups this is literally γ₁γ₂γ₃ = 1, so the
    // derived product lands in H_{γ₁γ₂}.
    for (&(g1, g2, g3), f) in &a.lambda3 {
        if !f.is_zero() {
            rep.check(triple_solvable(group, g1, g2, g3), || {
                format!("grading: Λ₀₃({g1},{g2},{g3}) nonzero on an unsolvable monodromy triple")
            });
        }
    }
    if group.is_abelian() {
        for (&(g1, g2, g3), f) in &a.lambda3 {
            if !f.is_zero() {
                rep.check(group.mul(group.mul(g1, g2), g3) == 0, || {
                    format!("grading: abelian support must satisfy γ₁γ₂γ₃ = 1 at ({g1},{g2},{g3})")
                });
            }
        }
        // product lands in the product grade
        for g1 in 0..n {
            for g2 in 0..n {
                for delta in 0..n {
                    if delta == group.mul(g1, g2) {
                        continue;
                    }
                    if let Ok(m) = a.product_component(g1, g2, delta) {
                        rep.check(m.is_zero(), || {
                            format!("grading: product of grades ({g1},{g2}) leaks into {delta}")
                        });
                    }
                }
            }
        }
    }

    // (b) loop-groupoid representation and equivariance
    for gamma in 0..n {
        rep.check(a.action[0][gamma] == RatMatrix::identity(a.dims[gamma]), || {
            format!("representation: identity must act trivially on H_{gamma}")
        });
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            for gamma in 0..n {
                let mid = group.conj(h, gamma);
                let lhs = a.action[g][mid].mul(&a.action[h][gamma]);
                rep.check(lhs == a.action[gh][gamma], || {
                    format!("representation: group law fails at (g={g}, h={h}, γ={gamma})")
                });
            }
        }
    }
    // metric equivariance: η(ρ(g)v, ρ(g)w) = η(v, w)
    for g in 0..n {
        for gamma in 0..n {
            let ginv = group.inv(gamma);
            let (Some(m), Some(m2)) = (
                a.metric.get(&(gamma, ginv)),
                a.metric.get(&(group.conj(g, gamma), group.conj(g, ginv))),
            ) else {
                rep.fail(format!("metric block missing at γ = {gamma}"));
                return rep;
            };
            let lhs = a.action[g][gamma].transpose().mul(&m2.mul(&a.action[g][ginv]));
            rep.check(lhs == *m, || {
                format!("equivariance: metric not invariant under g = {g} at γ = {gamma}")
            });
        }
    }
    // correlator equivariance: simultaneous conjugation of all legs
    for g in 0..n {
        for (&(g1, g2, g3), f) in &a.lambda3 {
            let key2 = (group.conj(g, g1), group.conj(g, g2), group.conj(g, g3));
            let Some(f2) = a.lambda3.get(&key2) else {
                rep.fail(format!("correlator table not closed under conjugation at {key2:?}"));
                return rep;
            };
            let mats = [&a.action[g][g1], &a.action[g][g2], &a.action[g][g3]];
            for idx in multi_indices(&f.dims) {
                // Λ'(ρ v₁, ρ v₂, ρ v₃) on basis vectors
                let mut total = Rat::zero();
                for jdx in multi_indices(&f2.dims) {
                    let mut c = f2.get(&jdx).clone();
                    if c.is_zero() {
                        continue;
                    }
                    for s in 0..3 {
                        c *= &mats[s][(jdx[s], idx[s])];
                        if c.is_zero() {
                            break;
                        }
                    }
                    total += c;
                }
                rep.check(total == *f.get(&idx), || {
                    format!("equivariance: Λ₀₃ not invariant under g = {g} at ({g1},{g2},{g3})")
                });
            }
        }
    }
    // permutation invariance of the correlators (legs of a corolla are
    // unordered up to the wreath action)
    for (&(g1, g2, g3), f) in &a.lambda3 {
        let perms: [([usize; 3], (usize, usize, usize)); 2] =
            [([1, 0, 2], (g2, g1, g3)), ([0, 2, 1], (g1, g3, g2))];
        for (p, key2) in perms {
            let Some(f2) = a.lambda3.get(&key2) else {
                rep.fail("correlator table not closed under permutation".to_string());
                return rep;
            };
            for idx in multi_indices(&f.dims) {
                let jdx: Vec<usize> = p.iter().map(|&s| idx[s]).collect();
                rep.check(f.get(&idx) == f2.get(&jdx), || {
                    format!("permutation invariance fails at ({g1},{g2},{g3})")
                });
            }
        }
    }

    // (c) metric support, symmetry, nondegeneracy
    for (&(g1, g2), m) in &a.metric {
        rep.check(g2 == group.inv(g1), || {
            format!("metric supported off the inverse pairs at ({g1},{g2})")
        });
        rep.check(m.rows == a.dims[g1] && m.cols == a.dims[g2], || {
            format!("metric block ({g1},{g2}) has the wrong shape")
        });
        if let Some(m2) = a.metric.get(&(g2, g1)) {
            rep.check(*m == m2.transpose(), || {
                format!("metric not symmetric across ({g1},{g2})")
            });
        } else {
            rep.fail(format!("metric block ({g2},{g1}) missing"));
        }
        rep.check(m.inverse().is_some(), || {
            format!("metric degenerate on block ({g1},{g2})")
        });
    }
    for gamma in 0..n {
        rep.check(a.metric.contains_key(&(gamma, group.inv(gamma))), || {
            format!("metric block missing at γ = {gamma}")
        });
    }

    // (d) factorization of the four-point form through one-edge strata: the
    // three pairings agree as multilinear forms (and hence the derived
    // product is associative)
    for t in all_tuples(n, 4) {
        let f1 = factorization_form(a, &t, [0, 1, 2, 3]);
        let f2 = factorization_form(a, &t, [0, 2, 1, 3]);
        let f3 = factorization_form(a, &t, [0, 3, 1, 2]);
        match (f1, f2, f3) {
            (Ok(f1), Ok(f2), Ok(f3)) => {
                rep.check(f1 == f2 && f1 == f3, || {
                    format!("factorization forms disagree at {t:?}")
                });
            }
            _ => {
                rep.fail(format!("factorization form could not be computed at {t:?}"));
                return rep;
            }
        }
        if !rep.pass {
            return rep;
        }
    }

    // (e) trace: the self-glued three-point correlator matches Λ₁₁
    if let Some(l11) = &a.lambda11 {
        for gamma in 0..n {
            let derived = match trace_form(a, gamma) {
                Ok(d) => d,
                Err(e) => {
                    rep.fail(format!("trace form failed at γ = {gamma}: {e}"));
                    return rep;
                }
            };
            let Some(given) = l11.get(&gamma) else {
                rep.fail(format!("Λ₁₁ missing at γ = {gamma}"));
                return rep;
            };
            rep.check(derived == *given, || {
                format!("trace: self-glued correlator differs from Λ₁₁ at γ = {gamma}")
            });
        }
    } else {
        // define the trace and check its leg-color equivariance
        for gamma in 0..n {
            let base = match trace_form(a, gamma) {
                Ok(b) => b,
                Err(e) => {
                    rep.fail(format!("trace form failed at γ = {gamma}: {e}"));
                    return rep;
                }
            };
            for g in 0..n {
                let conj = group.conj(g, gamma);
                let other = trace_form(a, conj).unwrap();
                let pushed = a.action[g][gamma].transpose().apply(&other);
                rep.check(pushed == base, || {
                    format!("trace not equivariant at γ = {gamma}, g = {g}")
                });
            }
        }
    }
    rep
}

/// The four-point form factored through the one-edge stratum pairing legs
/// (split[0], split[1] | split[2], split[3]).
fn factorization_form(
    a: &GFrobeniusData,
    colors: &[usize],
    split: [usize; 4],
) -> Result<MultiForm> {
    let group = &a.group;
    let n = group.order;
    let dims: Vec<usize> = colors.iter().map(|&c| a.dims[c]).collect();
    let mut out = MultiForm::zero(dims.clone());
    for delta in 0..n {
        let dinv = group.inv(delta);
        let (Some(l), Some(r)) = (
            a.lambda3
                .get(&(colors[split[0]], colors[split[1]], delta)),
            a.lambda3
                .get(&(dinv, colors[split[2]], colors[split[3]])),
        ) else {
            return Err(Error::validation("correlator table incomplete"));
        };
        let kappa = a.metric_inverse(delta)?;
        for idx in multi_indices(&dims) {
            let mut total = Rat::zero();
            for i in 0..a.dims[delta] {
                for j in 0..a.dims[dinv] {
                    let c = l.get(&[idx[split[0]], idx[split[1]], i])
                        * r.get(&[j, idx[split[2]], idx[split[3]]])
                        * &kappa[(i, j)];
                    total += c;
                }
            }
            if !total.is_zero() {
                out.add_at(&idx, &total);
            }
        }
    }
    Ok(out)
}

/// The self-glued three-point correlator (1/|G| per edge through the
/// metric-dual sum): a linear form on H_γ.
fn trace_form(a: &GFrobeniusData, gamma: usize) -> Result<Vec<Rat>> {
    let group = &a.group;
    let mut out = vec![Rat::zero(); a.dims[gamma]];
    for delta in 0..group.order {
        let dinv = group.inv(delta);
        let Some(l) = a.lambda3.get(&(gamma, delta, dinv)) else {
            return Err(Error::validation("correlator table incomplete"));
        };
        let kappa = a.metric_inverse(delta)?;
        for (v, item) in out.iter_mut().enumerate() {
            for i in 0..a.dims[delta] {
                for j in 0..a.dims[dinv] {
                    *item += l.get(&[v, i, j]) * &kappa[(i, j)];
                }
            }
        }
    }
    Ok(out)
}

/// Assemble the loop-groupoid algebra action from the grading projections
/// and the group action, and verify the module axioms against the algebra's
/// product table.
pub fn drinfeld_module_check(a: &GFrobeniusData) -> Report {
    let grading: Vec<usize> = (0..a.group.order).collect();
    drinfeld_module_check_with(a, &grading)
}

/// Variant with an explicit grading table: the basis morphism (γ, g) acts
/// through the projection onto `H_(grading[γ])`. The module axioms hold only
/// for the identity grading; a scrambled table exhibits a failure witness.
pub fn drinfeld_module_check_with(a: &GFrobeniusData, grading: &[usize]) -> Report {
    let mut rep = Report::new("drinfeld module");
    let group = &a.group;
    let n = group.order;
    let colors = loop_groupoid(group);
    let alg = groupoid_algebra(&colors.groupoid);
    let total = a.total_dim();
    let mut offsets = vec![0usize; n];
    let mut acc = 0;
    for gamma in 0..n {
        offsets[gamma] = acc;
        acc += a.dims[gamma];
    }
    // basis morphism (γ, g) acts by projecting to the grade of γ, then
    // applying g
    let act = |m: usize| -> RatMatrix {
        let (gamma, g) = (m / n, m % n);
        let src = grading[gamma];
        let mut out = RatMatrix::zero(total, total);
        let target = group.conj(g, src);
        let mat = &a.action[g][src];
        for i in 0..a.dims[target] {
            for j in 0..a.dims[src] {
                out[(offsets[target] + i, offsets[src] + j)] = mat[(i, j)].clone();
            }
        }
        out
    };
    let actions: Vec<RatMatrix> = (0..alg.dimension).map(act).collect();
    // unit acts as the identity
    let mut unit = RatMatrix::zero(total, total);
    for &i in &alg.unit_support {
        for r in 0..total {
            for c in 0..total {
                let v = &unit[(r, c)] + &actions[i][(r, c)];
                unit[(r, c)] = v;
            }
        }
    }
    rep.check(unit == RatMatrix::identity(total), || {
        "unit of k[ℒG] does not act as the identity".to_string()
    });
    // module law against the product table
    for f in 0..alg.dimension {
        for h in 0..alg.dimension {
            let lhs = actions[f].mul(&actions[h]);
            let rhs = match alg.product[f][h] {
                Some(k) => actions[k].clone(),
                None => RatMatrix::zero(total, total),
            };
            rep.check(lhs == rhs, || {
                format!("module law fails on basis morphisms ({f}, {h})")
            });
            if !rep.pass {
                return rep;
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_by_name;
    use crate::rational::rat_int;

    fn theory(name: &str) -> (DWTheory, GFrobeniusData) {
        let dw = DWTheory::new(group_by_name(name).unwrap());
        let frob = dw_frobenius(&dw).unwrap();
        (dw, frob)
    }

    #[test]
    fn abelian_product_is_scaled_group_algebra() {
        let (_, frob) = theory("Z3");
        let g = &frob.group;
        for g1 in 0..3 {
            for g2 in 0..3 {
                for delta in 0..3 {
                    let m = frob.product_component(g1, g2, delta).unwrap();
                    if delta == g.mul(g1, g2) {
                        assert_eq!(m[(0, 0)], rat_int(3), "e_{g1}∗e_{g2} = |G|·e_(γ₁γ₂)");
                    } else {
                        assert!(m.is_zero());
                    }
                }
            }
        }
        // (1/|G|)·e_identity is a two-sided unit for abelian groups: its
        // product with e_γ has coefficient |G|/|G| = 1
        let m = frob.product_component(0, 1, 1).unwrap();
        assert_eq!(m[(0, 0)], rat_int(3));
    }

    #[test]
    fn frobenius_axioms_pass_for_all_groups() {
        for name in ["Z2", "Z3", "Z4", "S3", "Q8"] {
            let (_, frob) = theory(name);
            let rep = check_gfrobenius(&frob);
            assert!(rep.pass, "{name}: {:?}", rep.violation);
        }
    }

    #[test]
    fn trivial_group_reduces_to_classical_frobenius() {
        let (_, frob) = theory("trivial");
        assert_eq!(frob.total_dim(), 1);
        let rep = check_gfrobenius(&frob);
        assert!(rep.pass, "{:?}", rep.violation);
    }

    #[test]
    fn mutated_correlator_fails_wdvv() {
        let (_, mut frob) = theory("S3");
        let key = *frob.lambda3.keys().nth(7).unwrap();
        let f = frob.lambda3.get_mut(&key).unwrap();
        let v = f.get(&[0, 0, 0]) + rat_int(1);
        f.set(&[0, 0, 0], v);
        let rep = check_gfrobenius(&frob);
        assert!(!rep.pass);
        assert!(rep.violation.is_some());
    }

    #[test]
    fn state_sum_single_vertex_is_lambda3() {
        let (dw, frob) = theory("S3");
        let corolla = crate::graph::Graph::new(1, vec![0, 0, 0], vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let shape = DualGraph::new(corolla, vec![0]).unwrap();
        let t12 = dw.group.parse_element("213").unwrap();
        let form = frob.state_sum(&shape, &[t12, t12, 0], None).unwrap();
        assert_eq!(form.get(&[0, 0, 0]), &rat_int(12));
    }

    #[test]
    fn state_sum_one_edge_strata_match_four_point_counts() {
        let (dw, frob) = theory("S3");
        // one-edge (0,4) shape with legs 0,1 on the first vertex
        let graph = crate::graph::Graph::new(
            2,
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 1, 3, 2, 4, 5],
            vec![0, 1, 4, 5],
        )
        .unwrap();
        let shape = DualGraph::new(graph, vec![0, 0]).unwrap();
        let t12 = dw.group.parse_element("213").unwrap();
        let t13 = dw.group.parse_element("321").unwrap();
        let legs = [t12, t13, t12, 0];
        let form = frob.state_sum(&shape, &legs, None).unwrap();
        assert_eq!(form.get(&[0, 0, 0, 0]), &dw.count(0, &legs).unwrap());
    }

    #[test]
    fn state_sum_self_loop_reproduces_genus_one() {
        let (dw, frob) = theory("Q8");
        let graph = crate::graph::Graph::new(1, vec![0, 0, 0], vec![0, 2, 1], vec![0]).unwrap();
        let shape = DualGraph::new(graph, vec![0]).unwrap();
        for gamma in 0..8 {
            let form = frob.state_sum(&shape, &[gamma], None).unwrap();
            assert_eq!(form.get(&[0]), &dw.count(1, &[gamma]).unwrap(), "γ = {gamma}");
        }
    }

    #[test]
    fn correlator_table_equivariance() {
        let (dw, frob) = theory("S3");
        let table = CorrelatorTable::from_counts(&dw, &[(0, 4), (1, 1)]).unwrap();
        let rep = table.check_equivariance(&frob);
        assert!(rep.pass, "{:?}", rep.violation);
        // a perturbed entry breaks it
        let mut bad = table.clone();
        let key = bad.entries.keys().nth(3).unwrap().clone();
        let f = bad.entries.get_mut(&key).unwrap();
        let v = f.get(&vec![0; key.1.len()]) + rat_int(1);
        let idx = vec![0; key.1.len()];
        f.set(&idx, v);
        assert!(!bad.check_equivariance(&frob).pass);
    }

    #[test]
    fn state_sum_with_supplied_higher_vertex() {
        // decompose (0,5) as a (0,3) vertex glued to a (0,4) vertex whose
        // correlator comes from the count table; the state sum must equal
        // the direct five-point count
        let (dw, frob) = theory("Z3");
        let table = CorrelatorTable::from_counts(&dw, &[(0, 4)]).unwrap();
        // vertex 0: legs 0,1 and edge; vertex 1: edge and legs 2,3,4
        let graph = crate::graph::Graph::new(
            2,
            vec![0, 0, 0, 1, 1, 1, 1],
            vec![0, 1, 3, 2, 4, 5, 6],
            vec![0, 1, 4, 5, 6],
        )
        .unwrap();
        let shape = DualGraph::new(graph, vec![0, 0]).unwrap();
        for t in all_tuples(3, 5).into_iter().step_by(7) {
            let form = frob.state_sum(&shape, &t, Some(&table)).unwrap();
            assert_eq!(form.get(&[0; 5]), &dw.count(0, &t).unwrap(), "{t:?}");
        }
        // without the table the (0,4) vertex has no correlator
        assert!(frob.state_sum(&shape, &[0; 5], None).is_err());
    }

    #[test]
    fn drinfeld_module_passes_and_scrambled_grading_fails() {
        for name in ["Z2", "S3"] {
            let (_, frob) = theory(name);
            let rep = drinfeld_module_check(&frob);
            assert!(rep.pass, "{name}: {:?}", rep.violation);
        }
        // scrambled grading projection: route the basis morphisms at the
        // identity color through a transposition's grade
        let (_, frob) = theory("S3");
        let mut grading: Vec<usize> = (0..6).collect();
        grading.swap(0, frob.group.parse_element("213").unwrap());
        let rep = drinfeld_module_check_with(&frob, &grading);
        assert!(!rep.pass);
        assert!(rep.violation.is_some());
    }

    #[test]
    fn dimensions_z2_module() {
        let (_, frob) = theory("Z2");
        assert_eq!(frob.total_dim(), 2);
        let colors = loop_groupoid(&frob.group);
        assert_eq!(groupoid_algebra(&colors.groupoid).dimension, 4);
    }
}
