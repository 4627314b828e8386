//! Finite groupoids, categories with duality, the loop groupoid, semidirect
//! and wreath products, and groupoid algebras.
//!
//! A groupoid is stored as a general finite category shape (objects,
//! morphisms, partial composition) with invertibility enforced at
//! validation. Composition `compose(f, g)` means f after g and is defined
//! exactly when `tgt(g) = src(f)`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rational::Rat;
use crate::report::Report;

pub const NO_COMPOSE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupoid {
    pub n_objects: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// identity morphism per object
    pub identity: Vec<usize>,
    /// dense table, `NO_COMPOSE` where undefined
    compose: Vec<u32>,
    pub invert: Vec<usize>,
    #[serde(skip)]
    hom_index: BTreeMap<(usize, usize), Vec<usize>>,
}

impl FiniteGroupoid {
    pub fn new(
        n_objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identity: Vec<usize>,
        compose_fn: impl Fn(usize, usize) -> Option<usize>,
        invert: Vec<usize>,
    ) -> Result<Self> {
        let n_mor = src.len();
        if n_mor * n_mor > 64_000_000 {
            return Err(Error::BoundExceeded(format!(
                "groupoid with {n_mor} morphisms needs too large a composition table"
            )));
        }
        let mut compose = vec![NO_COMPOSE; n_mor * n_mor];
        for f in 0..n_mor {
            for g in 0..n_mor {
                if tgt[g] == src[f] {
                    match compose_fn(f, g) {
                        Some(h) => compose[f * n_mor + g] = h as u32,
                        None => {
                            return Err(Error::validation(format!(
                                "composition {f} after {g} undefined despite matching endpoints"
                            )))
                        }
                    }
                }
            }
        }
        let mut gpd = FiniteGroupoid {
            n_objects,
            src,
            tgt,
            identity,
            compose,
            invert,
            hom_index: BTreeMap::new(),
        };
        gpd.rebuild_index();
        gpd.validate()?;
        Ok(gpd)
    }

    fn rebuild_index(&mut self) {
        let mut index: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for m in 0..self.n_morphisms() {
            index.entry((self.src[m], self.tgt[m])).or_default().push(m);
        }
        self.hom_index = index;
    }

    /// Rebuild caches after deserialization.
    pub fn reindex(&mut self) {
        self.rebuild_index();
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    /// f after g, defined when tgt(g) = src(f).
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let v = self.compose[f * self.n_morphisms() + g];
        (v != NO_COMPOSE).then_some(v as usize)
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.hom_index.get(&(x, y)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// All morphisms with source x.
    pub fn out_of(&self, x: usize) -> Vec<usize> {
        (0..self.n_morphisms()).filter(|&m| self.src[m] == x).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n_mor = self.n_morphisms();
        if self.tgt.len() != n_mor || self.invert.len() != n_mor {
            return Err(Error::validation("morphism tables disagree in length"));
        }
        if self.identity.len() != self.n_objects {
            return Err(Error::validation("identity table length differs from object count"));
        }
        for (x, &i) in self.identity.iter().enumerate() {
            if i >= n_mor || self.src[i] != x || self.tgt[i] != x {
                return Err(Error::validation(format!("bad identity at object {x}")));
            }
        }
        // identity laws
        for m in 0..n_mor {
            if self.compose(m, self.identity[self.src[m]]) != Some(m)
                || self.compose(self.identity[self.tgt[m]], m) != Some(m)
            {
                return Err(Error::validation(format!("identity law fails at morphism {m}")));
            }
        }
        // endpoints of composition
        for f in 0..n_mor {
            for g in 0..n_mor {
                if let Some(h) = self.compose(f, g) {
                    if self.src[h] != self.src[g] || self.tgt[h] != self.tgt[f] {
                        return Err(Error::validation(format!(
                            "composite {f}∘{g} has wrong endpoints"
                        )));
                    }
                }
            }
        }
        // associativity on all composable triples
        for f in 0..n_mor {
            for g in 0..n_mor {
                let Some(fg) = self.compose(f, g) else { continue };
                for h in 0..n_mor {
                    let Some(gh) = self.compose(g, h) else { continue };
                    if self.compose(fg, h) != self.compose(f, gh) {
                        return Err(Error::validation(format!(
                            "associativity fails on ({f}, {g}, {h})"
                        )));
                    }
                }
            }
        }
        // groupoid condition
        for m in 0..n_mor {
            let i = self.invert[m];
            if i >= n_mor
                || self.src[i] != self.tgt[m]
                || self.tgt[i] != self.src[m]
                || self.compose(m, i) != Some(self.identity[self.tgt[m]])
                || self.compose(i, m) != Some(self.identity[self.src[m]])
            {
                return Err(Error::validation(format!("morphism {m} has no two-sided inverse")));
            }
        }
        Ok(())
    }

    /// Connected components of the underlying graph of objects.
    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n_objects];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n_objects {
            if comp[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut stack = vec![x];
            let mut class = Vec::new();
            comp[x] = id;
            while let Some(y) = stack.pop() {
                class.push(y);
                for m in 0..self.n_morphisms() {
                    for z in [self.src[m], self.tgt[m]] {
                        if (self.src[m] == y || self.tgt[m] == y) && comp[z] == usize::MAX {
                            comp[z] = id;
                            stack.push(z);
                        }
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Sum of 1/|Aut| over isomorphism classes.
    pub fn cardinality(&self) -> Rat {
        self.iso_classes()
            .iter()
            .map(|class| {
                let x = class[0];
                Rat::new(1.into(), (self.hom(x, x).len() as i64).into())
            })
            .fold(Rat::from_integer(0.into()), |a, b| a + b)
    }

    /// The one-object groupoid with automorphism group G.
    pub fn from_group(group: &FiniteGroup) -> Self {
        let n = group.order;
        FiniteGroupoid::new(
            1,
            vec![0; n],
            vec![0; n],
            vec![0],
            |f, g| Some(group.mul(f, g)),
            group.inv.clone(),
        )
        .expect("a validated group is a groupoid")
    }

    /// The terminal groupoid: one object, one morphism.
    pub fn terminal() -> Self {
        FiniteGroupoid::new(1, vec![0], vec![0], vec![0], |_, _| Some(0), vec![0]).unwrap()
    }
}

/// Contravariant duality endofunctor with double-dual unit η.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityStructure {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
    /// η_x : x → x^∨∨ per object
    pub eta: Vec<usize>,
}

impl DualityStructure {
    pub fn identity_on(groupoid: &FiniteGroupoid) -> Self {
        DualityStructure {
            on_objects: (0..groupoid.n_objects).collect(),
            on_morphisms: groupoid.invert.clone(),
            eta: groupoid.identity.clone(),
        }
    }
}

/// A groupoid together with a validated duality; the color data every
/// decorated-graph construction is parameterized by.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorData {
    pub groupoid: FiniteGroupoid,
    pub duality: DualityStructure,
}

impl ColorData {
    pub fn new(groupoid: FiniteGroupoid, duality: DualityStructure) -> Result<Self> {
        let data = ColorData { groupoid, duality };
        let rep = check_duality(&data.groupoid, &data.duality);
        if !rep.pass {
            return Err(Error::validation(format!(
                "duality invalid: {}",
                rep.violation.unwrap_or_default()
            )));
        }
        Ok(data)
    }

    /// Trivial colors: the terminal groupoid with its identity duality.
    pub fn trivial() -> Self {
        let g = FiniteGroupoid::terminal();
        let d = DualityStructure::identity_on(&g);
        ColorData { groupoid: g, duality: d }
    }

    pub fn dual_obj(&self, x: usize) -> usize {
        self.duality.on_objects[x]
    }

    pub fn dual_mor(&self, m: usize) -> usize {
        self.duality.on_morphisms[m]
    }

    /// Pairings x → y^∨ available between two colors.
    pub fn pairings(&self, x: usize, y: usize) -> &[usize] {
        self.groupoid.hom(x, self.dual_obj(y))
    }

    /// Transpose a pairing φ : x → y^∨ to the equivalent pairing y → x^∨,
    /// namely φ^∨ ∘ η_y.
    pub fn transpose_pairing(&self, phi: usize) -> usize {
        let g = &self.groupoid;
        let y = self.dual_obj(g.tgt[phi]);
        g.compose(self.dual_mor(phi), self.duality.eta[y])
            .expect("transpose composite must exist")
    }
}

/// Check contravariance, naturality and invertibility of η, and the
/// triangle identity.
pub fn check_duality(c: &FiniteGroupoid, d: &DualityStructure) -> Report {
    let mut rep = Report::new("duality");
    if d.on_objects.len() != c.n_objects
        || d.on_morphisms.len() != c.n_morphisms()
        || d.eta.len() != c.n_objects
    {
        rep.fail("tables not total on the groupoid");
        return rep;
    }
    let n_mor = c.n_morphisms();
    // endpoints and identities
    for m in 0..n_mor {
        let dm = d.on_morphisms[m];
        rep.check(
            c.src[dm] == d.on_objects[c.tgt[m]] && c.tgt[dm] == d.on_objects[c.src[m]],
            || format!("dual of morphism {m} has wrong endpoints"),
        );
    }
    for x in 0..c.n_objects {
        rep.check(
            d.on_morphisms[c.identity[x]] == c.identity[d.on_objects[x]],
            || format!("dual of identity at object {x} is not an identity"),
        );
    }
    // contravariance
    for f in 0..n_mor {
        for g in 0..n_mor {
            if let Some(fg) = c.compose(f, g) {
                let lhs = d.on_morphisms[fg];
                let rhs = c.compose(d.on_morphisms[g], d.on_morphisms[f]);
                rep.check(Some(lhs) == rhs, || {
                    format!("contravariance fails on ({f}, {g}): (f∘g)^∨ = {lhs}, g^∨∘f^∨ = {rhs:?}")
                });
                if !rep.pass {
                    return rep;
                }
            }
        }
    }
    // η endpoints, invertibility, naturality
    for x in 0..c.n_objects {
        let e = d.eta[x];
        let ddx = d.on_objects[d.on_objects[x]];
        rep.check(c.src[e] == x && c.tgt[e] == ddx, || {
            format!("η at object {x} has wrong endpoints")
        });
        rep.check(
            c.compose(c.invert[e], e) == Some(c.identity[x]),
            || format!("η at object {x} not invertible"),
        );
    }
    for f in 0..n_mor {
        let (x, y) = (c.src[f], c.tgt[f]);
        let ddf = d.on_morphisms[d.on_morphisms[f]];
        let lhs = c.compose(ddf, d.eta[x]);
        let rhs = c.compose(d.eta[y], f);
        rep.check(lhs == rhs && lhs.is_some(), || {
            format!("η not natural at morphism {f}")
        });
    }
    // triangle: (η_x)^∨ ∘ η_{x^∨} = id_{x^∨}
    for x in 0..c.n_objects {
        let xd = d.on_objects[x];
        let composite = c.compose(d.on_morphisms[d.eta[x]], d.eta[xd]);
        rep.check(composite == Some(c.identity[xd]), || {
            format!("triangle identity fails at object {x}")
        });
    }
    rep
}

/// A pairing between colors: a morphism φ : x → y^∨.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub x: usize,
    pub y: usize,
    pub phi: usize,
}

impl Pairing {
    pub fn new(colors: &ColorData, x: usize, y: usize, phi: usize) -> Result<Self> {
        let g = &colors.groupoid;
        if g.src[phi] != x || g.tgt[phi] != colors.dual_obj(y) {
            return Err(Error::validation(format!(
                "pairing morphism {phi} does not run {x} → dual of {y}"
            )));
        }
        Ok(Pairing { x, y, phi })
    }
}

/// A self-pairing φ : x → x^∨ is symmetric when φ^∨ ∘ η_x = φ.
pub fn check_symmetric_pairing(colors: &ColorData, p: &Pairing) -> Result<bool> {
    if p.x != p.y {
        return Err(Error::bad_input("symmetric pairing requires x = y"));
    }
    let g = &colors.groupoid;
    let composite = g
        .compose(colors.dual_mor(p.phi), colors.duality.eta[p.x])
        .ok_or_else(|| Error::validation("pairing data inconsistent with duality"))?;
    Ok(composite == p.phi)
}

/// The loop groupoid of G: objects are elements of G, morphisms γ → gγg⁻¹
/// are pairs (γ, g), with duality given by inversion.
pub fn loop_groupoid(group: &FiniteGroup) -> ColorData {
    let n = group.order;
    let mor = |gamma: usize, g: usize| gamma * n + g;
    let n_mor = n * n;
    let mut src = vec![0; n_mor];
    let mut tgt = vec![0; n_mor];
    let mut invert = vec![0; n_mor];
    for gamma in 0..n {
        for g in 0..n {
            let m = mor(gamma, g);
            src[m] = gamma;
            tgt[m] = group.conj(g, gamma);
            invert[m] = mor(group.conj(g, gamma), group.inv(g));
        }
    }
    let identity = (0..n).map(|gamma| mor(gamma, 0)).collect();
    let groupoid = FiniteGroupoid::new(
        n,
        src,
        tgt,
        identity,
        |f, g_m| {
            // f = (δ, a), g = (γ, b) with δ = bγb⁻¹; composite (γ, ab)
            let (gamma, b) = (g_m / n, g_m % n);
            let a = f % n;
            Some(mor(gamma, group.mul(a, b)))
        },
        invert,
    )
    .expect("loop groupoid is a groupoid");
    let on_objects: Vec<usize> = (0..n).map(|gamma| group.inv(gamma)).collect();
    let on_morphisms = (0..n_mor)
        .map(|m| {
            let (gamma, g) = (m / n, m % n);
            // (γ, g)^∨ : (gγg⁻¹)⁻¹ → γ⁻¹ is (gγ⁻¹g⁻¹, g⁻¹)
            mor(group.conj(g, group.inv(gamma)), group.inv(g))
        })
        .collect();
    let eta = (0..n).map(|gamma| mor(gamma, 0)).collect();
    let duality = DualityStructure {
        on_objects,
        on_morphisms,
        eta,
    };
    ColorData::new(groupoid, duality).expect("loop groupoid duality is valid")
}

/// Decompose a loop-groupoid morphism index into (source element, group element).
pub fn loop_morphism_parts(group: &FiniteGroup, m: usize) -> (usize, usize) {
    (m / group.order, m % group.order)
}

/// A right action of a group on a groupoid by functors:
/// apply(gh) = apply(h) ∘ apply(g).
#[derive(Debug, Clone)]
pub struct GroupoidAction {
    /// per group element: object map
    pub on_objects: Vec<Vec<usize>>,
    /// per group element: morphism map
    pub on_morphisms: Vec<Vec<usize>>,
}

impl GroupoidAction {
    pub fn trivial(group: &FiniteGroup, c: &FiniteGroupoid) -> Self {
        GroupoidAction {
            on_objects: vec![(0..c.n_objects).collect(); group.order],
            on_morphisms: vec![(0..c.n_morphisms()).collect(); group.order],
        }
    }

    pub fn validate(&self, group: &FiniteGroup, c: &FiniteGroupoid) -> Result<()> {
        if self.on_objects.len() != group.order || self.on_morphisms.len() != group.order {
            return Err(Error::validation("action tables sized differently from the group"));
        }
        for g in 0..group.order {
            let (oo, om) = (&self.on_objects[g], &self.on_morphisms[g]);
            if oo.len() != c.n_objects || om.len() != c.n_morphisms() {
                return Err(Error::validation(format!("action of element {g} not total")));
            }
            for m in 0..c.n_morphisms() {
                if c.src[om[m]] != oo[c.src[m]] || c.tgt[om[m]] != oo[c.tgt[m]] {
                    return Err(Error::validation(format!(
                        "action of {g} not functorial at morphism {m} (endpoints)"
                    )));
                }
            }
            for x in 0..c.n_objects {
                if om[c.identity[x]] != c.identity[oo[x]] {
                    return Err(Error::validation(format!(
                        "action of {g} does not preserve the identity at object {x}"
                    )));
                }
            }
            for f in 0..c.n_morphisms() {
                for h in 0..c.n_morphisms() {
                    if let Some(fh) = c.compose(f, h) {
                        if c.compose(om[f], om[h]) != Some(om[fh]) {
                            return Err(Error::validation(format!(
                                "action of {g} not functorial on composite ({f}, {h})"
                            )));
                        }
                    }
                }
            }
        }
        // identity acts as identity; right-action law
        for x in 0..c.n_objects {
            if self.on_objects[0][x] != x {
                return Err(Error::validation("identity element must act trivially"));
            }
        }
        for g in 0..group.order {
            for h in 0..group.order {
                let gh = group.mul(g, h);
                for x in 0..c.n_objects {
                    if self.on_objects[h][self.on_objects[g][x]] != self.on_objects[gh][x] {
                        return Err(Error::validation(format!(
                            "right-action law fails on objects at ({g}, {h})"
                        )));
                    }
                }
                for m in 0..c.n_morphisms() {
                    if self.on_morphisms[h][self.on_morphisms[g][m]] != self.on_morphisms[gh][m] {
                        return Err(Error::validation(format!(
                            "right-action law fails on morphisms at ({g}, {h})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn obj(&self, x: usize, g: usize) -> usize {
        self.on_objects[g][x]
    }

    pub fn mor(&self, m: usize, g: usize) -> usize {
        self.on_morphisms[g][m]
    }
}

/// Semidirect product C ⋊ G: same objects as C, morphisms x → y are pairs
/// (φ, g) with φ : x → y·g, composed by (φ, g)∘(ψ, h) = ((φ·h)∘ψ, gh).
pub struct SemidirectProduct {
    pub groupoid: FiniteGroupoid,
    n_base_morphisms: usize,
    group_order: usize,
}

impl SemidirectProduct {
    pub fn pair(&self, m: usize) -> (usize, usize) {
        (m / self.group_order, m % self.group_order)
    }

    pub fn index(&self, phi: usize, g: usize) -> usize {
        phi * self.group_order + g
    }

    pub fn n_pairs(&self) -> usize {
        self.n_base_morphisms * self.group_order
    }
}

pub fn semidirect_product(
    c: &FiniteGroupoid,
    group: &FiniteGroup,
    action: &GroupoidAction,
) -> Result<SemidirectProduct> {
    action.validate(group, c)?;
    let n = group.order;
    let n_mor = c.n_morphisms() * n;
    let pair = |m: usize| (m / n, m % n);
    let index = |phi: usize, g: usize| phi * n + g;
    let mut src = vec![0; n_mor];
    let mut tgt = vec![0; n_mor];
    for m in 0..n_mor {
        let (phi, g) = pair(m);
        src[m] = c.src[phi];
        // φ : x → y·g, so the pair targets the y with y·g = tgt(φ);
        // for a right action by invertible functors, y = tgt(φ)·g⁻¹.
        tgt[m] = action.obj(c.tgt[phi], group.inv(g));
    }
    let identity = (0..c.n_objects).map(|x| index(c.identity[x], 0)).collect();
    let invert = (0..n_mor)
        .map(|m| {
            let (phi, g) = pair(m);
            let gi = group.inv(g);
            // inverse of (φ, g) is ((φ·g⁻¹)⁻¹, g⁻¹)
            index(c.invert[action.mor(phi, gi)], gi)
        })
        .collect();
    let groupoid = FiniteGroupoid::new(
        c.n_objects,
        src,
        tgt,
        identity,
        |f, g_m| {
            let (phi, a) = pair(f);
            let (psi, b) = pair(g_m);
            let phi_b = action.mor(phi, b);
            c.compose(phi_b, psi).map(|comp| index(comp, group.mul(a, b)))
        },
        invert,
    )?;
    Ok(SemidirectProduct {
        groupoid,
        n_base_morphisms: c.n_morphisms(),
        group_order: n,
    })
}

/// The product groupoid C^n with tuple objects and tuple morphisms,
/// enumerated in mixed-radix order.
pub struct PowerGroupoid {
    pub groupoid: FiniteGroupoid,
    pub arity: usize,
    n_base_objects: usize,
    n_base_morphisms: usize,
}

impl PowerGroupoid {
    pub fn new(c: &FiniteGroupoid, arity: usize) -> Result<Self> {
        let n_obj = c.n_objects.pow(arity as u32);
        let n_mor = c.n_morphisms().pow(arity as u32);
        if n_mor > 8000 {
            return Err(Error::BoundExceeded(format!(
                "power groupoid with {n_mor} morphisms"
            )));
        }
        let unpack_m = |m: usize| -> Vec<usize> {
            let mut m = m;
            let mut out = vec![0; arity];
            for slot in (0..arity).rev() {
                out[slot] = m % c.n_morphisms().max(1);
                m /= c.n_morphisms().max(1);
            }
            out
        };
        let pack_o = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * c.n_objects + x);
        let src: Vec<usize> = (0..n_mor)
            .map(|m| pack_o(&unpack_m(m).iter().map(|&f| c.src[f]).collect::<Vec<_>>()))
            .collect();
        let tgt: Vec<usize> = (0..n_mor)
            .map(|m| pack_o(&unpack_m(m).iter().map(|&f| c.tgt[f]).collect::<Vec<_>>()))
            .collect();
        let identity: Vec<usize> = (0..n_obj)
            .map(|o| {
                let mut o = o;
                let mut t = vec![0; arity];
                for slot in (0..arity).rev() {
                    t[slot] = o % c.n_objects;
                    o /= c.n_objects;
                }
                t.iter().fold(0, |acc, &x| acc * c.n_morphisms() + c.identity[x])
            })
            .collect();
        let invert: Vec<usize> = (0..n_mor)
            .map(|m| {
                unpack_m(m)
                    .iter()
                    .fold(0, |acc, &f| acc * c.n_morphisms() + c.invert[f])
            })
            .collect();
        let nm = c.n_morphisms();
        let groupoid = FiniteGroupoid::new(
            n_obj,
            src,
            tgt,
            identity,
            |f, g| {
                let (mut fs, mut gs) = (vec![0; arity], vec![0; arity]);
                let (mut fa, mut ga) = (f, g);
                for slot in (0..arity).rev() {
                    fs[slot] = fa % nm;
                    fa /= nm;
                    gs[slot] = ga % nm;
                    ga /= nm;
                }
                let mut out = 0;
                for slot in 0..arity {
                    out = out * nm + c.compose(fs[slot], gs[slot])?;
                }
                Some(out)
            },
            invert,
        )?;
        Ok(PowerGroupoid {
            groupoid,
            arity,
            n_base_objects: c.n_objects,
            n_base_morphisms: c.n_morphisms(),
        })
    }

    pub fn unpack_object(&self, o: usize) -> Vec<usize> {
        let mut o = o;
        let mut t = vec![0; self.arity];
        for slot in (0..self.arity).rev() {
            t[slot] = o % self.n_base_objects;
            o /= self.n_base_objects;
        }
        t
    }

    pub fn unpack_morphism(&self, m: usize) -> Vec<usize> {
        let mut m = m;
        let mut t = vec![0; self.arity];
        for slot in (0..self.arity).rev() {
            t[slot] = m % self.n_base_morphisms;
            m /= self.n_base_morphisms;
        }
        t
    }
}

/// Wreath product C ≀ S_n = C^n ⋊ S_n where S_n permutes the factors as a
/// right action: (x·σ)_i = x_{σ(i)}.
pub struct WreathProduct {
    pub semidirect: SemidirectProduct,
    pub power: PowerGroupoid,
    pub sym: FiniteGroup,
}

pub fn wreath_product(c: &FiniteGroupoid, arity: usize) -> Result<WreathProduct> {
    use crate::group::{make_group, GroupSpec};
    let sym = make_group(GroupSpec::S(arity.max(1)))?;
    if arity == 0 {
        let power = PowerGroupoid::new(c, 0)?;
        let action = GroupoidAction::trivial(&sym, &power.groupoid);
        let semidirect = semidirect_product(&power.groupoid, &sym, &action)?;
        return Ok(WreathProduct { semidirect, power, sym });
    }
    let power = PowerGroupoid::new(c, arity)?;
    let perms = permutation_table(&sym, arity);
    let n_obj = power.groupoid.n_objects;
    let n_mor = power.groupoid.n_morphisms();
    let mut on_objects = Vec::with_capacity(sym.order);
    let mut on_morphisms = Vec::with_capacity(sym.order);
    for p in &perms {
        let oo: Vec<usize> = (0..n_obj)
            .map(|o| {
                let t = power.unpack_object(o);
                let permuted: Vec<usize> = (0..arity).map(|i| t[p[i]]).collect();
                permuted.iter().fold(0, |acc, &x| acc * c.n_objects + x)
            })
            .collect();
        let om: Vec<usize> = (0..n_mor)
            .map(|m| {
                let t = power.unpack_morphism(m);
                let permuted: Vec<usize> = (0..arity).map(|i| t[p[i]]).collect();
                permuted.iter().fold(0, |acc, &x| acc * c.n_morphisms() + x)
            })
            .collect();
        on_objects.push(oo);
        on_morphisms.push(om);
    }
    let action = GroupoidAction { on_objects, on_morphisms };
    let semidirect = semidirect_product(&power.groupoid, &sym, &action)?;
    Ok(WreathProduct { semidirect, power, sym })
}

/// One-line tables for the elements of S_n as produced by `make_group`.
pub fn permutation_table(sym: &FiniteGroup, arity: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::new();
        for p in &perms {
            for v in 0..arity {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    perms.sort();
    assert_eq!(perms.len(), sym.order);
    perms
}

/// Lift a duality on C to C ≀ S_n: componentwise on objects, and
/// (φ, σ)^∨ = (ψ, σ⁻¹) with ψ_i = (φ_{σ⁻¹(i)})^∨.
pub fn lift_duality_to_wreath(colors: &ColorData, w: &WreathProduct) -> DualityStructure {
    let c = &colors.groupoid;
    let arity = w.power.arity;
    let perms = permutation_table(&w.sym, arity);
    let n_obj = w.semidirect.groupoid.n_objects;
    let on_objects: Vec<usize> = (0..n_obj)
        .map(|o| {
            let t = w.power.unpack_object(o);
            t.iter().fold(0, |acc, &x| acc * c.n_objects + colors.dual_obj(x))
        })
        .collect();
    let n_mor = w.semidirect.groupoid.n_morphisms();
    let on_morphisms: Vec<usize> = (0..n_mor)
        .map(|m| {
            let (phi, s) = w.semidirect.pair(m);
            let comps = w.power.unpack_morphism(phi);
            let sigma = &perms[s];
            let mut inv_sigma = vec![0; arity];
            for i in 0..arity {
                inv_sigma[sigma[i]] = i;
            }
            let s_inv = w.sym.inv(s);
            let dual_comps: Vec<usize> = (0..arity)
                .map(|i| colors.dual_mor(comps[inv_sigma[i]]))
                .collect();
            let packed = dual_comps.iter().fold(0, |acc, &x| acc * c.n_morphisms() + x);
            w.semidirect.index(packed, s_inv)
        })
        .collect();
    let eta: Vec<usize> = (0..n_obj)
        .map(|o| {
            let t = w.power.unpack_object(o);
            let packed = t
                .iter()
                .fold(0, |acc, &x| acc * c.n_morphisms() + colors.duality.eta[x]);
            w.semidirect.index(packed, 0)
        })
        .collect();
    DualityStructure {
        on_objects,
        on_morphisms,
        eta,
    }
}

/// The groupoid algebra `k[C]`: basis indexed by morphisms, product f∗g = f∘g
/// when composable and 0 otherwise. Structure constants are 0 or 1, so the
/// table stores the composite basis index or None.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidAlgebra {
    pub dimension: usize,
    pub product: Vec<Vec<Option<usize>>>,
    /// basis indices of object identities; their sum is the unit
    pub unit_support: Vec<usize>,
}

pub fn groupoid_algebra(c: &FiniteGroupoid) -> GroupoidAlgebra {
    let n = c.n_morphisms();
    let product = (0..n)
        .map(|f| (0..n).map(|g| c.compose(f, g)).collect())
        .collect();
    GroupoidAlgebra {
        dimension: n,
        product,
        unit_support: c.identity.clone(),
    }
}

impl GroupoidAlgebra {
    pub fn check(&self) -> Report {
        let mut rep = Report::new("groupoid algebra");
        let n = self.dimension;
        // associativity on all basis triples (structure constants are 0/1,
        // so Option-valued products compose faithfully)
        for f in 0..n {
            for g in 0..n {
                let fg = self.product[f][g];
                for h in 0..n {
                    let gh = self.product[g][h];
                    let lhs = fg.and_then(|x| self.product[x][h]);
                    let rhs = gh.and_then(|x| self.product[f][x]);
                    rep.check(lhs == rhs, || format!("associativity fails on ({f}, {g}, {h})"));
                    if !rep.pass {
                        return rep;
                    }
                }
            }
        }
        // the sum of identities is a two-sided unit
        for f in 0..n {
            let left: Vec<usize> = self
                .unit_support
                .iter()
                .filter_map(|&i| self.product[i][f])
                .collect();
            let right: Vec<usize> = self
                .unit_support
                .iter()
                .filter_map(|&i| self.product[f][i])
                .collect();
            rep.check(left == vec![f] && right == vec![f], || {
                format!("unit fails at basis morphism {f}")
            });
        }
        rep
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dimension;
        (0..n).all(|f| (0..n).all(|g| self.product[f][g] == self.product[g][f]))
    }
}

/// Weak symmetric functor from colors into finite sets-with-bijections or
/// finite-dimensional rational vector spaces, both taken with their evident
/// dualities (X^∨ = X, f^∨ = f⁻¹ for sets; V^∨ = V, f^∨ = fᵀ for spaces).
#[derive(Debug, Clone)]
pub enum FunctorValues {
    /// per morphism: a bijection as a table
    Set { sizes: Vec<usize>, maps: Vec<Vec<usize>>, rho_nat: Vec<Vec<usize>> },
    /// per morphism: an invertible matrix
    Vect {
        dims: Vec<usize>,
        maps: Vec<crate::linalg::RatMatrix>,
        rho_nat: Vec<crate::linalg::RatMatrix>,
    },
}

#[derive(Debug, Clone)]
pub struct WeakSymmetricFunctor {
    pub values: FunctorValues,
}

pub fn check_weak_symmetric_functor(
    colors: &ColorData,
    rho: &WeakSymmetricFunctor,
) -> Report {
    let mut rep = Report::new("weak symmetric functor");
    let c = &colors.groupoid;
    match &rho.values {
        FunctorValues::Set { sizes, maps, rho_nat } => {
            if sizes.len() != c.n_objects || maps.len() != c.n_morphisms() || rho_nat.len() != c.n_objects {
                rep.fail("functor not total on the source groupoid");
                return rep;
            }
            for m in 0..c.n_morphisms() {
                let (x, y) = (c.src[m], c.tgt[m]);
                rep.check(
                    maps[m].len() == sizes[x] && maps[m].iter().all(|&v| v < sizes[y]),
                    || format!("morphism {m} image not a map ρ({x}) → ρ({y})"),
                );
            }
            if !rep.pass {
                return rep;
            }
            for x in 0..c.n_objects {
                let id = &maps[c.identity[x]];
                rep.check((0..sizes[x]).all(|i| id[i] == i), || {
                    format!("ρ(id) is not the identity at object {x}")
                });
            }
            for f in 0..c.n_morphisms() {
                for g in 0..c.n_morphisms() {
                    if let Some(fg) = c.compose(f, g) {
                        let ok = (0..maps[g].len()).all(|i| maps[f][maps[g][i]] == maps[fg][i]);
                        rep.check(ok, || format!("ρ(f∘g) ≠ ρ(f)ρ(g) on pair ({f}, {g})"));
                        if !rep.pass {
                            return rep;
                        }
                    }
                }
            }
            // naturality of ρ_nat: ρ_x ∘ F(f^∨) = F(f)^∨ ∘ ρ_y, with
            // F(f)^∨ = F(f)⁻¹ in the bijection groupoid.
            for f in 0..c.n_morphisms() {
                let (x, y) = (c.src[f], c.tgt[f]);
                let f_dual = colors.dual_mor(f);
                let lhs: Vec<usize> = (0..sizes[colors.dual_obj(y)])
                    .map(|i| rho_nat[x][maps[f_dual][i]])
                    .collect();
                let mut f_inv = vec![0; sizes[y]];
                for i in 0..sizes[x] {
                    f_inv[maps[f][i]] = i;
                }
                let rhs: Vec<usize> = (0..sizes[colors.dual_obj(y)])
                    .map(|i| f_inv[rho_nat[y][i]])
                    .collect();
                rep.check(lhs == rhs, || format!("ρ_nat not natural at morphism {f}"));
            }
            // coherence square: ρ_x = (F η_x)^∨ ∘ (ρ_{x^∨})^∨ ∘ η_{D,F(x^∨)};
            // target η's are identities, so this reads ρ_x ∘ ρ_{x^∨}-dual
            // compatibility: (ρ_{x^∨})⁻¹ = F(η_x) ∘ ρ_x-style. Concretely we
            // check the displayed square pointwise.
            for x in 0..c.n_objects {
                let xd = colors.dual_obj(x);
                // path one: ρ_x : F(x^∨) → F(x)^∨ = F(x)
                // path two: η_D (identity), then (ρ_{x^∨})^∨ = (ρ_{x^∨})⁻¹ : F(x^∨) → F(x^∨∨),
                // then (F η_x)^∨ = F(η_x)⁻¹ : F(x^∨∨) → F(x)
                let eta_x = colors.duality.eta[x];
                let mut rho_xd_inv = vec![0; sizes[colors.dual_obj(xd)]];
                for i in 0..rho_nat[xd].len() {
                    rho_xd_inv[rho_nat[xd][i]] = i;
                }
                let mut feta_inv = vec![0; sizes[c.tgt[eta_x]]];
                for i in 0..sizes[x] {
                    feta_inv[maps[eta_x][i]] = i;
                }
                let ok = (0..sizes[xd]).all(|i| rho_nat[x][i] == feta_inv[rho_xd_inv[i]]);
                rep.check(ok, || format!("coherence square fails at object {x}"));
            }
            // induced pairings exist: F(φ) then ρ_y is a bijection F(x) → F(y)
            for x in 0..c.n_objects {
                for y in 0..c.n_objects {
                    for &phi in colors.pairings(x, y) {
                        rep.check(sizes[x] == sizes[y], || {
                            format!("pairing {phi} induces no bijection ρ({x}) ≃ ρ({y})")
                        });
                        let _ = maps[phi]; // composite exists by totality
                    }
                }
            }
        }
        FunctorValues::Vect { dims, maps, rho_nat } => {
            use crate::linalg::RatMatrix;
            if dims.len() != c.n_objects || maps.len() != c.n_morphisms() || rho_nat.len() != c.n_objects {
                rep.fail("functor not total on the source groupoid");
                return rep;
            }
            for m in 0..c.n_morphisms() {
                let (x, y) = (c.src[m], c.tgt[m]);
                rep.check(maps[m].cols == dims[x] && maps[m].rows == dims[y], || {
                    format!("matrix for morphism {m} has wrong shape")
                });
            }
            if !rep.pass {
                return rep;
            }
            for x in 0..c.n_objects {
                rep.check(maps[c.identity[x]] == RatMatrix::identity(dims[x]), || {
                    format!("ρ(id) is not the identity at object {x}")
                });
            }
            for f in 0..c.n_morphisms() {
                for g in 0..c.n_morphisms() {
                    if let Some(fg) = c.compose(f, g) {
                        rep.check(maps[f].mul(&maps[g]) == maps[fg], || {
                            format!("ρ(f∘g) ≠ ρ(f)ρ(g) on pair ({f}, {g})")
                        });
                        if !rep.pass {
                            return rep;
                        }
                    }
                }
            }
            for f in 0..c.n_morphisms() {
                let (x, y) = (c.src[f], c.tgt[f]);
                let f_dual = colors.dual_mor(f);
                let lhs = rho_nat[x].mul(&maps[f_dual]);
                let rhs = maps[f].transpose().mul(&rho_nat[y]);
                rep.check(lhs == rhs, || format!("ρ_nat not natural at morphism {f}"));
            }
            for x in 0..c.n_objects {
                let xd = colors.dual_obj(x);
                let eta_x = colors.duality.eta[x];
                // ρ_x = (F η_x)ᵀ ∘ (ρ_{x^∨})ᵀ⁻¹-style composite from the square;
                // with η_D = id this is ρ_x = (F η_x)ᵀ ∘ ((ρ_{x^∨})ᵀ)⁻¹... check
                // the equivalent form ρ_{x^∨}ᵀ ∘ ρ_x = F(η_x)ᵀ-inverse-free:
                // (ρ_{x^∨})ᵀ · ρ_x = (F η_x)⁻¹ as maps F(x^∨) → F(x^∨∨)∨∨ = F(x^∨∨)?
                // Stated directly: F(η_x) ∘ ρ_{x^∨}⁻¹-transpose... we verify
                // (F η_x)ᵀ ∘ (ρ_{x^∨})ᵀ ∘ ρ_x = id? No: verify the square as
                // ρ_x = (F η_x)ᵀ ∘ ((ρ_{x^∨})⁻¹)ᵀ.
                let rho_xd_inv = match rho_nat[xd].inverse() {
                    Some(m) => m,
                    None => {
                        rep.fail(format!("ρ_nat at object {xd} is singular"));
                        return rep;
                    }
                };
                let rhs = maps[eta_x].transpose().mul(&rho_xd_inv.transpose());
                rep.check(rho_nat[x] == rhs, || format!("coherence square fails at object {x}"));
            }
            for x in 0..c.n_objects {
                for y in 0..c.n_objects {
                    for &phi in colors.pairings(x, y) {
                        // induced pairing ρ(x) ⊗ ρ(y) → Q as matrix ρ_yᵀ-composite
                        let pairing = rho_nat[y].mul(&maps[phi]);
                        rep.check(pairing.rows == dims[y] && pairing.cols == dims[x], || {
                            format!("pairing {phi} induces no form on ρ({x}) ⊗ ρ({y})")
                        });
                    }
                }
            }
        }
    }
    rep
}

/// Disjoint union C ⊔ C^op with its evident duality swapping the halves.
/// Objects 0..n are the originals, n..2n their opposites; morphism m in C
/// appears as itself (index m) and as its opposite (index n_mor + m, with
/// reversed endpoints).
pub fn disjoint_union_with_op(c: &FiniteGroupoid) -> ColorData {
    let n_obj = c.n_objects;
    let n_mor = c.n_morphisms();
    let mut src = Vec::with_capacity(2 * n_mor);
    let mut tgt = Vec::with_capacity(2 * n_mor);
    for m in 0..n_mor {
        src.push(c.src[m]);
        tgt.push(c.tgt[m]);
    }
    for m in 0..n_mor {
        src.push(n_obj + c.tgt[m]);
        tgt.push(n_obj + c.src[m]);
    }
    let mut identity: Vec<usize> = c.identity.clone();
    identity.extend(c.identity.iter().map(|&i| n_mor + i));
    let mut invert: Vec<usize> = c.invert.clone();
    invert.extend(c.invert.iter().map(|&i| n_mor + i));
    let groupoid = FiniteGroupoid::new(
        2 * n_obj,
        src,
        tgt,
        identity,
        |f, g| {
            if f < n_mor && g < n_mor {
                c.compose(f, g)
            } else if f >= n_mor && g >= n_mor {
                // opposite composition reverses the order
                c.compose(g - n_mor, f - n_mor).map(|h| n_mor + h)
            } else {
                None
            }
        },
        invert,
    )
    .expect("C ⊔ C^op is a groupoid");
    // duality: x ↦ x-op, morphism m ↦ the same arrow seen on the other side
    let on_objects: Vec<usize> = (0..2 * n_obj)
        .map(|x| if x < n_obj { x + n_obj } else { x - n_obj })
        .collect();
    let on_morphisms: Vec<usize> = (0..2 * n_mor)
        .map(|m| if m < n_mor { m + n_mor } else { m - n_mor })
        .collect();
    let eta = groupoid.identity.clone();
    let duality = DualityStructure {
        on_objects,
        on_morphisms,
        eta,
    };
    ColorData::new(groupoid, duality).expect("swap duality is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_by_name, make_group, GroupSpec};
    use crate::rational::rat_int;

    #[test]
    fn loop_groupoid_counts() {
        for name in ["Z2", "Z3", "S3", "Q8"] {
            let g = group_by_name(name).unwrap();
            let colors = loop_groupoid(&g);
            assert_eq!(colors.groupoid.n_objects, g.order);
            assert_eq!(colors.groupoid.n_morphisms(), g.order * g.order);
            // |Hom(γ, δ)| = |centralizer(γ)| when conjugate, 0 otherwise
            for gamma in 0..g.order {
                for delta in 0..g.order {
                    let hom = colors.groupoid.hom(gamma, delta).len();
                    let conjugate = (0..g.order).any(|h| g.conj(h, gamma) == delta);
                    let expected = if conjugate { g.centralizer(gamma).len() } else { 0 };
                    assert_eq!(hom, expected, "{name} Hom({gamma},{delta})");
                }
            }
        }
    }

    #[test]
    fn loop_groupoid_hom_examples() {
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        assert_eq!(colors.groupoid.hom(1, 1).len(), 2);

        let s3 = group_by_name("S3").unwrap();
        let colors = loop_groupoid(&s3);
        let t12 = s3.parse_element("213").unwrap();
        let t13 = s3.parse_element("321").unwrap();
        assert_eq!(colors.groupoid.hom(t12, t13).len(), 2);
    }

    #[test]
    fn loop_duality_passes_checker_and_is_involution() {
        for name in ["Z4", "S3"] {
            let g = group_by_name(name).unwrap();
            let colors = loop_groupoid(&g);
            let rep = check_duality(&colors.groupoid, &colors.duality);
            assert!(rep.pass, "{:?}", rep.violation);
            for x in 0..colors.groupoid.n_objects {
                assert_eq!(colors.dual_obj(colors.dual_obj(x)), x);
            }
            for m in 0..colors.groupoid.n_morphisms() {
                assert_eq!(colors.dual_mor(colors.dual_mor(m)), m);
            }
        }
    }

    #[test]
    fn identity_duality_on_any_groupoid_passes() {
        let g = group_by_name("S3").unwrap();
        let one = FiniteGroupoid::from_group(&g);
        let d = DualityStructure::identity_on(&one);
        assert!(check_duality(&one, &d).pass);
    }

    #[test]
    fn non_contravariant_duality_fails() {
        // On the one-object groupoid S3, try g^∨ = g with identity on objects.
        let g = group_by_name("S3").unwrap();
        let one = FiniteGroupoid::from_group(&g);
        let d = DualityStructure {
            on_objects: vec![0],
            on_morphisms: (0..6).collect(),
            eta: vec![0],
        };
        let rep = check_duality(&one, &d);
        assert!(!rep.pass);
        assert!(rep.violation.unwrap().contains("contravariance"));
    }

    #[test]
    fn groupoid_cardinality_facts() {
        // iso classes of the loop groupoid are the conjugacy classes, and
        // its cardinality is 1 = |G| · (1/|G|) by orbit-stabilizer.
        for name in ["Z2", "S3", "Q8"] {
            let g = group_by_name(name).unwrap();
            let colors = loop_groupoid(&g);
            assert_eq!(
                colors.groupoid.iso_classes().len(),
                g.conjugacy_classes().len()
            );
            assert_eq!(colors.groupoid.cardinality(), rat_int(1));
            // Burnside: sum over objects of |Aut| equals #classes · |G|
            let total: usize = (0..g.order)
                .map(|x| colors.groupoid.hom(x, x).len())
                .sum();
            assert_eq!(total, g.conjugacy_classes().len() * g.order);
        }
    }

    #[test]
    fn symmetric_pairing_cases() {
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        // identity pairing on the involution σ: σ^∨ = σ⁻¹ = σ, φ = id morphism
        let phi = colors.groupoid.identity[1];
        let p = Pairing::new(&colors, 1, 1, phi).unwrap();
        assert!(check_symmetric_pairing(&colors, &p).unwrap());

        // In ℒ(Z4) there is no morphism a → a (dual of a³): Hom(a, a) has the
        // centralizer but the pairing a → (a³)^∨ = a exists... construct the
        // failing precondition instead: pairing with mismatched endpoints.
        let z4 = group_by_name("Z4").unwrap();
        let colors4 = loop_groupoid(&z4);
        // candidate morphism e : γ → γ³ does not exist (abelian conjugation
        // is trivial), so Pairing::new for (1, 1) with the identity at 1
        // must fail: dual of 1 is 3, and id_1 targets 1 ≠ 3.
        let bad = Pairing::new(&colors4, 1, 1, colors4.groupoid.identity[1]);
        assert!(bad.is_err());

        // exhaustive self-pairing table over ℒ(S3): φ : x → x^∨ symmetric
        // iff φ^∨ ∘ η = φ; verify against brute force over all morphisms.
        let s3 = group_by_name("S3").unwrap();
        let colors3 = loop_groupoid(&s3);
        let mut symmetric_count = 0;
        for x in 0..colors3.groupoid.n_objects {
            for &phi in colors3.groupoid.hom(x, colors3.dual_obj(x)) {
                let p = Pairing::new(&colors3, x, x, phi).unwrap();
                let direct = colors3
                    .groupoid
                    .compose(colors3.dual_mor(phi), colors3.duality.eta[x])
                    == Some(phi);
                assert_eq!(check_symmetric_pairing(&colors3, &p).unwrap(), direct);
                if direct {
                    symmetric_count += 1;
                }
            }
        }
        assert!(symmetric_count > 0);
    }

    #[test]
    fn semidirect_trivial_base_gives_group() {
        let g = group_by_name("S3").unwrap();
        let c = FiniteGroupoid::terminal();
        let action = GroupoidAction::trivial(&g, &c);
        let sp = semidirect_product(&c, &g, &action).unwrap();
        assert_eq!(sp.groupoid.n_objects, 1);
        assert_eq!(sp.groupoid.n_morphisms(), 6);
        // isomorphic to G: composition matches group multiplication
        for a in 0..6 {
            for b in 0..6 {
                let m = sp.groupoid.compose(sp.index(0, a), sp.index(0, b)).unwrap();
                assert_eq!(sp.pair(m), (0, g.mul(a, b)));
            }
        }
    }

    #[test]
    fn semidirect_counts_and_associativity() {
        // C = ℒ(Z2), G = Z2 acting by inversion (a functor since ℒG is
        // natural in G and inversion is an automorphism of an abelian group).
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        let c = &colors.groupoid;
        let invert_objects: Vec<usize> = (0..c.n_objects).map(|x| z2.inv(x)).collect();
        let invert_morphisms: Vec<usize> = (0..c.n_morphisms())
            .map(|m| {
                let (gamma, g) = loop_morphism_parts(&z2, m);
                z2.inv(gamma) * z2.order + g
            })
            .collect();
        let action = GroupoidAction {
            on_objects: vec![(0..c.n_objects).collect(), invert_objects],
            on_morphisms: vec![(0..c.n_morphisms()).collect(), invert_morphisms],
        };
        let sp = semidirect_product(c, &z2, &action).unwrap();
        assert_eq!(sp.groupoid.n_morphisms(), c.n_morphisms() * 2);
        // validation inside FiniteGroupoid::new already brute-forces
        // associativity; re-assert explicitly.
        sp.groupoid.validate().unwrap();
    }

    #[test]
    fn semidirect_rejects_non_functorial_action() {
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        let c = &colors.groupoid;
        let mut bad_morphisms: Vec<usize> = (0..c.n_morphisms()).collect();
        bad_morphisms.swap(0, 1); // breaks identity preservation
        let action = GroupoidAction {
            on_objects: vec![(0..c.n_objects).collect(), (0..c.n_objects).collect()],
            on_morphisms: vec![(0..c.n_morphisms()).collect(), bad_morphisms],
        };
        assert!(semidirect_product(c, &z2, &action).is_err());
    }

    #[test]
    fn wreath_products() {
        let z2 = group_by_name("Z2").unwrap();
        let one = FiniteGroupoid::from_group(&z2);
        // n = 1: isomorphic to C itself
        let w1 = wreath_product(&one, 1).unwrap();
        assert_eq!(w1.semidirect.groupoid.n_morphisms(), one.n_morphisms());
        // morphism count |G|^n · n!
        let w3 = wreath_product(&one, 3).unwrap();
        assert_eq!(w3.semidirect.groupoid.n_morphisms(), 2usize.pow(3) * 6);
        // n = 0: terminal
        let w0 = wreath_product(&one, 0).unwrap();
        assert_eq!(w0.semidirect.groupoid.n_objects, 1);
        assert_eq!(w0.semidirect.groupoid.n_morphisms(), 1);
    }

    #[test]
    fn wreath_duality_lifts() {
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        let w = wreath_product(&colors.groupoid, 2).unwrap();
        let lifted = lift_duality_to_wreath(&colors, &w);
        let rep = check_duality(&w.semidirect.groupoid, &lifted);
        assert!(rep.pass, "{:?}", rep.violation);

        // same through C ⊔ C^op
        let dc = disjoint_union_with_op(&FiniteGroupoid::from_group(&z2));
        let w2 = wreath_product(&dc.groupoid, 2).unwrap();
        let lifted2 = lift_duality_to_wreath(&dc, &w2);
        assert!(check_duality(&w2.semidirect.groupoid, &lifted2).pass);
    }

    #[test]
    fn groupoid_algebra_loop_z2() {
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        let alg = groupoid_algebra(&colors.groupoid);
        assert_eq!(alg.dimension, 4);
        assert!(alg.check().pass);
        assert!(alg.is_commutative());
    }

    #[test]
    fn groupoid_algebra_is_drinfeld_double_for_abelian() {
        // For abelian G the product is (γ,g)·(γ',h) = [γ = γ'](γ, gh).
        let z3 = group_by_name("Z3").unwrap();
        let colors = loop_groupoid(&z3);
        let alg = groupoid_algebra(&colors.groupoid);
        assert!(alg.check().pass);
        let n = z3.order;
        for gamma in 0..n {
            for g in 0..n {
                for gamma2 in 0..n {
                    for h in 0..n {
                        let f = gamma * n + g;
                        let k = gamma2 * n + h;
                        let expect = if gamma == gamma2 {
                            Some(gamma * n + z3.mul(g, h))
                        } else {
                            None
                        };
                        assert_eq!(alg.product[f][k], expect);
                    }
                }
            }
        }
    }

    #[test]
    fn group_algebra_from_one_object_groupoid() {
        let s3 = group_by_name("S3").unwrap();
        let one = FiniteGroupoid::from_group(&s3);
        let alg = groupoid_algebra(&one);
        assert_eq!(alg.dimension, 6);
        assert_eq!(alg.unit_support, vec![0]);
        assert!(alg.check().pass);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(alg.product[a][b], Some(s3.mul(a, b)));
            }
        }
    }

    #[test]
    fn weak_symmetric_functor_cases() {
        let s3 = group_by_name("S3").unwrap();
        let colors = loop_groupoid(&s3);
        let c = &colors.groupoid;
        // constant one-point functor
        let rho = WeakSymmetricFunctor {
            values: FunctorValues::Set {
                sizes: vec![1; c.n_objects],
                maps: vec![vec![0]; c.n_morphisms()],
                rho_nat: vec![vec![0]; c.n_objects],
            },
        };
        assert!(check_weak_symmetric_functor(&colors, &rho).pass);

        // one-dimensional trivial representation
        use crate::linalg::RatMatrix;
        let rho_v = WeakSymmetricFunctor {
            values: FunctorValues::Vect {
                dims: vec![1; c.n_objects],
                maps: vec![RatMatrix::identity(1); c.n_morphisms()],
                rho_nat: vec![RatMatrix::identity(1); c.n_objects],
            },
        };
        assert!(check_weak_symmetric_functor(&colors, &rho_v).pass);

        // break functoriality on a two-point functor over ℒ(Z2)
        let z2 = group_by_name("Z2").unwrap();
        let colors2 = loop_groupoid(&z2);
        let c2 = &colors2.groupoid;
        let mut maps = vec![vec![0, 1]; c2.n_morphisms()];
        // the non-identity automorphism of object 0 swaps; its composite with
        // itself at identity then disagrees
        let m_swap = 1; // (γ = 0, g = σ)
        maps[m_swap] = vec![1, 0];
        // keep all other maps the identity: ρ(swap∘swap) = id holds, but
        // naturality/functoriality with (γ=1, g=σ) breaks if we make it swap
        // on one side only. Break identity instead:
        let mut bad_maps = maps.clone();
        bad_maps[c2.identity[0]] = vec![1, 0];
        let rho_bad = WeakSymmetricFunctor {
            values: FunctorValues::Set {
                sizes: vec![2; c2.n_objects],
                maps: bad_maps,
                rho_nat: vec![vec![0, 1]; c2.n_objects],
            },
        };
        let rep = check_weak_symmetric_functor(&colors2, &rho_bad);
        assert!(!rep.pass);
        assert!(rep.violation.is_some());
    }

    #[test]
    fn disjoint_union_with_op_structure() {
        let z2 = group_by_name("Z2").unwrap();
        let c = FiniteGroupoid::from_group(&z2);
        let d = disjoint_union_with_op(&c);
        assert_eq!(d.groupoid.n_objects, 2);
        assert_eq!(d.groupoid.n_morphisms(), 4);
        // no morphisms across the two halves
        assert!(d.groupoid.hom(0, 1).is_empty());
        // pairing from the C side to the op side exists: Hom(x, (y-op)^∨) = Hom_C(x, y)
        assert_eq!(d.pairings(0, 1).len(), 2);
        // no pairing between two C-side colors
        assert!(d.pairings(0, 0).is_empty());
    }

    #[test]
    fn make_group_algebra_dimension_is_group_order() {
        let q8 = make_group(GroupSpec::Q8).unwrap();
        let one = FiniteGroupoid::from_group(&q8);
        assert_eq!(groupoid_algebra(&one).dimension, 8);
    }
}
