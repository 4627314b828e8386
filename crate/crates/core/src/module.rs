//! Stable modules over the corolla groupoid: an assignment of a finite set
//! or exact-rational vector space to every decorated corolla (genus, color
//! tuple), functorial for wreath-groupoid morphisms.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::groupoid::ColorData;
use crate::linalg::RatMatrix;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Set,
    Vect,
}

/// A map between carriers: a function table for sets, a matrix for spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapData {
    Set(Vec<usize>),
    Vect(RatMatrix),
}

impl MapData {
    pub fn identity(kind: ValueKind, size: usize) -> Self {
        match kind {
            ValueKind::Set => MapData::Set((0..size).collect()),
            ValueKind::Vect => MapData::Vect(RatMatrix::identity(size)),
        }
    }

    pub fn apply_elem(&self, elem: usize) -> usize {
        match self {
            MapData::Set(t) => t[elem],
            MapData::Vect(_) => panic!("element application needs a set map"),
        }
    }

    pub fn compose_after(&self, first: &MapData) -> MapData {
        match (self, first) {
            (MapData::Set(s), MapData::Set(f)) => {
                MapData::Set(f.iter().map(|&i| s[i]).collect())
            }
            (MapData::Vect(s), MapData::Vect(f)) => MapData::Vect(s.mul(f)),
            _ => panic!("kind mismatch in composition"),
        }
    }
}

/// A decorated corolla up to nothing: genus and the tuple of leg colors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorollaKey {
    pub genus: usize,
    pub colors: Vec<usize>,
}

impl CorollaKey {
    pub fn new(genus: usize, colors: Vec<usize>) -> Self {
        CorollaKey { genus, colors }
    }

    pub fn arity(&self) -> usize {
        self.colors.len()
    }

    pub fn is_stable(&self) -> bool {
        2 * (self.genus as i64) - 2 + (self.colors.len() as i64) > 0
    }
}

/// A morphism of decorated corollas in the wreath groupoid: a permutation σ
/// together with color morphisms φ_i : x_i → y_{σ(i)}. Slot i of the source
/// is carried to slot σ(i) of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathArrow {
    pub genus: usize,
    pub src_colors: Vec<usize>,
    pub perm: Vec<usize>,
    pub comps: Vec<usize>,
}

impl WreathArrow {
    pub fn identity(colors: &ColorData, key: &CorollaKey) -> Self {
        WreathArrow {
            genus: key.genus,
            src_colors: key.colors.clone(),
            perm: (0..key.arity()).collect(),
            comps: key
                .colors
                .iter()
                .map(|&c| colors.groupoid.identity[c])
                .collect(),
        }
    }

    pub fn dst_colors(&self, colors: &ColorData) -> Vec<usize> {
        let n = self.perm.len();
        let mut out = vec![0; n];
        for i in 0..n {
            out[self.perm[i]] = colors.groupoid.tgt[self.comps[i]];
        }
        out
    }

    pub fn dst_key(&self, colors: &ColorData) -> CorollaKey {
        CorollaKey::new(self.genus, self.dst_colors(colors))
    }

    pub fn validate(&self, colors: &ColorData) -> Result<()> {
        let n = self.src_colors.len();
        if self.perm.len() != n || self.comps.len() != n {
            return Err(Error::validation("wreath arrow tables disagree in length"));
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || seen[p] {
                return Err(Error::validation("wreath arrow permutation invalid"));
            }
            seen[p] = true;
        }
        for i in 0..n {
            if colors.groupoid.src[self.comps[i]] != self.src_colors[i] {
                return Err(Error::validation(format!(
                    "component {i} does not start at the slot color"
                )));
            }
        }
        Ok(())
    }

    /// self ∘ other (other first). Requires matching middle colors.
    pub fn compose_after(&self, colors: &ColorData, other: &WreathArrow) -> WreathArrow {
        let n = other.perm.len();
        let mut perm = vec![0; n];
        let mut comps = vec![0; n];
        for i in 0..n {
            perm[i] = self.perm[other.perm[i]];
            comps[i] = colors
                .groupoid
                .compose(self.comps[other.perm[i]], other.comps[i])
                .expect("wreath arrows composable");
        }
        WreathArrow {
            genus: other.genus,
            src_colors: other.src_colors.clone(),
            perm,
            comps,
        }
    }
}

/// A stable module: carriers per decorated corolla, functorial in the
/// wreath groupoid.
pub trait StableModule {
    fn kind(&self) -> ValueKind;
    /// Carrier cardinality (Set) or dimension (Vect).
    fn carrier(&self, colors: &ColorData, key: &CorollaKey) -> usize;
    /// The map induced by a wreath arrow.
    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData;
    /// Content digest of the module's tables, for memo keys.
    fn fingerprint(&self) -> u64;
}

/// One-point (or k-point) carriers on a fixed list of (genus, arity)
/// supports, with trivial action.
#[derive(Debug, Clone)]
pub struct PointModule {
    pub supports: Vec<(usize, usize, usize)>, // (genus, arity, size)
}

impl PointModule {
    pub fn on(supports: &[(usize, usize)]) -> Self {
        PointModule {
            supports: supports.iter().map(|&(g, n)| (g, n, 1)).collect(),
        }
    }

    pub fn with_sizes(supports: Vec<(usize, usize, usize)>) -> Self {
        PointModule { supports }
    }
}

impl StableModule for PointModule {
    fn kind(&self) -> ValueKind {
        ValueKind::Set
    }

    fn carrier(&self, _colors: &ColorData, key: &CorollaKey) -> usize {
        self.supports
            .iter()
            .find(|&&(g, n, _)| g == key.genus && n == key.arity())
            .map(|&(_, _, s)| s)
            .unwrap_or(0)
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        let size = self.carrier(colors, &CorollaKey::new(arrow.genus, arrow.src_colors.clone()));
        MapData::Set((0..size).collect())
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "point".hash(&mut h);
        self.supports.hash(&mut h);
        h.finish()
    }
}

/// Carrier Π_i Hom(c₀, x_i) on the supported (genus, arity) pairs; arrows
/// act by post-composition and slot permutation. Exercises nontrivial color
/// functoriality.
#[derive(Debug, Clone)]
pub struct HomProductModule {
    pub base_object: usize,
    pub supports: Vec<(usize, usize)>,
}

impl HomProductModule {
    fn hom_sizes(&self, colors: &ColorData, key: &CorollaKey) -> Vec<usize> {
        key.colors
            .iter()
            .map(|&x| colors.groupoid.hom(self.base_object, x).len())
            .collect()
    }

    fn supported(&self, key: &CorollaKey) -> bool {
        self.supports
            .iter()
            .any(|&(g, n)| g == key.genus && n == key.arity())
    }
}

impl StableModule for HomProductModule {
    fn kind(&self) -> ValueKind {
        ValueKind::Set
    }

    fn carrier(&self, colors: &ColorData, key: &CorollaKey) -> usize {
        if !self.supported(key) {
            return 0;
        }
        self.hom_sizes(colors, key).iter().product()
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        let m = self;
        let src = CorollaKey::new(arrow.genus, arrow.src_colors.clone());
        let dst = arrow.dst_key(colors);
        let src_sizes = m.hom_sizes(colors, &src);
        let dst_sizes = m.hom_sizes(colors, &dst);
        if !m.supported(&src) {
            return MapData::Set(Vec::new());
        }
        let n = arrow.perm.len();
        let total: usize = src_sizes.iter().product();
        let mut table = Vec::with_capacity(total);
        for e in 0..total {
            // decode mixed radix (slot 0 most significant)
            let mut rem = e;
            let mut src_parts = vec![0; n];
            for i in (0..n).rev() {
                src_parts[i] = rem % src_sizes[i].max(1);
                rem /= src_sizes[i].max(1);
            }
            let mut dst_parts = vec![0; n];
            for i in 0..n {
                let homs_src = colors.groupoid.hom(m.base_object, src.colors[i]);
                let u = homs_src[src_parts[i]];
                let v = colors.groupoid.compose(arrow.comps[i], u).unwrap();
                let j = arrow.perm[i];
                let homs_dst = colors.groupoid.hom(m.base_object, dst.colors[j]);
                dst_parts[j] = homs_dst.iter().position(|&w| w == v).unwrap();
            }
            let mut idx = 0;
            for j in 0..n {
                idx = idx * dst_sizes[j].max(1) + dst_parts[j];
            }
            table.push(idx);
        }
        MapData::Set(table)
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "homprod".hash(&mut h);
        self.base_object.hash(&mut h);
        self.supports.hash(&mut h);
        h.finish()
    }
}

/// One-dimensional space on the listed (genus, arity) supports where
/// arrows act by the sign of their permutation. Only meaningful over
/// trivial colors.
#[derive(Debug, Clone)]
pub struct SignModule {
    pub supports: Vec<(usize, usize)>,
}

fn perm_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl StableModule for SignModule {
    fn kind(&self) -> ValueKind {
        ValueKind::Vect
    }

    fn carrier(&self, _colors: &ColorData, key: &CorollaKey) -> usize {
        usize::from(
            self.supports
                .iter()
                .any(|&(g, n)| g == key.genus && n == key.arity()),
        )
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        let key = CorollaKey::new(arrow.genus, arrow.src_colors.clone());
        let d = self.carrier(colors, &key);
        let mut m = RatMatrix::zero(d, d);
        if d == 1 {
            m[(0, 0)] = crate::rational::rat_int(perm_sign(&arrow.perm));
        }
        MapData::Vect(m)
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "sign".hash(&mut h);
        self.supports.hash(&mut h);
        h.finish()
    }
}

/// The free vector space on a set module's carriers: actions become
/// permutation matrices.
pub struct LinearizedModule<M>(pub M);

impl<M: StableModule> StableModule for LinearizedModule<M> {
    fn kind(&self) -> ValueKind {
        ValueKind::Vect
    }

    fn carrier(&self, colors: &ColorData, key: &CorollaKey) -> usize {
        self.0.carrier(colors, key)
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        match self.0.act(colors, arrow) {
            MapData::Set(t) => MapData::Vect(RatMatrix::permutation(&t)),
            MapData::Vect(_) => unreachable!("linearization wraps a set module"),
        }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "linearized".hash(&mut h);
        self.0.fingerprint().hash(&mut h);
        h.finish()
    }
}

/// Explicit carriers and action tables, loadable from JSON. Actions not
/// listed default to the identity (requiring equal carrier sizes), so a
/// table with no action entries is a constant module. Functoriality is
/// checked by `validate` on the supported corollas.
#[derive(Debug, Clone)]
pub struct TableModule {
    carriers: std::collections::BTreeMap<(usize, Vec<usize>), usize>,
    actions: std::collections::BTreeMap<(usize, Vec<usize>, Vec<usize>, Vec<usize>), Vec<usize>>,
}

impl TableModule {
    pub fn new(
        carriers: std::collections::BTreeMap<(usize, Vec<usize>), usize>,
        actions: std::collections::BTreeMap<(usize, Vec<usize>, Vec<usize>, Vec<usize>), Vec<usize>>,
    ) -> Self {
        TableModule { carriers, actions }
    }

    pub fn validate(&self, colors: &ColorData) -> crate::error::Result<()> {
        use crate::error::Error;
        for ((genus, src, perm, comps), map) in &self.actions {
            let arrow = WreathArrow {
                genus: *genus,
                src_colors: src.clone(),
                perm: perm.clone(),
                comps: comps.clone(),
            };
            arrow.validate(colors)?;
            let src_size = self.carrier(colors, &CorollaKey::new(*genus, src.clone()));
            let dst_key = arrow.dst_key(colors);
            let dst_size = self.carrier(colors, &dst_key);
            if map.len() != src_size || map.iter().any(|&x| x >= dst_size.max(1)) {
                return Err(Error::validation(format!(
                    "action table at ({genus}, {src:?}) is not a map into the target carrier"
                )));
            }
        }
        let keys: Vec<CorollaKey> = self
            .carriers
            .keys()
            .map(|(g, c)| CorollaKey::new(*g, c.clone()))
            .collect();
        let rep = check_functoriality(colors, self, &keys, 50_000);
        if !rep.pass {
            return Err(Error::validation(format!(
                "table module not functorial: {}",
                rep.violation.unwrap_or_default()
            )));
        }
        Ok(())
    }
}

impl StableModule for TableModule {
    fn kind(&self) -> ValueKind {
        ValueKind::Set
    }

    fn carrier(&self, _colors: &ColorData, key: &CorollaKey) -> usize {
        self.carriers
            .get(&(key.genus, key.colors.clone()))
            .copied()
            .unwrap_or(0)
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        let key = (
            arrow.genus,
            arrow.src_colors.clone(),
            arrow.perm.clone(),
            arrow.comps.clone(),
        );
        if let Some(map) = self.actions.get(&key) {
            return MapData::Set(map.clone());
        }
        let size = self.carrier(colors, &CorollaKey::new(arrow.genus, arrow.src_colors.clone()));
        MapData::Set((0..size).collect())
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "table".hash(&mut h);
        self.carriers.hash(&mut h);
        self.actions.hash(&mut h);
        h.finish()
    }
}

/// Enumerate all wreath arrows out of a corolla.
pub fn arrows_from(colors: &ColorData, key: &CorollaKey) -> Vec<WreathArrow> {
    let n = key.arity();
    let mut perms = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let per_slot: Vec<Vec<usize>> = key
        .colors
        .iter()
        .map(|&x| colors.groupoid.out_of(x))
        .collect();
    let mut out = Vec::new();
    for perm in &perms {
        let mut pick = vec![0usize; n];
        loop {
            let comps: Vec<usize> = (0..n).map(|i| per_slot[i][pick[i]]).collect();
            out.push(WreathArrow {
                genus: key.genus,
                src_colors: key.colors.clone(),
                perm: perm.clone(),
                comps,
            });
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                pick[pos] += 1;
                if pick[pos] < per_slot[pos].len() {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
            if pick.iter().all(|&x| x == 0) {
                break;
            }
            if n == 0 {
                break;
            }
        }
        if n == 0 {
            break;
        }
    }
    out
}

/// Exhaustively verify identity and composition laws of a module on the
/// given corollas. Quadratic in the number of arrows; intended for desk
/// scale.
pub fn check_functoriality(
    colors: &ColorData,
    module: &dyn StableModule,
    keys: &[CorollaKey],
    pair_cap: usize,
) -> Report {
    let mut rep = Report::new("module functoriality");
    for key in keys {
        let id = WreathArrow::identity(colors, key);
        let size = module.carrier(colors, key);
        let expected = MapData::identity(module.kind(), size);
        rep.check(module.act(colors, &id) == expected, || {
            format!("identity action wrong at {key:?}")
        });
        let arrows = arrows_from(colors, key);
        let mut pairs = 0usize;
        for a in &arrows {
            let mid = a.dst_key(colors);
            for b in arrows_from(colors, &mid) {
                if pairs >= pair_cap {
                    break;
                }
                pairs += 1;
                let composite = b.compose_after(colors, a);
                let lhs = module.act(colors, &composite);
                let rhs = module
                    .act(colors, &b)
                    .compose_after(&module.act(colors, a));
                rep.check(lhs == rhs, || {
                    format!("composition law fails at {key:?} via {:?}", (a, &b))
                });
                if !rep.pass {
                    return rep;
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_by_name;
    use crate::groupoid::loop_groupoid;

    #[test]
    fn point_module_functorial() {
        let colors = loop_groupoid(&group_by_name("Z2").unwrap());
        let m = PointModule::on(&[(0, 3)]);
        let keys: Vec<CorollaKey> = vec![
            CorollaKey::new(0, vec![0, 0, 0]),
            CorollaKey::new(0, vec![0, 1, 1]),
        ];
        let rep = check_functoriality(&colors, &m, &keys, 20_000);
        assert!(rep.pass, "{:?}", rep.violation);
    }

    #[test]
    fn hom_product_module_functorial() {
        let colors = loop_groupoid(&group_by_name("S3").unwrap());
        let m = HomProductModule {
            base_object: 1,
            supports: vec![(0, 2)],
        };
        let keys = vec![CorollaKey::new(0, vec![1, 2])];
        let rep = check_functoriality(&colors, &m, &keys, 4_000);
        assert!(rep.pass, "{:?}", rep.violation);
    }

    #[test]
    fn sign_module_functorial() {
        let colors = ColorData::trivial();
        let m = SignModule {
            supports: vec![(0, 3)],
        };
        let keys = vec![CorollaKey::new(0, vec![0, 0, 0])];
        let rep = check_functoriality(&colors, &m, &keys, 10_000);
        assert!(rep.pass, "{:?}", rep.violation);
    }

    #[test]
    fn sign_of_permutations() {
        assert_eq!(perm_sign(&[0, 1, 2]), 1);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn wreath_arrow_composition_targets() {
        let colors = loop_groupoid(&group_by_name("S3").unwrap());
        let key = CorollaKey::new(0, vec![1, 2, 0]);
        for a in arrows_from(&colors, &key).into_iter().take(60) {
            a.validate(&colors).unwrap();
            let mid = a.dst_key(&colors);
            for b in arrows_from(&colors, &mid).into_iter().take(20) {
                let c = b.compose_after(&colors, &a);
                c.validate(&colors).unwrap();
                assert_eq!(c.dst_key(&colors), b.dst_key(&colors));
            }
        }
    }
}
