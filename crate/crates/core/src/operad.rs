//! The free modular operad monad: per-corolla colimits over decorated
//! stable graphs, the monad unit and multiplication, and the tree and
//! rooted-digraph-tree variants.
//!
//! The colimit at a corolla (g, x⃗) runs over stable decorated graphs with
//! legs pinned to x⃗. Its generating identifications are the underlying
//! shape automorphisms (with identity decoration maps) and the single-flag
//! decoration morphisms; every morphism of the slice groupoid is a
//! composite of these.

use std::cell::RefCell;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use crate::colimit::{set_colimit, vect_colimit, Diagram, SetColimit, VectColimit};
use crate::enumerate::{decorations_of_shape, enumerate_stable_shapes};
use crate::error::{Error, Result};
use crate::graph::{CGraph, DualGraph};
use crate::groupoid::ColorData;
use crate::iso::underlying_isos;
use crate::linalg::RatMatrix;
use crate::module::{CorollaKey, MapData, StableModule, ValueKind, WreathArrow};
use crate::rational::Rat;
use crate::report::Report;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    /// all stable decorated graphs
    Modular,
    /// stable trees, all genus labels zero
    Trees,
    /// stable digraph trees over C ⊔ C^op with exactly one outgoing flag
    /// per vertex; colors at or above the split index are outgoing
    RootedDigraphTrees { split: usize },
}

impl GraphClass {
    fn admits_shape(&self, shape: &DualGraph) -> bool {
        match self {
            GraphClass::Modular => true,
            GraphClass::Trees | GraphClass::RootedDigraphTrees { .. } => {
                shape.genus.iter().all(|&g| g == 0)
                    && shape.graph.n_edges() + 1 == shape.graph.n_vertices
            }
        }
    }

    fn admits_decoration(&self, g: &CGraph) -> bool {
        match self {
            GraphClass::Modular | GraphClass::Trees => true,
            GraphClass::RootedDigraphTrees { split } => (0..g.dual.graph.n_vertices).all(|v| {
                g.dual
                    .graph
                    .flags_of(v)
                    .iter()
                    .filter(|&&f| g.colors[f] >= *split)
                    .count()
                    == 1
            }),
        }
    }

    fn admits_corolla(&self, key: &CorollaKey) -> Result<()> {
        match self {
            GraphClass::Modular => Ok(()),
            GraphClass::Trees => {
                if key.genus != 0 {
                    return Err(Error::bad_input("tree monad is defined at genus 0"));
                }
                Ok(())
            }
            GraphClass::RootedDigraphTrees { split } => {
                if key.genus != 0 {
                    return Err(Error::bad_input("digraph tree monad is defined at genus 0"));
                }
                if key.colors.iter().filter(|&&c| c >= *split).count() != 1 {
                    return Err(Error::bad_input(
                        "rooted digraph corolla needs exactly one outgoing color",
                    ));
                }
                Ok(())
            }
        }
    }
}

/// The colimit presentation of the free operad at one corolla: generator
/// summands (one per decorated graph), the identification relation computed
/// by union-find or rank reduction, and chosen representatives.
pub struct CorollaColimit {
    pub key: CorollaKey,
    pub kind: ValueKind,
    pub shapes: Vec<DualGraph>,
    /// all decorated graphs, flattened across shapes
    pub objects: Vec<CGraph>,
    /// object index of each shape's first decoration
    shape_offset: Vec<usize>,
    object_index: HashMap<Vec<u8>, usize>,
    /// V(Γ) per object
    pub sizes: Vec<usize>,
    /// per object: per-vertex carrier sizes
    vertex_sizes: Vec<Vec<usize>>,
    pub set: Option<SetColimit>,
    pub vect: Option<VectColimit>,
}

impl CorollaColimit {
    pub fn n_classes(&self) -> usize {
        match self.kind {
            ValueKind::Set => self.set.as_ref().unwrap().n_classes(),
            ValueKind::Vect => self.vect.as_ref().unwrap().dim(),
        }
    }

    /// Representative (graph, element) of a set-kind class.
    pub fn rep(&self, class: usize) -> (&CGraph, usize) {
        let (obj, elem) = self.set.as_ref().unwrap().reps[class];
        (&self.objects[obj], elem)
    }

    pub fn class_count_by_shape(&self) -> Vec<(usize, usize)> {
        let set = self.set.as_ref().unwrap();
        let mut counts = vec![0usize; self.shapes.len()];
        for class in 0..set.n_classes() {
            let (obj, _) = set.reps[class];
            let shape = self.shape_offset.partition_point(|&o| o <= obj) - 1;
            counts[shape] += 1;
        }
        counts.into_iter().enumerate().collect()
    }
}

/// Decode a product element into per-vertex parts (slot 0 most significant).
fn decode_product(sizes: &[usize], elem: usize) -> Vec<usize> {
    let mut parts = vec![0; sizes.len()];
    let mut rem = elem;
    for i in (0..sizes.len()).rev() {
        let s = sizes[i].max(1);
        parts[i] = rem % s;
        rem /= s;
    }
    parts
}

fn encode_product(sizes: &[usize], parts: &[usize]) -> usize {
    let mut idx = 0;
    for i in 0..sizes.len() {
        idx = idx * sizes[i].max(1) + parts[i];
    }
    idx
}

/// The map V(Γ) → V(Γ') induced by per-vertex wreath arrows along a vertex
/// bijection.
fn product_map(
    colors: &ColorData,
    module: &dyn StableModule,
    src_vertex_sizes: &[usize],
    dst_vertex_sizes: &[usize],
    vertex_map: &[usize],
    arrows: &[WreathArrow],
    kind: ValueKind,
) -> MapData {
    match kind {
        ValueKind::Set => {
            let total: usize = src_vertex_sizes.iter().product();
            let maps: Vec<MapData> = arrows.iter().map(|a| module.act(colors, a)).collect();
            let mut table = Vec::with_capacity(total);
            for e in 0..total {
                let parts = decode_product(src_vertex_sizes, e);
                let mut dst_parts = vec![0; dst_vertex_sizes.len()];
                for (v, &p) in parts.iter().enumerate() {
                    dst_parts[vertex_map[v]] = maps[v].apply_elem(p);
                }
                table.push(encode_product(dst_vertex_sizes, &dst_parts));
            }
            MapData::Set(table)
        }
        ValueKind::Vect => {
            let src_total: usize = src_vertex_sizes.iter().product();
            let dst_total: usize = dst_vertex_sizes.iter().product();
            let mats: Vec<RatMatrix> = arrows
                .iter()
                .map(|a| match module.act(colors, a) {
                    MapData::Vect(m) => m,
                    MapData::Set(_) => panic!("vect module expected"),
                })
                .collect();
            let mut out = RatMatrix::zero(dst_total, src_total);
            for e in 0..src_total {
                let parts = decode_product(src_vertex_sizes, e);
                // dense outer product over destination multi-indices
                let mut acc: Vec<(Vec<usize>, Rat)> = vec![(vec![0; dst_vertex_sizes.len()], Rat::one())];
                for (v, &p) in parts.iter().enumerate() {
                    let m = &mats[v];
                    let w = vertex_map[v];
                    let mut next = Vec::new();
                    for (idx, coef) in &acc {
                        for r in 0..m.rows {
                            let c = &m[(r, p)];
                            if c.is_zero() {
                                continue;
                            }
                            let mut idx2 = idx.clone();
                            idx2[w] = r;
                            next.push((idx2, coef * c));
                        }
                    }
                    acc = next;
                }
                for (idx, coef) in acc {
                    let flat = encode_product(dst_vertex_sizes, &idx);
                    out[(flat, e)] += coef;
                }
            }
            MapData::Vect(out)
        }
    }
}

/// Apply a single-flag decoration morphism q at `flag`, returning the
/// recolored graph.
fn recolor_flag(colors: &ColorData, g: &CGraph, flag: usize, q: usize) -> CGraph {
    let gpd = &colors.groupoid;
    let mut cols = g.colors.clone();
    cols[flag] = gpd.tgt[q];
    let edges = g.dual.graph.edges();
    let mut pairings = g.pairings.clone();
    let partner = g.dual.graph.tau[flag];
    assert_ne!(partner, flag, "cannot recolor a leg");
    let e = edges
        .iter()
        .position(|&(x, y)| (x, y) == (flag.min(partner), flag.max(partner)))
        .unwrap();
    if flag < partner {
        // φ' = φ ∘ q⁻¹
        pairings[e] = gpd.compose(pairings[e], gpd.invert[q]).unwrap();
    } else {
        // φ' = (q⁻¹)^∨ ∘ φ
        pairings[e] = gpd
            .compose(colors.dual_mor(gpd.invert[q]), pairings[e])
            .unwrap();
    }
    CGraph::new(colors, g.dual.clone(), cols, pairings).expect("recoloring stays valid")
}

/// Per-vertex corolla sizes of a decorated graph under a module.
fn graph_vertex_sizes(colors: &ColorData, module: &dyn StableModule, g: &CGraph) -> Vec<usize> {
    (0..g.dual.graph.n_vertices)
        .map(|v| {
            let (genus, cols) = g.corolla_of(v);
            module.carrier(colors, &CorollaKey::new(genus, cols))
        })
        .collect()
}

/// Carrier of a module extended to a whole stable graph: the product (Set)
/// or tensor product (Vect) of the vertex carriers.
pub fn graph_carrier(colors: &ColorData, module: &dyn StableModule, g: &CGraph) -> Result<usize> {
    for v in 0..g.dual.graph.n_vertices {
        if 2 * (g.dual.genus[v] as i64) - 2 + (g.dual.valence(v) as i64) <= 0 {
            return Err(Error::Unstable {
                genus: g.dual.genus[v],
                legs: g.dual.valence(v),
                extra: " at a vertex",
            });
        }
    }
    Ok(graph_vertex_sizes(colors, module, g).iter().product())
}

/// The free modular operad applied to one module, with per-corolla lazy
/// colimits memoized by (corolla, module fingerprint).
pub struct FreeOperad {
    pub colors: Rc<ColorData>,
    pub module: Rc<dyn StableModule>,
    pub class: GraphClass,
    /// edge-count cap; enumeration refuses to run rather than truncate
    pub bound: Option<usize>,
    colimits: RefCell<BTreeMap<CorollaKey, Rc<CorollaColimit>>>,
    lookup_cache: RefCell<HashMap<Vec<u8>, (usize, MapData)>>,
}

impl FreeOperad {
    pub fn new(colors: Rc<ColorData>, module: Rc<dyn StableModule>) -> Self {
        FreeOperad {
            colors,
            module,
            class: GraphClass::Modular,
            bound: None,
            colimits: RefCell::new(BTreeMap::new()),
            lookup_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_class(colors: Rc<ColorData>, module: Rc<dyn StableModule>, class: GraphClass) -> Self {
        FreeOperad {
            colors,
            module,
            class,
            bound: None,
            colimits: RefCell::new(BTreeMap::new()),
            lookup_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn kind(&self) -> ValueKind {
        self.module.kind()
    }

    /// The colimit presentation at a corolla, computed on first use.
    pub fn colimit(&self, key: &CorollaKey) -> Result<Rc<CorollaColimit>> {
        if let Some(c) = self.colimits.borrow().get(key) {
            return Ok(Rc::clone(c));
        }
        let built = Rc::new(self.build_colimit(key)?);
        // insert-once: concurrent recomputation would produce the same value
        self.colimits
            .borrow_mut()
            .entry(key.clone())
            .or_insert_with(|| Rc::clone(&built));
        Ok(built)
    }

    fn build_colimit(&self, key: &CorollaKey) -> Result<CorollaColimit> {
        self.class.admits_corolla(key)?;
        if !key.is_stable() {
            return Err(Error::Unstable {
                genus: key.genus,
                legs: key.arity(),
                extra: "",
            });
        }
        let colors = &*self.colors;
        let shapes: Vec<DualGraph> = enumerate_stable_shapes(key.genus, key.arity())?
            .into_iter()
            .filter(|s| self.class.admits_shape(s))
            .collect();
        let needed = shapes.iter().map(|s| s.graph.n_edges()).max().unwrap_or(0);
        if let Some(bound) = self.bound {
            if bound < needed {
                return Err(Error::IncompleteBound {
                    given: bound,
                    needed,
                });
            }
        }
        let mut objects: Vec<CGraph> = Vec::new();
        let mut shape_offset = Vec::new();
        for shape in &shapes {
            shape_offset.push(objects.len());
            for dec in decorations_of_shape(colors, shape, &key.colors) {
                if self.class.admits_decoration(&dec) {
                    if let GraphClass::Trees = self.class {
                        assert!(
                            dec.dual.graph.n_edges() + 1 == dec.dual.graph.n_vertices,
                            "cyclic graph in tree mode"
                        );
                    }
                    objects.push(dec);
                }
            }
        }
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            object_index.insert(o.to_bytes(), i);
        }
        let module = &*self.module;
        let vertex_sizes: Vec<Vec<usize>> = objects
            .iter()
            .map(|o| graph_vertex_sizes(colors, module, o))
            .collect();
        let sizes: Vec<usize> = vertex_sizes.iter().map(|v| v.iter().product()).collect();

        // generators
        let mut generators: Vec<(usize, usize, MapData)> = Vec::new();
        let kind = module.kind();
        for (s, shape) in shapes.iter().enumerate() {
            let zeros = vec![0usize; shape.graph.n_flags];
            let autos = underlying_isos(shape, shape, &zeros, &zeros, true);
            let range = shape_offset[s]
                ..shapes
                    .get(s + 1)
                    .map(|_| shape_offset[s + 1])
                    .unwrap_or(objects.len());
            for obj in range {
                if sizes[obj] == 0 {
                    continue;
                }
                let g = &objects[obj];
                // shape automorphisms with identity decoration maps
                for auto in &autos {
                    if auto.flag_pull.iter().enumerate().all(|(i, &f)| i == f) {
                        continue;
                    }
                    // transported decoration
                    let cols: Vec<usize> =
                        auto.flag_pull.iter().map(|&f| g.colors[f]).collect();
                    let pairings: Vec<usize> = shape
                        .graph
                        .edges()
                        .iter()
                        .map(|&(x, _)| g.pairing_from(colors, auto.flag_pull[x]))
                        .collect();
                    let dst_graph = CGraph::new(colors, shape.clone(), cols, pairings)
                        .expect("transported decoration is valid");
                    // relabeling preserves per-vertex color multisets, so
                    // admissibility carries over to the transported object
                    debug_assert!(self.class.admits_decoration(&dst_graph));
                    let dst = *object_index
                        .get(&dst_graph.to_bytes())
                        .expect("transported decoration must be enumerated");
                    let arrows = arrows_of_iso(colors, g, &dst_graph, auto);
                    let map = product_map(
                        colors,
                        module,
                        &vertex_sizes[obj],
                        &vertex_sizes[dst],
                        &auto.vertex_map,
                        &arrows,
                        kind,
                    );
                    generators.push((obj, dst, map));
                }
                // single-flag decoration morphisms
                for f in 0..g.dual.graph.n_flags {
                    if g.dual.graph.tau[f] == f {
                        continue;
                    }
                    for &q in &colors.groupoid.out_of(g.colors[f]) {
                        if q == colors.groupoid.identity[g.colors[f]] {
                            continue;
                        }
                        let dst_graph = recolor_flag(colors, g, f, q);
                        if !self.class.admits_decoration(&dst_graph) {
                            continue;
                        }
                        let dst = *object_index
                            .get(&dst_graph.to_bytes())
                            .expect("recolored decoration must be enumerated");
                        let v = g.dual.graph.h[f];
                        let arrows: Vec<WreathArrow> = (0..g.dual.graph.n_vertices)
                            .map(|u| {
                                let (genus, cols) = g.corolla_of(u);
                                let mut arrow = WreathArrow::identity(
                                    colors,
                                    &CorollaKey::new(genus, cols),
                                );
                                if u == v {
                                    let slot = g
                                        .dual
                                        .graph
                                        .flags_of(u)
                                        .iter()
                                        .position(|&x| x == f)
                                        .unwrap();
                                    arrow.comps[slot] = q;
                                }
                                arrow
                            })
                            .collect();
                        let vertex_map: Vec<usize> = (0..g.dual.graph.n_vertices).collect();
                        let map = product_map(
                            colors,
                            module,
                            &vertex_sizes[obj],
                            &vertex_sizes[dst],
                            &vertex_map,
                            &arrows,
                            kind,
                        );
                        generators.push((obj, dst, map));
                    }
                }
            }
        }
        let diagram = Diagram {
            sizes: sizes.clone(),
            generators,
        };
        let (set, vect) = match kind {
            ValueKind::Set => (Some(set_colimit(&diagram)), None),
            ValueKind::Vect => (None, Some(vect_colimit(&diagram)?)),
        };
        Ok(CorollaColimit {
            key: key.clone(),
            kind,
            shapes,
            objects,
            shape_offset,
            object_index,
            sizes,
            vertex_sizes,
            set,
            vect,
        })
    }

    /// The monad unit: V(γ) → 𝕄V(γ), the corolla summand's class.
    pub fn unit_class(&self, key: &CorollaKey, elem: usize) -> Result<usize> {
        let corolla = CGraph::corolla(&self.colors, key.genus, &key.colors)?;
        self.class_of(&corolla, elem)
    }

    /// Class of an arbitrary decorated stable graph with an element of its
    /// extended carrier. The graph must have legs pinned to the corolla of
    /// this colimit.
    pub fn class_of(&self, graph: &CGraph, elem: usize) -> Result<usize> {
        let key = CorollaKey::new(graph.dual.genus_value()?, graph.leg_colors());
        let colim = self.colimit(&key)?;
        let bytes = graph.to_bytes();
        if let Some((obj, map)) = self.lookup_cache.borrow().get(&bytes) {
            return Ok(colim.set.as_ref().unwrap().class_of(*obj, map.apply_elem(elem)));
        }
        let colors = &*self.colors;
        // locate the shape and an iso onto it
        let zeros_src = vec![0usize; graph.dual.graph.n_flags];
        let mut found = None;
        'shapes: for (s, shape) in colim.shapes.iter().enumerate() {
            let zeros_dst = vec![0usize; shape.graph.n_flags];
            for iso in underlying_isos(&graph.dual, shape, &zeros_src, &zeros_dst, false) {
                let cols: Vec<usize> = iso.flag_pull.iter().map(|&f| graph.colors[f]).collect();
                let pairings: Vec<usize> = shape
                    .graph
                    .edges()
                    .iter()
                    .map(|&(x, _)| graph.pairing_from(colors, iso.flag_pull[x]))
                    .collect();
                let dst_graph = CGraph::new(colors, shape.clone(), cols, pairings)
                    .expect("transported decoration is valid");
                let obj = *colim
                    .object_index
                    .get(&dst_graph.to_bytes())
                    .expect("decoration must be enumerated");
                let _ = s;
                let arrows = arrows_of_iso(colors, graph, &dst_graph, &iso);
                let src_sizes = graph_vertex_sizes(colors, &*self.module, graph);
                let map = product_map(
                    colors,
                    &*self.module,
                    &src_sizes,
                    &colim.vertex_sizes[obj],
                    &iso.vertex_map,
                    &arrows,
                    ValueKind::Set,
                );
                found = Some((obj, map));
                break 'shapes;
            }
        }
        let (obj, map) = found.ok_or_else(|| {
            Error::validation("graph matches no enumerated shape (is it stable and connected?)".to_string())
        })?;
        let class = colim.set.as_ref().unwrap().class_of(obj, map.apply_elem(elem));
        self.lookup_cache.borrow_mut().insert(bytes, (obj, map));
        Ok(class)
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "free-operad".hash(&mut h);
        self.module.fingerprint().hash(&mut h);
        format!("{:?}", self.class).hash(&mut h);
        self.bound.hash(&mut h);
        h.finish()
    }
}

/// Per-vertex wreath arrows realizing a decorated iso with identity q maps.
fn arrows_of_iso(
    colors: &ColorData,
    src: &CGraph,
    dst: &CGraph,
    iso: &crate::graph::GraphMorphism,
) -> Vec<WreathArrow> {
    (0..src.dual.graph.n_vertices)
        .map(|v| {
            let w = iso.vertex_map[v];
            let src_flags = src.dual.graph.flags_of(v);
            let dst_flags = dst.dual.graph.flags_of(w);
            let mut perm = vec![0; src_flags.len()];
            let mut comps = vec![0; src_flags.len()];
            for (j, &fd) in dst_flags.iter().enumerate() {
                let fs = iso.flag_pull[fd];
                let i = src_flags.iter().position(|&x| x == fs).unwrap();
                perm[i] = j;
                comps[i] = colors.groupoid.identity[src.colors[fs]];
            }
            WreathArrow {
                genus: src.dual.genus[v],
                src_colors: src_flags.iter().map(|&f| src.colors[f]).collect(),
                perm,
                comps,
            }
        })
        .collect()
}

/// 𝕄V as a stable module, for iterating the monad.
pub struct MModule {
    pub layer: Rc<FreeOperad>,
}

impl StableModule for MModule {
    fn kind(&self) -> ValueKind {
        self.layer.kind()
    }

    fn carrier(&self, _colors: &ColorData, key: &CorollaKey) -> usize {
        if !key.is_stable() || self.layer.class.admits_corolla(key).is_err() {
            return 0;
        }
        self.layer
            .colimit(key)
            .expect("free operad colimit at desk scale")
            .n_classes()
    }

    fn act(&self, colors: &ColorData, arrow: &WreathArrow) -> MapData {
        let src_key = CorollaKey::new(arrow.genus, arrow.src_colors.clone());
        let src = self
            .layer
            .colimit(&src_key)
            .expect("free operad colimit at desk scale");
        let n = src.n_classes();
        let mut table = Vec::with_capacity(n);
        for class in 0..n {
            let (rep, elem) = src.rep(class);
            let (graph2, elem2) = transport_along_arrow(colors, &self.layer, rep, elem, arrow);
            table.push(
                self.layer
                    .class_of(&graph2, elem2)
                    .expect("transport stays at desk scale"),
            );
        }
        MapData::Set(table)
    }

    fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        "m-module".hash(&mut h);
        self.layer.fingerprint().hash(&mut h);
        h.finish()
    }
}

/// Relabel and recolor the legs of a representative along a wreath arrow,
/// acting on its element through the inner module.
fn transport_along_arrow(
    colors: &ColorData,
    layer: &FreeOperad,
    rep: &CGraph,
    elem: usize,
    arrow: &WreathArrow,
) -> (CGraph, usize) {
    let n = arrow.perm.len();
    let gpd = &colors.groupoid;
    let mut cols = rep.colors.clone();
    let mut legs = vec![0; n];
    for i in 0..n {
        let f = rep.dual.graph.legs[i];
        cols[f] = gpd.tgt[arrow.comps[i]];
        legs[arrow.perm[i]] = f;
    }
    let graph = crate::graph::Graph {
        n_flags: rep.dual.graph.n_flags,
        n_vertices: rep.dual.graph.n_vertices,
        h: rep.dual.graph.h.clone(),
        tau: rep.dual.graph.tau.clone(),
        legs,
    };
    let dual = DualGraph {
        graph,
        genus: rep.dual.genus.clone(),
    };
    let graph2 = CGraph::new(colors, dual, cols, rep.pairings.clone())
        .expect("leg relabeling stays valid");
    // act on the element vertex-wise
    let module = &*layer.module;
    let src_sizes = graph_vertex_sizes(colors, module, rep);
    let dst_sizes = graph_vertex_sizes(colors, module, &graph2);
    let arrows: Vec<WreathArrow> = (0..rep.dual.graph.n_vertices)
        .map(|v| {
            let (genus, vcols) = rep.corolla_of(v);
            let key = CorollaKey::new(genus, vcols);
            let mut a = WreathArrow::identity(colors, &key);
            for i in 0..n {
                let f = rep.dual.graph.legs[i];
                if rep.dual.graph.h[f] == v {
                    let slot = rep.dual.graph.flags_of(v).iter().position(|&x| x == f).unwrap();
                    a.comps[slot] = arrow.comps[i];
                }
            }
            a
        })
        .collect();
    let vertex_map: Vec<usize> = (0..rep.dual.graph.n_vertices).collect();
    let map = product_map(
        colors,
        module,
        &src_sizes,
        &dst_sizes,
        &vertex_map,
        &arrows,
        ValueKind::Set,
    );
    (graph2, map.apply_elem(elem))
}

/// Monad multiplication: flatten a class of 𝕄(𝕄V)(γ) into 𝕄V(γ) by
/// splicing each vertex's representative graph into the outer graph.
pub fn multiply(
    outer: &FreeOperad,
    inner: &FreeOperad,
    key: &CorollaKey,
    class: usize,
) -> Result<usize> {
    let colim = outer.colimit(key)?;
    let (graph, elem) = colim.rep(class);
    flatten_and_lookup(outer, inner, graph, elem)
}

/// Flatten one (graph, element) pair of the outer layer.
pub fn flatten_and_lookup(
    outer: &FreeOperad,
    inner: &FreeOperad,
    graph: &CGraph,
    elem: usize,
) -> Result<usize> {
    let colors = &*outer.colors;
    let m = graph.dual.graph.n_vertices;
    let vertex_sizes = graph_vertex_sizes(colors, &*outer.module, graph);
    let parts = decode_product(&vertex_sizes, elem);
    // per outer vertex: representative of the inner class
    let mut inner_reps: Vec<(CGraph, usize)> = Vec::with_capacity(m);
    for v in 0..m {
        let (genus, cols) = graph.corolla_of(v);
        let inner_colim = inner.colimit(&CorollaKey::new(genus, cols))?;
        let (rep, e) = inner_colim.rep(parts[v]);
        inner_reps.push((rep.clone(), e));
    }
    // splice
    let mut offsets = Vec::with_capacity(m);
    let mut total_flags = 0;
    let mut vertex_offsets = Vec::with_capacity(m);
    let mut total_vertices = 0;
    for (r, _) in &inner_reps {
        offsets.push(total_flags);
        total_flags += r.dual.graph.n_flags;
        vertex_offsets.push(total_vertices);
        total_vertices += r.dual.graph.n_vertices;
    }
    let mut h = vec![0; total_flags];
    let mut tau: Vec<usize> = (0..total_flags).collect();
    let mut cols = vec![0; total_flags];
    let mut genus = vec![0; total_vertices];
    for (v, (r, _)) in inner_reps.iter().enumerate() {
        for f in 0..r.dual.graph.n_flags {
            h[offsets[v] + f] = vertex_offsets[v] + r.dual.graph.h[f];
            tau[offsets[v] + f] = offsets[v] + r.dual.graph.tau[f];
            cols[offsets[v] + f] = r.colors[f];
        }
        for u in 0..r.dual.graph.n_vertices {
            genus[vertex_offsets[v] + u] = r.dual.genus[u];
        }
    }
    // outer edges become edges between inner legs
    let local_slot = |v: usize, f: usize| {
        graph
            .dual
            .graph
            .flags_of(v)
            .iter()
            .position(|&x| x == f)
            .unwrap()
    };
    let mut outer_edge_pairing: Vec<(usize, usize, usize)> = Vec::new();
    for (e, &(a, b)) in graph.dual.graph.edges().iter().enumerate() {
        let (va, vb) = (graph.dual.graph.h[a], graph.dual.graph.h[b]);
        let fa = offsets[va] + inner_reps[va].0.dual.graph.legs[local_slot(va, a)];
        let fb = offsets[vb] + inner_reps[vb].0.dual.graph.legs[local_slot(vb, b)];
        tau[fa] = fb;
        tau[fb] = fa;
        outer_edge_pairing.push((fa.min(fb), fa.max(fb), if fa < fb {
            graph.pairings[e]
        } else {
            colors.transpose_pairing(graph.pairings[e])
        }));
    }
    // outer legs persist with their labels
    let mut legs = vec![0; graph.dual.graph.n_legs()];
    for (label, &f) in graph.dual.graph.legs.iter().enumerate() {
        let v = graph.dual.graph.h[f];
        legs[label] = offsets[v] + inner_reps[v].0.dual.graph.legs[local_slot(v, f)];
    }
    let flat_graph = crate::graph::Graph::new(total_vertices, h, tau.clone(), legs)?;
    let flat_dual = DualGraph::new(flat_graph, genus)?;
    // pairings per edge of the flattened graph, sorted by least flag
    let pairings: Vec<usize> = flat_dual
        .graph
        .edges()
        .iter()
        .map(|&(x, y)| {
            if let Some(&(_, _, phi)) = outer_edge_pairing
                .iter()
                .find(|&&(a, b, _)| (a, b) == (x, y))
            {
                phi
            } else {
                // inner edge: locate its origin
                let v = offsets.partition_point(|&o| o <= x) - 1;
                let r = &inner_reps[v].0;
                r.pairing_from(colors, x - offsets[v])
            }
        })
        .collect();
    let flat = CGraph::new(colors, flat_dual, cols, pairings)?;
    debug_assert_eq!(flat.dual.genus_value()?, graph.dual.genus_value()?);
    // combined element: parts per inner vertex in splice order
    let inner_module = &*inner.module;
    let mut flat_parts = Vec::with_capacity(total_vertices);
    for (r, e) in &inner_reps {
        let sizes = graph_vertex_sizes(colors, inner_module, r);
        flat_parts.extend(decode_product(&sizes, *e));
    }
    let flat_sizes = graph_vertex_sizes(colors, inner_module, &flat);
    let flat_elem = encode_product(&flat_sizes, &flat_parts);
    inner.class_of(&flat, flat_elem)
}

/// Map a class of one layer through a per-corolla function on vertex
/// values, landing in another layer over the target module.
pub fn map_classes(
    src_layer: &FreeOperad,
    dst_layer: &FreeOperad,
    key: &CorollaKey,
    class: usize,
    f: &dyn Fn(&CorollaKey, usize) -> Result<usize>,
) -> Result<usize> {
    let colors = &*src_layer.colors;
    let colim = src_layer.colimit(key)?;
    let (graph, elem) = colim.rep(class);
    let src_sizes = graph_vertex_sizes(colors, &*src_layer.module, graph);
    let parts = decode_product(&src_sizes, elem);
    let mut dst_parts = Vec::with_capacity(parts.len());
    for (v, &p) in parts.iter().enumerate() {
        let (genus, cols) = graph.corolla_of(v);
        dst_parts.push(f(&CorollaKey::new(genus, cols), p)?);
    }
    let dst_sizes = graph_vertex_sizes(colors, &*dst_layer.module, graph);
    let dst_elem = encode_product(&dst_sizes, &dst_parts);
    dst_layer.class_of(graph, dst_elem)
}

/// The tower V, 𝕄V, 𝕄𝕄V, 𝕄𝕄𝕄V over one module, with the monad law
/// checks.
pub struct MonadTower {
    pub colors: Rc<ColorData>,
    pub v: Rc<dyn StableModule>,
    pub m1: Rc<FreeOperad>,
    pub m2: Rc<FreeOperad>,
    pub m3: Rc<FreeOperad>,
}

impl MonadTower {
    pub fn new(colors: Rc<ColorData>, v: Rc<dyn StableModule>, class: GraphClass) -> Self {
        let m1 = Rc::new(FreeOperad::with_class(
            Rc::clone(&colors),
            Rc::clone(&v),
            class,
        ));
        let m1_mod: Rc<dyn StableModule> = Rc::new(MModule {
            layer: Rc::clone(&m1),
        });
        let m2 = Rc::new(FreeOperad::with_class(
            Rc::clone(&colors),
            m1_mod,
            class,
        ));
        let m2_mod: Rc<dyn StableModule> = Rc::new(MModule {
            layer: Rc::clone(&m2),
        });
        let m3 = Rc::new(FreeOperad::with_class(
            Rc::clone(&colors),
            m2_mod,
            class,
        ));
        MonadTower {
            colors,
            v,
            m1,
            m2,
            m3,
        }
    }

    /// Unit laws μ ∘ η𝕄 = id = μ ∘ 𝕄η, injectivity of the unit, and
    /// well-definedness of μ on classes at one corolla.
    pub fn check_unit_laws(&self, key: &CorollaKey) -> Result<Report> {
        let mut rep = Report::new(format!("monad unit laws at {key:?}"));
        let m1 = self.m1.colimit(key)?;
        // unit is injective from V(γ)
        let v_size = self.v.carrier(&self.colors, key);
        let mut seen = std::collections::BTreeSet::new();
        for e in 0..v_size {
            let c = self.m1.unit_class(key, e)?;
            rep.check(seen.insert(c), || format!("unit not injective at element {e}"));
        }
        for class in 0..m1.n_classes() {
            // η at 𝕄V followed by μ
            let up = self.m2.unit_class(key, class)?;
            let down = multiply(&self.m2, &self.m1, key, up)?;
            rep.check(down == class, || {
                format!("η𝕄 then μ is not the identity on class {class}")
            });
            // 𝕄η followed by μ
            let m1_layer = &*self.m1;
            let up2 = map_classes(&self.m1, &self.m2, key, class, &|k, e| {
                m1_layer.unit_class(k, e)
            })?;
            let down2 = multiply(&self.m2, &self.m1, key, up2)?;
            rep.check(down2 == class, || {
                format!("𝕄η then μ is not the identity on class {class}")
            });
        }
        Ok(rep)
    }

    /// μ is constant on every class of 𝕄𝕄V(γ): flattening any member of a
    /// class gives the same 𝕄V-class.
    pub fn check_mult_well_defined(&self, key: &CorollaKey) -> Result<Report> {
        let mut rep = Report::new(format!("μ well-defined at {key:?}"));
        let m2 = self.m2.colimit(key)?;
        let set = m2.set.as_ref().unwrap();
        for class in 0..set.n_classes() {
            let expected = multiply(&self.m2, &self.m1, key, class)?;
            for (obj, elem) in set.members(class) {
                let got = flatten_and_lookup(&self.m2, &self.m1, &m2.objects[obj], elem)?;
                rep.check(got == expected, || {
                    format!("class {class} member ({obj}, {elem}) flattens differently")
                });
                if !rep.pass {
                    return Ok(rep);
                }
            }
        }
        Ok(rep)
    }

    /// Associativity μ ∘ 𝕄μ = μ ∘ μ𝕄 on all classes of 𝕄𝕄𝕄V(γ).
    pub fn check_associativity(&self, key: &CorollaKey) -> Result<Report> {
        let mut rep = Report::new(format!("monad associativity at {key:?}"));
        let m3 = self.m3.colimit(key)?;
        for class in 0..m3.n_classes() {
            // route 1: flatten the outer two layers, then μ
            let a = multiply(&self.m3, &self.m2, key, class)?;
            let a = multiply(&self.m2, &self.m1, key, a)?;
            // route 2: μ inside each vertex, then μ
            let m1 = &*self.m1;
            let m2 = &*self.m2;
            let b = map_classes(&self.m3, &self.m2, key, class, &|k, c| {
                multiply(m2, m1, k, c)
            })?;
            let b = multiply(&self.m2, &self.m1, key, b)?;
            rep.check(a == b, || format!("associativity fails on class {class}"));
            if !rep.pass {
                return Ok(rep);
            }
        }
        Ok(rep)
    }
}
