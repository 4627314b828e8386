//! Exhaustive generation of stable dual graphs with labeled legs, and of
//! their decorations over a finite groupoid with duality.
//!
//! Representatives are duplicate-free up to leg-pinned isomorphism and are
//! chosen by the least canonical serialization within each class, so output
//! is deterministic across runs.

use crate::error::{Error, Result};
use crate::graph::{CGraph, DualGraph, Graph};
use crate::groupoid::ColorData;
use crate::iso::{automorphisms, decorated_isos, underlying_isos};

/// Compositions of `total` into exactly `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Edge multisets over vertex pairs realizing the given stub degrees.
/// A loop at v consumes two stubs of v.
fn edge_multisets(degrees: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        pairs: &[(usize, usize)],
        i: usize,
        remaining: &mut Vec<usize>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == pairs.len() {
            if remaining.iter().all(|&d| d == 0) {
                out.push(current.clone());
            }
            return;
        }
        let (u, v) = pairs[i];
        let max_mult = if u == v {
            remaining[u] / 2
        } else {
            remaining[u].min(remaining[v])
        };
        for mult in 0..=max_mult {
            if u == v {
                remaining[u] -= 2 * mult;
            } else {
                remaining[u] -= mult;
                remaining[v] -= mult;
            }
            for _ in 0..mult {
                current.push((u, v));
            }
            rec(pairs, i + 1, remaining, current, out);
            for _ in 0..mult {
                current.pop();
            }
            if u == v {
                remaining[u] += 2 * mult;
            } else {
                remaining[u] += mult;
                remaining[v] += mult;
            }
        }
    }
    let m = degrees.len();
    let mut pairs = Vec::new();
    for u in 0..m {
        for v in u..m {
            pairs.push((u, v));
        }
    }
    let mut out = Vec::new();
    rec(
        &pairs,
        0,
        &mut degrees.to_vec(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Assignments of labeled legs to vertices subject to per-vertex capacities.
fn leg_assignments(n: usize, capacities: &[usize]) -> Vec<Vec<usize>> {
    fn rec(n: usize, i: usize, used: &mut Vec<usize>, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..caps.len() {
            if used[v] < caps[v] {
                used[v] += 1;
                cur.push(v);
                rec(n, i + 1, used, caps, cur, out);
                cur.pop();
                used[v] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 0, &mut vec![0; capacities.len()], capacities, &mut Vec::new(), &mut out);
    out
}

fn build_shape(
    genus: &[usize],
    leg_vertex: &[usize],
    edges: &[(usize, usize)],
) -> Result<DualGraph> {
    let m = genus.len();
    // stubs per vertex in edge order: (edge index, side)
    let mut vertex_flags: Vec<Vec<(i64, usize)>> = vec![Vec::new(); m];
    for (label, &v) in leg_vertex.iter().enumerate() {
        vertex_flags[v].push((-1, label));
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        vertex_flags[u].push((e as i64, 0));
        vertex_flags[v].push((e as i64, 1));
    }
    // global flag order: vertex, legs first (by label), then edge stubs (by
    // edge index, side)
    let mut h = Vec::new();
    let mut legs = vec![0; leg_vertex.len()];
    let mut edge_side: Vec<[usize; 2]> = vec![[usize::MAX; 2]; edges.len()];
    for (v, flags) in vertex_flags.iter_mut().enumerate() {
        flags.sort();
        // legs carry e = -1 so they come first, ordered by label
        for &(e, side) in flags.iter() {
            let idx = h.len();
            h.push(v);
            if e < 0 {
                legs[side] = idx;
            } else {
                edge_side[e as usize][side] = idx;
            }
        }
    }
    let mut tau: Vec<usize> = (0..h.len()).collect();
    for sides in &edge_side {
        tau[sides[0]] = sides[1];
        tau[sides[1]] = sides[0];
    }
    let graph = Graph::new(m, h, tau, legs)?;
    DualGraph::new(graph, genus.to_vec())
}

fn vertex_profile(d: &DualGraph, v: usize) -> (usize, usize, Vec<usize>) {
    let mut legs: Vec<usize> = d
        .graph
        .flags_of(v)
        .iter()
        .filter(|&&f| d.graph.tau[f] == f)
        .map(|&f| d.graph.legs.iter().position(|&l| l == f).unwrap())
        .collect();
    legs.sort_unstable();
    (d.genus[v], d.valence(v), legs)
}

fn shape_key(d: &DualGraph) -> Vec<usize> {
    // invariant for bucketing: sorted vertex profiles plus the sorted
    // multiset of edges between profiles
    let profiles: Vec<(usize, usize, Vec<usize>)> = (0..d.graph.n_vertices)
        .map(|v| vertex_profile(d, v))
        .collect();
    let mut sorted_profiles = profiles.clone();
    sorted_profiles.sort();
    let profile_id = |v: usize| sorted_profiles.binary_search(&profiles[v]).unwrap();
    let mut edge_profiles: Vec<(usize, usize)> = d
        .graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (p, q) = (profile_id(d.graph.h[a]), profile_id(d.graph.h[b]));
            (p.min(q), p.max(q))
        })
        .collect();
    edge_profiles.sort_unstable();
    let mut key = vec![d.graph.n_flags, d.graph.n_vertices, d.graph.n_edges()];
    for (g, val, legs) in sorted_profiles {
        key.push(g);
        key.push(val);
        key.push(legs.len());
        key.extend(legs);
    }
    for (p, q) in edge_profiles {
        key.push(p);
        key.push(q);
    }
    key
}

/// All stable connected dual graphs of type (g, n) with legs labeled 0..n,
/// one representative per leg-pinned isomorphism class.
pub fn enumerate_stable_shapes(g: usize, n: usize) -> Result<Vec<DualGraph>> {
    if 2 * (g as i64) - 2 + (n as i64) <= 0 {
        return Err(Error::Unstable {
            genus: g,
            legs: n,
            extra: "",
        });
    }
    let weight = (2 * (g as i64) - 2 + (n as i64)) as usize;
    let mut reps: Vec<(Vec<usize>, DualGraph)> = Vec::new();
    for m in 1..=weight {
        for w in compositions(weight, m) {
            // per-vertex genus options
            let mut genus_options: Vec<Vec<(usize, usize)>> = Vec::new(); // (g_v, n_v)
            for &wv in &w {
                let mut opts = Vec::new();
                for gv in 0..=g {
                    let nv = wv as i64 + 2 - 2 * gv as i64;
                    if nv >= 0 {
                        opts.push((gv, nv as usize));
                    }
                }
                genus_options.push(opts);
            }
            let mut choice = vec![0usize; m];
            'genus: loop {
                let gv: Vec<usize> = (0..m).map(|v| genus_options[v][choice[v]].0).collect();
                let nv: Vec<usize> = (0..m).map(|v| genus_options[v][choice[v]].1).collect();
                let sum_g: usize = gv.iter().sum();
                if sum_g <= g {
                    let e_needed = g - sum_g + m - 1;
                    let total_stubs: usize = nv.iter().sum::<usize>();
                    if total_stubs >= n && total_stubs - n == 2 * e_needed {
                        for legs in leg_assignments(n, &nv) {
                            // vertex labels are arbitrary: only generate
                            // labelings whose per-vertex profiles are sorted
                            let profs: Vec<(usize, usize, Vec<usize>)> = (0..m)
                                .map(|v| {
                                    let mut ls: Vec<usize> = legs
                                        .iter()
                                        .enumerate()
                                        .filter(|(_, &x)| x == v)
                                        .map(|(l, _)| l)
                                        .collect();
                                    ls.sort_unstable();
                                    (gv[v], nv[v], ls)
                                })
                                .collect();
                            if profs.windows(2).any(|w| w[0] > w[1]) {
                                continue;
                            }
                            let degrees: Vec<usize> = (0..m)
                                .map(|v| nv[v] - legs.iter().filter(|&&x| x == v).count())
                                .collect();
                            for edges in edge_multisets(&degrees) {
                                let Ok(shape) = build_shape(&gv, &legs, &edges) else {
                                    continue;
                                };
                                if !shape.is_stable() {
                                    continue;
                                }
                                debug_assert_eq!(shape.genus_value().unwrap(), g);
                                let key = shape_key(&shape);
                                let zeros = vec![0; shape.graph.n_flags];
                                let dup = reps.iter().any(|(k, r)| {
                                    *k == key
                                        && !underlying_isos(r, &shape, &zeros, &zeros, false)
                                            .is_empty()
                                });
                                if !dup {
                                    reps.push((key, shape));
                                }
                            }
                        }
                    }
                }
                // next choice vector
                let mut pos = 0;
                loop {
                    if pos == m {
                        break 'genus;
                    }
                    choice[pos] += 1;
                    if choice[pos] < genus_options[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
            }
        }
    }
    let mut shapes: Vec<DualGraph> = reps.into_iter().map(|(_, s)| s).collect();
    shapes.sort();
    Ok(shapes)
}

/// A stratum class: a decorated representative with its automorphism count.
#[derive(Debug, Clone)]
pub struct StratumClass {
    pub graph: CGraph,
    pub automorphisms: usize,
}

/// All decorations of one shape over the given colors, with pinned leg
/// colors: every assignment of colors to edge flags together with a pairing
/// per edge.
pub fn decorations_of_shape(
    colors: &ColorData,
    shape: &DualGraph,
    leg_colors: &[usize],
) -> Vec<CGraph> {
    let n_flags = shape.graph.n_flags;
    let mut base = vec![usize::MAX; n_flags];
    for (label, &f) in shape.graph.legs.iter().enumerate() {
        base[f] = leg_colors[label];
    }
    let edges = shape.graph.edges();
    // per-edge options: (color_a, color_b, pairing)
    let per_edge: Vec<Vec<(usize, usize, usize)>> = edges
        .iter()
        .map(|_| {
            let mut opts = Vec::new();
            for a in 0..colors.groupoid.n_objects {
                for b in 0..colors.groupoid.n_objects {
                    for &phi in colors.pairings(a, b) {
                        opts.push((a, b, phi));
                    }
                }
            }
            opts
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; edges.len()];
    loop {
        let mut cols = base.clone();
        let mut pairings = Vec::with_capacity(edges.len());
        for (e, &(x, y)) in edges.iter().enumerate() {
            if per_edge[e].is_empty() {
                return Vec::new();
            }
            let (a, b, phi) = per_edge[e][pick[e]];
            cols[x] = a;
            cols[y] = b;
            pairings.push(phi);
        }
        let g = CGraph::new(colors, DualGraph::clone(shape), cols, pairings)
            .expect("enumerated decoration is valid");
        out.push(g);
        // advancing the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == edges.len() {
                return out;
            }
            pick[pos] += 1;
            if pick[pos] < per_edge[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

/// Iso-class representatives of stable (g, n) graphs decorated over
/// `colors`, legs pinned to `leg_colors`. With trivial colors this is the
/// plain stratification by topological type.
pub fn enumerate_stable_graphs(
    colors: &ColorData,
    g: usize,
    n: usize,
    leg_colors: Option<&[usize]>,
) -> Result<Vec<StratumClass>> {
    if g > 3 || n > 6 {
        return Err(Error::BoundExceeded(format!(
            "enumeration supported for g <= 3, n <= 6; got ({g}, {n})"
        )));
    }
    if colors.groupoid.n_objects > 12 {
        return Err(Error::BoundExceeded(
            "enumeration supported for color groupoids with at most 12 objects".into(),
        ));
    }
    let default_legs = vec![0; n];
    let leg_colors = match leg_colors {
        Some(l) => {
            if l.len() != n {
                return Err(Error::bad_input("leg colors must have length n"));
            }
            l
        }
        None => &default_legs,
    };
    let shapes = enumerate_stable_shapes(g, n)?;
    let mut classes: Vec<StratumClass> = Vec::new();
    for shape in &shapes {
        let mut shape_reps: Vec<CGraph> = Vec::new();
        for dec in decorations_of_shape(colors, shape, leg_colors) {
            let mut found = false;
            for rep in &mut shape_reps {
                if !decorated_isos(colors, rep, &dec, false).is_empty() {
                    // keep the least serialization as the representative
                    if dec.to_bytes() < rep.to_bytes() {
                        *rep = dec.clone();
                    }
                    found = true;
                    break;
                }
            }
            if !found {
                shape_reps.push(dec);
            }
        }
        for rep in shape_reps {
            let autos = automorphisms(colors, &rep).len();
            classes.push(StratumClass {
                graph: rep,
                automorphisms: autos,
            });
        }
    }
    classes.sort_by_key(|c| c.graph.to_bytes());
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts_11_and_04() {
        assert_eq!(enumerate_stable_shapes(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable_shapes(0, 4).unwrap().len(), 4);
        assert_eq!(enumerate_stable_shapes(0, 3).unwrap().len(), 1);
    }

    #[test]
    fn shapes_are_stable_and_have_right_genus() {
        for (g, n) in [(0, 5), (1, 2), (2, 1)] {
            for shape in enumerate_stable_shapes(g, n).unwrap() {
                assert!(shape.is_stable());
                assert_eq!(shape.genus_value().unwrap(), g);
                assert_eq!(shape.graph.n_legs(), n);
            }
        }
    }

    #[test]
    fn unstable_input_rejected() {
        assert!(enumerate_stable_shapes(0, 2).is_err());
        assert!(enumerate_stable_shapes(1, 0).is_err());
    }

    #[test]
    fn trivial_color_classes_match_shapes() {
        let ctx = ColorData::trivial();
        let strata = enumerate_stable_graphs(&ctx, 1, 1, None).unwrap();
        assert_eq!(strata.len(), 2);
        // the self-loop class has automorphism group of order 2
        let orders: Vec<usize> = strata.iter().map(|s| s.automorphisms).collect();
        assert!(orders.contains(&1) && orders.contains(&2));

        let strata = enumerate_stable_graphs(&ctx, 0, 4, None).unwrap();
        assert_eq!(strata.len(), 4);
    }

    #[test]
    fn independent_brute_force_matches_generator() {
        // Oracle: enumerate all graphs on at most 2 vertices directly by
        // brute force over involutions, for (1, 1).
        // Slots: try all flag counts up to 4 with all incidences and
        // involutions, filter valid stable genus-1 one-leg graphs, then
        // iso-class them through the same iso routine (which is exercised
        // separately); counts must agree with the generator.
        let ctx = ColorData::trivial();
        let mut found: Vec<CGraph> = Vec::new();
        for n_vertices in 1..=2usize {
            for n_flags in 1..=4usize {
                // all incidence maps
                let mut h = vec![0usize; n_flags];
                loop {
                    // all involutions: pair or fix each flag
                    let mut tau: Vec<usize> = (0..n_flags).collect();
                    fn involutions(i: usize, tau: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                        let n = tau.len();
                        if i == n {
                            out.push(tau.clone());
                            return;
                        }
                        if tau[i] != i {
                            involutions(i + 1, tau, out);
                            return;
                        }
                        involutions(i + 1, tau, out);
                        for j in i + 1..n {
                            if tau[j] == j {
                                tau[i] = j;
                                tau[j] = i;
                                involutions(i + 1, tau, out);
                                tau[i] = i;
                                tau[j] = j;
                            }
                        }
                    }
                    let mut taus = Vec::new();
                    involutions(0, &mut tau, &mut taus);
                    for tau in taus {
                        let legs: Vec<usize> = (0..n_flags).filter(|&f| tau[f] == f).collect();
                        if legs.len() != 1 {
                            continue;
                        }
                        let Ok(graph) = Graph::new(n_vertices, h.clone(), tau, legs) else {
                            continue;
                        };
                        for total_genus in 0..=1usize {
                            let genus_assignments: Vec<Vec<usize>> = if n_vertices == 1 {
                                vec![vec![total_genus]]
                            } else {
                                (0..=total_genus)
                                    .map(|a| vec![a, total_genus - a])
                                    .collect()
                            };
                            for genus in genus_assignments {
                                let Ok(dual) = DualGraph::new(graph.clone(), genus) else {
                                    continue;
                                };
                                if !dual.is_stable() || dual.genus_value().unwrap() != 1 {
                                    continue;
                                }
                                let colors = vec![0; dual.graph.n_flags];
                                let pairings = vec![0; dual.graph.n_edges()];
                                let g = CGraph::new(&ctx, dual, colors, pairings).unwrap();
                                if !found.iter().any(|r| {
                                    crate::iso::are_isomorphic(&ctx, r, &g).is_some()
                                }) {
                                    found.push(g);
                                }
                            }
                        }
                    }
                    // next incidence
                    let mut pos = 0;
                    loop {
                        if pos == n_flags {
                            break;
                        }
                        h[pos] += 1;
                        if h[pos] < n_vertices {
                            break;
                        }
                        h[pos] = 0;
                        pos += 1;
                    }
                    if h.iter().all(|&v| v == 0) {
                        break;
                    }
                }
            }
        }
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn decorated_04_over_loop_z2() {
        use crate::group::group_by_name;
        use crate::groupoid::loop_groupoid;
        let z2 = group_by_name("Z2").unwrap();
        let colors = loop_groupoid(&z2);
        let strata = enumerate_stable_graphs(&colors, 0, 4, Some(&[0, 0, 0, 0])).unwrap();
        // corolla (1 class) + 3 leg partitions × edge color γ ∈ {1, σ}
        // (the two pairings per color are identified by decoration morphisms)
        assert_eq!(strata.len(), 1 + 3 * 2);
    }
}
