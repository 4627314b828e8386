//! Exhaustive and randomized structural properties of graphs, contraction
//! and isomorphism classing.

use proptest::prelude::*;

use corolla_core::enumerate::{enumerate_stable_graphs, enumerate_stable_shapes};
use corolla_core::graph::{contract_edge, validate_cgraph_morphism, CGraph};
use corolla_core::group::{group_by_name, make_group, GroupSpec};
use corolla_core::groupoid::{loop_groupoid, ColorData};
use corolla_core::iso::are_isomorphic;
use corolla_core::rational::{rat_from_str, rat_to_string};

/// Genus additivity and stability preservation under every edge
/// contraction, over every stable type up to (2, 4).
#[test]
fn contraction_preserves_genus_and_stability_up_to_2_4() {
    let ctx = ColorData::trivial();
    let mut graphs_checked = 0usize;
    let mut edges_checked = 0usize;
    for g in 0..=2usize {
        for n in 0..=4usize {
            if 2 * (g as i64) - 2 + (n as i64) <= 0 {
                continue;
            }
            for shape in enumerate_stable_shapes(g, n).unwrap() {
                let colors = vec![0; shape.graph.n_flags];
                let pairings = vec![0; shape.graph.n_edges()];
                let graph = CGraph::new(&ctx, shape, colors, pairings).unwrap();
                graphs_checked += 1;
                for e in 0..graph.dual.graph.n_edges() {
                    let (contracted, morphism) = contract_edge(&ctx, &graph, e).unwrap();
                    let rep = validate_cgraph_morphism(&ctx, &graph, &contracted, &morphism);
                    assert!(rep.pass, "{:?}", rep.violation);
                    assert_eq!(
                        graph.dual.genus_value().unwrap(),
                        contracted.dual.genus_value().unwrap()
                    );
                    assert!(contracted.dual.is_stable());
                    edges_checked += 1;
                }
            }
        }
    }
    assert!(graphs_checked > 6000, "checked {graphs_checked} graphs");
    assert!(edges_checked > 20000, "checked {edges_checked} edges");
}

/// Iso-classing is reflexive, symmetric and transitive on a decorated
/// corpus over the loop groupoid of S3.
#[test]
fn iso_classing_is_a_congruence_over_loop_s3() {
    let s3 = group_by_name("S3").unwrap();
    let colors = loop_groupoid(&s3);
    let t12 = s3.parse_element("213").unwrap();
    let strata = enumerate_stable_graphs(&colors, 1, 2, Some(&[t12, t12])).unwrap();
    let graphs: Vec<&CGraph> = strata.iter().map(|s| &s.graph).collect();
    for a in &graphs {
        assert!(are_isomorphic(&colors, a, a).is_some());
        for b in &graphs {
            assert_eq!(
                are_isomorphic(&colors, a, b).is_some(),
                are_isomorphic(&colors, b, a).is_some()
            );
        }
    }
    // distinct representatives are mutually non-isomorphic
    for (i, a) in graphs.iter().enumerate() {
        for b in graphs.iter().skip(i + 1) {
            assert!(are_isomorphic(&colors, a, b).is_none());
        }
    }
}

proptest! {
    /// Rational serialization round-trips on arbitrary fractions.
    #[test]
    fn rational_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = corolla_core::rational::rat_frac(n, d);
        prop_assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
    }

    /// Cyclic-group tables validate for any order and any generator power
    /// relabeling that fixes the identity.
    #[test]
    fn cyclic_tables_validate(n in 1usize..24) {
        let g = make_group(GroupSpec::Z(n)).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.conjugacy_classes().len(), n);
    }

    /// Orbit-stabilizer holds in dihedral groups of any small order.
    #[test]
    fn dihedral_orbit_stabilizer(n in 1usize..9) {
        let g = make_group(GroupSpec::D(n)).unwrap();
        let classes = g.conjugacy_classes();
        for x in 0..g.order {
            let class_len = classes.iter().find(|c| c.contains(&x)).unwrap().len();
            prop_assert_eq!(class_len * g.centralizer(x).len(), g.order);
        }
    }

    /// Corrupting one off-diagonal cell of a cyclic table breaks validation
    /// (the table stops being a latin square or loses associativity).
    #[test]
    fn corrupted_tables_rejected(n in 3usize..10, x in 1usize..9, y in 1usize..9) {
        let x = x % n;
        let y = y % n;
        let g = make_group(GroupSpec::Z(n)).unwrap();
        let mut mul = g.mul.clone();
        let old = mul[x][y];
        mul[x][y] = (old + 1) % n;
        if x != 0 && y != 0 {
            let res = make_group(GroupSpec::Table { mul, labels: None });
            prop_assert!(res.is_err());
        }
    }
}
