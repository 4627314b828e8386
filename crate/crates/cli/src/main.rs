//! Command-line front end: every operation reads its inputs from flags or
//! JSON files and writes one JSON document to standard output. Exit code 0
//! means success and, for the check commands, that every check passed;
//! input errors exit 2 with a machine-readable error object, failed checks
//! exit 1.

use std::path::PathBuf;
use std::rc::Rc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use corolla_core::acceptance;
use corolla_core::dw::DWTheory;
use corolla_core::enumerate::enumerate_stable_graphs;
use corolla_core::error::Error;
use corolla_core::frobenius::{check_gfrobenius, drinfeld_module_check, dw_frobenius};
use corolla_core::group::{group_by_name, FiniteGroup};
use corolla_core::groupoid::{groupoid_algebra, loop_groupoid, ColorData};
use corolla_core::jsonio;
use corolla_core::module::{CorollaKey, PointModule, StableModule};
use corolla_core::operad::{FreeOperad, GraphClass, MonadTower};
use corolla_core::rational::rat_to_string;

#[derive(Parser)]
#[command(name = "corolla", version, about = "exact workbench for groupoid-colored modular operads and admissible-cover counting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArgs {
    /// group name: trivial, Zn, Sn (n <= 5), Dn, Q8
    #[arg(short = 'g', long = "group")]
    group: Option<String>,
    /// JSON input file (a group table where a group is expected)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    /// worker threads for the counting kernels
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// also write the JSON output to this file
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// order, conjugacy classes and centralizer sizes of a group
    GroupInfo {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// the loop groupoid of a group with its duality tables
    LoopGroupoid {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// the groupoid algebra of the loop groupoid
    GroupoidAlgebra {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// stable strata of type (g, n), optionally colored by a loop groupoid
    Strata {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        genus: usize,
        #[arg(short = 'n', long = "legs")]
        legs: usize,
        /// leg monodromies (labels or indices, comma separated)
        #[arg(long)]
        monodromy: Option<String>,
    },
    /// classes of the free modular operad at one corolla
    FreeOperad {
        /// color group name; "trivial" for uncolored graphs
        #[arg(short = 'g', long = "group", default_value = "trivial")]
        group: String,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        genus: usize,
        #[arg(short = 'n', long = "legs")]
        legs: usize,
        #[arg(long)]
        monodromy: Option<String>,
        /// module description JSON file; defaults to one point on (0,3)
        #[arg(long)]
        input: Option<PathBuf>,
        /// edge-count cap; enumeration errors rather than truncating
        #[arg(long)]
        bound: Option<usize>,
    },
    /// monad unit, multiplication well-definedness and associativity
    CheckMonadLaws {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// run one corolla only (requires --legs)
        #[arg(long)]
        genus: Option<usize>,
        #[arg(short = 'n', long = "legs")]
        legs: Option<usize>,
    },
    /// admissible-cover count at (genus; monodromy)
    DwCount {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        genus: usize,
        /// comma-separated monodromies; "-" or empty for none
        #[arg(long, default_value = "-")]
        monodromy: String,
    },
    /// cover class representatives at (genus; monodromy)
    EnumerateCovers {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value = "-")]
        monodromy: String,
    },
    /// two-vertex and self-gluing identities over the group's matrix
    CheckGluing {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// graded Frobenius axioms for an algebra file or the counting theory
    CheckFrobenius {
        /// group whose counting theory is generated and checked
        #[arg(short = 'g', long = "group")]
        group: Option<String>,
        /// algebra JSON file to check instead
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// the full acceptance suite
    Acceptance {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve_group(args: &GroupArgs) -> Result<FiniteGroup, Error> {
    match (&args.group, &args.input) {
        (Some(name), _) => group_by_name(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::bad_input(format!("cannot read {}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text)?;
            jsonio::group_from_value(&value)
        }
        (None, None) => Err(Error::bad_input("a group is required: pass -g NAME or --input FILE")),
    }
}

fn emit(common: &CommonArgs, value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    if let Some(path) = &common.output {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("warning: cannot write {}: {e}", path.display());
        }
    }
    println!("{text}");
}

fn fail(common: &CommonArgs, err: &Error) -> i32 {
    let value = json!({
        "error": {
            "kind": match err {
                Error::Validation(_) => "validation",
                Error::Unstable { .. } => "unstable",
                Error::BoundExceeded(_) => "bound-exceeded",
                Error::IncompleteBound { .. } => "incomplete-bound",
                Error::BadInput(_) => "bad-input",
                Error::Json(_) => "malformed-json",
            },
            "message": err.to_string(),
        }
    });
    emit(common, &value);
    2
}

fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::GroupInfo { group, common } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            let classes = g.conjugacy_classes();
            emit(
                &common,
                &json!({
                    "order": g.order,
                    "abelian": g.is_abelian(),
                    "labels": (0..g.order).map(|x| g.label(x)).collect::<Vec<_>>(),
                    "conjugacy_classes": classes,
                    "centralizer_sizes": (0..g.order).map(|x| g.centralizer(x).len()).collect::<Vec<_>>(),
                    "group": jsonio::group_value(&g),
                }),
            );
            0
        }
        Command::LoopGroupoid { group, common } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            let colors = loop_groupoid(&g);
            let gpd = &colors.groupoid;
            let composites: Vec<Value> = (0..gpd.n_morphisms())
                .flat_map(|f| {
                    (0..gpd.n_morphisms())
                        .filter_map(move |h| gpd.compose(f, h).map(|c| json!([f, h, c])))
                })
                .collect();
            emit(
                &common,
                &json!({
                    "objects": gpd.n_objects,
                    "morphisms": (0..gpd.n_morphisms())
                        .map(|m| json!({"src": gpd.src[m], "tgt": gpd.tgt[m]}))
                        .collect::<Vec<_>>(),
                    "identity": gpd.identity,
                    "invert": gpd.invert,
                    "compose": composites,
                    "duality": {
                        "on_objects": colors.duality.on_objects,
                        "on_morphisms": colors.duality.on_morphisms,
                        "eta": colors.duality.eta,
                    },
                }),
            );
            0
        }
        Command::GroupoidAlgebra { group, common } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            let colors = loop_groupoid(&g);
            let alg = groupoid_algebra(&colors.groupoid);
            let rep = alg.check();
            let products: Vec<Value> = (0..alg.dimension)
                .flat_map(|f| {
                    let alg = &alg;
                    (0..alg.dimension)
                        .filter_map(move |h| alg.product[f][h].map(|p| json!([f, h, p])))
                })
                .collect();
            emit(
                &common,
                &json!({
                    "dimension": alg.dimension,
                    "unit_support": alg.unit_support,
                    "commutative": alg.is_commutative(),
                    "associative": rep.pass,
                    "product": products,
                }),
            );
            i32::from(!rep.pass)
        }
        Command::Strata {
            group,
            common,
            genus,
            legs,
            monodromy,
        } => {
            let named = group.group.clone().unwrap_or_else(|| "trivial".into());
            let (colors, leg_colors) = if named.eq_ignore_ascii_case("trivial") {
                (ColorData::trivial(), vec![0usize; legs])
            } else {
                let g = match resolve_group(&group) {
                    Ok(g) => g,
                    Err(e) => return fail(&common, &e),
                };
                let tuple = match &monodromy {
                    Some(s) => match g.parse_tuple(s) {
                        Ok(t) => t,
                        Err(e) => return fail(&common, &e),
                    },
                    None => vec![0; legs],
                };
                if tuple.len() != legs {
                    return fail(&common, &Error::bad_input("monodromy length must equal --legs"));
                }
                (loop_groupoid(&g), tuple)
            };
            match enumerate_stable_graphs(&colors, genus, legs, Some(&leg_colors)) {
                Ok(strata) => {
                    emit(
                        &common,
                        &json!({
                            "classes": strata.len(),
                            "strata": strata.iter().map(|s| json!({
                                "graph": jsonio::graph_value(&s.graph),
                                "automorphisms": s.automorphisms,
                            })).collect::<Vec<_>>(),
                        }),
                    );
                    0
                }
                Err(e) => fail(&common, &e),
            }
        }
        Command::FreeOperad {
            group,
            common,
            genus,
            legs,
            monodromy,
            input,
            bound,
        } => {
            let (colors, leg_colors) = if group.eq_ignore_ascii_case("trivial") {
                (ColorData::trivial(), vec![0usize; legs])
            } else {
                let g = match group_by_name(&group) {
                    Ok(g) => g,
                    Err(e) => return fail(&common, &e),
                };
                let tuple = match &monodromy {
                    Some(s) => match g.parse_tuple(s) {
                        Ok(t) => t,
                        Err(e) => return fail(&common, &e),
                    },
                    None => vec![0; legs],
                };
                (loop_groupoid(&g), tuple)
            };
            let colors = Rc::new(colors);
            let module: Rc<dyn StableModule> = match &input {
                None => Rc::new(PointModule::on(&[(0, 3)])),
                Some(path) => {
                    let text = match std::fs::read_to_string(path) {
                        Ok(t) => t,
                        Err(e) => {
                            return fail(
                                &common,
                                &Error::bad_input(format!("cannot read {}: {e}", path.display())),
                            )
                        }
                    };
                    let value: Value = match serde_json::from_str(&text) {
                        Ok(v) => v,
                        Err(e) => return fail(&common, &Error::Json(e)),
                    };
                    match jsonio::module_from_value(&colors, &value) {
                        Ok(m) => Rc::from(m),
                        Err(e) => return fail(&common, &e),
                    }
                }
            };
            let mut layer = FreeOperad::new(Rc::clone(&colors), module);
            if let Some(b) = bound {
                layer = layer.with_bound(b);
            }
            let key = CorollaKey::new(genus, leg_colors);
            match layer.colimit(&key) {
                Ok(colim) => {
                    let reps: Vec<Value> = (0..colim.n_classes())
                        .map(|c| {
                            let (g, e) = colim.rep(c);
                            json!({"graph": jsonio::graph_value(g), "element": e})
                        })
                        .collect();
                    emit(
                        &common,
                        &json!({
                            "kind": jsonio::kind_name(colim.kind),
                            "classes": colim.n_classes(),
                            "graphs_considered": colim.objects.len(),
                            "representatives": reps,
                        }),
                    );
                    0
                }
                Err(e) => fail(&common, &e),
            }
        }
        Command::CheckMonadLaws {
            group,
            common,
            genus,
            legs,
        } => {
            let cases: Vec<(String, ColorData)> = match &group.group {
                Some(name) if !name.eq_ignore_ascii_case("trivial") => {
                    let g = match resolve_group(&group) {
                        Ok(g) => g,
                        Err(e) => return fail(&common, &e),
                    };
                    if g.order > 6 {
                        return fail(
                            &common,
                            &Error::BoundExceeded("monad law checks support |G| <= 6".into()),
                        );
                    }
                    vec![(format!("L({name})"), loop_groupoid(&g))]
                }
                _ => vec![
                    ("trivial".into(), ColorData::trivial()),
                    ("L(Z2)".into(), loop_groupoid(&group_by_name("Z2").unwrap())),
                ],
            };
            let mut results = Vec::new();
            let mut all_pass = true;
            for (name, colors) in cases {
                let colors = Rc::new(colors);
                let tower = MonadTower::new(
                    Rc::clone(&colors),
                    Rc::new(PointModule::on(&[(0, 3), (0, 4), (1, 1)])),
                    GraphClass::Modular,
                );
                let keys: Vec<CorollaKey> = match (genus, legs) {
                    (Some(g), Some(n)) => vec![CorollaKey::new(g, vec![0; n])],
                    _ => vec![
                        CorollaKey::new(0, vec![0; 4]),
                        CorollaKey::new(1, vec![0]),
                        CorollaKey::new(1, vec![0, 0]),
                    ],
                };
                for key in keys {
                    let mut entry = json!({
                        "colors": name,
                        "genus": key.genus,
                        "legs": key.arity(),
                    });
                    for (law, rep) in [
                        ("unit", tower.check_unit_laws(&key)),
                        ("multiplication", tower.check_mult_well_defined(&key)),
                        ("associativity", tower.check_associativity(&key)),
                    ] {
                        match rep {
                            Ok(r) => {
                                all_pass &= r.pass;
                                entry[law] = json!({
                                    "pass": r.pass,
                                    "checked": r.checked,
                                    "violation": r.violation,
                                });
                            }
                            Err(e) => return fail(&common, &e),
                        }
                    }
                    results.push(entry);
                }
            }
            emit(&common, &json!({"pass": all_pass, "results": results}));
            i32::from(!all_pass)
        }
        Command::DwCount {
            group,
            common,
            genus,
            monodromy,
        } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            let tuple = match g.parse_tuple(&monodromy) {
                Ok(t) => t,
                Err(e) => return fail(&common, &e),
            };
            let dw = DWTheory::with_workers(g, common.workers);
            match dw.count(genus, &tuple) {
                Ok(count) => {
                    emit(&common, &json!({"count": rat_to_string(&count)}));
                    0
                }
                Err(e) => fail(&common, &e),
            }
        }
        Command::EnumerateCovers {
            group,
            common,
            genus,
            monodromy,
        } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            let tuple = match g.parse_tuple(&monodromy) {
                Ok(t) => t,
                Err(e) => return fail(&common, &e),
            };
            let dw = DWTheory::with_workers(g, common.workers);
            match dw.enumerate_covers(genus, &tuple) {
                Ok(covers) => {
                    emit(
                        &common,
                        &json!({
                            "count": covers.len(),
                            "classes": covers.iter().map(|c| json!({
                                "monodromy": c.monodromy,
                                "representative": c.rep,
                            })).collect::<Vec<_>>(),
                        }),
                    );
                    0
                }
                Err(e) => fail(&common, &e),
            }
        }
        Command::CheckGluing { group, common } => {
            let g = match resolve_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(&common, &e),
            };
            if g.order > 12 {
                return fail(&common, &Error::BoundExceeded("gluing suite supports |G| <= 12".into()));
            }
            let dw = DWTheory::with_workers(g, common.workers);
            let order = dw.group.order;
            let mut checks = 0u64;
            let mut pass = true;
            let mut witness = None;
            'outer: for genus in 0..=1usize {
                for n in 1..=4usize {
                    if 2 * genus + n > 6 || 2 * (genus as i64) - 2 + (n as i64) <= 0 {
                        continue;
                    }
                    let mut entries = std::collections::BTreeSet::new();
                    for t in corolla_core::dw::all_tuples(order, n) {
                        entries.insert(dw.canonical_key(genus, &t).1);
                    }
                    for t in entries {
                        for mask in 0..(1u32 << n) {
                            let alpha: Vec<usize> =
                                (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| t[i]).collect();
                            let beta: Vec<usize> =
                                (0..n).filter(|&i| mask >> i & 1 == 0).map(|i| t[i]).collect();
                            for g1 in 0..=genus {
                                let g2 = genus - g1;
                                if 2 * (g1 as i64) - 2 + (alpha.len() as i64 + 1) <= 0
                                    || 2 * (g2 as i64) - 2 + (beta.len() as i64 + 1) <= 0
                                {
                                    continue;
                                }
                                checks += 1;
                                match dw.check_two_vertex_gluing(g1, &alpha, g2, &beta) {
                                    Ok(r) if r.pass => {}
                                    Ok(r) => {
                                        pass = false;
                                        witness = r.violation;
                                        break 'outer;
                                    }
                                    Err(e) => return fail(&common, &e),
                                }
                            }
                        }
                        if 2 * (genus + 1) + n <= 6 {
                            checks += 1;
                            match dw.check_self_gluing(genus, &t) {
                                Ok(r) if r.pass => {}
                                Ok(r) => {
                                    pass = false;
                                    witness = r.violation;
                                    break 'outer;
                                }
                                Err(e) => return fail(&common, &e),
                            }
                        }
                    }
                }
            }
            emit(&common, &json!({"pass": pass, "checked": checks, "violation": witness}));
            i32::from(!pass)
        }
        Command::CheckFrobenius { group, input, common } => {
            // --input names an algebra file; otherwise the counting theory
            // of -g is generated and checked
            let frob = if let Some(path) = &input {
                let text = match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => {
                        return fail(
                            &common,
                            &Error::bad_input(format!("cannot read {}: {e}", path.display())),
                        )
                    }
                };
                let value: Value = match serde_json::from_str(&text) {
                    Ok(v) => v,
                    Err(e) => return fail(&common, &Error::Json(e)),
                };
                match jsonio::frobenius_from_value(&value) {
                    Ok(f) => f,
                    Err(e) => return fail(&common, &e),
                }
            } else {
                let Some(name) = &group else {
                    return fail(&common, &Error::bad_input("pass -g GROUP or --input FILE"));
                };
                let g = match group_by_name(name) {
                    Ok(g) => g,
                    Err(e) => return fail(&common, &e),
                };
                let dw = DWTheory::with_workers(g, common.workers);
                match dw_frobenius(&dw) {
                    Ok(f) => f,
                    Err(e) => return fail(&common, &e),
                }
            };
            let axioms = check_gfrobenius(&frob);
            let module = drinfeld_module_check(&frob);
            let pass = axioms.pass && module.pass;
            emit(
                &common,
                &json!({
                    "pass": pass,
                    "axioms": {"pass": axioms.pass, "checked": axioms.checked, "violation": axioms.violation},
                    "drinfeld_module": {"pass": module.pass, "checked": module.checked, "violation": module.violation},
                    "total_dimension": frob.total_dim(),
                }),
            );
            i32::from(!pass)
        }
        Command::Acceptance { common } => {
            let report = acceptance::run_all(common.workers);
            let value = serde_json::to_value(&report).expect("serializable report");
            emit(&common, &value);
            i32::from(!report.pass)
        }
    }
}

fn main() {
    std::process::exit(run());
}
