//! JSON interchange formats. Rationals serialize as "p/q" strings in lowest
//! terms with positive denominator; matrices as row-major string arrays;
//! graphs with explicit flag, involution, genus, color and pairing tables.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::frobenius::GFrobeniusData;
use crate::graph::{CGraph, DualGraph, Graph};
use crate::group::{make_group, FiniteGroup, GroupSpec};
use crate::groupoid::ColorData;
use crate::linalg::{MultiForm, RatMatrix};
use crate::module::{CorollaKey, PointModule, StableModule, TableModule, ValueKind};
use crate::rational::{rat_from_str, rat_to_string, Rat};

pub fn rat_value(r: &Rat) -> Value {
    Value::String(rat_to_string(r))
}

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::bad_input("rationals must be integers or \"p/q\" strings"))?;
            Ok(Rat::from_integer(i.into()))
        }
        _ => Err(Error::bad_input("expected a rational as \"p/q\"")),
    }
}

pub fn matrix_value(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| Value::Array((0..m.cols).map(|j| rat_value(&m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_value(v: &Value) -> Result<RatMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::bad_input("matrix must be an array of rows"))?;
    let mut data = Vec::new();
    let mut cols = None;
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::bad_input("matrix row must be an array"))?;
        if let Some(c) = cols {
            if c != row.len() {
                return Err(Error::bad_input("ragged matrix"));
            }
        }
        cols = Some(row.len());
        data.push(row.iter().map(rat_from_value).collect::<Result<Vec<_>>>()?);
    }
    Ok(RatMatrix::from_rows(data))
}

pub fn form_value(f: &MultiForm) -> Value {
    json!({
        "dims": f.dims,
        "values": f.data.iter().map(rat_value).collect::<Vec<_>>(),
    })
}

pub fn form_from_value(v: &Value) -> Result<MultiForm> {
    let dims: Vec<usize> = serde_json::from_value(v["dims"].clone())?;
    let values = v["values"]
        .as_array()
        .ok_or_else(|| Error::bad_input("form needs a values array"))?;
    let expected: usize = dims.iter().product();
    if values.len() != expected {
        return Err(Error::bad_input("form values length mismatch"));
    }
    Ok(MultiForm {
        dims,
        data: values.iter().map(rat_from_value).collect::<Result<Vec<_>>>()?,
    })
}

/// Group JSON: {"order": n, "mul": [[...]], "labels": [...]}.
pub fn group_from_value(v: &Value) -> Result<FiniteGroup> {
    let mul: Vec<Vec<usize>> = serde_json::from_value(v["mul"].clone())?;
    let labels: Option<Vec<String>> = match v.get("labels") {
        Some(Value::Null) | None => None,
        Some(l) => Some(serde_json::from_value(l.clone())?),
    };
    if let Some(order) = v.get("order").and_then(Value::as_u64) {
        if order as usize != mul.len() {
            return Err(Error::bad_input("order disagrees with the mul table"));
        }
    }
    make_group(GroupSpec::Table { mul, labels })
}

pub fn group_value(g: &FiniteGroup) -> Value {
    let mut m = Map::new();
    m.insert("order".into(), json!(g.order));
    m.insert("mul".into(), json!(g.mul));
    if let Some(labels) = &g.labels {
        m.insert("labels".into(), json!(labels));
    }
    if let Some(name) = &g.name {
        m.insert("name".into(), json!(name));
    }
    Value::Object(m)
}

/// Graph JSON: flag, incidence, involution, genus, color and pairing
/// tables, plus the leg labeling.
pub fn graph_value(g: &CGraph) -> Value {
    json!({
        "flags": g.dual.graph.n_flags,
        "vertices": g.dual.graph.n_vertices,
        "h": g.dual.graph.h,
        "tau": g.dual.graph.tau,
        "legs": g.dual.graph.legs,
        "genus": g.dual.genus,
        "colors": g.colors,
        "pairings": g.pairings,
    })
}

pub fn graph_from_value(colors: &ColorData, v: &Value) -> Result<CGraph> {
    let n_vertices: usize = serde_json::from_value(v["vertices"].clone())?;
    let h: Vec<usize> = serde_json::from_value(v["h"].clone())?;
    let tau: Vec<usize> = serde_json::from_value(v["tau"].clone())?;
    let legs: Vec<usize> = match v.get("legs") {
        Some(l) if !l.is_null() => serde_json::from_value(l.clone())?,
        _ => (0..h.len()).filter(|&f| tau[f] == f).collect(),
    };
    let genus: Vec<usize> = serde_json::from_value(v["genus"].clone())?;
    let cols: Vec<usize> = serde_json::from_value(v["colors"].clone())?;
    let pairings: Vec<usize> = serde_json::from_value(v["pairings"].clone())?;
    let graph = Graph::new(n_vertices, h, tau, legs)?;
    let dual = DualGraph::new(graph, genus)?;
    CGraph::new(colors, dual, cols, pairings)
}

/// Frobenius data JSON.
pub fn frobenius_value(a: &GFrobeniusData) -> Value {
    json!({
        "group": group_value(&a.group),
        "dims": a.dims,
        "action": a.action.iter().map(|per_g| {
            per_g.iter().map(matrix_value).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "metric": a.metric.iter().map(|(&(g1, g2), m)| json!({
            "colors": [g1, g2],
            "matrix": matrix_value(m),
        })).collect::<Vec<_>>(),
        "lambda3": a.lambda3.iter().map(|(&(g1, g2, g3), f)| json!({
            "colors": [g1, g2, g3],
            "form": form_value(f),
        })).collect::<Vec<_>>(),
        "lambda11": a.lambda11.as_ref().map(|l| l.iter().map(|(&g, v)| json!({
            "color": g,
            "values": v.iter().map(rat_value).collect::<Vec<_>>(),
        })).collect::<Vec<_>>()),
    })
}

pub fn frobenius_from_value(v: &Value) -> Result<GFrobeniusData> {
    let group = match &v["group"] {
        Value::String(name) => crate::group::group_by_name(name)?,
        obj => group_from_value(obj)?,
    };
    let dims: Vec<usize> = serde_json::from_value(v["dims"].clone())?;
    let action_v = v["action"]
        .as_array()
        .ok_or_else(|| Error::bad_input("action must be an array per group element"))?;
    let mut action = Vec::new();
    for per_g in action_v {
        let per_g = per_g
            .as_array()
            .ok_or_else(|| Error::bad_input("action row must be an array per color"))?;
        action.push(per_g.iter().map(matrix_from_value).collect::<Result<Vec<_>>>()?);
    }
    let mut metric = BTreeMap::new();
    for entry in v["metric"].as_array().unwrap_or(&Vec::new()) {
        let colors: Vec<usize> = serde_json::from_value(entry["colors"].clone())?;
        if colors.len() != 2 {
            return Err(Error::bad_input("metric entry needs two colors"));
        }
        metric.insert((colors[0], colors[1]), matrix_from_value(&entry["matrix"])?);
    }
    let mut lambda3 = BTreeMap::new();
    for entry in v["lambda3"].as_array().unwrap_or(&Vec::new()) {
        let colors: Vec<usize> = serde_json::from_value(entry["colors"].clone())?;
        if colors.len() != 3 {
            return Err(Error::bad_input("correlator entry needs three colors"));
        }
        lambda3.insert(
            (colors[0], colors[1], colors[2]),
            form_from_value(&entry["form"])?,
        );
    }
    let lambda11 = match v.get("lambda11") {
        Some(Value::Null) | None => None,
        Some(arr) => {
            let mut out = BTreeMap::new();
            for entry in arr.as_array().unwrap_or(&Vec::new()) {
                let color: usize = serde_json::from_value(entry["color"].clone())?;
                let values = entry["values"]
                    .as_array()
                    .ok_or_else(|| Error::bad_input("lambda11 needs values"))?
                    .iter()
                    .map(rat_from_value)
                    .collect::<Result<Vec<_>>>()?;
                out.insert(color, values);
            }
            Some(out)
        }
    };
    Ok(GFrobeniusData {
        group,
        dims,
        action,
        metric,
        lambda3,
        lambda11,
    })
}

/// Module description JSON:
///   {"kind": "point", "supports": [[genus, arity, size], ...]}
///   {"kind": "table", "carriers": [...], "actions": [...]}
/// Table actions default to the identity where omitted; the loaded module
/// is validated for functoriality on its supported corollas.
pub fn module_from_value(colors: &ColorData, v: &Value) -> Result<Box<dyn StableModule>> {
    match v["kind"].as_str() {
        Some("point") => {
            let supports: Vec<Vec<usize>> = serde_json::from_value(v["supports"].clone())?;
            let mut parsed = Vec::new();
            for s in supports {
                match s.len() {
                    2 => parsed.push((s[0], s[1], 1)),
                    3 => parsed.push((s[0], s[1], s[2])),
                    _ => return Err(Error::bad_input("support entries are [genus, arity] or [genus, arity, size]")),
                }
            }
            Ok(Box::new(PointModule::with_sizes(parsed)))
        }
        Some("table") => {
            let mut carriers = BTreeMap::new();
            for entry in v["carriers"].as_array().unwrap_or(&Vec::new()) {
                let genus: usize = serde_json::from_value(entry["genus"].clone())?;
                let cols: Vec<usize> = serde_json::from_value(entry["colors"].clone())?;
                let size: usize = serde_json::from_value(entry["size"].clone())?;
                carriers.insert((genus, cols), size);
            }
            let mut actions = BTreeMap::new();
            for entry in v["actions"].as_array().unwrap_or(&Vec::new()) {
                let genus: usize = serde_json::from_value(entry["genus"].clone())?;
                let src: Vec<usize> = serde_json::from_value(entry["src"].clone())?;
                let perm: Vec<usize> = serde_json::from_value(entry["perm"].clone())?;
                let comps: Vec<usize> = serde_json::from_value(entry["comps"].clone())?;
                let map: Vec<usize> = serde_json::from_value(entry["map"].clone())?;
                actions.insert((genus, src, perm, comps), map);
            }
            let module = TableModule::new(carriers, actions);
            module.validate(colors)?;
            Ok(Box::new(module))
        }
        _ => Err(Error::bad_input("module kind must be \"point\" or \"table\"")),
    }
}

/// Resolve a corolla key from CLI-ish inputs.
pub fn corolla_key(genus: usize, colors: Vec<usize>) -> CorollaKey {
    CorollaKey::new(genus, colors)
}

pub fn kind_name(kind: ValueKind) -> &'static str {
    match kind {
        ValueKind::Set => "set",
        ValueKind::Vect => "vect",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dw::DWTheory;
    use crate::frobenius::{check_gfrobenius, dw_frobenius};
    use crate::group::group_by_name;
    use crate::groupoid::loop_groupoid;

    #[test]
    fn frobenius_round_trip() {
        let dw = DWTheory::new(group_by_name("Z3").unwrap());
        let frob = dw_frobenius(&dw).unwrap();
        let v = frobenius_value(&frob);
        let back = frobenius_from_value(&v).unwrap();
        assert_eq!(frob.dims, back.dims);
        assert_eq!(frob.metric, back.metric);
        assert_eq!(frob.lambda3, back.lambda3);
        assert!(check_gfrobenius(&back).pass);
    }

    #[test]
    fn graph_round_trip() {
        let colors = loop_groupoid(&group_by_name("Z2").unwrap());
        let strata = crate::enumerate::enumerate_stable_graphs(&colors, 1, 1, Some(&[0])).unwrap();
        for s in strata {
            let v = graph_value(&s.graph);
            let back = graph_from_value(&colors, &v).unwrap();
            assert_eq!(back, s.graph);
        }
    }

    #[test]
    fn module_from_json() {
        let colors = ColorData::trivial();
        let v = json!({"kind": "point", "supports": [[0, 3], [1, 1, 2]]});
        let m = module_from_value(&colors, &v).unwrap();
        assert_eq!(m.carrier(&colors, &CorollaKey::new(0, vec![0, 0, 0])), 1);
        assert_eq!(m.carrier(&colors, &CorollaKey::new(1, vec![0])), 2);
    }

    #[test]
    fn group_json_round_trip() {
        let g = group_by_name("D4").unwrap();
        let v = group_value(&g);
        let back = group_from_value(&v).unwrap();
        assert_eq!(g.mul, back.mul);
    }
}
