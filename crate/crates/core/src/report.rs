//! Deterministic JSON serialization of computed results.
//!
//! Keys are emitted in sorted order, scalars as canonical strings (`"p/q"`
//! over the rationals, least non-negative residues over a prime field), and
//! every path as its `a*b*c` arrow string (trivial paths print their
//! vertex). Identical inputs therefore serialize to byte-identical reports.

use serde_json::{json, Map, Value};

use crate::bimodule::{BimoduleResolution, TensorElement};
use crate::comult::ComultTable;
use crate::presentation::{Diagnostic, Presentation};
use crate::quiver::{PathVector, Quiver};
use crate::resolution::{HomologyTable, KoszulVerdict, ResolutionData, Witness};

pub fn path_vector_value(v: &PathVector, quiver: &Quiver) -> Value {
    let mut map = Map::new();
    for (p, c) in v.terms() {
        map.insert(p.display(quiver).to_string(), Value::String(c.to_string()));
    }
    Value::Object(map)
}

fn tensor_value(t: &TensorElement, quiver: &Quiver) -> Value {
    let mut map = Map::new();
    for ((l, r), c) in t.terms() {
        let key = format!("{}|{}", l.display(quiver), r.display(quiver));
        map.insert(key, Value::String(c.to_string()));
    }
    Value::Object(map)
}

pub fn resolution_value(data: &ResolutionData) -> Value {
    let quiver = data.presentation().quiver();
    let levels: Vec<Value> = data
        .levels()
        .iter()
        .map(|level| {
            let f: Vec<Value> = level
                .generators
                .iter()
                .map(|g| path_vector_value(&g.vector, quiver))
                .collect();
            let blocks: Vec<Value> = level
                .generators
                .iter()
                .map(|g| json!([quiver.vertex_name(g.origin), quiver.vertex_name(g.terminus)]))
                .collect();
            let h: Vec<Value> = level
                .differential
                .iter()
                .map(|row| Value::Array(row.iter().map(|v| path_vector_value(v, quiver)).collect()))
                .collect();
            json!({ "n": level.index, "f": f, "blocks": blocks, "h": h })
        })
        .collect();
    json!({ "betti": data.betti(), "levels": levels })
}

pub fn comult_value(table: &ComultTable) -> Value {
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|(&(n, i, r), entry)| {
            let mut coeffs = Map::new();
            for ((p, q), c) in &entry.coefficients {
                coeffs.insert(format!("{p},{q}"), Value::String(c.to_string()));
            }
            json!({ "n": n, "i": i, "r": r, "c": coeffs, "nullity": entry.nullity })
        })
        .collect();
    json!({ "c": entries })
}

pub fn bimodule_value(res: &BimoduleResolution, quiver: &Quiver) -> Value {
    let levels: Vec<Value> = res
        .levels()
        .iter()
        .map(|level| {
            let generators: Vec<Value> = level
                .generators
                .iter()
                .map(|&(u, v)| json!([quiver.vertex_name(u), quiver.vertex_name(v)]))
                .collect();
            let delta: Vec<Value> = level
                .differential
                .iter()
                .map(|row| Value::Array(row.iter().map(|t| tensor_value(t, quiver)).collect()))
                .collect();
            json!({ "n": level.index, "generators": generators, "delta": delta })
        })
        .collect();
    json!({ "levels": levels })
}

pub fn verdict_value(verdict: &KoszulVerdict) -> Value {
    match verdict {
        KoszulVerdict::KoszulUpTo { levels, degree } => {
            json!({ "status": "koszul_up_to", "levels": levels, "degree": degree })
        }
        KoszulVerdict::NotKoszul { witness } => {
            let w = match witness {
                Witness::NonQuadraticRelation { degree } => json!({
                    "kind": "non_quadratic_relation",
                    "degree": degree,
                    "detail": format!("the ideal has a minimal generator of degree {degree}, so the second resolution term is not generated in degree 2"),
                }),
                Witness::HomologyNonzero { level, degree, dim } => json!({
                    "kind": "homology_nonzero",
                    "level": level,
                    "degree": degree,
                    "dim": dim,
                }),
            };
            json!({ "status": "not_koszul", "witness": w })
        }
    }
}

pub fn homology_value(table: &HomologyTable) -> Value {
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|(&(n, d), &dim)| json!({ "level": n, "degree": d, "dim": dim }))
        .collect();
    json!({ "entries": entries, "exact": table.is_exact() })
}

pub fn meta_value(
    p: &Presentation,
    diagnostics: &[Diagnostic],
    levels: usize,
    degree: usize,
) -> Value {
    let quiver = p.quiver();
    let arrows: Vec<Value> = quiver
        .arrows()
        .iter()
        .map(|a| {
            json!({
                "name": a.name,
                "origin": quiver.vertex_name(a.origin),
                "terminus": quiver.vertex_name(a.terminus),
            })
        })
        .collect();
    let relations: Vec<Value> = p
        .relations()
        .iter()
        .map(|r| path_vector_value(&r.vector, quiver))
        .collect();
    let diags: Vec<Value> = diagnostics
        .iter()
        .map(|d| json!({ "severity": d.severity.to_string(), "message": d.message }))
        .collect();
    json!({
        "field": p.field().to_string(),
        "vertices": quiver.vertex_names(),
        "arrows": arrows,
        "relations": relations,
        "quadratic": p.is_quadratic(),
        "levels": levels,
        "degree_bound": degree,
        "diagnostics": diags,
    })
}

/// Pretty-prints with a trailing newline; key order is already canonical.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
