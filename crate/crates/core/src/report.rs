//! One deterministic JSON document summarizing a graph.

use serde::Serialize;
use serde_json::{json, Value};

use crate::closures::saturated_closure;
use crate::error::Result;
use crate::graph::{line_points, Graph};
use crate::structure::{corner_report, cycle_poset, decide_fp, decide_gk, Limits};

/// Serializes a computed section, or records why it is unavailable.
/// Resource caps are not absorbed: they abort the whole report.
fn section<T: Serialize>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("report sections serialize")),
        Err(e) if e.is_resource_cap() => Err(e),
        Err(e) => Ok(json!({ "error": e.to_string() })),
    }
}

pub fn report(g: &Graph, limits: &Limits) -> Result<Value> {
    let omega = g.omega_bundles().count();
    let summary = json!({
        "vertices": g.vertex_count(),
        "bundles": g.bundles().len(),
        "omegaBundles": omega,
        "rowFinite": g.is_row_finite(),
    });
    let classes: Vec<Value> = (0..g.vertex_count())
        .map(|v| json!({ "vertex": g.vertex_name(v), "class": g.classify(v) }))
        .collect();
    let lines = line_points(g);
    let socle = saturated_closure(g, &lines)?.vertices;
    let corners: Vec<Value> = g
        .vertex_names()
        .iter()
        .map(|v| section(corner_report(g, v)))
        .collect::<Result<_>>()?;
    Ok(json!({
        "graph": summary,
        "classification": classes,
        "linePoints": lines,
        "socleClosure": socle,
        "cyclePoset": section(cycle_poset(g, limits))?,
        "fp": section(decide_fp(g, limits))?,
        "gk": section(decide_gk(g, limits))?,
        "corners": corners,
    }))
}
