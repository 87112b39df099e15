//! Browser bindings. Every export takes graph JSON text and returns JSON
//! text, so the page needs no glue beyond `JSON.parse`.

use leavitt_core::expr::evaluate;
use leavitt_core::report::report;
use leavitt_core::{fixtures, Algebra, Graph, Limits};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn load(graph_json: &str) -> Result<Graph, String> {
    Graph::from_json_str(graph_json).map_err(|e| e.to_string())
}

pub fn report_text(graph_json: &str) -> Result<String, String> {
    let doc = report(&load(graph_json)?, &Limits::default()).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string_pretty(&doc).expect("reports serialize"))
}

pub fn evaluate_text(graph_json: &str, expr: &str) -> Result<String, String> {
    let alg = Algebra::new(load(graph_json)?);
    let x = evaluate(&alg, expr).map_err(|e| e.to_string())?;
    Ok(json!({ "text": alg.format(&x), "terms": alg.terms_json(&x) }).to_string())
}

pub fn growth_text(graph_json: &str, n: usize) -> Result<String, String> {
    let alg = Algebra::new(load(graph_json)?);
    let g = alg.growth_profile(n).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&g).expect("numbers serialize"))
}

/// Preset graphs as a JSON object from name to graph.
pub fn presets_text() -> String {
    let map: serde_json::Map<String, serde_json::Value> = fixtures::catalog()
        .into_iter()
        .map(|(name, g)| (name.to_string(), serde_json::to_value(g.to_json()).expect("graphs serialize")))
        .collect();
    serde_json::Value::Object(map).to_string()
}

#[wasm_bindgen(js_name = report)]
pub fn report_js(graph_json: &str) -> Result<String, JsError> {
    report_text(graph_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = evaluate)]
pub fn evaluate_js(graph_json: &str, expr: &str) -> Result<String, JsError> {
    evaluate_text(graph_json, expr).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = growth)]
pub fn growth_js(graph_json: &str, n: usize) -> Result<String, JsError> {
    growth_text(graph_json, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = presets)]
pub fn presets_js() -> String {
    presets_text()
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP: &str = r#"{"vertices":["v"],"edges":[{"id":"c","src":"v","dst":"v"}]}"#;

    #[test]
    fn growth_and_eval() {
        assert_eq!(growth_text(LOOP, 3).unwrap(), "[1,3,5,7]");
        assert!(evaluate_text(LOOP, "c.c*").unwrap().contains(r#""text":"v""#));
        assert!(evaluate_text(LOOP, "x").is_err());
    }

    #[test]
    fn presets_load() {
        let all: serde_json::Value = serde_json::from_str(&presets_text()).unwrap();
        for (_, g) in all.as_object().unwrap() {
            assert!(report_text(&g.to_string()).is_ok());
        }
    }
}
