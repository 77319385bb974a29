//! WebAssembly bindings for the single-page demo in `www/`.

use gaugecon::compare::build_report;
use gaugecon::diracflow::{phase_coordinates, poisson_bracket};
use gaugecon::modelspec::{builtin_model, parse_model};
use gaugecon::symexpr::Expression;
use wasm_bindgen::prelude::wasm_bindgen;

fn error_json(message: String) -> String {
    serde_json::json!({ "error": message }).to_string()
}

/// Report for a bundled model; `params` is `key=value` pairs separated by
/// commas or whitespace.
pub fn analyze_builtin_json(name: &str, params: &str) -> String {
    let mut kv = Vec::new();
    for item in params.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        match item.split_once('=') {
            Some((k, v)) => kv.push((k.to_string(), v.to_string())),
            None => return error_json(format!("expected key=value, got `{item}`")),
        }
    }
    match builtin_model(name, &kv) {
        Ok(m) => serde_json::to_string(&build_report(&m)).expect("report serializes"),
        Err(e) => error_json(e.to_string()),
    }
}

pub fn analyze_model_json(source: &str) -> String {
    match parse_model(source) {
        Ok(m) => serde_json::to_string(&build_report(&m)).expect("report serializes"),
        Err(e) => error_json(e.to_string()),
    }
}

/// `{f, g}` over every coordinate mentioned, rendered in infix form.
pub fn bracket_text(f: &str, g: &str) -> Result<String, String> {
    let f: Expression = f.parse().map_err(|e| format!("first: {e}"))?;
    let g: Expression = g.parse().map_err(|e| format!("second: {e}"))?;
    if f.mentions(|v| !(v.is_coordinate() || v.is_momentum())) || g.mentions(|v| !(v.is_coordinate() || v.is_momentum())) {
        return Err("brackets take coordinates and momenta only".into());
    }
    let coords = phase_coordinates([&f, &g]);
    Ok(poisson_bracket(&f, &g, &coords).to_string())
}

#[wasm_bindgen]
pub fn analyze_builtin(name: &str, params: &str) -> String {
    analyze_builtin_json(name, params)
}

#[wasm_bindgen]
pub fn analyze_model(source: &str) -> String {
    analyze_model_json(source)
}

#[wasm_bindgen]
pub fn bracket(f: &str, g: &str) -> String {
    bracket_text(f, g).unwrap_or_else(|e| format!("error: {e}"))
}
