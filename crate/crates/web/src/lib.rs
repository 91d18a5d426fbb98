//! wasm-bindgen front end for the static demo page in `www/`.
//!
//! Every export returns JSON text; the page parses it and draws on a canvas.
//! The `*_json` functions without the `js_` prefix are plain Rust so they can
//! be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use dimer_core::analytic;
use dimer_core::eigensolver::{full_spectrum, Method, SolverOptions};
use dimer_core::output::JsonSweep;
use dimer_core::sweep::{find_threshold, run_sweep, SweepConfig, Which};
use dimer_core::CouplingParams;

/// Largest ring the page offers; keeps a sweep interactive in the browser.
pub const MAX_DEMO_SITES: usize = 12;

fn check_demo_size(n: usize) -> Result<(), String> {
    if n > MAX_DEMO_SITES {
        return Err(format!("N={n} is too large for the demo (max {MAX_DEMO_SITES})"));
    }
    Ok(())
}

/// Sweep rows plus metadata. For N = 4 each row also carries the closed-form
/// signed concurrences under `analytic`.
pub fn sweep_json(n: usize, j1: f64, j2_min: f64, j2_max: f64, steps: usize) -> Result<String, String> {
    check_demo_size(n)?;
    let config = SweepConfig { n, j1, j2_min, j2_max, steps, method: Method::Auto, ..SweepConfig::default() };
    let result = run_sweep(&config).map_err(|e| e.to_string())?;
    let mut doc = serde_json::to_value(JsonSweep::from_result(&result)).map_err(|e| e.to_string())?;
    if n == 4 {
        let rows = doc["rows"].as_array_mut().expect("rows array");
        for (row, r) in rows.iter_mut().zip(&result.rows) {
            let closed = (analytic::c12_analytic(j1, r.j2), analytic::c23_analytic(j1, r.j2));
            if let (Ok(c12), Ok(c23)) = closed {
                row["analytic"] = json!({ "c12_signed": c12, "c23_signed": c23 });
            }
        }
    }
    Ok(doc.to_string())
}

/// All eigenvalues, grouped by reversed-spin count.
pub fn spectrum_json(n: usize, j1: f64, j2: f64) -> Result<String, String> {
    check_demo_size(n)?;
    let params = CouplingParams::new(n, j1, j2).map_err(|e| e.to_string())?;
    let spectrum = full_spectrum(&params).map_err(|e| e.to_string())?;
    let mut doc = json!({
        "N": n,
        "J1": j1,
        "J2": j2,
        "eigenvalues": spectrum.eigenvalues,
        "sectors": spectrum.sector_breakdown,
    });
    if n == 4 {
        let closed = analytic::full_spectrum4(j1, j2).map_err(|e| e.to_string())?.values();
        doc["analytic"] = Value::from(closed);
    }
    Ok(doc.to_string())
}

/// Zero crossing of the signed concurrence `which` ("c12" or "c23").
pub fn threshold_json(n: usize, j1: f64, which: &str, lo: f64, hi: f64) -> Result<String, String> {
    check_demo_size(n)?;
    let which: Which = which.parse()?;
    let root = find_threshold(n, j1, which, (lo, hi), &SolverOptions::default()).map_err(|e| e.to_string())?;
    Ok(json!({ "N": n, "J1": j1, "which": which, "j2": root }).to_string())
}

#[wasm_bindgen(js_name = sweep)]
pub fn js_sweep(n: usize, j1: f64, j2_min: f64, j2_max: f64, steps: usize) -> Result<String, JsValue> {
    sweep_json(n, j1, j2_min, j2_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = spectrum)]
pub fn js_spectrum(n: usize, j1: f64, j2: f64) -> Result<String, JsValue> {
    spectrum_json(n, j1, j2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = threshold)]
pub fn js_threshold(n: usize, j1: f64, which: &str, lo: f64, hi: f64) -> Result<String, JsValue> {
    threshold_json(n, j1, which, lo, hi).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_has_rows_and_closed_forms() {
        let doc: Value = serde_json::from_str(&sweep_json(4, 1.0, 0.0, 4.0, 9).unwrap()).unwrap();
        let rows = doc["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows {
            let numeric = row["c12_signed"].as_f64().unwrap();
            let closed = row["analytic"]["c12_signed"].as_f64().unwrap();
            assert!((numeric - closed).abs() < 1e-10);
        }
        assert!((doc["metadata"]["argmax_cmean"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn larger_sweep_has_no_closed_form() {
        let doc: Value = serde_json::from_str(&sweep_json(6, 1.0, 0.5, 1.5, 3).unwrap()).unwrap();
        assert!(doc["rows"][0].get("analytic").is_none());
    }

    #[test]
    fn spectrum_matches_closed_form() {
        let doc: Value = serde_json::from_str(&spectrum_json(4, 1.0, 2.5).unwrap()).unwrap();
        let numeric = doc["eigenvalues"].as_array().unwrap();
        let closed = doc["analytic"].as_array().unwrap();
        assert_eq!(numeric.len(), 16);
        for (a, b) in numeric.iter().zip(closed) {
            assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn threshold_and_errors() {
        let doc: Value = serde_json::from_str(&threshold_json(4, 1.0, "c12", 1.0, 3.0).unwrap()).unwrap();
        assert!((doc["j2"].as_f64().unwrap() - 2.0).abs() < 1e-8);
        assert!(threshold_json(4, 1.0, "c34", 1.0, 3.0).is_err());
        assert!(sweep_json(14, 1.0, 0.0, 4.0, 9).is_err());
        assert!(spectrum_json(5, 1.0, 1.0).is_err());
    }
}
