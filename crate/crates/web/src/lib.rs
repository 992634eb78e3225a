//! Browser bindings. Every function returns a JSON string.

use imm_core::catalog::{jacobian_catalog, parse_point_file, sing_catalog};
use imm_core::exact::rational_to_string;
use imm_core::hessian::{dual_dimension_ranks, hessian_unit_check};
use imm_core::imm::evaluate;
use serde_json::json;
use wasm_bindgen::prelude::*;

const DEMO_TRIALS: usize = 4;

pub fn sing_json(n: usize, q: usize) -> Result<String, String> {
    sing_catalog(n, q, 0, 1).map(|doc| doc.to_json()).map_err(|e| e.to_string())
}

pub fn jacobian_json(n: usize, q: usize) -> Result<String, String> {
    jacobian_catalog(n, q, 0, 1).map(|doc| doc.to_json()).map_err(|e| e.to_string())
}

pub fn hessian_json(n: usize, q: usize, seed: u64) -> Result<String, String> {
    let ranks = dual_dimension_ranks(n, q, DEMO_TRIALS, seed).map_err(|e| e.to_string())?;
    let dual = ranks.iter().max().copied().unwrap_or(2).saturating_sub(2);
    let unit = hessian_unit_check(n, q).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "q": q,
        "ranks": ranks,
        "dual_dimension": dual,
        "expected_dual_dimension": n * q * q - 2,
        "determinant_is_unit": unit,
    })
    .to_string())
}

pub fn eval_json(point: &str) -> Result<String, String> {
    let point = parse_point_file(point).map_err(|e| e.to_string())?;
    Ok(json!({ "value": rational_to_string(&evaluate(&point)) }).to_string())
}

#[wasm_bindgen]
pub fn sing_components(n: usize, q: usize) -> Result<String, JsValue> {
    sing_json(n, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn jacobian_components(n: usize, q: usize) -> Result<String, JsValue> {
    jacobian_json(n, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hessian_report(n: usize, q: usize, seed: u32) -> Result<String, JsValue> {
    hessian_json(n, q, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn eval_point(point: &str) -> Result<String, JsValue> {
    eval_json(point).map_err(|e| JsValue::from_str(&e))
}
