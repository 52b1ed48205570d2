//! wasm-bindgen bindings: T-function tables, ring structure and witness
//! verification, each returning a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use zsring::automorphism::orbits;
use zsring::claims::verify_theorem;
use zsring::psi::PsiSpec;
use zsring::report::report_for;
use zsring::tfunc::t_function;
use zsring::witness::build_witness;
use zsring::{FiniteRing, WeightGroup};

/// Largest ring the demo runs the exact Erdős–Burgess search on.
const EXACT_LIMIT: usize = 64;

fn setup(ring: &str, psi: &str) -> Result<(FiniteRing, String, WeightGroup), String> {
    let r = FiniteRing::from_spec(ring).map_err(|e| e.to_string())?;
    let spec = PsiSpec::parse(psi).map_err(|e| e.to_string())?;
    let group = spec.resolve(&r).map_err(|e| e.to_string())?;
    Ok((r, spec.to_string(), group))
}

/// `T(m; h)` for `1 <= m <= max_m`, `1 <= h <= max_h`, row by row.
pub fn tfunc_rows(max_m: u32, max_h: u32) -> Value {
    let rows: Vec<Value> =
        (1..=max_m).map(|m| Value::Array((1..=max_h).map(|h| serde_json::to_value(t_function(m, h)).unwrap()).collect())).collect();
    Value::Array(rows)
}

pub fn structure(ring: &str, psi: &str) -> Result<Value, String> {
    let (r, label, group) = setup(ring, psi)?;
    let primes = r.prime_ideals().map_err(|e| e.to_string())?;
    let orbit_list = orbits(&r, &group, &primes).map_err(|e| e.to_string())?;
    let render = |es: Vec<zsring::Elem>| es.into_iter().map(|e| r.render(e)).collect::<Vec<_>>();
    Ok(json!({
        "ring": r.canonical_spec(),
        "order": r.order(),
        "psi": label,
        "psi-order": group.len(),
        "idempotents": render(r.idempotents()),
        "units": render(r.units()),
        "primes": primes
            .iter()
            .map(|p| json!({
                "id": p.id,
                "index": p.index,
                "size": p.ideal.size(),
                "generators": render(r.ideal_generators(&p.ideal)),
            }))
            .collect::<Vec<_>>(),
        "orbits": orbit_list,
    }))
}

/// Witness report; the exact constant is added for rings of order at most 64.
pub fn verification(ring: &str, psi: &str) -> Result<Value, String> {
    let (r, label, group) = setup(ring, psi)?;
    let w = build_witness(&r, &group).map_err(|e| e.to_string())?;
    let mut report = report_for(&r, &group, &label, &w, false).map_err(|e| e.to_string())?;
    let theorem = if r.order() <= EXACT_LIMIT { Some(verify_theorem(&r, &group, &w).map_err(|e| e.to_string())?) } else { None };
    if let Some(t) = &theorem {
        report.burgess = Some(t.burgess);
        report.equality = Some(t.equality);
    }
    let mut doc = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    doc["theorem"] = serde_json::to_value(&theorem).map_err(|e| e.to_string())?;
    Ok(doc)
}

#[wasm_bindgen]
pub fn tfunc_table(max_m: u32, max_h: u32) -> String {
    tfunc_rows(max_m.clamp(1, 64), max_h.clamp(1, 64)).to_string()
}

#[wasm_bindgen]
pub fn ring_structure(ring: &str, psi: &str) -> Result<String, JsError> {
    structure(ring, psi).map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(ring: &str, psi: &str) -> Result<String, JsError> {
    verification(ring, psi).map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}
