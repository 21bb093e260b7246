//! Browser bindings. Each export returns rendered text or throws a string.

use wasm_bindgen::prelude::*;
use wh3k_core::group::dinf_subgroup_oracle;
use wh3k_core::manifold::{classify_orbifold_geometry, orbifold_euler_characteristic, OrbifoldSignature};
use wh3k_core::report::{render, Format};
use wh3k_core::{assemble_wh, parse_manifold, DegreeWindow, RingKind, RingProfile};

/// Longest generator word the demo accepts.
const MAX_WORD: usize = 12;

pub fn evaluate_text(dsl: &str, ring: &str, lo: i32, hi: i32, format: &str) -> Result<String, String> {
    let kind: RingKind = ring.parse()?;
    let format: Format = format.parse()?;
    let window = DegreeWindow::new(lo, hi).map_err(|e| e.to_string())?;
    let m = parse_manifold(dsl.trim()).map_err(|e| e.to_string())?;
    let r = assemble_wh(&m, &RingProfile::of_kind(kind), window).map_err(|e| e.to_string())?;
    Ok(render(&r, format, &[]))
}

pub fn orbifold_text(genus: u32, orientable: bool, cones: &str, boundary: u32) -> Result<String, String> {
    let cone_orders = cones
        .split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| match c.parse::<u32>() {
            Ok(a) if a >= 2 => Ok(a),
            _ => Err(format!("cone order `{c}` must be an integer ≥ 2")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if !orientable && genus == 0 {
        return Err("a non-orientable surface needs genus ≥ 1".into());
    }
    let sig = OrbifoldSignature {
        genus,
        orientable,
        cone_orders,
        boundary_components: boundary,
        bad: false,
    };
    Ok(format!(
        "χ = {}\ngeometry: {:?}",
        orbifold_euler_characteristic(&sig),
        classify_orbifold_geometry(&sig)
    ))
}

/// Generators are whitespace- or comma-separated words over `r`, `R`, `s`.
pub fn dinf_text(words: &str) -> Result<String, String> {
    let gens: Vec<&str> = words
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .collect();
    let class = dinf_subgroup_oracle(&gens, MAX_WORD).map_err(|e| e.to_string())?;
    Ok(format!("⟨{}⟩ ≅ {class}", gens.join(", ")))
}

#[wasm_bindgen]
pub fn evaluate(dsl: &str, ring: &str, lo: i32, hi: i32, format: &str) -> Result<String, JsValue> {
    evaluate_text(dsl, ring, lo, hi, format).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn classify_orbifold(genus: u32, orientable: bool, cones: &str, boundary: u32) -> Result<String, JsValue> {
    orbifold_text(genus, orientable, cones, boundary).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn dinf_subgroup(words: &str) -> Result<String, JsValue> {
    dinf_text(words).map_err(JsValue::from)
}
