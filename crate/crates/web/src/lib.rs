//! Browser bindings for `matrix-census`.
//!
//! Each export takes plain strings and numbers and returns a JSON string,
//! either `{"ok": ...}` or `{"error": {"code", "message"}}`, so the page
//! needs no generated type glue. The same functions run natively in tests.

use matrix_census::census::{census_bruteforce, count_irreducible_case, CensusOptions};
use matrix_census::field::prime_power_decompose;
use matrix_census::{
    count_with_charpoly, factorize, format_matrix, format_poly, parse_matrix, parse_poly, rcf,
    Error, Field,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest matrix space the page will enumerate; keeps the tab responsive.
pub const BROWSER_CENSUS_BUDGET: u64 = 1 << 20;

fn field(q: u32) -> Result<Field, Error> {
    let (p, k) = prime_power_decompose(q as u64)
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    Field::new(p, k)
}

fn respond(result: Result<Value, Error>) -> String {
    match result {
        Ok(v) => json!({ "ok": v }),
        Err(e) => json!({ "error": { "code": e.code(), "message": e.to_string() } }),
    }
    .to_string()
}

/// Number of n×n matrices over GF(q) with characteristic polynomial `poly`,
/// or with any fixed irreducible one when `poly` is blank.
pub fn count_json(q: u32, n: u32, poly: &str) -> String {
    respond((|| {
        let f = field(q)?;
        if poly.trim().is_empty() {
            let count = count_irreducible_case(&f.order_big(), n as usize)?;
            return Ok(
                json!({ "count": count.to_string(), "factorization": [], "formula": "theorem1" }),
            );
        }
        let g = parse_poly(poly, &f)?;
        if g.degree() != Some(n as usize) {
            return Err(Error::InvalidArgument(format!(
                "{g} does not have degree {n}"
            )));
        }
        let fac = factorize(&g, 0)?;
        let factors: Vec<Value> = fac
            .factors
            .iter()
            .map(|(p, m)| json!({ "factor": format_poly(p), "multiplicity": m }))
            .collect();
        Ok(json!({
            "count": count_with_charpoly(&g)?.to_string(),
            "factorization": factors,
            "formula": if fac.is_irreducible() { "theorem1" } else { "general" },
        }))
    })())
}

/// Brute-force census of all n×n matrices over GF(q) next to the formula.
pub fn census_json(q: u32, n: u32) -> String {
    respond((|| {
        let f = field(q)?;
        let options = CensusOptions {
            budget: BROWSER_CENSUS_BUDGET,
            threads: None,
        };
        let report = census_bruteforce(&f, n as usize, &options)?;
        let mut rows = Vec::new();
        for (g, count) in &report.entries {
            let formula = count_with_charpoly(g)?;
            rows.push(json!({
                "polynomial": format_poly(g),
                "census": count.to_string(),
                "formula": formula.to_string(),
                "irreducible": factorize(g, 0)?.is_irreducible(),
            }));
        }
        Ok(json!({ "total": report.total.to_string(), "rows": rows }))
    })())
}

/// Rational canonical form of a matrix written as `0,1;1,1`.
pub fn rcf_json(q: u32, matrix: &str) -> String {
    respond((|| {
        let f = field(q)?;
        let m = parse_matrix(matrix, &f)?;
        let form = rcf(&m);
        Ok(json!({
            "charpoly": format_poly(&m.charpoly()),
            "minpoly": format_poly(&m.minpoly()),
            "blocks": form.blocks.iter().map(|b| format_poly(&b.poly)).collect::<Vec<_>>(),
            "canonical_matrix": format_matrix(&form.block_matrix()),
            "transition": format_matrix(&form.transition),
        }))
    })())
}

#[wasm_bindgen]
pub fn count(q: u32, n: u32, poly: &str) -> String {
    count_json(q, n, poly)
}

#[wasm_bindgen]
pub fn census(q: u32, n: u32) -> String {
    census_json(q, n)
}

#[wasm_bindgen]
pub fn canonical_form(q: u32, matrix: &str) -> String {
    rcf_json(q, matrix)
}
