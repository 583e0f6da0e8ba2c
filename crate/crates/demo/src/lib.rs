//! WebAssembly bindings for the static demo page in `www/`. Every export
//! takes plain values and returns a JSON string; failures come back as
//! `{"error": "..."}`.

use aritygap::boolfn::MobiusCoefficients;
use aritygap::extend::{eval_lovasz, eval_owen, restrict_to_cube, LovaszExtension, OwenExtension, RationalPoint};
use aritygap::fnalg::{essential_variables, gap_via_characterization, reduce_to_essential};
use aritygap::harness::fixtures;
use aritygap::harness::format::{parse_table, TableFile};
use aritygap::harness::oracle::oracle_gap;
use aritygap::order::{classify_latpoly_gap2, truncated_median};
use aritygap::rational::{format_rational, parse_rational, ratio, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Lossy, for colouring only.
fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn error(message: impl std::fmt::Display) -> Value {
    json!({ "error": message.to_string() })
}

fn names(vars: &[usize]) -> Vec<String> {
    vars.iter().map(|i| format!("x{}", i + 1)).collect()
}

/// Gap report for a table in the `aritygap-table v1` format.
pub fn analyze(text: &str) -> Value {
    let f = match parse_table(text) {
        Ok(TableFile::Function(f)) => f,
        Ok(TableFile::SetFunction(v)) => aritygap::boolfn::from_set_function(&v),
        Ok(TableFile::Mobius(m)) => restrict_to_cube(&m),
        Err(e) => return error(e),
    };
    let essential = essential_variables(&f);
    if essential.len() < 2 {
        return json!({
            "arity": f.arity(),
            "essential": names(&essential),
            "gap": Value::Null,
            "note": "arity gap undefined: fewer than two essential variables",
        });
    }
    let g = match reduce_to_essential(&f) {
        Ok((g, _)) => g,
        Err(e) => return error(e),
    };
    match gap_via_characterization(&g) {
        Ok(r) => json!({
            "arity": f.arity(),
            "essential": names(&essential),
            "ess": r.ess,
            "essl": r.essl,
            "gap": r.gap,
            "quasi_arity": r.qa,
            "oddsupp_determined": r.oddsupp_determined,
            "case": r.theorem_case.as_str(),
            "oracle_gap": oracle_gap(&g).ok(),
        }),
        Err(e) => error(e),
    }
}

fn parse_coefficients(text: &str) -> Result<MobiusCoefficients, String> {
    let values: Vec<Rational> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational")))
        .collect::<Result<_, _>>()?;
    MobiusCoefficients::new(2, values).map_err(|e| e.to_string())
}

/// Values of the Lovász or Owen extension of a two-variable coefficient
/// bundle `m(∅) m({1}) m({2}) m({1,2})` on a `steps × steps` grid over
/// `[0,1]^2`, row `y`, column `x`.
pub fn extension_grid(coefficients: &str, steps: u32, lovasz: bool) -> Value {
    let m = match parse_coefficients(coefficients) {
        Ok(m) => m,
        Err(e) => return error(e),
    };
    let steps = steps.clamp(2, 256);
    let last = i64::from(steps - 1);
    let (owen, lov) = (OwenExtension::new(m.clone()), LovaszExtension::new(m));
    let mut values = Vec::with_capacity((steps * steps) as usize);
    for y in 0..=last {
        for x in 0..=last {
            let p = RationalPoint(vec![ratio(x, last), ratio(y, last)]);
            let v = if lovasz { eval_lovasz(&lov, &p) } else { eval_owen(&owen, &p) };
            match v {
                Ok(v) => values.push(to_f64(&v)),
                Err(e) => return error(e),
            }
        }
    }
    let corners: Vec<String> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| {
            let p = RationalPoint(vec![ratio(x, 1), ratio(y, 1)]);
            format_rational(&eval_owen(&owen, &p).expect("dimension 2"))
        })
        .collect();
    json!({ "steps": steps, "values": values, "corners": corners })
}

/// `(a ∨ med) ∧ b` on the chain `0 < ... < size-1`, with its gap and the
/// bounds recovered from the table.
pub fn truncated(size: usize, a: usize, b: usize) -> Value {
    if !(2..=8).contains(&size) {
        return error("chain size must lie in 2..=8");
    }
    let l = fixtures::chain_lattice(size);
    if a >= size || b >= size {
        return error("bounds must be chain elements");
    }
    let t = match truncated_median(&l, a, b) {
        Ok(t) => t,
        Err(e) => return error(e),
    };
    let rows: Vec<Vec<usize>> = (0..size)
        .map(|x1| (0..size).map(|x2| t.eval(&[x1, x2, size / 2])).collect())
        .collect();
    json!({
        "gap": oracle_gap(&t).ok(),
        "recovered": classify_latpoly_gap2(&t, &l).ok().flatten(),
        "slice_x3": size / 2,
        "slice": rows,
    })
}

#[wasm_bindgen]
pub fn analyze_table(text: &str) -> String {
    analyze(text).to_string()
}

#[wasm_bindgen]
pub fn evaluate_extension_grid(coefficients: &str, steps: u32, lovasz: bool) -> String {
    extension_grid(coefficients, steps, lovasz).to_string()
}

#[wasm_bindgen]
pub fn truncated_median_demo(size: usize, a: usize, b: usize) -> String {
    truncated(size, a, b).to_string()
}
