//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string. The plain functions are callable from
//! native Rust as well, which is how they are tested.

use num_bigint::BigInt;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use lucas_repdigits::arith::{cf_expand, log_int, Ball, PrecisionPolicy};
use lucas_repdigits::bounds::Mode;
use lucas_repdigits::lucas::{lucas_u, SequenceParams};
use lucas_repdigits::pipeline::{self, SolveConfig};
use lucas_repdigits::report::emit_report;

/// Demo-side caps so a page cannot lock up the tab.
pub const MAX_BASE: u64 = 36;
pub const MAX_GROWTH_N: u64 = 400;
pub const MAX_TERMS: usize = 120;

fn config(r: i64, s: i64, base: u64, min_k: u64, rigorous: bool) -> Result<SolveConfig, String> {
    if base > MAX_BASE {
        return Err(format!("the demo accepts bases up to {MAX_BASE}"));
    }
    let mut c = SolveConfig::new(r, s, base);
    c.min_k = min_k;
    c.mode = if rigorous { Mode::Rigorous } else { Mode::Paper };
    c.format = pipeline::Format::Json;
    Ok(c)
}

/// Full pipeline report.
pub fn solve_report(r: i64, s: i64, base: u64, min_k: u64, rigorous: bool) -> Result<String, String> {
    let c = config(r, s, base, min_k, rigorous)?;
    let rep = pipeline::solve(&c).map_err(|e| e.to_string())?;
    Ok(emit_report(&rep, pipeline::Format::Json))
}

/// Bounds stage only; fast enough to recompute on every keystroke.
pub fn bound_report(r: i64, s: i64, base: u64, rigorous: bool) -> Result<String, String> {
    let c = config(r, s, base, 1, rigorous)?;
    let rep = pipeline::bound_only(&c).map_err(|e| e.to_string())?;
    Ok(emit_report(&rep, pipeline::Format::Json))
}

#[derive(Serialize)]
struct GrowthPoint {
    n: u64,
    log10_u: Option<f64>,
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct Growth {
    delta: f64,
    points: Vec<GrowthPoint>,
}

/// `log10 U_n` next to `(n-2) log10 δ` and `n log10 δ`.
pub fn growth_curve(r: i64, s: i64, n_max: u64) -> Result<String, String> {
    if n_max > MAX_GROWTH_N {
        return Err(format!("n_max is capped at {MAX_GROWTH_N}"));
    }
    let p = SequenceParams::new(r, s).map_err(|e| e.to_string())?;
    let prec = 128;
    let delta = p.delta(prec).map_err(|e| e.to_string())?.to_f64();
    let l = delta.abs().log10();
    let points = (0..=n_max)
        .map(|n| {
            let u = lucas_u(&p, n);
            let log10_u = (u > BigInt::from(0)).then(|| Ball::from_int(&u, prec).to_f64().log10());
            GrowthPoint {
                n,
                log10_u,
                lower: (n as f64 - 2.0) * l,
                upper: n as f64 * l,
            }
        })
        .collect();
    serde_json::to_string(&Growth { delta, points }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Expansion {
    tau: String,
    partial_quotients: Vec<String>,
    denominators: Vec<String>,
}

/// Certified continued fraction of `log b / log δ`.
pub fn tau_expansion(r: i64, s: i64, base: u64, terms: usize) -> Result<String, String> {
    if !(1..=MAX_TERMS).contains(&terms) {
        return Err(format!("terms must be in 1..={MAX_TERMS}"));
    }
    if base < 2 {
        return Err("base must be >= 2".into());
    }
    let p = SequenceParams::new(r, s).map_err(|e| e.to_string())?;
    p.require_pipeline().map_err(|e| e.to_string())?;
    let cf = PrecisionPolicy::with_start(1024)
        .run(|prec| {
            let tau = log_int(&BigInt::from(base), prec)?.checked_div(&p.log_delta(prec)?)?;
            Ok((tau.to_decimal(30), cf_expand(&tau, terms)?))
        })
        .map_err(|e| e.to_string())?;
    let out = Expansion {
        tau: cf.0,
        partial_quotients: cf.1.partial_quotients.iter().map(|a| a.to_string()).collect(),
        denominators: cf.1.denominators().map(|q| q.to_string()).collect(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn solve(r: i32, s: i32, base: u32, min_k: u32, rigorous: bool) -> Result<String, JsError> {
    solve_report(r.into(), s.into(), base.into(), min_k.into(), rigorous).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bounds(r: i32, s: i32, base: u32, rigorous: bool) -> Result<String, JsError> {
    bound_report(r.into(), s.into(), base.into(), rigorous).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn growth(r: i32, s: i32, n_max: u32) -> Result<String, JsError> {
    growth_curve(r.into(), s.into(), n_max.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn expansion(r: i32, s: i32, base: u32, terms: u32) -> Result<String, JsError> {
    tau_expansion(r.into(), s.into(), base.into(), terms as usize).map_err(|e| JsError::new(&e))
}
