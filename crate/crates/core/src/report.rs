//! Text and JSON rendering of a [`SolveReport`].

use std::fmt::Write;

use crate::pipeline::{FamilySummary, Format, SolveReport};

/// Deterministic serialization; JSON is pretty-printed with a trailing newline.
pub fn emit_report(report: &SolveReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn family(out: &mut String, name: &str, unknown: &str, f: &FamilySummary) {
    let _ = writeln!(out, "{name}: {} instances, {unknown} <= {}", f.instances, f.bound);
    let _ = writeln!(
        out,
        "  worst {} at convergent {} (q = {}), epsilon = {}",
        f.worst_instance, f.convergent_index, f.q, f.epsilon_worst
    );
    let _ = writeln!(out, "  family-min epsilon = {}", f.epsilon_min);
    if f.bound > f.reduction_bound {
        let _ = writeln!(out, "  raised from {} by the small-case guard {unknown} >= {}", f.reduction_bound, f.guard);
    }
}

fn render_text(r: &SolveReport) -> String {
    let c = &r.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "U(n+2) = {} U(n+1) + {} U(n), base {}, mode {}",
        c.r, c.s, c.base, c.mode
    );
    if let Some(b) = &r.bounds {
        let _ = writeln!(out);
        let _ = writeln!(out, "bounds");
        let _ = writeln!(out, "  {}", b.implicit);
        let _ = writeln!(out, "  H = {}, n < {}", b.h, b.n_matveev);
        let _ = writeln!(out, "  k < {}, M = {}", b.k_bound, b.k_cap);
        let _ = writeln!(out, "  n - m <= {} (D = {})", b.nm_matveev, b.d_expression);
        let _ = writeln!(
            out,
            "  fixed point {} (GSL bound is {}x larger)",
            b.fixed_point, b.gsl_fixed_point_ratio
        );
    }
    if let Some(red) = &r.reduction {
        let _ = writeln!(out);
        family(&mut out, "lambda1", "n - m", &red.lambda1);
        if let Some(l2) = &red.lambda2 {
            family(&mut out, "lambda2", "n", l2);
        }
    }
    if let Some(sols) = &r.solutions {
        let _ = writeln!(out);
        if let Some(n) = r.diagnostics.search_limit {
            let _ = writeln!(out, "searched n <= {n}: {} solution(s)", sols.len());
        }
        if !sols.is_empty() {
            let _ = writeln!(out, "n | m | U_n - U_m");
            for s in sols {
                let _ = writeln!(out, "{} | {} | {}", s.n, s.m, s.value);
            }
        }
    }
    for note in &r.diagnostics.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}
