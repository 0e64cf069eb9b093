use num_bigint::BigInt;

use lucas_repdigits::bounds::{k_bound, Mode};
use lucas_repdigits::lucas::{lucas_terms, SequenceParams};
use lucas_repdigits::pipeline::{solve, Format, SolveConfig, SolveReport};
use lucas_repdigits::report::emit_report;
use lucas_repdigits::search::enumerate_solutions;

fn pairs(r: &SolveReport) -> Vec<(u64, u64, String)> {
    r.solutions
        .as_ref()
        .unwrap()
        .iter()
        .map(|s| (s.n, s.m, s.value.clone()))
        .collect()
}

#[test]
fn pell_report_checkpoints() {
    let r = solve(&SolveConfig::pell()).unwrap();
    let b = r.bounds.as_ref().unwrap();
    assert_eq!(b.n_matveev, format!("27{}", "0".repeat(30)));
    assert_eq!(b.nm_reduced, Some(95));
    assert_eq!(b.n_reduced, Some(99));
    let l1 = &r.reduction.as_ref().unwrap().lambda1;
    assert_eq!(l1.q, "1189285833530929228438091844076539");
    assert_eq!(l1.guard, 4);
    assert_eq!(
        pairs(&r),
        vec![
            (2, 1, "1".into()),
            (3, 1, "4".into()),
            (3, 2, "3".into()),
            (4, 1, "11".into()),
            (4, 3, "7".into()),
            (7, 6, "99".into()),
        ]
    );
    let text = emit_report(&r, Format::Text);
    assert!(text.lines().any(|l| l == "7 | 6 | 99"));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let mut c = SolveConfig::new(2, 1, 2);
    c.format = Format::Json;
    let a = solve(&c).unwrap();
    let b = solve(&c).unwrap();
    let ja = emit_report(&a.without_timing(), Format::Json);
    assert_eq!(ja, emit_report(&b.without_timing(), Format::Json));
    let back: SolveReport = serde_json::from_str(&emit_report(&a, Format::Json)).unwrap();
    assert_eq!(back, a);

    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    for key in ["n_matveev", "k_bound"] {
        assert!(v["bounds"][key].is_string(), "{key}");
    }
    for key in ["nm_reduced", "n_reduced"] {
        assert!(v["bounds"][key].is_u64(), "{key}");
    }
    for fam in ["lambda1", "lambda2"] {
        assert!(v["reduction"][fam]["q"].is_string());
        assert!(v["reduction"][fam]["epsilon_min"].is_string());
        assert!(v["reduction"][fam]["bound"].is_u64());
    }
    let s = &v["solutions"][0];
    assert!(s["n"].is_u64() && s["m"].is_u64() && s["a"].is_u64() && s["k"].is_u64());
    assert!(s["value"].is_string());
}

/// No solution appears between the certified bound and 50 past it.
#[test]
fn oracle_containment_grid() {
    for (r, s) in [(1, 1), (2, 1), (3, -1)] {
        for b in [2u64, 10] {
            let mut c = SolveConfig::new(r, s, b);
            c.mode = Mode::Rigorous;
            let rep = solve(&c).unwrap();
            let n_max = rep.bounds.as_ref().unwrap().n_reduced.unwrap();
            let p = SequenceParams::new(r, s).unwrap();
            let wide = enumerate_solutions(&p, b, n_max + 50, 1, false).unwrap();
            assert_eq!(wide.len(), rep.solutions.as_ref().unwrap().len(), "(r, s, b) = ({r}, {s}, {b})");
            for sol in &wide {
                assert!(sol.verify(&p));
                let kb = k_bound(&p, b, &BigInt::from(sol.n), 256).unwrap();
                assert_eq!(kb.cmp_int(&BigInt::from(sol.repdigit.k)), Some(std::cmp::Ordering::Greater));
            }
        }
    }
}

/// Fibonacci, base 10: the solver's list against a direct scan to n = 200.
#[test]
fn fibonacci_snapshot() {
    let rep = solve(&SolveConfig::new(1, 1, 10)).unwrap();
    let f = lucas_terms(&SequenceParams::fibonacci(), 200);
    let mut brute = Vec::new();
    for n in 2..=200usize {
        for m in 1..n {
            let d = &f[n] - &f[m];
            let s = d.to_string();
            if d > BigInt::from(0) && s.chars().all(|c| c == s.as_bytes()[0] as char) {
                brute.push((n as u64, m as u64, s));
            }
        }
    }
    assert_eq!(pairs(&rep), brute);
    assert_eq!(brute.len(), 25);
    assert!(brute.contains(&(15, 10, "555".into())));
}

#[test]
fn min_k_and_m_zero() {
    let mut c = SolveConfig::pell();
    c.min_k = 2;
    let r = solve(&c).unwrap();
    assert_eq!(pairs(&r), vec![(4, 1, "11".into()), (7, 6, "99".into())]);
    c.min_k = 1;
    c.allow_m_zero = true;
    let r = solve(&c).unwrap();
    // U_1, U_2, U_3 themselves: 1, 2, 5
    assert!(pairs(&r).contains(&(3, 0, "5".into())));
}
