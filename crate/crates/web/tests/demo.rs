use lucas_repdigits_web::{bound_report, growth_curve, solve_report, tau_expansion};

#[test]
fn growth_stays_between_the_envelopes() {
    let v: serde_json::Value = serde_json::from_str(&growth_curve(2, 1, 60).unwrap()).unwrap();
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 61);
    assert!(pts[0]["log10_u"].is_null());
    for p in &pts[2..] {
        let u = p["log10_u"].as_f64().unwrap();
        assert!(p["lower"].as_f64().unwrap() <= u + 1e-12);
        assert!(u <= p["upper"].as_f64().unwrap() + 1e-12);
    }
    assert!(growth_curve(2, 1, 10_000).is_err());
}

#[test]
fn pell_expansion() {
    let v: serde_json::Value = serde_json::from_str(&tau_expansion(2, 1, 10, 80).unwrap()).unwrap();
    assert!(v["tau"].as_str().unwrap().starts_with("2.61249613887395698193969"));
    assert_eq!(v["denominators"][72], "1189285833530929228438091844076539");
    assert!(tau_expansion(2, 2, 10, 5).is_err());
}

#[test]
fn bounds_and_solve() {
    let b: serde_json::Value = serde_json::from_str(&bound_report(2, 1, 10, false).unwrap()).unwrap();
    assert_eq!(b["bounds"]["c1"], "1.4e26");
    let s: serde_json::Value = serde_json::from_str(&solve_report(2, 1, 2, 1, true).unwrap()).unwrap();
    assert!(!s["solutions"].as_array().unwrap().is_empty());
    assert!(solve_report(2, 1, 100, 1, false).is_err());
}
