//! Acceptance criteria. Each prints one PASS/FAIL line; the binary exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lucas_repdigits::arith::{nearest_int_distance, Ball, PrecisionPolicy};
use lucas_repdigits::bounds::{gsl_resolve, n_bound_explicit, Mode};
use lucas_repdigits::lucas::{
    as_repdigit, binet, check_dominant_root_bounds, lucas_u, repdigit_value, SequenceParams,
};
use lucas_repdigits::reduction::{
    build_lambda1_family, build_lambda2_family, reduce_family, reduce_instance, ReductionInstance,
};
use lucas_repdigits::search::enumerate_solutions;

const PREC: u32 = 2048;

// criterion 1
const RUNTIME_LIMIT: Duration = Duration::from_secs(30);
// criterion 2
const N_BOUND_PAPER: f64 = 2.7e31;
const N_BOUND_FLOOR: f64 = 1e30;
// criterion 3
const Q_PAPER: &str = "1189285833530929228438091844076539";
// criterion 4
const NM_RANGE: (u64, u64) = (90, 100);
const N_RANGE: (u64, u64) = (85, 95);
const EPS1_PAPER: f64 = 0.0049271;
const EPS2_PAPER: f64 = 0.429295;
const EPS_REL_TOL: f64 = 0.20;
// criterion 5, 6
const GRID: [(i64, i64); 3] = [(2, 1), (1, 1), (3, -1)];
const N_GRID_MAX: u64 = 60;
// criterion 7
const LEMMA_INSTANCES: usize = 200;
const LEMMA_RUNTIME_LIMIT: Duration = Duration::from_secs(60);
// criterion 8
const GSL_L_MAX: u64 = 10_000_000;
// criterion 10
const WINDOW_N_MAX: u64 = 141;

const PELL_SOLUTIONS: [(u64, u64, u64, u64, u64); 6] = [
    // (n, m, a, k, value); 11 is the digit 1 repeated twice
    (2, 1, 1, 1, 1),
    (3, 1, 4, 1, 4),
    (3, 2, 3, 1, 3),
    (4, 1, 1, 2, 11),
    (4, 3, 7, 1, 7),
    (7, 6, 9, 2, 99),
];

fn pell_m() -> BigInt {
    BigInt::from(54) * num_traits::pow(BigInt::from(10), 30)
}

fn theorem_table() -> (bool, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lucas-repdigits"))
        .args(["solve", "--r", "2", "--s", "1", "--base", "10", "--format", "json"])
        .output()
        .expect("run the CLI");
    let elapsed = start.elapsed();
    if !out.status.success() {
        return (false, format!("exit status {}", out.status));
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON report");
    let got: BTreeSet<(u64, u64, u64, u64, u64)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["n"].as_u64().unwrap(),
                s["m"].as_u64().unwrap(),
                s["a"].as_u64().unwrap(),
                s["k"].as_u64().unwrap(),
                s["value"].as_str().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let want: BTreeSet<_> = PELL_SOLUTIONS.into_iter().collect();
    let ok = got == want && elapsed < RUNTIME_LIMIT;
    (ok, format!("{} solutions, exact match {}, {:.1?} (limit {:?})", got.len(), got == want, elapsed, RUNTIME_LIMIT))
}

fn matveev_checkpoint() -> (bool, String) {
    let r = n_bound_explicit(&SequenceParams::pell(), 10, Mode::Paper, &PrecisionPolicy::default()).unwrap();
    let n = r.n_bound_explicit.to_string().parse::<f64>().unwrap();
    let ok = (N_BOUND_FLOOR..=N_BOUND_PAPER).contains(&n) && n >= N_BOUND_PAPER / 2.0;
    (ok, format!("n < {n:e} (want <= {N_BOUND_PAPER:e}, >= {N_BOUND_FLOOR:e}, within 2x)"))
}

fn convergent_checkpoint() -> (bool, String) {
    let pell = SequenceParams::pell();
    let fam = build_lambda1_family(&pell, 10, &pell_m(), Mode::Paper, PREC).unwrap();
    let out = reduce_family(&fam).unwrap();
    let q_paper: BigInt = Q_PAPER.parse().unwrap();
    let mut ok = out.worst.q == q_paper;
    let mut later = Vec::new();
    for (inst, o) in fam.iter().zip(&out.outcomes) {
        if o.q == q_paper {
            continue;
        }
        // a later convergent is acceptable only if ε <= 0 at the paper's
        let eps = nearest_int_distance(&inst.mu.mul_int(&q_paper)).unwrap()
            - nearest_int_distance(&inst.tau.mul_int(&q_paper)).unwrap().mul_int(&inst.m);
        ok &= o.q > q_paper && !eps.is_positive();
        later.push(inst.label.clone());
    }
    (ok, format!("family worst q = {}, later convergent for {later:?}", out.worst.q))
}

fn rel(x: f64, want: f64) -> f64 {
    (x - want).abs() / want
}

fn reduction_checkpoints() -> (bool, String) {
    let pell = SequenceParams::pell();
    let l1 = reduce_family(&build_lambda1_family(&pell, 10, &pell_m(), Mode::Paper, PREC).unwrap()).unwrap();
    let l2 = reduce_family(&build_lambda2_family(&pell, 10, &pell_m(), l1.bound, Mode::Paper, PREC).unwrap()).unwrap();
    let (e1, e2) = (l1.epsilon_min.to_f64(), l2.epsilon_min.to_f64());
    let ok1 = (NM_RANGE.0..=NM_RANGE.1).contains(&l1.bound) && rel(e1, EPS1_PAPER) <= EPS_REL_TOL;
    let ok2 = (N_RANGE.0..=N_RANGE.1).contains(&l2.bound) && rel(e2, EPS2_PAPER) <= EPS_REL_TOL;
    let detail = format!(
        "lambda1 n-m <= {} (want {NM_RANGE:?}), eps {e1:.7} vs {EPS1_PAPER} [{}]; \
         lambda2 n <= {} (want {N_RANGE:?}), eps {e2:.6} vs {EPS2_PAPER} [{}]; eps tol {:.0}%",
        l1.bound,
        if ok1 { "ok" } else { "off" },
        l2.bound,
        if ok2 { "ok" } else { "off" },
        EPS_REL_TOL * 100.0
    );
    (ok1 && ok2, detail)
}

fn dominant_root() -> (bool, String) {
    let policy = PrecisionPolicy::with_start(256);
    let mut failures = 0;
    let mut checked = 0;
    for (r, s) in GRID {
        let p = SequenceParams::new(r, s).unwrap();
        for n in 2..=N_GRID_MAX {
            checked += 1;
            if !check_dominant_root_bounds(&p, n, &policy).unwrap_or(false) {
                failures += 1;
            }
        }
    }
    (failures == 0, format!("{checked} cases, {failures} failures"))
}

fn binet_oracle() -> (bool, String) {
    let mut failures = 0;
    let mut checked = 0;
    for (r, s) in GRID {
        let p = SequenceParams::new(r, s).unwrap();
        for n in 0..=N_GRID_MAX {
            checked += 1;
            let b = binet(&p, n, 256).unwrap();
            if !b.contains_int(&lucas_u(&p, n)) {
                failures += 1;
            }
        }
    }
    (failures == 0, format!("{checked} cases, {failures} failures"))
}

fn rand_rat(rng: &mut ChaCha8Rng, den_max: i64, lo: i64, hi: i64) -> BigRational {
    let q = rng.gen_range(1..=den_max);
    let p = rng.gen_range(lo * q..=hi * q);
    BigRational::new(p.into(), q.into())
}

fn dist(x: &BigRational) -> BigRational {
    (x - x.round()).abs()
}

fn lemma_soundness() -> (bool, String) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut certified = 0;
    let mut attempts = 0;
    let mut counterexamples = 0;
    while certified < LEMMA_INSTANCES && attempts < 20 * LEMMA_INSTANCES {
        attempts += 1;
        let tau = rand_rat(&mut rng, 10_000, 0, 5);
        let mu = rand_rat(&mut rng, 10_000, -3, 3);
        let a = rand_rat(&mut rng, 100, 0, 100);
        // B in (1, 3]
        let b = BigRational::one() + rand_rat(&mut rng, 1000, 0, 2);
        if !a.is_positive() || b <= BigRational::one() {
            continue;
        }
        let m: i64 = rng.gen_range(1..=500);
        let inst = ReductionInstance {
            label: format!("random #{attempts}"),
            tau: Ball::from_rational(&tau, 256),
            mu: Ball::from_rational(&mu, 256),
            a: Ball::from_rational(&a, 256),
            b: Ball::from_rational(&b, 256),
            m: BigInt::from(m),
            tau_exact: Some(tau.clone()),
        };
        let Ok(out) = reduce_instance(&inst) else {
            continue;
        };
        certified += 1;
        // strongest case ω = bound + 1 over every u <= M and every v
        let w = out.bound as i32 + 1;
        let rhs = &a / num_traits::pow(b.clone(), w as usize);
        for u in 0..=m {
            let x = &tau * BigRational::from_integer(u.into()) + &mu;
            if dist(&x) < rhs {
                counterexamples += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = certified == LEMMA_INSTANCES && counterexamples == 0 && elapsed < LEMMA_RUNTIME_LIMIT;
    (
        ok,
        format!(
            "{certified} certified of {attempts} drawn, {counterexamples} counterexamples, {elapsed:.1?} (limit {LEMMA_RUNTIME_LIMIT:?})"
        ),
    )
}

fn gsl_soundness() -> (bool, String) {
    let mut violations = 0;
    let mut admissible = 0u64;
    for r in [1u32, 2] {
        for h in [1_000i64, 10_000, 100_000] {
            let bound = gsl_resolve(r, &Ball::from_i64(h, PREC)).unwrap();
            let bound: u64 = bound.try_into().unwrap();
            for l in 2..=GSL_L_MAX {
                let lf = l as f64;
                if lf / lf.ln().powi(r as i32) < h as f64 {
                    admissible += 1;
                    if l >= bound {
                        violations += 1;
                    }
                }
            }
        }
    }
    (violations == 0, format!("{admissible} admissible L, {violations} violations"))
}

fn repdigit_round_trip() -> (bool, String) {
    let mut failures = 0;
    let mut checked = 0;
    for b in 2..=16u64 {
        for a in 1..b {
            for k in 1..=12u64 {
                checked += 1;
                let v = repdigit_value(a, b, k).unwrap();
                if as_repdigit(&v, b) != Some((a, k)) {
                    failures += 1;
                }
            }
        }
    }
    (failures == 0, format!("{checked} cases, {failures} failures"))
}

fn window_check() -> (bool, String) {
    let sols = enumerate_solutions(&SequenceParams::pell(), 10, WINDOW_N_MAX, 1, false).unwrap();
    let known: BTreeSet<(u64, u64)> = PELL_SOLUTIONS.iter().map(|s| (s.0, s.1)).collect();
    let extras = sols.iter().filter(|s| !known.contains(&(s.n, s.m))).count();
    let ok = extras == 0 && sols.len() == known.len();
    (ok, format!("n <= {WINDOW_N_MAX}: {} solutions, {extras} extras", sols.len()))
}

type Criterion = fn() -> (bool, String);

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("Pell base-10 solution table", theorem_table),
        ("paper-mode Matveev n bound", matveev_checkpoint),
        ("lambda1 convergent denominator", convergent_checkpoint),
        ("lambda1/lambda2 reduced bounds and epsilon", reduction_checkpoints),
        ("dominant-root bounds on U_n", dominant_root),
        ("Binet enclosure vs recurrence", binet_oracle),
        ("Baker-Davenport desk-scale soundness", lemma_soundness),
        ("GSL desk-scale soundness", gsl_soundness),
        ("repdigit round trip", repdigit_round_trip),
        ("no solutions above the bound window", window_check),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
