//! End-to-end solver: bounds, both reductions, then exhaustive search.

use std::cell::Cell;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{elementary, format_rational, Ball, PrecisionPolicy, DEFAULT_PRECISION};
use crate::bounds::{k_bound, n_bound_explicit, BoundReport, Mode};
use crate::error::{Error, Result};
use crate::lucas::{SequenceParams, Solution};
use crate::reduction::{
    build_lambda1_family, build_lambda2_family, lambda1_guard, lambda2_guard, reduce_family,
    FamilyOutcome,
};
use crate::search::enumerate_solutions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub r: i64,
    pub s: i64,
    pub base: u64,
    pub min_k: u64,
    pub allow_m_zero: bool,
    pub mode: Mode,
    /// Starting working precision in bits.
    pub precision: u32,
    pub format: Format,
}

impl SolveConfig {
    pub fn new(r: i64, s: i64, base: u64) -> Self {
        SolveConfig {
            r,
            s,
            base,
            min_k: 1,
            allow_m_zero: false,
            mode: Mode::Paper,
            precision: DEFAULT_PRECISION,
            format: Format::Text,
        }
    }

    pub fn pell() -> Self {
        SolveConfig::new(2, 1, 10)
    }

    /// Checks every parameter and returns the sequence.
    pub fn validate(&self) -> Result<SequenceParams> {
        let params = SequenceParams::new(self.r, self.s)?;
        params.require_pipeline()?;
        if self.base < 2 {
            return Err(Error::Param(format!("base must be >= 2, got {}", self.base)));
        }
        if self.min_k < 1 {
            return Err(Error::Param("min-k must be >= 1".into()));
        }
        if self.precision < 64 {
            return Err(Error::Param(format!("precision must be >= 64 bits, got {}", self.precision)));
        }
        Ok(params)
    }

    fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy::with_start(self.precision)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsSection {
    /// Explicit bound on `n` from linear forms in logarithms.
    pub n_matveev: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nm_reduced: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_reduced: Option<u64>,
    /// Ceiling of `1 + n log δ / log b` at `n_matveev`.
    pub k_bound: String,
    pub c1: String,
    pub c2: String,
    pub h: String,
    pub implicit: String,
    /// Cap `M` on `k` fed to the reduction.
    pub k_cap: String,
    /// Exponent height bound used for the `n - m` estimate.
    pub d_expression: String,
    /// Unreduced bound on `n - m`.
    pub nm_matveev: String,
    pub fixed_point: String,
    pub gsl_fixed_point_ratio: String,
    pub cross_check_within_10x: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    /// Convergent denominator of the instance attaining the bound.
    pub q: String,
    pub epsilon_min: String,
    /// Bound on the unknown exponent, including the small-case guard.
    pub bound: u64,
    pub reduction_bound: u64,
    /// Values below this were not reduced; the search covers them.
    pub guard: u64,
    pub worst_instance: String,
    pub convergent_index: usize,
    pub epsilon_worst: String,
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSection {
    pub lambda1: FamilySummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<FamilySummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub n: u64,
    pub m: u64,
    pub a: u64,
    pub k: u64,
    pub value: String,
}

impl From<&Solution> for SolutionRow {
    fn from(s: &Solution) -> Self {
        SolutionRow {
            n: s.n,
            m: s.m,
            a: s.repdigit.a,
            k: s.repdigit.k,
            value: s.repdigit.value.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub bounds_ms: u64,
    pub lambda1_ms: u64,
    pub lambda2_ms: u64,
    pub search_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Highest working precision any stage needed.
    pub precision_bits: u32,
    /// Number of `Λ₁` values over the reduced box certified nonzero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1_nonzero_checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_limit: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock timings; not part of the deterministic output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub config: SolveConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionRow>>,
    pub diagnostics: Diagnostics,
}

impl SolveReport {
    fn empty(config: &SolveConfig) -> Self {
        SolveReport {
            config: config.clone(),
            bounds: None,
            reduction: None,
            solutions: None,
            diagnostics: Diagnostics::default(),
        }
    }

    /// The report with wall-clock data removed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.diagnostics.timing = None;
        r
    }
}

#[cfg(not(target_arch = "wasm32"))]
struct Clock(std::time::Instant);

#[cfg(not(target_arch = "wasm32"))]
impl Clock {
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }
    fn lap(&mut self) -> u64 {
        let ms = self.0.elapsed().as_millis() as u64;
        self.0 = std::time::Instant::now();
        ms
    }
}

// std::time::Instant panics on wasm32-unknown-unknown
#[cfg(target_arch = "wasm32")]
struct Clock;

#[cfg(target_arch = "wasm32")]
impl Clock {
    fn start() -> Self {
        Clock
    }
    fn lap(&mut self) -> u64 {
        0
    }
}

fn bounds_section(b: &BoundReport) -> BoundsSection {
    BoundsSection {
        n_matveev: b.n_bound_explicit.to_string(),
        nm_reduced: None,
        n_reduced: None,
        k_bound: b.k_bound.ceil_upper().to_string(),
        c1: format_rational(&b.implicit.c1.hi(), 6),
        c2: format_rational(&b.implicit.c2.hi(), 6),
        h: format_rational(&b.h.hi(), 6),
        implicit: b.n_bound_raw.clone(),
        k_cap: b.k_cap.to_string(),
        d_expression: format_rational(&b.d_expression.hi(), 6),
        nm_matveev: b.nm_bound.to_string(),
        fixed_point: format!("{:.6e}", b.fixed_point),
        gsl_fixed_point_ratio: format!("{:.3}", b.gsl_fixed_point_ratio),
        cross_check_within_10x: b.cross_check_within_10x(),
    }
}

fn family_summary(f: &FamilyOutcome, guard: u64, instances: usize) -> FamilySummary {
    FamilySummary {
        q: f.worst.q.to_string(),
        epsilon_min: f.epsilon_min.to_decimal(8),
        bound: f.bound.max(guard.saturating_sub(1)),
        reduction_bound: f.bound,
        guard,
        worst_instance: f.worst.label.clone(),
        convergent_index: f.worst.convergent_index,
        epsilon_worst: f.worst.epsilon.to_decimal(8),
        instances,
    }
}

/// Runs `f` under the precision policy and records the precision it settled at.
fn tracked<T>(policy: &PrecisionPolicy, used: &Cell<u32>, stage: &'static str, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    policy
        .run(|prec| {
            used.set(used.get().max(prec));
            f(prec)
        })
        .map_err(|e| e.in_stage(stage))
}

struct Stages {
    params: SequenceParams,
    bounds: BoundReport,
    lambda1: Option<(FamilyOutcome, FamilySummary)>,
    lambda2: Option<(FamilyOutcome, FamilySummary)>,
    used: Cell<u32>,
    timing: Timing,
    clock: Clock,
}

impl Stages {
    fn bounds(config: &SolveConfig) -> Result<Self> {
        let params = config.validate()?;
        let mut clock = Clock::start();
        let bounds = n_bound_explicit(&params, config.base, config.mode, &config.policy())
            .map_err(|e| e.in_stage("bounds"))?;
        let timing = Timing {
            bounds_ms: clock.lap(),
            ..Default::default()
        };
        Ok(Stages {
            used: Cell::new(bounds.precision_bits),
            params,
            bounds,
            lambda1: None,
            lambda2: None,
            timing,
            clock,
        })
    }

    fn lambda1(&mut self, config: &SolveConfig) -> Result<u64> {
        let policy = config.policy();
        let (p, b, mode) = (&self.params, config.base, config.mode);
        let k_cap = &self.bounds.k_cap;
        let (fam, n, guard) = tracked(&policy, &self.used, "lambda1 reduction", |prec| {
            let inst = build_lambda1_family(p, b, k_cap, mode, prec)?;
            Ok((reduce_family(&inst)?, inst.len(), lambda1_guard(p, prec)?))
        })?;
        let summary = family_summary(&fam, guard, n);
        let bound = summary.bound;
        self.lambda1 = Some((fam, summary));
        self.timing.lambda1_ms = self.clock.lap();
        Ok(bound)
    }

    fn lambda2(&mut self, config: &SolveConfig, nm_max: u64) -> Result<u64> {
        let policy = config.policy();
        let (p, b, mode) = (&self.params, config.base, config.mode);
        let k_cap = &self.bounds.k_cap;
        let (fam, n, guard) = tracked(&policy, &self.used, "lambda2 reduction", |prec| {
            let inst = build_lambda2_family(p, b, k_cap, nm_max.max(1), mode, prec)?;
            Ok((reduce_family(&inst)?, inst.len(), lambda2_guard(p, prec)?))
        })?;
        let summary = family_summary(&fam, guard, n);
        let bound = summary.bound;
        self.lambda2 = Some((fam, summary));
        self.timing.lambda2_ms = self.clock.lap();
        Ok(bound)
    }

    fn report(&self, config: &SolveConfig) -> SolveReport {
        let mut r = SolveReport::empty(config);
        let mut bs = bounds_section(&self.bounds);
        if let Some((_, s1)) = &self.lambda1 {
            bs.nm_reduced = Some(s1.bound);
            r.reduction = Some(ReductionSection {
                lambda1: s1.clone(),
                lambda2: self.lambda2.as_ref().map(|(_, s)| s.clone()),
            });
        }
        if let Some((_, s2)) = &self.lambda2 {
            bs.n_reduced = Some(s2.bound);
        }
        r.bounds = Some(bs);
        r.diagnostics.precision_bits = self.used.get();
        r
    }
}

/// Certifies `Λ₁ = k log b - n log δ + log(a√Δ/(b-1)) ≠ 0` for every
/// `n <= n_max`, `1 <= k < 1 + n log δ / log b` and digit `a`.
pub fn check_lambda1_nonzero(params: &SequenceParams, b: u64, n_max: u64, policy: &PrecisionPolicy) -> Result<u64> {
    policy.run(|prec| {
        let log_delta = params.log_delta(prec)?;
        let log_b = elementary::log_int(&BigInt::from(b), prec)?;
        let base = elementary::log(&params.sqrt_discriminant(prec)?)? - elementary::log_int(&BigInt::from(b - 1), prec)?;
        let digit_logs = (1..b)
            .map(|a| Ok(&base + &elementary::log_int(&BigInt::from(a), prec)?))
            .collect::<Result<Vec<Ball>>>()?;
        let mut count = 0u64;
        for n in 1..=n_max {
            let n_part = log_delta.mul_int(&BigInt::from(n));
            let k_max = k_bound(params, b, &BigInt::from(n), prec)?.ceil_upper();
            let mut k = BigInt::from(1);
            while k < k_max {
                let kb = &log_b.mul_int(&k) - &n_part;
                for la in &digit_logs {
                    if (&kb + la).sign().is_none_or(|o| o.is_eq()) {
                        return Err(Error::undecided(format!("Lambda1 at n={n}, k={k}"), prec));
                    }
                    count += 1;
                }
                k += 1;
            }
        }
        Ok(count)
    })
}

fn search_rows(sols: &[Solution]) -> Vec<SolutionRow> {
    sols.iter().map(SolutionRow::from).collect()
}

/// Bounds stage only.
pub fn bound_only(config: &SolveConfig) -> Result<SolveReport> {
    let st = Stages::bounds(config)?;
    let mut r = st.report(config);
    r.diagnostics.timing = Some(st.timing.clone());
    Ok(r)
}

/// Bounds and both reductions, without the final search.
pub fn reduce_only(config: &SolveConfig) -> Result<SolveReport> {
    let mut st = Stages::bounds(config)?;
    let nm = st.lambda1(config)?;
    st.lambda2(config, nm)?;
    let mut r = st.report(config);
    r.diagnostics.timing = Some(st.timing.clone());
    Ok(r)
}

/// Exhaustive search up to `n_max`, no bounds.
pub fn search_only(config: &SolveConfig, n_max: u64) -> Result<SolveReport> {
    let params = config.validate()?;
    let mut clock = Clock::start();
    let sols = enumerate_solutions(&params, config.base, n_max, config.min_k, config.allow_m_zero)
        .map_err(|e| e.in_stage("search"))?;
    let mut r = SolveReport::empty(config);
    r.solutions = Some(search_rows(&sols));
    r.diagnostics.search_limit = Some(n_max);
    r.diagnostics.timing = Some(Timing {
        search_ms: clock.lap(),
        ..Default::default()
    });
    Ok(r)
}

/// The full pipeline.
pub fn solve(config: &SolveConfig) -> Result<SolveReport> {
    let mut st = Stages::bounds(config)?;
    let nm = st.lambda1(config)?;
    let n_max = st.lambda2(config, nm)?.max(2);

    let policy = config.policy();
    let checked = check_lambda1_nonzero(&st.params, config.base, n_max, &policy)
        .map_err(|e| e.in_stage("nonvanishing check"))?;

    let sols = enumerate_solutions(&st.params, config.base, n_max, config.min_k, config.allow_m_zero)
        .map_err(|e| e.in_stage("search"))?;
    for s in &sols {
        if !s.verify(&st.params) {
            return Err(Error::Domain(format!("solution ({}, {}) failed re-verification", s.n, s.m)).in_stage("search"));
        }
        let kb = k_bound(&st.params, config.base, &BigInt::from(s.n), config.precision)?;
        if kb.cmp_int(&BigInt::from(s.repdigit.k)) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!("solution ({}, {}) violates the k bound", s.n, s.m)).in_stage("search"));
        }
    }
    st.timing.search_ms = st.clock.lap();

    let mut r = st.report(config);
    r.solutions = Some(search_rows(&sols));
    r.diagnostics.lambda1_nonzero_checked = Some(checked);
    r.diagnostics.search_limit = Some(n_max);
    let g1 = r.reduction.as_ref().map_or(0, |x| x.lambda1.guard);
    let g2 = r.reduction.as_ref().and_then(|x| x.lambda2.as_ref()).map_or(0, |x| x.guard);
    r.diagnostics.notes.push(format!(
        "cases with n - m < {g1} or n < {g2} are outside the reduction and covered by the search up to n = {n_max}"
    ));
    r.diagnostics.timing = Some(st.timing.clone());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_configs() {
        let mut c = SolveConfig::new(1, 2, 10);
        assert_eq!(solve(&c).unwrap_err().exit_code(), 2);
        c = SolveConfig::pell();
        c.base = 1;
        assert_eq!(solve(&c).unwrap_err().exit_code(), 2);
        c = SolveConfig::pell();
        c.min_k = 0;
        assert!(matches!(c.validate(), Err(Error::Param(_))));
    }

    #[test]
    fn search_stage_alone() {
        let r = search_only(&SolveConfig::pell(), 10).unwrap();
        assert_eq!(r.solutions.unwrap().len(), 6);
        assert!(r.bounds.is_none());
    }

    #[test]
    fn bound_stage_alone() {
        let mut c = SolveConfig::pell();
        c.precision = 512;
        let r = bound_only(&c).unwrap();
        let b = r.bounds.unwrap();
        assert_eq!(b.n_matveev, format!("27{}", "0".repeat(30)));
        assert!(b.nm_reduced.is_none());
    }
}
