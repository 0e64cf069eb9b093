//! Exhaustive search below a certified bound.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lucas::{as_repdigit, lucas_terms, Repdigit, SequenceParams, Solution};

/// Every `(n, m)` with `m < n <= n_max` and `U_n - U_m` a positive base-`b`
/// repdigit of length at least `min_k`, sorted by `(n, m)`.
///
/// `m` starts at 1 unless `allow_m_zero` is set.
pub fn enumerate_solutions(
    params: &SequenceParams,
    b: u64,
    n_max: u64,
    min_k: u64,
    allow_m_zero: bool,
) -> Result<Vec<Solution>> {
    if n_max < 2 {
        return Err(Error::Param(format!("n_max must be >= 2, got {n_max}")));
    }
    if b < 2 {
        return Err(Error::Param(format!("base must be >= 2, got {b}")));
    }
    if min_k < 1 {
        return Err(Error::Param("min_k must be >= 1".into()));
    }
    let terms = lucas_terms(params, n_max);
    let m_start = if allow_m_zero { 0 } else { 1 };
    let mut out = Vec::new();
    for n in 2..=n_max {
        for m in m_start..n {
            let diff = &terms[n as usize] - &terms[m as usize];
            if !diff.is_positive() {
                continue;
            }
            if let Some((a, k)) = as_repdigit(&diff, b) {
                if k >= min_k {
                    out.push(Solution {
                        n,
                        m,
                        repdigit: Repdigit { a, b, k, value: diff },
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[Solution]) -> Vec<(u64, u64, u64)> {
        v.iter()
            .map(|s| (s.n, s.m, (&s.repdigit.value).try_into().unwrap()))
            .collect()
    }

    #[test]
    fn pell_base_ten() {
        let p = SequenceParams::pell();
        let sols = enumerate_solutions(&p, 10, 91, 1, false).unwrap();
        assert_eq!(
            pairs(&sols),
            vec![(2, 1, 1), (3, 1, 4), (3, 2, 3), (4, 1, 11), (4, 3, 7), (7, 6, 99)]
        );
        assert!(sols.iter().all(|s| s.verify(&p)));
    }

    #[test]
    fn small_windows() {
        let p = SequenceParams::pell();
        assert_eq!(pairs(&enumerate_solutions(&p, 10, 2, 1, false).unwrap()), vec![(2, 1, 1)]);
        // 11 is the digit 1 repeated twice
        assert_eq!(
            pairs(&enumerate_solutions(&p, 10, 91, 2, false).unwrap()),
            vec![(4, 1, 11), (7, 6, 99)]
        );
        assert!(enumerate_solutions(&p, 10, 91, 3, false).unwrap().is_empty());
        // m = 0 adds U_n itself: 1, 2, 5
        let with_zero = enumerate_solutions(&p, 10, 10, 1, true).unwrap();
        assert!(pairs(&with_zero).contains(&(3, 0, 5)));
        assert!(enumerate_solutions(&p, 10, 1, 1, false).is_err());
    }
}
