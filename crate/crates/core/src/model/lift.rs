//! Explicit monomial feature lifting.
//!
//! A degree-`k` polynomial classifier on `ℝ^d` is an affine classifier on
//! the lifted vector of all monomials `x^α` with total degree `|α| ≤ k`.
//! The monomial order is graded lexicographic — constant monomial first,
//! then degree blocks in increasing total degree; within a block the
//! exponent tuples descend lexicographically (`x1²` before `x1·x2` before
//! `x2²`). The order is fixed so serialized coefficient vectors are
//! portable across runs.

use crate::error::{Error, Result};

/// Number of monomials in `d` variables of total degree at most `k`:
/// `binomial(d + k, d)`. Fails with an explicit overflow error instead of
/// wrapping.
pub fn monomial_count(d: usize, k: u32) -> Result<usize> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let n = (d as u128)
        .checked_add(k as u128)
        .ok_or_else(|| Error::Overflow("d + k".into()))?;
    let r = (d as u128).min(k as u128);
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc
            .checked_mul(n - r + i)
            .ok_or_else(|| Error::Overflow(format!("binomial({n}, {r})")))?;
        acc /= i;
    }
    usize::try_from(acc).map_err(|_| Error::Overflow(format!("binomial({n}, {r})")))
}

/// All multi-indices `α` with `|α| ≤ k` in the fixed graded-lex order.
pub fn multi_indices(d: usize, k: u32) -> Result<Vec<Vec<u32>>> {
    let count = monomial_count(d, k)?;
    let mut out = Vec::with_capacity(count);
    let mut alpha = vec![0u32; d];
    for degree in 0..=k {
        emit_block(&mut alpha, degree, 0, &mut out);
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn emit_block(alpha: &mut Vec<u32>, remaining: u32, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos == alpha.len() - 1 {
        alpha[pos] = remaining;
        out.push(alpha.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        alpha[pos] = a;
        emit_block(alpha, remaining - a, pos + 1, out);
        alpha[pos] = 0;
    }
}

/// Value of the monomial `x^α`.
pub fn eval_monomial(x: &[f64], alpha: &[u32]) -> f64 {
    let mut v = 1.0;
    for (xi, &a) in x.iter().zip(alpha) {
        for _ in 0..a {
            v *= xi;
        }
    }
    v
}

/// Lift `x` to the vector of all monomials `x^α`, `|α| ≤ k`, in the fixed
/// monomial order. The first entry is always the constant monomial `1`.
pub fn lift(x: &[f64], k: u32) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::invalid("cannot lift an empty vector"));
    }
    if k == 0 {
        return Err(Error::invalid("lift degree must be at least 1"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("lift input has non-finite entries"));
    }
    let indices = multi_indices(x.len(), k)?;
    Ok(indices.iter().map(|a| eval_monomial(x, a)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_matches_enumeration() {
        // brute-force oracle: enumerate all exponent tuples up to degree k
        fn brute(d: usize, k: u32) -> usize {
            fn rec(d: usize, budget: u32) -> usize {
                if d == 0 {
                    return 1;
                }
                (0..=budget).map(|a| rec(d - 1, budget - a)).sum()
            }
            rec(d, k)
        }
        for d in 1..=6 {
            for k in 0..=5 {
                assert_eq!(monomial_count(d, k).unwrap(), brute(d, k), "d={d} k={k}");
            }
        }
        assert_eq!(monomial_count(2, 2).unwrap(), 6);
        assert_eq!(monomial_count(9, 2).unwrap(), 55);
        assert_eq!(monomial_count(3, 0).unwrap(), 1);
    }

    #[test]
    fn count_overflow_is_detected() {
        assert!(matches!(
            monomial_count(usize::MAX, u32::MAX),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn graded_lex_order_d2_k2() {
        let idx = multi_indices(2, 2).unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        assert_eq!(idx, expected);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(
            lift(&[2.0, 3.0], 2).unwrap(),
            vec![1.0, 2.0, 3.0, 4.0, 6.0, 9.0]
        );
        assert_eq!(lift(&[5.0], 1).unwrap(), vec![1.0, 5.0]);
    }

    #[test]
    fn lift_of_ones_is_all_ones() {
        for d in 1..=4 {
            for k in 1..=4 {
                let v = lift(&vec![1.0; d], k).unwrap();
                assert_eq!(v.len(), monomial_count(d, k).unwrap());
                assert!(v.iter().all(|&e| e == 1.0));
            }
        }
    }

    #[test]
    fn lift_length_matches_count() {
        let mut x = Vec::new();
        for d in 1..=6 {
            x.push(0.3 * d as f64 - 1.0);
            for k in 1..=5 {
                assert_eq!(lift(&x, k).unwrap().len(), monomial_count(d, k).unwrap());
            }
        }
    }

    #[test]
    fn lift_rejects_bad_input() {
        assert!(lift(&[], 2).is_err());
        assert!(lift(&[1.0], 0).is_err());
        assert!(lift(&[f64::NAN], 2).is_err());
    }
}
