//! Continuants, anticontinuants and the identities relating them.
//!
//! Indices follow the usual 0-based inclusive convention: for a sequence
//! `q_0..q_{s-1}`, `K(i, j) = q_j K(i, j-1) + K(i, j-2)` with `K(i, i-1) = 1`
//! and `K(i, i-2) = 0`, defined for `0 <= i <= j + 2 <= s + 1`. The
//! anticontinuant `A(i, j) = K(i, j-1) - K(i+1, j)` is defined for
//! `0 <= i <= j + 1 <= s`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cf::QuotientSequence;
use crate::error::{Error, Result};

/// Continuant of a whole slice; 1 for the empty slice.
pub fn continuant(q: &[BigInt]) -> BigInt {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for x in q {
        let next = x * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Anticontinuant `[q_0..q_{s-2}] - [q_1..q_{s-1}]` of a whole slice; 0 when `s <= 1`.
pub fn anticontinuant(q: &[BigInt]) -> BigInt {
    if q.len() <= 1 {
        return BigInt::zero();
    }
    continuant(&q[..q.len() - 1]) - continuant(&q[1..])
}

fn check_continuant_range(len: usize, i: i64, j: i64) -> Result<()> {
    if 0 <= i && i <= j + 2 && j + 2 <= len as i64 + 1 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { i, j, len })
    }
}

/// Slice `q_i..=q_j`, empty for the two sentinel ranges.
fn window(q: &[BigInt], i: i64, j: i64) -> &[BigInt] {
    if j < i {
        &[]
    } else {
        &q[i as usize..=j as usize]
    }
}

/// `K(i, j)`, including the sentinels `K(i, i-1) = 1` and `K(i, i-2) = 0`.
pub fn continuant_range(q: &QuotientSequence, i: i64, j: i64) -> Result<BigInt> {
    check_continuant_range(q.len(), i, j)?;
    if j == i - 2 {
        return Ok(BigInt::zero());
    }
    Ok(continuant(window(q.entries(), i, j)))
}

fn check_anticontinuant_range(len: usize, i: i64, j: i64) -> Result<()> {
    if 0 <= i && i <= j + 1 && j < len as i64 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { i, j, len })
    }
}

/// `A(i, j) = K(i, j-1) - K(i+1, j)`, straight from the definition.
pub fn anticontinuant_range(q: &QuotientSequence, i: i64, j: i64) -> Result<BigInt> {
    check_anticontinuant_range(q.len(), i, j)?;
    Ok(continuant_range(q, i, j - 1)? - continuant_range(q, i + 1, j)?)
}

/// `A(i, j)` through the peeling recursion
/// `A(i, j) = (q_i - q_j) K(i+1, j-1) - A(i+1, j-1)` with `A(i, i-1) = A(i, i) = 0`.
pub fn anticontinuant_recursive(q: &QuotientSequence, i: i64, j: i64) -> Result<BigInt> {
    check_anticontinuant_range(q.len(), i, j)?;
    let e = q.entries();
    let (mut lo, mut hi) = (i, j);
    let mut acc = BigInt::zero();
    let mut positive = true;
    while lo < hi {
        let term = (&e[lo as usize] - &e[hi as usize]) * continuant(window(e, lo + 1, hi - 1));
        if positive {
            acc += term;
        } else {
            acc -= term;
        }
        positive = !positive;
        lo += 1;
        hi -= 1;
    }
    Ok(acc)
}

/// Residual of Euler's continuant identity,
/// `K(k,n) K(l,m) - K(k,m) K(l,n) - (-1)^(l+m+1) K(k,l-2) K(m+2,n)`,
/// which vanishes for every `0 <= k <= l <= m + 2`, `m <= n <= s - 1`.
pub fn euler_residual(q: &QuotientSequence, k: i64, l: i64, m: i64, n: i64) -> Result<BigInt> {
    let len = q.len();
    if !(0 <= k && k <= l && l <= m + 2 && m <= n && n < len as i64) {
        return Err(Error::EulerIndices { k, l, m, n, len });
    }
    let kk = |i, j| continuant_range(q, i, j);
    let lhs = kk(k, n)? * kk(l, m)? - kk(k, m)? * kk(l, n)?;
    let mut rhs = kk(k, l - 2)? * kk(m + 2, n)?;
    if (l + m + 1) % 2 != 0 {
        rhs = -rhs;
    }
    Ok(lhs - rhs)
}

/// Fibonacci number with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(k: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u64]) -> QuotientSequence {
        QuotientSequence::from_u64s(v)
    }

    fn full(q: &QuotientSequence) -> i64 {
        q.len() as i64 - 1
    }

    #[test]
    fn continuant_examples() {
        let q = seq(&[1, 2, 3]);
        assert_eq!(continuant_range(&q, 0, 2).unwrap(), BigInt::from(10));
        let q = seq(&[2, 1, 2, 1]);
        assert_eq!(continuant_range(&q, 0, 3).unwrap(), BigInt::from(11));
        for i in 0..=4 {
            assert_eq!(continuant_range(&q, i, i - 1).unwrap(), BigInt::one());
            assert_eq!(continuant_range(&q, i, i - 2).unwrap(), BigInt::zero());
        }
        assert_eq!(continuant_range(&q, 5, 3).unwrap(), BigInt::zero());
        assert!(continuant_range(&q, 5, 4).is_err());
    }

    #[test]
    fn continuant_range_rejects_bad_indices() {
        let q = seq(&[2, 1, 2, 1]);
        assert!(continuant_range(&q, -1, 2).is_err());
        assert!(continuant_range(&q, 0, 4).is_err());
        assert!(continuant_range(&q, 3, 0).is_err());
        assert!(anticontinuant_range(&q, 0, 4).is_err());
        assert!(anticontinuant_range(&q, 2, 0).is_err());
        assert!(anticontinuant_range(&q, 4, 3).is_ok());
    }

    #[test]
    fn anticontinuant_examples() {
        let q = seq(&[5, 1]);
        assert_eq!(anticontinuant_range(&q, 0, 1).unwrap(), BigInt::from(4));
        let q = seq(&[3, 1, 1, 3]);
        assert_eq!(anticontinuant_range(&q, 0, 3).unwrap(), BigInt::zero());
        let q = seq(&[1, 1, 1, 2, 2, 1]);
        assert_eq!(anticontinuant_range(&q, 0, 5).unwrap(), BigInt::from(2));
        assert_eq!(anticontinuant(q.entries()), BigInt::from(2));
    }

    #[test]
    fn euler_examples() {
        let q = seq(&[3, 1, 1, 3]);
        assert_eq!(euler_residual(&q, 0, 1, 2, 3).unwrap(), BigInt::zero());
        // 25*2 - 7*7 = 1 is the convergent identity behind it.
        assert_eq!(
            continuant_range(&q, 0, 3).unwrap() * continuant_range(&q, 1, 2).unwrap()
                - continuant_range(&q, 0, 2).unwrap() * continuant_range(&q, 1, 3).unwrap(),
            BigInt::one()
        );
        let q = seq(&[2, 1, 2, 1]);
        assert_eq!(euler_residual(&q, 0, 1, 1, 3).unwrap(), BigInt::zero());
        for k in 0..4 {
            for m in (k - 2).max(0)..4 {
                assert_eq!(euler_residual(&q, k, k, m, m).unwrap(), BigInt::zero());
            }
        }
        assert!(euler_residual(&q, 2, 1, 1, 3).is_err());
        assert!(euler_residual(&q, 0, 1, 2, 4).is_err());
    }

    #[test]
    fn fibonacci_values() {
        let expected = [0u32, 1, 1, 2, 3, 5, 8, 13, 21, 34];
        for (k, f) in expected.iter().enumerate() {
            assert_eq!(fibonacci(k as u64), BigInt::from(*f));
        }
        for s in 1..=20usize {
            let ones = QuotientSequence::from_u64s(&vec![1; s]);
            assert_eq!(
                continuant_range(&ones, 0, s as i64 - 1).unwrap(),
                fibonacci(s as u64 + 1)
            );
        }
    }

    #[test]
    fn low_order_anticontinuant_formulas() {
        for a in 1..6i64 {
            for b in 1..6 {
                let q = seq(&[a as u64, b as u64]);
                assert_eq!(anticontinuant(q.entries()), BigInt::from(a - b));
                for c in 1..6 {
                    let q = seq(&[a as u64, b as u64, c as u64]);
                    assert_eq!(anticontinuant(q.entries()), BigInt::from(a * b - b * c));
                }
            }
        }
    }

    fn small_seq(max_len: usize) -> impl Strategy<Value = QuotientSequence> {
        prop::collection::vec(1u64..=9, 1..=max_len).prop_map(|v| QuotientSequence::from_u64s(&v))
    }

    proptest! {
        #[test]
        fn continuant_symmetry(q in small_seq(14)) {
            prop_assert_eq!(continuant(q.entries()), continuant(q.reversed().entries()));
        }

        #[test]
        fn reversal_antisymmetry(q in small_seq(14)) {
            prop_assert_eq!(anticontinuant(q.reversed().entries()), -anticontinuant(q.entries()));
        }

        #[test]
        fn definition_matches_recursion(q in small_seq(12), a in 0usize..12, b in 0usize..12) {
            let len = q.len() as i64;
            let i = (a as i64) % (len + 1);
            let j = (i - 1 + b as i64).min(len - 1);
            prop_assert_eq!(
                anticontinuant_range(&q, i, j).unwrap(),
                anticontinuant_recursive(&q, i, j).unwrap()
            );
        }

        #[test]
        fn euler_identity_vanishes(
            q in small_seq(12),
            picks in prop::array::uniform4(0u32..1000),
        ) {
            let s = q.len() as i64;
            let n = picks[0] as i64 % s;
            let m = -2 + picks[1] as i64 % (n + 3);
            let l = picks[2] as i64 % (m + 3).max(1);
            let k = picks[3] as i64 % (l + 1);
            prop_assume!(l <= m + 2 && m <= n);
            prop_assert_eq!(euler_residual(&q, k, l, m, n).unwrap(), BigInt::zero());
        }

        #[test]
        fn continuant_at_least_fibonacci(q in small_seq(20)) {
            prop_assert!(continuant(q.entries()) >= fibonacci(q.len() as u64 + 1));
        }

        #[test]
        fn half_bound(q in small_seq(14)) {
            let e = q.entries();
            let ends_ok = (e[0] >= BigInt::from(2) && e[e.len() - 1] >= BigInt::from(2))
                || (e[0].is_one() && e[e.len() - 1].is_one());
            prop_assume!(ends_ok);
            let a = anticontinuant(e);
            prop_assert!(a.magnitude() * 2u32 < *continuant(e).magnitude());
        }

        #[test]
        fn full_range_helpers_agree(q in small_seq(10)) {
            prop_assert_eq!(continuant_range(&q, 0, full(&q)).unwrap(), continuant(q.entries()));
            prop_assert_eq!(anticontinuant_range(&q, 0, full(&q)).unwrap(), anticontinuant(q.entries()));
        }
    }
}
