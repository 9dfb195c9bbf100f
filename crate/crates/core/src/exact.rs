//! Exact binomial coefficients.
//!
//! Convention: `binom(a, b) = 0` when `b < 0` or `b > a`. A negative top
//! argument is rejected since it never occurs in a correct sweep.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn binom(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 {
        return Err(Error::NegativeBinomialTop(a, b));
    }
    if b < 0 || b > a {
        return Ok(BigInt::zero());
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Machine-word binomial for desk-scale sizes; panics on overflow.
pub fn binom_u64(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
        assert!(acc <= u64::MAX as u128, "binom({a}, {b}) overflows u64");
    }
    acc as u64
}
