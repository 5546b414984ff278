//! Arbitrary-precision integers and rationals plus the combinatorial
//! primitives (binomials, integer powers) every other module builds on.
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`], which keeps every value in lowest terms
//! with a positive denominator. Nothing in here ever rounds.

use std::collections::HashMap;
use std::sync::RwLock;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type BigInt = num_bigint::BigInt;
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("binomial upper index must be non-negative, got {0}")]
    NegativeUpperIndex(BigInt),
    #[error("exponent must be non-negative, got {0}")]
    NegativeExponent(BigInt),
    #[error("exponent {0} is too large to evaluate exactly")]
    ExponentTooLarge(BigInt),
    #[error("division by zero")]
    DivisionByZero,
}

/// `C(n, k)` for machine-sized arguments, computed with the exact
/// multiplicative formula. Returns 0 for `k > n`.
pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division below is exact.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact binomial coefficient `C(n, k)`.
///
/// Follows the combinatorial convention of returning 0 whenever `k < 0` or
/// `k > n`, so summation code can range over indices freely. A negative `n`
/// is rejected.
pub fn binomial(n: &BigInt, k: &BigInt) -> Result<BigInt, NumError> {
    if n.is_negative() {
        return Err(NumError::NegativeUpperIndex(n.clone()));
    }
    if k.is_negative() || k > n {
        return Ok(BigInt::zero());
    }
    let nn = n.to_u64().ok_or_else(|| NumError::ExponentTooLarge(n.clone()))?;
    let kk = k.to_u64().expect("0 <= k <= n fits in u64");
    Ok(binom(nn, kk))
}

/// Exact integer power. `ipow(b, 0) == 1` for every `b`, including 0.
pub fn ipow(base: &BigInt, exp: &BigInt) -> Result<BigInt, NumError> {
    if exp.is_negative() {
        return Err(NumError::NegativeExponent(exp.clone()));
    }
    let e = exp
        .to_u32()
        .ok_or_else(|| NumError::ExponentTooLarge(exp.clone()))?;
    Ok(num_traits::pow(base.clone(), e as usize))
}

pub fn rat_add(a: &BigRat, b: &BigRat) -> BigRat {
    a + b
}

pub fn rat_mul(a: &BigRat, b: &BigRat) -> BigRat {
    a * b
}

pub fn rat_neg(a: &BigRat) -> BigRat {
    -a
}

pub fn rat_div(a: &BigRat, b: &BigRat) -> Result<BigRat, NumError> {
    if b.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(a / b)
}

/// Builds `num/den` in lowest terms.
pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(v.into())
}

/// `lcm(1, 2, ..., n)`, with `lcm() = 1` for `n = 0`.
pub fn lcm_upto(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// Memoizing binomial table keyed by `(n, k)`.
///
/// Only entries with `n <= max_n` are stored, so the cache never grows past
/// the largest row a sweep asks for. Safe to share between worker threads.
#[derive(Debug)]
pub struct BinomialCache {
    max_n: u64,
    entries: RwLock<HashMap<(u64, u64), BigInt>>,
}

impl BinomialCache {
    pub fn new(max_n: u64) -> Self {
        Self {
            max_n,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("binomial cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: u64, k: u64) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        let k = k.min(n - k);
        if n > self.max_n {
            return binom(n, k);
        }
        if let Some(v) = self
            .entries
            .read()
            .expect("binomial cache poisoned")
            .get(&(n, k))
        {
            return v.clone();
        }
        let v = binom(n, k);
        self.entries
            .write()
            .expect("binomial cache poisoned")
            .insert((n, k), v.clone());
        v
    }
}
