//! Residue arithmetic modulo prime powers.
//!
//! A congruence `a ≡ b (mod p^m)` between rationals only makes sense when
//! `a - b` is p-integral; [`reduce`] refuses anything else with
//! [`PadicError::DenominatorDivisibleByP`] so that an ill-posed statement can
//! never be silently skipped.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{BigInt, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus exponent must be at least 1")]
    ZeroExponent,
    #[error("{p}^{m} does not fit the residue range")]
    ModulusTooLarge { p: u64, m: u32 },
    #[error("denominator {den} is divisible by {p}; the value is not {p}-integral")]
    DenominatorDivisibleByP { den: BigInt, p: u64 },
    #[error("the valuation of zero is infinite")]
    ZeroValuation,
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigInt, modulus: BigInt },
    #[error("negative exponent {0}")]
    NegativeExponent(BigInt),
    #[error("residues modulo {0} and {1} cannot be combined")]
    ModulusMismatch(BigInt, BigInt),
}

// Deterministic for every n < 3.3 * 10^24, which covers all of u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[lo, hi]`, ascending: a segmented sieve with every
/// survivor confirmed by [`is_prime`]. An empty range gives an empty list.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    let mut d = 2u64;
    while d.saturating_mul(d) <= hi {
        let first = (lo.div_ceil(d) * d).max(d * d);
        let mut x = first;
        while x <= hi {
            composite[(x - lo) as usize] = true;
            x += d;
        }
        d += 1;
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .filter(|&n| is_prime(n))
        .collect()
}

/// The congruence context `p^m` with `p` verified prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerModulus {
    p: u64,
    m: u32,
    modulus: BigInt,
}

impl PrimePowerModulus {
    pub fn new(p: u64, m: u32) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if m == 0 {
            return Err(PadicError::ZeroExponent);
        }
        Ok(Self {
            p,
            m,
            modulus: num_traits::pow(BigInt::from(p), m as usize),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// The modulus as a machine word, when it fits the fast residue ring.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus.to_u64().filter(|&n| n < (1 << 63))
    }

    pub fn residue(&self, value: impl Into<BigInt>) -> Residue {
        Residue {
            value: value.into().mod_floor(&self.modulus),
            modulus: self.clone(),
        }
    }
}

impl fmt::Display for PrimePowerModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

/// Canonical representative in `[0, p^m)` of a congruence class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    modulus: PrimePowerModulus,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    /// Representative in `(-p^m/2, p^m/2]`, for display only.
    pub fn symmetric(&self) -> BigInt {
        let n = self.modulus.modulus();
        if &self.value * 2 > *n {
            &self.value - n
        } else {
            self.value.clone()
        }
    }

    fn same_modulus(&self, other: &Residue) -> Result<(), PadicError> {
        if self.modulus != other.modulus {
            return Err(PadicError::ModulusMismatch(
                self.modulus.modulus.clone(),
                other.modulus.modulus.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Residue) -> Result<Residue, PadicError> {
        self.same_modulus(other)?;
        Ok(self.modulus.residue(&self.value + &other.value))
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue, PadicError> {
        self.same_modulus(other)?;
        Ok(self.modulus.residue(&self.value - &other.value))
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue, PadicError> {
        self.same_modulus(other)?;
        Ok(self.modulus.residue(&self.value * &other.value))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation `vp(num) - vp(den)`; may be negative. Zero is rejected.
pub fn vp(r: &BigRat, p: u64) -> Result<i64, PadicError> {
    if r.is_zero() {
        return Err(PadicError::ZeroValuation);
    }
    Ok(vp_int(r.numer(), p) as i64 - vp_int(r.denom(), p) as i64)
}

pub fn is_p_integral(r: &BigRat, p: u64) -> bool {
    !(r.denom() % p).is_zero()
}

fn inverse_mod(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let egcd = a.mod_floor(n).extended_gcd(n);
    if egcd.gcd.is_one() {
        Some(egcd.x.mod_floor(n))
    } else {
        None
    }
}

/// `num * den^-1 mod p^m` for a p-integral rational.
pub fn reduce(r: &BigRat, modulus: &PrimePowerModulus) -> Result<Residue, PadicError> {
    if !is_p_integral(r, modulus.p) {
        return Err(PadicError::DenominatorDivisibleByP {
            den: r.denom().clone(),
            p: modulus.p,
        });
    }
    let n = modulus.modulus();
    let inv = inverse_mod(r.denom(), n).expect("denominator coprime to p is a unit");
    Ok(modulus.residue(r.numer() * inv))
}

/// `a ≡ b (mod p^m)`, decided by reducing `a - b`.
///
/// Equal inputs short-circuit to `true` without touching valuations. The
/// valuation route is [`congruent_by_valuation`]; both agree wherever
/// either is defined.
pub fn congruent(a: &BigRat, b: &BigRat, modulus: &PrimePowerModulus) -> Result<bool, PadicError> {
    if a == b {
        return Ok(true);
    }
    let diff = a - b;
    Ok(reduce(&diff, modulus)?.value.is_zero())
}

pub fn congruent_by_valuation(
    a: &BigRat,
    b: &BigRat,
    modulus: &PrimePowerModulus,
) -> Result<bool, PadicError> {
    if a == b {
        return Ok(true);
    }
    let diff = a - b;
    if !is_p_integral(&diff, modulus.p) {
        return Err(PadicError::DenominatorDivisibleByP {
            den: diff.denom().clone(),
            p: modulus.p,
        });
    }
    Ok(vp(&diff, modulus.p)? >= modulus.m as i64)
}

/// `base^exp mod p^m` by square-and-multiply.
pub fn mod_pow(
    base: &BigInt,
    exp: &BigInt,
    modulus: &PrimePowerModulus,
) -> Result<Residue, PadicError> {
    if exp.is_negative() {
        return Err(PadicError::NegativeExponent(exp.clone()));
    }
    let n = modulus.modulus();
    let mut acc = BigInt::one() % n;
    let mut b = base.mod_floor(n);
    let mut e = exp.clone();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc = (acc * &b) % n;
        }
        b = (&b * &b) % n;
        e /= &two;
    }
    Ok(modulus.residue(acc))
}

pub fn mod_inv(a: &Residue) -> Result<Residue, PadicError> {
    let n = a.modulus.modulus();
    inverse_mod(&a.value, n)
        .map(|v| a.modulus.residue(v))
        .ok_or_else(|| PadicError::NotInvertible {
            value: a.value.clone(),
            modulus: n.clone(),
        })
}

/// Machine-word residue ring `Z/nZ` for the native-residue evaluation path.
///
/// Elements are plain `u64` values in `[0, n)`; products go through `u128`,
/// so any `n < 2^63` is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing {
    n: u64,
}

impl ModRing {
    pub fn new(n: u64) -> Self {
        assert!((1..(1 << 63)).contains(&n), "modulus out of range: {n}");
        Self { n }
    }

    pub fn for_modulus(modulus: &PrimePowerModulus) -> Result<Self, PadicError> {
        modulus
            .modulus_u64()
            .map(Self::new)
            .ok_or(PadicError::ModulusTooLarge {
                p: modulus.p,
                m: modulus.m,
            })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn from_u64(&self, v: u64) -> u64 {
        v % self.n
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.n as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod_u64(a, b, self.n)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod_u64(base, exp, self.n)
    }

    /// Inverse by extended Euclid; `None` when `gcd(a, n) != 1`.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.n as i128, (a % self.n) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.n as i128) as u64)
    }

    /// `inv` for arguments known to be units.
    pub fn unit_inv(&self, a: u64) -> u64 {
        self.inv(a)
            .unwrap_or_else(|| panic!("{a} is not a unit modulo {}", self.n))
    }
}
