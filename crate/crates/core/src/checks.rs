//! Executable congruence checks, exact identities and prime sweeps.
//!
//! Each [`CheckId`] is one congruence `lhs ≡ rhs (mod p^m)` that must hold
//! for every prime `p >= 5`. Writing `n = (p-1)/2`, `s = (-1)^n`,
//! `q = q_p(2)`, `E = E_{p-3}`:
//!
//! | id   | m | lhs                                   | rhs                                          |
//! |------|---|---------------------------------------|----------------------------------------------|
//! | A1   | 3 | `G_{p-1}`                             | `s 256^(p-1) + p^2 (E - 8 s q^2 + S2/2)`     |
//! | A2   | 3 | `sum_{k<p} G_k/16^k`                  | `p^2 (1 - S1)`                               |
//! | A4   | 3 | `G_{p-1}`                             | `s 256^(p-1) + 3 p^2 E`                      |
//! | A5   | 3 | `sum_{k<p} G_k/16^k`                  | `p^2 (4 s - 3)`                              |
//! | NEW1 | 1 | `(-1)^k C(n,k) C(n+k,k)`, each `k<=n` | `C(2k,k)^2 / 16^k`                           |
//! | B2   | 1 | `S2`                                  | `2 s (2 H_n^2 + A)`                          |
//! | B3   | 1 | `H_n`                                 | `-2 q`                                       |
//! | B4   | 1 | `A`                                   | `2 s E`                                      |
//! | B5   | 1 | `S2`                                  | `16 s q^2 + 4 E`                             |
//! | C3   | 1 | `S1`                                  | `4 (1 - s)`                                  |
//!
//! with `S2 = sum_{k<=n} C(2k,k)^2/16^k H_k^2`,
//! `S1 = sum_{k<=n} C(2k,k)^2/(16^k (k+1)) H_k` and
//! `A = sum_{k=1}^{n} (-1)^k/k^2`.
//!
//! `E` is only ever known mod `p`. In the mod-`p^3` checks it appears as
//! `p^2 E`, so any lift of the residue gives the same class.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{binom, lcm_upto, BigInt, BigRat};
use crate::padic::{self, is_prime, reduce, ModRing, PadicError, PrimePowerModulus, Residue};
use crate::sequences::{self, half_sign, modular};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum CheckId {
    A1,
    A2,
    A4,
    A5,
    #[serde(rename = "NEW1")]
    New1,
    B2,
    B3,
    B4,
    B5,
    C3,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::A1,
        CheckId::A2,
        CheckId::A4,
        CheckId::A5,
        CheckId::New1,
        CheckId::B2,
        CheckId::B3,
        CheckId::B4,
        CheckId::B5,
        CheckId::C3,
    ];

    /// The supercongruences, modulo `p^3`.
    pub const CUBIC: [CheckId; 4] = [CheckId::A1, CheckId::A2, CheckId::A4, CheckId::A5];

    /// The mod-`p` chain.
    pub const LINEAR: [CheckId; 6] = [
        CheckId::New1,
        CheckId::B2,
        CheckId::B3,
        CheckId::B4,
        CheckId::B5,
        CheckId::C3,
    ];

    pub fn exponent(self) -> u32 {
        match self {
            CheckId::A1 | CheckId::A2 | CheckId::A4 | CheckId::A5 => 3,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::A1 => "A1",
            CheckId::A2 => "A2",
            CheckId::A4 => "A4",
            CheckId::A5 => "A5",
            CheckId::New1 => "NEW1",
            CheckId::B2 => "B2",
            CheckId::B3 => "B3",
            CheckId::B4 => "B4",
            CheckId::B5 => "B5",
            CheckId::C3 => "C3",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown check id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    IB1,
    IC1,
}

impl IdentityId {
    pub const ALL: [IdentityId; 2] = [IdentityId::IB1, IdentityId::IC1];

    /// Smallest `n` at which both sides are defined.
    pub fn min_n(self) -> u64 {
        match self {
            IdentityId::IB1 => 0,
            IdentityId::IC1 => 1,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityId::IB1 => "IB1",
            IdentityId::IC1 => "IC1",
        })
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "IB1" => Ok(IdentityId::IB1),
            "IC1" => Ok(IdentityId::IC1),
            _ => Err(format!("unknown identity id {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is below the smallest supported prime 5")]
    PrimeTooSmall(u64),
    #[error("{check} at p = {p} is ill-posed: {source}")]
    IllPosed {
        check: String,
        p: u64,
        #[source]
        source: PadicError,
    },
    #[error("{p}^3 exceeds the native residue range")]
    PrimeTooLarge { p: u64 },
    #[error("{id} is formally indeterminate at n = {n}")]
    Indeterminate { id: IdentityId, n: u64 },
    #[error("invalid sweep range [{pmin}, {pmax}]")]
    InvalidRange { pmin: u64, pmax: u64 },
    #[error("no checks selected")]
    NoChecks,
    #[error("{0}")]
    Workers(String),
}

/// Which route evaluates the two sides of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalPath {
    /// Incremental arithmetic in `Z/p^mZ` throughout.
    #[default]
    Residue,
    /// Exact rational partial sums, reduced once at the end.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check: CheckId,
    pub p: u64,
    pub m: u32,
    pub lhs: Residue,
    pub rhs: Residue,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub pmin: u64,
    pub pmax: u64,
    pub checks: Vec<CheckId>,
    pub results: Vec<CheckResult>,
    pub failures: Vec<CheckResult>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn passed(&self) -> usize {
        self.results.len() - self.failures.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn validate_prime(p: u64) -> Result<(), CheckError> {
    if !is_prime(p) {
        return Err(CheckError::NotPrime(p));
    }
    if p < 5 {
        return Err(CheckError::PrimeTooSmall(p));
    }
    Ok(())
}

fn ill_posed(check: impl fmt::Display, p: u64) -> impl Fn(PadicError) -> CheckError {
    let check = check.to_string();
    move |source| CheckError::IllPosed {
        check: check.clone(),
        p,
        source,
    }
}

fn rat_i(v: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(v.into())
}

/// Per-prime inputs shared by all checks at that prime, computed lazily.
///
/// Safe to share between threads; each quantity is evaluated at most once.
#[derive(Debug)]
pub struct PrimeContext {
    p: u64,
    mod_p: PrimePowerModulus,
    mod_p3: PrimePowerModulus,
    ring_p: ModRing,
    ring_p3: ModRing,
    euler: OnceLock<u64>,
    fermat: OnceLock<BigInt>,
    fast_g_table: OnceLock<Vec<u64>>,
    fast_sums_p: OnceLock<FastSums>,
    fast_sums_p3: OnceLock<FastSums>,
    exact: OnceLock<ExactSums>,
    exact_g_table: OnceLock<Vec<BigInt>>,
}

#[derive(Debug, Clone, Copy)]
struct FastSums {
    harmonic: u64,
    central_h2: u64,
    central_h_over_k1: u64,
    alt_inv_sq: u64,
}

#[derive(Debug)]
struct ExactSums {
    harmonic: BigRat,
    central_h2: BigRat,
    central_h_over_k1: BigRat,
    alt_inv_sq: BigRat,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, CheckError> {
        validate_prime(p)?;
        let mod_p = PrimePowerModulus::new(p, 1).map_err(|_| CheckError::NotPrime(p))?;
        let mod_p3 = PrimePowerModulus::new(p, 3).map_err(|_| CheckError::NotPrime(p))?;
        let ring_p3 =
            ModRing::for_modulus(&mod_p3).map_err(|_| CheckError::PrimeTooLarge { p })?;
        Ok(Self {
            p,
            ring_p: ModRing::new(p),
            ring_p3,
            mod_p,
            mod_p3,
            euler: OnceLock::new(),
            fermat: OnceLock::new(),
            fast_g_table: OnceLock::new(),
            fast_sums_p: OnceLock::new(),
            fast_sums_p3: OnceLock::new(),
            exact: OnceLock::new(),
            exact_g_table: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn half(&self) -> u64 {
        (self.p - 1) / 2
    }

    fn sign(&self) -> i64 {
        half_sign(self.p)
    }

    /// `E_{p-3} mod p`, lifted to `[0, p)`.
    pub fn euler_residue(&self) -> u64 {
        *self
            .euler
            .get_or_init(|| sequences::euler_mod_table(self.p - 3, self.p)[self.p as usize - 3])
    }

    pub fn fermat_quotient(&self) -> &BigInt {
        self.fermat.get_or_init(|| {
            sequences::fermat_quotient2(self.p).expect("validated prime has an exact quotient")
        })
    }

    fn fast_sums(&self, ring: &ModRing) -> FastSums {
        let n = self.half();
        FastSums {
            harmonic: modular::harmonic(ring, n),
            central_h2: modular::sum_central_h2(ring, n),
            central_h_over_k1: modular::sum_central_h_over_k1(ring, n),
            alt_inv_sq: modular::sum_alt_inv_sq(ring, n),
        }
    }

    fn fast_p(&self) -> FastSums {
        *self.fast_sums_p.get_or_init(|| self.fast_sums(&self.ring_p))
    }

    fn fast_p3(&self) -> FastSums {
        *self.fast_sums_p3.get_or_init(|| self.fast_sums(&self.ring_p3))
    }

    fn fast_g(&self) -> &[u64] {
        self.fast_g_table
            .get_or_init(|| modular::g_table(&self.ring_p3, self.p - 1))
    }

    fn exact_sums(&self) -> &ExactSums {
        self.exact.get_or_init(|| {
            let n = self.half();
            ExactSums {
                harmonic: sequences::harmonic(n),
                central_h2: sequences::sum_central_h2(n),
                central_h_over_k1: sequences::sum_central_h_over_k1(n),
                alt_inv_sq: sequences::sum_alt_inv_sq(n),
            }
        })
    }

    fn exact_g(&self) -> &[BigInt] {
        self.exact_g_table
            .get_or_init(|| sequences::az_g_table(self.p - 1))
    }

    fn modulus_for(&self, id: CheckId) -> &PrimePowerModulus {
        if id.exponent() == 3 {
            &self.mod_p3
        } else {
            &self.mod_p
        }
    }

    /// Exact right-hand sides of the four mod-`p^3` congruences, with
    /// `E_{p-3}` replaced by `euler_lift` (any integer `≡ E_{p-3} mod p`).
    pub fn cubic_rhs_exact(&self, id: CheckId, euler_lift: &BigInt) -> Option<BigRat> {
        let p = BigInt::from(self.p);
        let p2 = rat_i(&p * &p);
        let s = BigInt::from(self.sign());
        let sums = self.exact_sums();
        let v = match id {
            CheckId::A1 => {
                let q = self.fermat_quotient();
                let inner = rat_i(euler_lift.clone()) - rat_i(BigInt::from(8) * &s * q * q)
                    + &sums.central_h2 / rat_i(2);
                rat_i(&s * num_traits::pow(BigInt::from(256), self.p as usize - 1)) + p2 * inner
            }
            CheckId::A2 => p2 * (BigRat::one() - &sums.central_h_over_k1),
            CheckId::A4 => {
                rat_i(&s * num_traits::pow(BigInt::from(256), self.p as usize - 1))
                    + p2 * rat_i(BigInt::from(3) * euler_lift)
            }
            CheckId::A5 => p2 * rat_i(BigInt::from(4) * &s - 3),
            _ => return None,
        };
        Some(v)
    }

    fn exact_sides(&self, id: CheckId) -> Result<(BigRat, BigRat), CheckError> {
        let s = BigInt::from(self.sign());
        let e = BigInt::from(self.euler_residue());
        let q = self.fermat_quotient();
        let sums = self.exact_sums();
        let sides = match id {
            CheckId::A1 | CheckId::A4 => (
                rat_i(self.exact_g()[self.p as usize - 1].clone()),
                self.cubic_rhs_exact(id, &e).unwrap(),
            ),
            CheckId::A2 | CheckId::A5 => (
                sequences::sum_g_over_16_from(self.exact_g(), self.p - 1),
                self.cubic_rhs_exact(id, &e).unwrap(),
            ),
            CheckId::B2 => (
                sums.central_h2.clone(),
                rat_i(BigInt::from(2) * &s)
                    * (rat_i(2) * &sums.harmonic * &sums.harmonic + &sums.alt_inv_sq),
            ),
            CheckId::B3 => (sums.harmonic.clone(), rat_i(BigInt::from(-2) * q)),
            CheckId::B4 => (sums.alt_inv_sq.clone(), rat_i(BigInt::from(2) * &s * &e)),
            CheckId::B5 => (
                sums.central_h2.clone(),
                rat_i(BigInt::from(16) * &s * q * q + BigInt::from(4) * &e),
            ),
            CheckId::C3 => (
                sums.central_h_over_k1.clone(),
                rat_i(BigInt::from(4) * (BigInt::one() - &s)),
            ),
            CheckId::New1 => unreachable!("NEW1 is evaluated per k"),
        };
        Ok(sides)
    }

    fn fast_sides(&self, id: CheckId) -> (u64, u64) {
        let p = self.p;
        let s = self.sign();
        let e = self.euler_residue();
        match id {
            CheckId::A1 | CheckId::A2 | CheckId::A4 | CheckId::A5 => {
                let r = &self.ring_p3;
                let p2 = r.from_u64(p * p);
                let sgn = r.from_i64(s);
                let lhs = match id {
                    CheckId::A1 | CheckId::A4 => self.fast_g()[p as usize - 1],
                    _ => modular::sum_g_over_16(r, self.fast_g(), p - 1),
                };
                let pow256 = || r.mul(sgn, r.pow(256, p - 1));
                let rhs = match id {
                    CheckId::A1 => {
                        let q = r.from_u64((self.fermat_quotient() % r.modulus()).to_u64().unwrap());
                        let sums = self.fast_p3();
                        let eight_s_q2 = r.mul(r.from_i64(8 * s), r.mul(q, q));
                        let half_s2 = r.mul(sums.central_h2, r.unit_inv(2));
                        let inner = r.add(r.sub(r.from_u64(e), eight_s_q2), half_s2);
                        r.add(pow256(), r.mul(p2, inner))
                    }
                    CheckId::A2 => {
                        let sums = self.fast_p3();
                        r.mul(p2, r.sub(1, sums.central_h_over_k1))
                    }
                    CheckId::A4 => r.add(pow256(), r.mul(p2, r.mul(3, r.from_u64(e)))),
                    _ => r.mul(p2, r.from_i64(4 * s - 3)),
                };
                (lhs, rhs)
            }
            _ => {
                let r = &self.ring_p;
                let sums = self.fast_p();
                let sgn = r.from_i64(s);
                let q = r.from_u64((self.fermat_quotient() % p).to_u64().unwrap());
                match id {
                    CheckId::B2 => {
                        let h2 = r.mul(sums.harmonic, sums.harmonic);
                        let inner = r.add(r.mul(r.from_u64(2), h2), sums.alt_inv_sq);
                        (sums.central_h2, r.mul(r.mul(r.from_u64(2), sgn), inner))
                    }
                    CheckId::B3 => (sums.harmonic, r.from_i64(-2 * (q as i64))),
                    CheckId::B4 => (sums.alt_inv_sq, r.mul(r.mul(r.from_u64(2), sgn), e)),
                    CheckId::B5 => {
                        let a = r.mul(r.mul(r.from_u64(16), sgn), r.mul(q, q));
                        (sums.central_h2, r.add(a, r.mul(r.from_u64(4), e)))
                    }
                    CheckId::C3 => (sums.central_h_over_k1, r.from_i64(4 * (1 - s))),
                    _ => unreachable!("NEW1 is evaluated per k"),
                }
            }
        }
    }

    /// Both sides of the NEW1 congruence at every `k = 0..=(p-1)/2`.
    fn new1_terms(&self, path: EvalPath) -> Result<Vec<(BigInt, BigInt)>, CheckError> {
        let n = self.half();
        match path {
            EvalPath::Residue => {
                let r = &self.ring_p;
                let mut out = Vec::with_capacity(n as usize + 1);
                let (mut c_n, mut c_nk, mut w) = (1u64, 1u64, 1u64);
                out.push((BigInt::one(), BigInt::one()));
                for k in 1..=n {
                    let inv_k = r.unit_inv(r.from_u64(k));
                    c_n = r.mul(r.mul(c_n, r.from_u64(n - k + 1)), inv_k);
                    c_nk = r.mul(r.mul(c_nk, r.from_u64(n + k)), inv_k);
                    let ratio = r.mul(r.from_u64(2 * k - 1), r.unit_inv(r.from_u64(2 * k)));
                    w = r.mul(w, r.mul(ratio, ratio));
                    let lhs = r.mul(c_n, c_nk);
                    let lhs = if k % 2 == 1 { r.neg(lhs) } else { lhs };
                    out.push((BigInt::from(lhs), BigInt::from(w)));
                }
                Ok(out)
            }
            EvalPath::Exact => (0..=n)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let lhs = rat_i(binom(n, k) * binom(n + k, k) * sign);
                    let c = binom(2 * k, k);
                    let rhs = BigRat::new(&c * &c, BigInt::one() << (4 * k));
                    let red = |v: &BigRat| reduce(v, &self.mod_p).map_err(ill_posed("NEW1", self.p));
                    Ok((red(&lhs)?.value().clone(), red(&rhs)?.value().clone()))
                })
                .collect(),
        }
    }

    pub fn run(&self, id: CheckId, path: EvalPath) -> Result<CheckResult, CheckError> {
        let md = self.modulus_for(id).clone();
        if id == CheckId::New1 {
            let terms = self.new1_terms(path)?;
            let failing = terms.iter().position(|(l, r)| l != r);
            let (l, r) = &terms[failing.unwrap_or(terms.len() - 1)];
            return Ok(CheckResult {
                check: id,
                p: self.p,
                m: 1,
                lhs: md.residue(l.clone()),
                rhs: md.residue(r.clone()),
                passed: failing.is_none(),
                detail: failing.map(|k| format!("first failing k = {k}")),
            });
        }
        let (lhs, rhs) = match path {
            EvalPath::Residue => {
                let (l, r) = self.fast_sides(id);
                (md.residue(l), md.residue(r))
            }
            EvalPath::Exact => {
                let (l, r) = self.exact_sides(id)?;
                let err = ill_posed(id, self.p);
                (reduce(&l, &md).map_err(&err)?, reduce(&r, &md).map_err(&err)?)
            }
        };
        Ok(CheckResult {
            check: id,
            p: self.p,
            m: md.m(),
            passed: lhs == rhs,
            lhs,
            rhs,
            detail: None,
        })
    }

    /// Runs `id` on the residue path and cross-checks it against the exact
    /// path; a disagreement turns the result into a failure.
    pub fn run_cross_validated(&self, id: CheckId) -> Result<CheckResult, CheckError> {
        let mut fast = self.run(id, EvalPath::Residue)?;
        let exact = self.run(id, EvalPath::Exact)?;
        if fast.lhs != exact.lhs || fast.rhs != exact.rhs || fast.passed != exact.passed {
            fast.passed = false;
            fast.detail = Some(format!(
                "evaluation paths disagree: exact lhs = {}, rhs = {}",
                exact.lhs, exact.rhs
            ));
        }
        Ok(fast)
    }

    /// `(rhs(A1) ≡ rhs(A4), rhs(A2) ≡ rhs(A5))` modulo `p^3`.
    pub fn consistency(&self) -> Result<(bool, bool), CheckError> {
        let e = BigInt::from(self.euler_residue());
        let rhs = |id| self.cubic_rhs_exact(id, &e).unwrap();
        let err = ill_posed("consistency", self.p);
        let first = padic::congruent(&rhs(CheckId::A1), &rhs(CheckId::A4), &self.mod_p3)
            .map_err(&err)?;
        let second = padic::congruent(&rhs(CheckId::A2), &rhs(CheckId::A5), &self.mod_p3)
            .map_err(&err)?;
        Ok((first, second))
    }
}

/// Runs one check at one prime on the default (residue) path.
pub fn run_check(id: CheckId, p: u64) -> Result<CheckResult, CheckError> {
    run_check_with(id, p, EvalPath::Residue)
}

pub fn run_check_with(id: CheckId, p: u64, path: EvalPath) -> Result<CheckResult, CheckError> {
    PrimeContext::new(p)?.run(id, path)
}

/// Both proof compositions (A1 into A4, A2 into A5) agree modulo `p^3`.
pub fn run_consistency(p: u64) -> Result<bool, CheckError> {
    let (a, b) = PrimeContext::new(p)?.consistency()?;
    Ok(a && b)
}

/// Exact left and right sides of an identity at `n`.
///
/// Sums are accumulated over a common denominator (`lcm(1..n)^2` resp.
/// `lcm(1..n+1)^2`) so only one rational is normalized per side.
pub fn identity_sides(id: IdentityId, n: u64) -> Result<(BigRat, BigRat), CheckError> {
    if n < id.min_n() {
        return Err(CheckError::Indeterminate { id, n });
    }
    let sign = |k: u64| if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    match id {
        IdentityId::IB1 => {
            let l = lcm_upto(n);
            let mut h_num = BigInt::zero(); // H_k * l
            let mut acc = BigInt::zero();
            for k in 0..=n {
                if k > 0 {
                    h_num += &l / k;
                }
                acc += sign(k) * binom(n, k) * binom(n + k, k) * &h_num * &h_num;
            }
            let lhs = BigRat::new(acc, &l * &l);
            let h = BigRat::new(h_num, l);
            let rhs = rat_i(BigInt::from(2) * sign(n))
                * (rat_i(2) * &h * &h + sequences::sum_alt_inv_sq(n));
            Ok((lhs, rhs))
        }
        IdentityId::IC1 => {
            let l = lcm_upto(n + 1);
            let mut h_num = BigInt::zero();
            let mut acc = BigInt::zero();
            for k in 0..=n {
                if k > 0 {
                    h_num += &l / k;
                }
                acc += sign(k) * binom(n, k) * binom(n + k, k) * &h_num * (&l / (k + 1));
            }
            let lhs = BigRat::new(acc, &l * &l);
            let rhs = BigRat::new(sign(n) - 1, BigInt::from(n) * (n + 1));
            Ok((lhs, rhs))
        }
    }
}

/// Whether the identity holds exactly at `n`.
pub fn run_identity(id: IdentityId, n: u64) -> Result<bool, CheckError> {
    let (lhs, rhs) = identity_sides(id, n)?;
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub workers: usize,
    /// Cross-validate every cell against the exact-rational path.
    pub exact: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            exact: false,
        }
    }
}

/// Runs every check in `ids` at every prime in `[pmin, pmax]`.
///
/// Cells run in parallel on `workers` threads; the report is sorted by
/// `(p, check)` and does not depend on the worker count. Ordinary failures
/// are collected; an ill-posed cell aborts the sweep.
pub fn sweep(
    pmin: u64,
    pmax: u64,
    ids: &[CheckId],
    options: SweepOptions,
) -> Result<SweepReport, CheckError> {
    if pmin < 5 || pmin > pmax {
        return Err(CheckError::InvalidRange { pmin, pmax });
    }
    if ids.is_empty() {
        return Err(CheckError::NoChecks);
    }
    let start = Instant::now();
    let mut checks = ids.to_vec();
    checks.sort();
    checks.dedup();

    let contexts = padic::primes_in(pmin, pmax)
        .into_iter()
        .map(|p| PrimeContext::new(p).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(Arc<PrimeContext>, CheckId)> = contexts
        .iter()
        .flat_map(|ctx| checks.iter().map(move |&id| (Arc::clone(ctx), id)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| CheckError::Workers(e.to_string()))?;
    let mut results = pool.install(|| {
        cells
            .par_iter()
            .map(|(ctx, id)| {
                if options.exact {
                    ctx.run_cross_validated(*id)
                } else {
                    ctx.run(*id, EvalPath::Residue)
                }
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    results.sort_by_key(|r| (r.p, r.check));
    let failures = results.iter().filter(|r| !r.passed).cloned().collect();

    Ok(SweepReport {
        pmin,
        pmax,
        checks,
        results,
        failures,
        elapsed: start.elapsed(),
    })
}

/// Term-by-term residues mod `p` of the IB1 left side at `n = (p-1)/2`
/// paired with the matching terms of `S2`. Each pair is equal by NEW1.
pub fn identity_terms_mod_p(p: u64) -> Result<Vec<(Residue, Residue)>, CheckError> {
    validate_prime(p)?;
    let md = PrimePowerModulus::new(p, 1).map_err(|_| CheckError::NotPrime(p))?;
    let n = (p - 1) / 2;
    let h = sequences::harmonic_table(n);
    let err = ill_posed("IB1", p);
    (0..=n)
        .map(|k| {
            let sign = if k.is_even() { 1 } else { -1 };
            let h2 = &h[k as usize] * &h[k as usize];
            let identity_term = rat_i(binom(n, k) * binom(n + k, k) * sign) * &h2;
            let c = binom(2 * k, k);
            let central_term = BigRat::new(&c * &c, BigInt::one() << (4 * k)) * h2;
            Ok((
                reduce(&identity_term, &md).map_err(&err)?,
                reduce(&central_term, &md).map_err(&err)?,
            ))
        })
        .collect()
}
