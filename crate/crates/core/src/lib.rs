//! Exact arithmetic toolkit for the Almkvist-Zudilin sequence
//!
//! ```text
//! G_n = sum_{k=0}^{n} C(2k,k)^2 C(2n-2k,n-k) 4^(n-k)
//! ```
//!
//! together with harmonic numbers, Euler numbers and the Fermat quotient
//! `q_p(2)`, and a registry of executable congruence checks that can be swept
//! over ranges of primes.
//!
//! Layering, bottom to top:
//! - [`exactnum`]: big integers, exact rationals, binomials.
//! - [`padic`]: residues modulo `p^m`, valuations, the congruence predicate.
//! - [`sequences`]: every named sequence and partial sum, exact and modular.
//! - [`checks`]: per-prime congruence checks, exact identities, sweeps.
//! - [`cli`]: the batch command-line front end and report emitters.

pub mod checks;
pub mod cli;
pub mod exactnum;
pub mod padic;
pub mod sequences;

pub use checks::{
    run_check, run_check_with, run_consistency, run_identity, sweep, CheckError, CheckId,
    CheckResult, EvalPath, IdentityId, SweepOptions, SweepReport,
};
pub use exactnum::{binomial, ipow, BigInt, BigRat, NumError};
pub use padic::{congruent, mod_inv, mod_pow, reduce, vp, PadicError, PrimePowerModulus, Residue};
