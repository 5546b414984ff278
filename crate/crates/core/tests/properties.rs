//! Cross-module properties: proof-step replay, dual evaluation paths, and
//! randomized agreement between the congruence predicate's two routes on
//! the actual quantities the checks compare.

use azcong::checks::{identity_sides, identity_terms_mod_p, PrimeContext};
use azcong::padic::{congruent, congruent_by_valuation, primes_in, reduce, PrimePowerModulus};
use azcong::sequences;
use azcong::{run_check_with, CheckId, EvalPath, IdentityId};
use proptest::prelude::*;

#[test]
fn identity_at_half_reproduces_b2() {
    for p in primes_in(5, 97) {
        let md = PrimePowerModulus::new(p, 1).unwrap();
        let n = (p - 1) / 2;
        let b2 = run_check_with(CheckId::B2, p, EvalPath::Exact).unwrap();

        // reduce the identity's left side term by term through NEW1
        let terms = identity_terms_mod_p(p).unwrap();
        let mut replay = md.residue(0);
        for (identity_term, central_term) in &terms {
            assert_eq!(identity_term, central_term, "p={p}");
            replay = replay.add(central_term).unwrap();
        }
        assert_eq!(replay, b2.lhs, "p={p}");

        let (lhs, rhs) = identity_sides(IdentityId::IB1, n).unwrap();
        assert_eq!(reduce(&lhs, &md).unwrap(), b2.lhs, "p={p}");
        assert_eq!(reduce(&rhs, &md).unwrap(), b2.rhs, "p={p}");
    }
}

#[test]
fn both_paths_agree_up_to_200() {
    for p in primes_in(5, 200) {
        let ctx = PrimeContext::new(p).unwrap();
        for id in CheckId::ALL {
            let fast = ctx.run(id, EvalPath::Residue).unwrap();
            let exact = ctx.run(id, EvalPath::Exact).unwrap();
            assert_eq!(fast, exact, "{id} at p={p}");
        }
    }
}

#[test]
fn congruence_routes_agree_on_check_sides() {
    for p in primes_in(5, 60) {
        let md3 = PrimePowerModulus::new(p, 3).unwrap();
        let ctx = PrimeContext::new(p).unwrap();
        let e = azcong::BigInt::from(ctx.euler_residue());
        let g = azcong::BigRat::from_integer(sequences::az_g(p - 1));
        let rhs = ctx.cubic_rhs_exact(CheckId::A4, &e).unwrap();
        assert!(congruent(&g, &rhs, &md3).unwrap());
        assert!(congruent_by_valuation(&g, &rhs, &md3).unwrap());
        // one power of p too many is not expected to hold in general, but
        // both routes must still agree on it
        let md4 = PrimePowerModulus::new(p, 4).unwrap();
        assert_eq!(
            congruent(&g, &rhs, &md4).unwrap(),
            congruent_by_valuation(&g, &rhs, &md4).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_is_worker_independent(lo in 5u64..150, width in 0u64..60, workers in 1usize..9) {
        let ids = CheckId::ALL;
        let hi = lo + width;
        prop_assume!(!primes_in(lo, hi).is_empty());
        let a = azcong::sweep(lo, hi, &ids, azcong::SweepOptions { workers: 1, exact: false }).unwrap();
        let b = azcong::sweep(lo, hi, &ids, azcong::SweepOptions { workers, exact: false }).unwrap();
        prop_assert_eq!(a.results, b.results);
    }

    #[test]
    fn residue_modular_g_matches_exact(pi in 0usize..25) {
        let p = primes_in(5, 110)[pi];
        let md = PrimePowerModulus::new(p, 3).unwrap();
        let ring = azcong::padic::ModRing::for_modulus(&md).unwrap();
        let g = sequences::modular::g(&ring, p - 1);
        let exact = reduce(&azcong::BigRat::from_integer(sequences::az_g(p - 1)), &md).unwrap();
        prop_assert_eq!(azcong::BigInt::from(g), exact.value().clone());
    }
}
