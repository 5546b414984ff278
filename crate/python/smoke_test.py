"""Smoke test for the azcong extension module.

Build and install the module first, e.g.

    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml

then run ``python python/smoke_test.py``.
"""
import json
from fractions import Fraction
from math import comb

import azcong


def g_direct(n):
    return sum(comb(2 * k, k) ** 2 * comb(2 * n - 2 * k, n - k) * 4 ** (n - k) for k in range(n + 1))


def main():
    assert [azcong.az_g(n) for n in range(6)] == [g_direct(n) for n in range(6)]
    assert azcong.harmonic(3) == Fraction(11, 6)
    assert azcong.euler_exact(6) == -61
    assert azcong.euler_mod(2, 5) == 4
    assert azcong.fermat_quotient2(7) == 9
    assert azcong.sum_central_h2(2) == Fraction(145, 256)
    assert azcong.sum_g_over_16(2) == Fraction(153, 64)
    assert azcong.binomial(6, 3) == 20
    assert azcong.reduce(3, 2, 5) == 4
    assert azcong.vp(50, 5, 3) == 2
    assert azcong.primes_in(5, 20) == [5, 7, 11, 13, 17, 19]

    try:
        azcong.reduce(1, 5, 5, 2)
    except azcong.IllPosedError:
        pass
    else:
        raise AssertionError("reduce(1/5 mod 25) should be ill-posed")

    try:
        azcong.run_check("A5", 4)
    except ValueError as e:
        assert "not prime" in str(e)
    else:
        raise AssertionError("run_check at 4 should fail")

    r = azcong.run_check("B3", 5, exact=True)
    assert (r.lhs, r.rhs, r.passed, r.modulus) == (4, 4, True, "5^1")

    assert azcong.run_identity("IB1", 10)
    assert azcong.run_identity("IC1", 10)
    assert azcong.run_consistency(101)

    rep = azcong.sweep(5, 100, "all", workers=2)
    assert len(rep) == 23 * 10 and rep.all_passed(), rep
    assert rep.results[0].check == "A1" and rep.results[0].p == 5
    csv_rows = rep.to_csv().splitlines()
    assert csv_rows[0] == "check_id,p,m,lhs,rhs,passed,detail"
    doc = json.loads(rep.to_json(timing=False))
    assert doc["summary"] == {"total": 230, "passed": 230, "failed": 0}
    assert azcong.sweep(5, 30, ["A4", "A5"]).checks == ["A4", "A5"]

    print(f"azcong smoke test OK: {rep!r}")


if __name__ == "__main__":
    main()
