import json
from itertools import islice
from fractions import Fraction

import pytest
import sympy

from voronoi_bounds import cyclotomic as cy


def test_bernoulli_small():
    assert cy.bernoulli_exact(0) == 1
    assert cy.bernoulli_exact(1) == Fraction(-1, 2)
    assert cy.bernoulli_exact(3) == 0
    assert cy.bernoulli_exact(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("n", list(range(2, 80)) + [100, 150, 200])
def test_bernoulli_matches_sympy(n):
    ref = sympy.bernoulli(n)
    assert cy.bernoulli_exact(n) == Fraction(int(ref.p), int(ref.q))


def test_numerators():
    assert cy.bernoulli_numerator_Nn(12) == 691
    assert cy.bernoulli_numerator_Nn(2) == 1
    assert cy.bernoulli_numerator_Nn(16) == 3617
    with pytest.raises(cy.DomainError):
        cy.bernoulli_numerator_Nn(5)


def test_bernoulli_mod_p_examples():
    assert cy.bernoulli_mod_p(12, 37) != 0
    assert cy.bernoulli_mod_p(32, 37) == 0
    assert cy.bernoulli_exact(32).numerator % 37 == 0
    with pytest.raises(cy.DomainError):
        cy.bernoulli_mod_p(36, 37)
    with pytest.raises(cy.DomainError):
        cy.bernoulli_mod_p(12, 39)


def test_bernoulli_mod_p_grid():
    for p in [q for q in range(5, 102) if sympy.isprime(q)]:
        for k in range(2, min(30, p - 3) + 1, 2):
            b = cy.bernoulli_exact(k)
            assert cy.bernoulli_mod_p(k, p) == b.numerator * pow(b.denominator, -1, p) % p


def test_irregular_examples():
    assert cy.irregular_pairs(37) == [cy.IrregularPair(37, 32)]
    assert cy.irregular_pairs(31) == []
    assert len(cy.irregular_pairs(157)) == 2
    with pytest.raises(cy.DomainError):
        cy.irregular_pairs(91)


def test_irregular_scan_matches_exact_numerators():
    for p in range(5, 301):
        if sympy.isprime(p):
            assert cy.irregular_pairs(p) == cy.irregular_pairs_exact(p)


def test_first_irregular_prime():
    assert cy.first_irregular_prime() == 37


def test_h2_orders():
    assert cy.h2_order_even(691, 12) == 691
    assert cy.h2_order_even(37, 12) == 1
    assert cy.h2_order_even(5, 4) == 1


def test_kurihara():
    assert cy.kurihara_component(37, 5) == "possibly_nonzero"
    assert cy.kurihara_component(37, 7) == "zero"
    assert all(cy.kurihara_component(31, n) == "zero" for n in range(3, 30, 2))
    with pytest.raises(cy.DomainError):
        cy.kurihara_component(37, 4)


@pytest.mark.parametrize("p", [37, 59, 67, 101, 103, 131, 149, 157])
def test_kurihara_consistent_with_pairs(p):
    ks = {x.k for x in cy.irregular_pairs(p)}
    for n in range(3, p - 1, 2):
        expect = "possibly_nonzero" if p - n in ks else "zero"
        assert cy.kurihara_component(p, n) == expect


def test_l0():
    assert cy.l0_mod_p(691, 679) == 0
    assert cy.l0_mod_p(37, 5) == 0
    assert cy.l0_mod_p(37, 7) != 0
    b30 = cy.bernoulli_exact(30)
    expect = (-b30.numerator * pow(b30.denominator * 30, -1, 37)) % 37
    assert cy.l0_mod_p(37, 7) == expect


@pytest.mark.parametrize("p,k", [(37, 32), (59, 44), (67, 58)])
def test_vandiver_examples(p, k):
    cert = cy.vandiver_component_test(p, k, 10)
    assert cert.verdict == "component_zero"
    assert cert.q % p == 1 and cert.q % (p * p) != 1
    assert sympy.isprime(cert.q)


def test_vandiver_verdicts_agree_across_q():
    # every admissible q that decides must decide the same way; misses are allowed
    for p, k in [(37, 32), (59, 44), (101, 68)]:
        for q in islice(cy.auxiliary_primes(p), 8):
            half = cy.unit_residue(p, k, q)
            full = cy.unit_residue(p, k, q, full_range=True)
            assert full == half * half % q


def test_vandiver_requires_irregular():
    with pytest.raises(cy.DomainError):
        cy.vandiver_component_test(37, 12)
    cert = cy.vandiver_component_test(37, 12, require_irregular=False)
    assert cert.verdict in ("component_zero", "inconclusive")


def test_p_th_power_is_never_certified():
    # the square of the unit's p-th power residue must be consistent, and a true p-th power gives 1
    p, q = 37, 149
    r = cy.primitive_root(q)
    x = pow(r, 5 * p, q)
    assert pow(x, (q - 1) // p, q) == 1


def test_certificate_store(tmp_path):
    store = cy.CertificateStore(tmp_path / "certs.jsonl")
    cert = cy.vandiver_component_test(37, 32)
    store.append(cert)
    store.append(cy.vandiver_component_test(59, 44))
    loaded = store.load()
    assert [c.pair for c in loaded] == [cy.IrregularPair(37, 32), cy.IrregularPair(59, 44)]
    line = json.loads((tmp_path / "certs.jsonl").read_text().splitlines()[0])
    assert {"p", "k", "q", "verdict"} <= set(line)


def test_heuristic_sum():
    assert cy.heuristic_sum(37).prime_sum == pytest.approx(1 / 37, rel=1e-15)
    rep = cy.heuristic_sum(4_000_000)
    assert abs(rep.paper_rhs - 0.16) <= 0.01
    assert abs(rep.prime_sum - 1.417) < 0.01
    with pytest.raises(cy.DomainError):
        cy.heuristic_sum(30)


def test_heuristic_sum_against_sympy_primes():
    x = 20_000
    ref = sum(Fraction(1, p) for p in sympy.primerange(37, x + 1))
    assert abs(cy.heuristic_sum(x).prime_sum - float(ref)) < 1e-12


def test_is_prime():
    assert [n for n in range(50) if cy.is_prime(n)] == list(sympy.primerange(0, 50))
    assert cy.is_prime(2**31 - 1) and not cy.is_prime(2**31 + 1)
