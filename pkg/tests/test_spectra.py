import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anosograph.intpoly import IntPolynomial, cyclotomic, divides, poly_gcd
from anosograph.linalg import det_bareiss, mat_mul
from anosograph.spectra import (
    IndeterminateError,
    char_poly,
    compound_matrix,
    products_off_circle,
    unit_root_free,
)
from oracles import classify_unit_roots_512, product_poly_subsets

GOLDEN = IntPolynomial([-1, -1, 1])


def test_char_poly_examples():
    assert char_poly([[0, 1], [1, 1]]).to_json() == [-1, -1, 1]
    assert char_poly([[1, 0], [0, 1]]).to_json() == [1, -2, 1]
    assert char_poly([[2]]).to_json() == [-2, 1]


def test_char_poly_empty_matrix():
    assert char_poly([]).to_json() == [1]


def test_char_poly_rejects_non_square():
    with pytest.raises(ValueError):
        char_poly([[1, 2]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_char_poly_constant_term_is_det(n, data):
    a = [[data.draw(st.integers(-4, 4)) for _ in range(n)] for _ in range(n)]
    p = char_poly(a)
    # det(xI - A) at x=0 is (-1)^n det(A); det cross-checked by Bareiss
    assert p.constant() == (-1) ** n * det_bareiss(a)
    assert p.leading() == 1 and p.degree == n


def test_char_poly_against_sympy():
    import sympy

    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(1, 5)
        a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        expected = [int(c) for c in reversed(sympy.Matrix(a).charpoly().all_coeffs())]
        assert char_poly(a).to_json() == expected


def test_compound_r1_is_matrix():
    a = [[1, 2], [3, 4]]
    assert compound_matrix(a, 1) == a


def test_compound_top_is_det():
    a = [[0, 1], [1, 1]]
    assert compound_matrix(a, 2) == [[-1]]
    b = [[2, 1, 0], [1, 3, 1], [0, 1, 2]]
    assert compound_matrix(b, 3) == [[int(det_bareiss(b))]]


def test_compound_order_out_of_range():
    with pytest.raises(ValueError):
        compound_matrix([[1]], 2)


def test_compound_colex_ordering():
    # subsets of size 2 in colex: 01, 02, 12, 03, 13, 23
    d = [[0] * 4 for _ in range(4)]
    for i, v in enumerate((1, 2, 3, 4)):
        d[i][i] = v
    c = compound_matrix(d, 2)
    diag = [c[i][i] for i in range(6)]
    assert diag == [2, 3, 6, 4, 8, 12]


def test_compound_multiplicativity():
    # Cauchy-Binet: C_r(AB) = C_r(A) C_r(B)
    rng = random.Random(11)
    for _ in range(5):
        a = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
        b = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
        ab = [[sum(a[i][t] * b[t][j] for t in range(4)) for j in range(4)] for i in range(4)]
        for r in (2, 3):
            lhs = compound_matrix(ab, r)
            rhs = mat_mul(compound_matrix(a, r), compound_matrix(b, r))
            assert [[Fraction(x) for x in row] for row in lhs] == rhs


def test_compound_eigenvalue_products_small():
    rng = random.Random(5)
    for _ in range(8):
        a = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
        for r in (1, 2, 3, 4):
            assert char_poly(compound_matrix(a, r)).to_json()[::-1] == \
                product_poly_subsets(a, r)


def test_unit_root_free_golden():
    cert = unit_root_free(GOLDEN)
    assert cert.free and cert.method == "gcd-trivial"


def test_unit_root_free_cyclotomic():
    cert = unit_root_free(cyclotomic(5))
    assert not cert.free
    assert cert.method == "cyclotomic-factor"
    assert cert.witness["cyclotomic_index"] == 5


def test_unit_root_free_reciprocal_pisot():
    # x^2 - 3x + 1: both roots real, moduli ~2.618 and ~0.382
    cert = unit_root_free(IntPolynomial([1, -3, 1]))
    assert cert.free and cert.method == "isolated-interval"
    enclosures = cert.witness["root_enclosures"]
    assert len(enclosures) == 2
    for e in enclosures:
        lo, hi = (Fraction(*map(int, s.split("/"))) if "/" in s else Fraction(int(s))
                  for s in e["modulus_interval"])
        assert hi < 1 or lo > 1


def test_unit_root_free_salem():
    # Lehmer's polynomial: self-reciprocal, no cyclotomic factor, 8 roots
    # exactly on the circle
    lehmer = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    for d in range(1, 40):
        assert not divides(cyclotomic(d), lehmer) or cyclotomic(d).degree > lehmer.degree
    cert = unit_root_free(lehmer)
    assert not cert.free and cert.method == "isolated-interval"
    lo, hi = (Fraction(*map(int, s.split("/"))) if "/" in s else Fraction(int(s))
              for s in cert.witness["trace_interval"])
    assert Fraction(-2) < lo < hi < Fraction(2)
    assert cert.witness["on_circle_pairs"] == 4


def test_gcd_step_soundness():
    # a constructed unit-circle root must surface in the symmetric factor
    p = IntPolynomial([1, -3, 1]) * cyclotomic(8)
    cert = unit_root_free(p)
    assert not cert.free
    assert cert.witness["cyclotomic_index"] == 8
    g = poly_gcd(p, p.reversed_poly())
    assert g.degree > 0 and divides(cyclotomic(8), g)


def test_cyclotomic_products_up_to_12():
    for d1 in range(1, 13):
        for d2 in range(d1, 13):
            cert = unit_root_free(cyclotomic(d1) * cyclotomic(d2))
            assert not cert.free
            assert cert.method == "cyclotomic-factor"


def test_unit_root_free_rejects_zero_constant():
    with pytest.raises(ValueError):
        unit_root_free(IntPolynomial([0, 1]))


def test_unit_root_free_budget_exhaustion_is_loud():
    with pytest.raises(IndeterminateError):
        unit_root_free(IntPolynomial([1, -3, 1]), budget_bits=1)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("ANOSOGRAPH_BUDGET_BITS", "1")
    with pytest.raises(IndeterminateError):
        unit_root_free(IntPolynomial([1, -3, 1]))
    monkeypatch.setenv("ANOSOGRAPH_BUDGET_BITS", "256")
    assert unit_root_free(IntPolynomial([1, -3, 1])).free


def test_verdicts_match_numeric_oracle_small():
    polys = [GOLDEN, IntPolynomial([1, -3, 1]), cyclotomic(7),
             IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]),
             IntPolynomial([1, -3, 1]) * GOLDEN]
    for p in polys:
        cert = unit_root_free(p)
        assert cert.verdict == classify_unit_roots_512(p.to_json())


def test_products_off_circle_examples():
    golden = [[0, 1], [1, 1]]
    assert products_off_circle(golden, 1).ok
    assert not products_off_circle(golden, 2).ok
    identity = [[1, 0], [0, 1]]
    assert not products_off_circle(identity, 1).ok


def test_products_off_circle_handles_singular():
    # eigenvalues 0 and 2: all products (0, 2, and 0*2) are off the circle
    a = [[0, 0], [0, 2]]
    pc = products_off_circle(a, 2)
    assert pc.ok
    assert all(cert.free for _, _, cert in pc.per_r)


def test_products_certificate_serializes():
    doc = products_off_circle([[0, 1], [1, 1]], 1).to_json()
    assert doc["ok"] is True
    assert doc["per_r"][0]["r"] == 1


def test_certificate_serialization_round_trip_fields():
    cert = unit_root_free(IntPolynomial([1, -3, 1]))
    doc = cert.to_json()
    assert doc["verdict"] == "free"
    assert doc["method"] == "isolated-interval"
    assert "root_enclosures" in doc["witness"]
    assert "min_margin" in doc["witness"]


def test_verdict_invariant_under_reversal():
    # inverting all roots preserves distance from the unit circle
    polys = [GOLDEN, IntPolynomial([1, -3, 1]), cyclotomic(5),
             IntPolynomial([1, 2, -1, 3, 1]), IntPolynomial([-1, 0, 2, 1])]
    for p in polys:
        assert unit_root_free(p).verdict == unit_root_free(p.reversed_poly()).verdict


def test_mixed_symmetric_and_asymmetric_factors():
    # only the inversion-paired part reaches the symmetric factor
    p = IntPolynomial([1, -3, 1]) * IntPolynomial([-2, 1])
    cert = unit_root_free(p)
    assert cert.free and cert.method == "isolated-interval"
    assert cert.symmetric_factor.primitive().to_json() == [1, -3, 1]


def test_repeated_factors_free_and_not_free():
    pisot = IntPolynomial([1, -3, 1])
    assert unit_root_free(pisot * pisot * pisot).free
    lehmer = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    cert = unit_root_free(lehmer * lehmer)
    assert not cert.free and cert.method == "isolated-interval"
