from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latops.linalg import (ONE, ZERO, Z, Poly, PolyMatrix, RatMatrix, format_rational,
                           parse_rational, poly_det, poly_matrix_det_adjugate, rat_det,
                           rational_nullspace, rref, solve_particular)
from oracles import cofactor_det, in_span, rank_by_minors, small_kernel_vectors

rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 7))
polys = st.lists(rationals, max_size=6).map(Poly)


@pytest.mark.parametrize("text,value", [
    ("3/4", Fraction(3, 4)), ("-6/8", Fraction(-3, 4)), ("5", Fraction(5)), (" 0/7 ", Fraction(0)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1.5", "1/0", "abc", "", "1/2/3", "1e3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(-6, 8)) == "-3/4"
    assert format_rational(Fraction(5)) == "5/1"


def test_poly_basics():
    p = Poly([1, 0, 2, 0, 0])
    assert p.coeffs == (1, 0, 2)
    assert p.degree == 2 and p.lead == 2
    assert ZERO.degree == float("-inf") and ZERO.is_zero()
    assert (Z * Z - ONE) == Poly([-1, 0, 1])
    assert Poly([1, 1]) ** 3 == Poly([1, 3, 3, 1])
    assert Poly([1, 2, 3])(Fraction(1, 2)) == Fraction(11, 4)
    assert Poly.from_json(p.to_json()) == p
    assert p.to_json() == ["1/1", "0/1", "2/1"]
    assert ZERO.to_json() == []


def test_divmod_and_exact_div():
    f = Poly([1, 2, 3, 4])
    g = Poly([1, 1])
    q, r = f.divmod(g)
    assert q * g + r == f and r.degree < g.degree
    assert (f * g).exact_div(g) == f
    with pytest.raises(ArithmeticError):
        f.exact_div(g)
    with pytest.raises(ZeroDivisionError):
        f.divmod(ZERO)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ZERO
    if not a.is_zero() and not b.is_zero():
        assert (a * b).degree == a.degree + b.degree


@settings(max_examples=60, deadline=None)
@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divmod_property(f, g):
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.degree < g.degree


def _random_matrix(rng, m, n, lo=-3, hi=3):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(m)]


def test_rat_det_matches_cofactor():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(0, 5)
        rows = _random_matrix(rng, n, n)
        assert rat_det(rows) == cofactor_det(rows)


def test_rref_shape():
    red, piv = rref([[0, 2, 4], [1, 1, 1], [1, 2, 3]], 3)
    assert piv == [0, 1]
    assert red == [[1, 0, -1], [0, 1, 2]]


def test_nullspace_normal_form_example():
    assert rational_nullspace(RatMatrix.from_rows([[1, 2], [2, 4]])) == [[1, Fraction(-1, 2)]]


def test_nullspace_against_oracles():
    rng = random.Random(11)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        rows = _random_matrix(rng, m, n, -2, 2)
        if rng.random() < 0.5 and m > 1:
            rows[-1] = [a + b for a, b in zip(rows[0], rows[1 % m])]
        basis = rational_nullspace(RatMatrix.from_rows(rows, n))
        assert len(basis) == n - rank_by_minors(rows)
        for v in basis:
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
        if basis:
            assert rank_by_minors(basis) == len(basis)
        for w in small_kernel_vectors(rows, n, 1):
            assert in_span(basis, w)


def test_solve_particular():
    x = solve_particular([[1, 1, 0], [0, 1, 1]], [2, 3])
    assert x == [-1, 3, 0]
    assert solve_particular([[1, 1], [1, 1]], [1, 2]) is None


def _random_poly_matrix(rng, n, deg):
    return PolyMatrix.from_rows([[Poly([rng.randint(-3, 3) for _ in range(rng.randint(0, deg + 1))])
                                  for _ in range(n)] for _ in range(n)])


def test_poly_det_matches_cofactor():
    rng = random.Random(5)
    for _ in range(40):
        m = _random_poly_matrix(rng, rng.randint(1, 4), 2)
        assert poly_det(m) == cofactor_det(m.to_rows(), ZERO, ONE)


def test_adjugate_identity_and_singular_input():
    rng = random.Random(8)
    for _ in range(20):
        m = _random_poly_matrix(rng, rng.randint(1, 4), 2)
        det, adj = poly_matrix_det_adjugate(m)
        assert m @ adj == PolyMatrix.identity(m.rows, det)
        assert adj @ m == PolyMatrix.identity(m.rows, det)
    sing = PolyMatrix.from_rows([[Z, ONE], [Z * Z, Z]])
    det, adj = poly_matrix_det_adjugate(sing)
    assert det.is_zero()
    assert sing @ adj == PolyMatrix.identity(2, ZERO)


def test_non_square_rejected():
    m = PolyMatrix.from_rows([[ONE, Z]])
    with pytest.raises(ValueError):
        poly_det(m)
    with pytest.raises(ValueError):
        poly_matrix_det_adjugate(m)
