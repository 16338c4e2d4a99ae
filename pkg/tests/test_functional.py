from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latops.coherence import normalized_derivative
from latops.fixtures import bell_functional, bell_numbers, identity_lattice
from latops.functional import (Functional, FunctionalExpr, OrderError, RegularityError, act,
                               basis_coordinates, check_functional_identities, check_leibniz,
                               compare_sides, ops_from_moments, pair)
from latops.identities import random_functional, random_poly
from latops.lattice import gamma_factorial
from latops.linalg import Poly
from latops.ops import DX, SX, Mul, OpWord, apply_word, dx_monomial
from oracles import bell_by_recurrence, gram_schmidt_monic

from conftest import LATTICES

z = Poly([0, 1])


def test_functional_json_and_pairing():
    u = Functional.from_json({"moments": ["1", "1/2", "1/3"]})
    assert u.order == 2
    assert u.pair(Poly([1, 0, 3])) == 2
    assert Functional.from_json(u.to_json()) == u
    with pytest.raises(OrderError):
        u.pair(z ** 3)
    with pytest.raises(ValueError):
        Functional.from_json({"moments": []})
    with pytest.raises(ValueError):
        Functional.from_json({"mu": ["1"]})
    with pytest.raises(ValueError):
        Functional.from_json({"moments": ["0.5"]})


def test_valid_orders():
    u = Functional(range(11))
    assert FunctionalExpr(u, OpWord([DX])).order == 11
    assert FunctionalExpr(u, OpWord([SX])).order == 10
    assert FunctionalExpr(u, OpWord([Mul(z * z), DX])).order == 9
    assert act(identity_lattice(), u, [DX]).order == 11
    assert act(identity_lattice(), u, [Mul(z * z)]).order == 8


def test_adjoint_sign(lattice):
    u = random_functional(random.Random(2), 12)
    for a in range(4):
        du = act(lattice, u, [DX] * a)
        for n in range(u.order + 1):
            expect = (-1) ** a * u.pair(apply_word(lattice, [DX] * a, z ** n))
            assert du[n] == expect


def test_pair_and_act_agree(lattice):
    """Composed action and adjoint pairing are different paths to the same moments."""
    rng = random.Random(9)
    atoms = [DX, SX, Mul(Poly([1, -2])), Mul(Poly([0, 0, 1]))]
    u = random_functional(rng, 14)
    for _ in range(15):
        w = OpWord(rng.choice(atoms) for _ in range(rng.randint(0, 4)))
        e = FunctionalExpr(u, w)
        moments = act(lattice, u, w)
        assert moments.order == e.order
        for j in range(e.order + 1):
            assert pair(lattice, e, z ** j) == moments[j]
        # splitting the word differently gives the same moments
        cut = rng.randint(0, len(w))
        inner = act(lattice, u, w[cut:])
        assert act(lattice, inner, w[:cut]) == moments


def test_pair_beyond_order_raises():
    u = Functional([1, 2, 3])
    e = FunctionalExpr(u, OpWord([SX]))
    with pytest.raises(OrderError):
        pair(identity_lattice(), e, z ** 3)


def test_functional_identities(lattice):
    rng = random.Random(17)
    for _ in range(3):
        f = random_poly(rng, 6)
        u = random_functional(rng, 24)
        rep = check_functional_identities(lattice, f, u)
        assert rep.passed, rep.failures()
        for c in rep.checks:
            assert c.j_range[0] == 0 and c.j_range[1] >= 24 - 6 - 1


def test_leibniz(lattice):
    rng = random.Random(23)
    f = random_poly(rng, 6)
    u = random_functional(rng, 24)
    for n in range(5):
        assert check_leibniz(lattice, f, u, n).passed


def test_wrong_identity_is_caught():
    L = LATTICES["x=s^2"]
    u = random_functional(random.Random(1), 10)
    f = Poly([1, 1])
    chk = compare_sides(L, "bogus", [FunctionalExpr(u, OpWord([DX, Mul(f)]))],
                        [FunctionalExpr(u, OpWord([Mul(f), DX]))])
    assert not chk.passed


def test_bell_numbers_against_recurrence():
    assert bell_numbers(30) == bell_by_recurrence(30)
    assert bell_numbers(9) == [1, 1, 2, 5, 15, 52, 203, 877, 4140]


def test_bell_ops():
    ops = ops_from_moments(bell_functional(), 6)
    assert ops.B[:2] == (1, 2) and ops.C[:2] == (1, 2)
    assert ops.P(1) == Poly([-1, 1])
    assert ops.P(2) == Poly([1, -3, 1])
    assert list(ops.polys) == [Poly(q) for q in gram_schmidt_monic(bell_functional().moments, 7)]
    assert all(c != 0 for c in ops.C)


def test_dual_basis():
    u = bell_functional(20)
    ops = ops_from_moments(u, 6)
    for n in range(7):
        for m in range(7):
            assert u.pair(ops.P(n) * ops.P(m)) / ops.h(n) == (1 if n == m else 0)


def test_regularity_and_order_errors():
    with pytest.raises(RegularityError) as exc:
        ops_from_moments(Functional([1, 1, 1, 1, 1]), 2)
    assert exc.value.n == 1
    with pytest.raises(RegularityError):
        ops_from_moments(Functional([0, 1, 1]), 1)
    with pytest.raises(OrderError):
        ops_from_moments(bell_functional(10), 6)


def test_non_positive_functional_is_fine():
    u = Functional([1, 0, -1, 0, 3, 0, 5])
    ops = ops_from_moments(u, 3)
    assert ops.C[0] < 0


def test_basis_coordinates():
    ops = ops_from_moments(bell_functional(), 5)
    p = Poly([3, 0, -1, 2])
    coords = basis_coordinates(ops.polys, p)
    assert sum((P * c for P, c in zip(ops.polys, coords)), Poly()) == p
    with pytest.raises(ValueError):
        basis_coordinates(ops.polys[:2], p)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_dual_basis_derivative(lattice, k):
    """(-1)^k (gamma_{n+k}!/gamma_n!) h_{n+k}^{-1} P_{n+k} u acts on f as the
    P^{[k]}_n-coordinate of (-1)^k D_x^k f."""
    u = bell_functional(24)
    ops = ops_from_moments(u, 8)
    Pk = normalized_derivative(lattice, ops, k, 8 - k + 1)
    rng = random.Random(k)
    for n in range(0, 7 - k):
        c = (-1) ** k * gamma_factorial(lattice, n + k) / gamma_factorial(lattice, n)
        w = ops.P(n + k) * (c / ops.h(n + k))
        for _ in range(3):
            f = random_poly(rng, 8)
            Dkf = apply_word(lattice, [DX] * k, f)
            coords = basis_coordinates(Pk, Dkf)
            assert u.pair(w * f) == (-1) ** k * coords[n]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(list(LATTICES)), st.integers(0, 2 ** 32), st.integers(1, 3))
def test_dx_moments_property(name, seed, a):
    L = LATTICES[name]
    u = random_functional(random.Random(seed), 8)
    du = act(L, u, [DX])
    assert du.order == 9
    for n in range(10):
        assert du[n] == -u.pair(dx_monomial(L, n))
    assert act(L, u, [Mul(Poly([Fraction(a)]))]) == Functional([a * m for m in u.moments])
