from __future__ import annotations

from fractions import Fraction

import pytest

from latops.lattice import (Lattice, LatticeError, alpha_n, gamma, gamma_factorial, lattice_eval,
                            q_lattice, quadratic_lattice, seq_constants)
from latops.linalg import Poly


def test_quadratic_constants():
    L = quadratic_lattice(1, 0, 0)
    assert L.alpha == 1 and L.beta == Fraction(1, 4)
    assert L.U1 == Poly([Fraction(1, 2)])
    assert L.U2 == Poly([0, 1])
    linear = quadratic_lattice(0, 1, 0)
    assert linear.U1.is_zero() and linear.U2 == Poly([Fraction(1, 4)])
    assert gamma(L, 5) == 5 and alpha_n(L, 5) == 1


def test_q_constants():
    L = q_lattice(2, 0, 1, 0)
    assert L.alpha == Fraction(5, 4) and L.beta == 0
    assert L.U1 == Poly([0, Fraction(9, 16)])
    assert L.U2 == Poly([0, 0, Fraction(9, 16)])
    assert gamma(L, 2) == Fraction(5, 2)
    assert alpha_n(L, 2) == Fraction(17, 8)
    assert gamma(L, -1) == -1 and alpha_n(L, -1) == L.alpha
    assert gamma(L, 0) == 0 and gamma(L, 1) == 1 and alpha_n(L, 0) == 1


def test_gamma_factorial_and_constants():
    L = q_lattice(2, 0, 1, 0)
    assert gamma_factorial(L, 0) == 1
    assert gamma_factorial(L, 3) == gamma(L, 1) * gamma(L, 2) * gamma(L, 3)
    sc = seq_constants(L, 3)
    assert (sc.gamma_n, sc.alpha_n, sc.gamma_factorial_n) == (
        gamma(L, 3), alpha_n(L, 3), gamma_factorial(L, 3))


def test_eval_at_half_integers():
    assert lattice_eval(quadratic_lattice(1, 0, 0), 3) == Fraction(9, 4)
    L = q_lattice(Fraction(3, 2), Fraction(1, 2), Fraction(1, 2), 0)
    assert lattice_eval(L, 2) == Fraction(1, 2) * Fraction(4, 9) + Fraction(1, 2) * Fraction(9, 4)
    assert L(2) == lattice_eval(L, 2)


@pytest.mark.parametrize("args", [
    ("q", (0, 1, 0), 1),
    ("q", (0, 1, 0), 0),
    ("q", (0, 1, 0), -2),
    ("q", (0, 0, 1), 2),
    ("q", (0, 1, 0), None),
    ("cubic", (0, 1, 0), None),
    ("quadratic", (0, 1), None),
])
def test_invalid_lattices(args):
    kind, c, p = args
    with pytest.raises(LatticeError):
        Lattice(kind, c, p)


def test_json_round_trip():
    for L in (quadratic_lattice(1, Fraction(1, 3), 0), q_lattice(Fraction(3, 2), 1, 2, 3)):
        data = L.to_json()
        assert Lattice.from_json(data) == L
    assert q_lattice(2, 0, 1, 0).to_json() == {"kind": "q", "p": "2/1", "c": ["0/1", "1/1", "0/1"]}
    with pytest.raises(LatticeError):
        Lattice.from_json({"kind": "q", "c": ["0", "1", "0"]})
    with pytest.raises(ValueError):
        Lattice.from_json({"kind": "quadratic", "c": ["0", "0.5", "0"]})
