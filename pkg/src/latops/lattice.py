"""Lattices x(s) and their structural constants.

A q-lattice is ``x(s) = c1*q**-s + c2*q**s + c3`` and is parametrised by
``p = q**(1/2)`` so that every value at a half-integer ``s`` is rational.
A quadratic lattice is ``x(s) = c4*s**2 + c5*s + c6``.  Half-integers are
always passed as the integer ``j = 2*s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import Poly, as_rational, format_rational, parse_rational

Q_KIND = "q"
QUADRATIC_KIND = "quadratic"


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class SeqConstants:
    n: int
    gamma_n: Fraction
    alpha_n: Fraction
    gamma_factorial_n: Fraction


@dataclass(frozen=True)
class Lattice:
    kind: str
    c: tuple
    p: Fraction | None = None
    alpha: Fraction = field(init=False, compare=False)
    beta: Fraction = field(init=False, compare=False)
    U1: Poly = field(init=False, compare=False)
    U2: Poly = field(init=False, compare=False)

    def __post_init__(self):
        c = tuple(as_rational(v) for v in self.c)
        if len(c) != 3:
            raise LatticeError("a lattice takes exactly three c-parameters")
        object.__setattr__(self, "c", c)
        if self.kind == Q_KIND:
            if self.p is None:
                raise LatticeError("q-lattice needs p = q^(1/2)")
            p = as_rational(self.p)
            if p <= 0:
                raise LatticeError("q-lattice needs p > 0")
            if p == 1:
                raise LatticeError("p = 1 means q = 1; use the quadratic kind")
            c1, c2, c3 = c
            if c1 == 0 and c2 == 0:
                raise LatticeError("q-lattice needs (c1, c2) != (0, 0)")
            object.__setattr__(self, "p", p)
            alpha = (p + 1 / p) / 2
            beta = (1 - alpha) * c3
            k = alpha * alpha - 1
            shifted = Poly([-c3, 1])
            U1 = shifted * k
            U2 = (shifted * shifted - 4 * c1 * c2) * k
        elif self.kind == QUADRATIC_KIND:
            object.__setattr__(self, "p", None)
            c4, c5, c6 = c
            alpha = Fraction(1)
            beta = c4 / 4
            U1 = Poly([2 * beta])
            U2 = Poly([-4 * beta * c6 + c5 * c5 / 4, 4 * beta])
        else:
            raise LatticeError(f"unknown lattice kind {self.kind!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "U1", U1)
        object.__setattr__(self, "U2", U2)

    @property
    def is_q(self) -> bool:
        return self.kind == Q_KIND

    def __call__(self, j: int) -> Fraction:
        return lattice_eval(self, j)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "c": [format_rational(v) for v in self.c]}
        if self.is_q:
            d["p"] = format_rational(self.p)
        return d

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        kind = data.get("kind")
        if "c" not in data:
            raise LatticeError("lattice: missing field 'c'")
        c = [parse_rational(v) if isinstance(v, str) else as_rational(v) for v in data["c"]]
        if kind == Q_KIND:
            if "p" not in data:
                raise LatticeError("lattice: missing field 'p'")
            p = data["p"]
            return cls(Q_KIND, tuple(c), parse_rational(p) if isinstance(p, str) else as_rational(p))
        return cls(kind, tuple(c))


def make_lattice(kind: str, c: Sequence, p=None) -> Lattice:
    return Lattice(kind, tuple(c), p)


def q_lattice(p, c1, c2, c3) -> Lattice:
    return Lattice(Q_KIND, (c1, c2, c3), as_rational(p))


def quadratic_lattice(c4, c5, c6) -> Lattice:
    return Lattice(QUADRATIC_KIND, (c4, c5, c6))


def lattice_eval(L: Lattice, j: int) -> Fraction:
    """Exact ``x(j/2)``."""
    if L.is_q:
        c1, c2, c3 = L.c
        pj = L.p ** j
        return c1 / pj + c2 * pj + c3
    c4, c5, c6 = L.c
    s = Fraction(j, 2)
    return c4 * s * s + c5 * s + c6


def gamma(L: Lattice, n: int) -> Fraction:
    if n == -1:
        return Fraction(-1)
    if not L.is_q:
        return Fraction(n)
    p = L.p
    return (p ** n - p ** -n) / (p - 1 / p)


def alpha_n(L: Lattice, n: int) -> Fraction:
    if n == -1:
        return L.alpha
    if not L.is_q:
        return Fraction(1)
    p = L.p
    return (p ** n + p ** -n) / 2


def gamma_factorial(L: Lattice, n: int) -> Fraction:
    """gamma_1 * ... * gamma_n, with the empty product for n = 0."""
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= gamma(L, j)
    return out


def seq_constants(L: Lattice, n: int) -> SeqConstants:
    if n < -1:
        raise ValueError("sequence constants are defined for n >= -1")
    gf = gamma_factorial(L, n) if n >= 0 else Fraction(1)
    return SeqConstants(n, gamma(L, n), alpha_n(L, n), gf)
