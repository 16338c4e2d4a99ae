"""Divided-difference operator D_x and averaging operator S_x on polynomials.

Both act on z = x(s) through the half-step values x(s +- 1/2):

    D_x f = (f(x(s+1/2)) - f(x(s-1/2))) / (x(s+1/2) - x(s-1/2))
    S_x f = (f(x(s+1/2)) + f(x(s-1/2))) / 2

They are computed on the monomial basis by the product-rule recursion
seeded with D_x z = 1 and S_x z = alpha*z + beta, and memoised per lattice.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .lattice import Lattice, alpha_n, gamma, lattice_eval
from .linalg import ONE, ZERO, Poly
from .report import Check, Report


class _MonomialTable:
    """Append-only cache of D_x z^n and S_x z^n for one lattice."""

    def __init__(self, L: Lattice):
        self.L = L
        self.lock = threading.Lock()
        self.d: list[Poly] = [ZERO, ONE]
        self.s: list[Poly] = [ONE, Poly([L.beta, L.alpha])]

    def ensure(self, n: int) -> None:
        if n < len(self.d):
            return
        with self.lock:
            d, s = list(self.d), list(self.s)
            sz = s[1]
            U2 = self.L.U2
            while len(d) <= n:
                k = len(d)
                d.append(s[k - 1] + sz * d[k - 1])
                s.append(U2 * d[k - 1] + sz * s[k - 1])
            # publish whole lists so readers never see a half-built table
            self.d, self.s = d, s


_tables: dict[Lattice, _MonomialTable] = {}
_tables_lock = threading.Lock()


def _table(L: Lattice) -> _MonomialTable:
    t = _tables.get(L)
    if t is None:
        with _tables_lock:
            t = _tables.setdefault(L, _MonomialTable(L))
    return t


def dx_monomial(L: Lattice, n: int) -> Poly:
    t = _table(L)
    t.ensure(n)
    return t.d[n]


def sx_monomial(L: Lattice, n: int) -> Poly:
    t = _table(L)
    t.ensure(n)
    return t.s[n]


def _apply_table(f: Poly, table: list[Poly]) -> Poly:
    n = len(f.coeffs)
    out = [Fraction(0)] * n
    for k, c in enumerate(f.coeffs):
        if c:
            for i, v in enumerate(table[k].coeffs):
                out[i] += c * v
    return Poly._raw(out)


def dx_poly(L: Lattice, f: Poly) -> Poly:
    if f.degree < 1:
        return ZERO
    t = _table(L)
    t.ensure(len(f) - 1)
    return _apply_table(f, t.d)


def sx_poly(L: Lattice, f: Poly) -> Poly:
    if f.is_zero():
        return ZERO
    t = _table(L)
    t.ensure(len(f) - 1)
    return _apply_table(f, t.s)


# ---------------------------------------------------------------------------
# operator words

@dataclass(frozen=True)
class Mul:
    f: Poly


DX = "Dx"
SX = "Sx"
Atom = Union[str, Mul]


class OpWord(tuple):
    """A composition of D_x, S_x and multiplications, written outermost first.

    ``OpWord([DX, SX, Mul(f)])`` means ``D_x(S_x(f * .))``: atoms are applied
    right to left, exactly as the product would be read.
    """

    def __new__(cls, atoms: Sequence[Atom] = ()):
        for a in atoms:
            if not (a == DX or a == SX or isinstance(a, Mul)):
                raise ValueError(f"bad operator atom {a!r}")
        return super().__new__(cls, atoms)

    def __add__(self, other) -> "OpWord":
        return OpWord(tuple(self) + tuple(other))

    def __repr__(self) -> str:
        parts = [a if isinstance(a, str) else f"Mul({a.f})" for a in self]
        return f"OpWord([{', '.join(parts)}])"

    @property
    def n_dx(self) -> int:
        return sum(1 for a in self if a == DX)

    @property
    def mul_degree(self) -> int:
        return sum(max(a.f.degree, 0) for a in self if isinstance(a, Mul))


def word(*atoms: Atom) -> OpWord:
    return OpWord(atoms)


def dx_power(n: int) -> OpWord:
    return OpWord([DX] * n)


def apply_word(L: Lattice, w: Sequence[Atom], f: Poly) -> Poly:
    out = f
    for a in reversed(w):
        if a == DX:
            out = dx_poly(L, out)
        elif a == SX:
            out = sx_poly(L, out)
        else:
            out = a.f * out
    return out


# ---------------------------------------------------------------------------
# Leibniz coefficients

def t_coeff(L: Lattice, n: int, k: int, f: Poly) -> Poly:
    """The polynomial T_{n,k} f of the Leibniz rule for D_x^n (f u)."""
    if k < 0 or k > n or n < 0:
        return ZERO
    return t_table(L, n, f)[k]


def t_table(L: Lattice, n: int, f: Poly) -> list[Poly]:
    """``[T_{n,0} f, ..., T_{n,n} f]`` by the row recursion."""
    row = [f]
    U1 = L.U1
    for r in range(1, n + 1):
        nxt = []
        for k in range(r + 1):
            acc = ZERO
            if k <= r - 1:
                prev = row[k]
                acc = sx_poly(L, prev)
                g = gamma(L, r - k)
                if g and U1:
                    acc = acc - U1 * dx_poly(L, prev) * (g / alpha_n(L, r - k))
            if k >= 1:
                acc = acc + dx_poly(L, row[k - 1]) / alpha_n(L, r + 1 - k)
            nxt.append(acc)
        row = nxt
    return row


# ---------------------------------------------------------------------------
# product-rule checks

def check_poly_identities(L: Lattice, f: Poly, g: Poly) -> Report:
    D = lambda h: dx_poly(L, h)  # noqa: E731
    S = lambda h: sx_poly(L, h)  # noqa: E731
    a = L.alpha
    U1, U2 = L.U1, L.U2
    fg = f * g
    r_dx = D(fg) - (D(f) * S(g) + S(f) * D(g))
    r_sx = S(fg) - (D(f) * D(g) * U2 + S(f) * S(g))
    r_fdx = f * D(g) - (D((S(f) - U1 * D(f) / a) * g) - S(g * D(f)) / a)
    return Report("polynomial product rules", [
        Check("D_x(fg)", (r_dx,)),
        Check("S_x(fg)", (r_sx,)),
        Check("f D_x g", (r_fdx,)),
    ])


def check_grid(L: Lattice, f: Poly, points: Sequence[int]) -> Report:
    """The defining difference and average identities at s = j/2, j in ``points``.

    Both are checked in multiplied-out form, so points where
    x(s+1/2) = x(s-1/2) need no special care.
    """
    Df, Sf = dx_poly(L, f), sx_poly(L, f)
    rd, rs = [], []
    for j in points:
        x, xp, xm = lattice_eval(L, j), lattice_eval(L, j + 1), lattice_eval(L, j - 1)
        fp, fm = f(xp), f(xm)
        rd.append(Df(x) * (xp - xm) - (fp - fm))
        rs.append(2 * Sf(x) - (fp + fm))
    return Report("grid", [Check("D_x grid", rd), Check("S_x grid", rs)])
