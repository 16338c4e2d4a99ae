"""Exact rational scalars, dense polynomials and matrices over Q and Q[z].

Everything here is built on :class:`fractions.Fraction`; nothing is ever
rounded.  Polynomials are immutable and store their coefficients constant
term first with no trailing zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

#: Degree of the zero polynomial.  Behaves as -inf under ``+`` and ``<``,
#: so ``deg(f*g) == deg(f) + deg(g)`` holds without special cases.
NEG_INF = float("-inf")


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; floats are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Poly:
    """Dense univariate polynomial with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        # trusted constructor: coeffs already Fractions
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        p._c = tuple(coeffs)
        p._hash = None
        return p

    @classmethod
    def const(cls, a: Scalar) -> "Poly":
        return cls([a])

    @classmethod
    def monomial(cls, n: int, a: Scalar = 1) -> "Poly":
        return cls._raw([Fraction(0)] * n + [Fraction(a)])

    @classmethod
    def z(cls) -> "Poly":
        return cls.monomial(1)

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else NEG_INF

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self._c):
            return self._c[i]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Poly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self._c)}])"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    @staticmethod
    def _coerce(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly([x])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw([-v for v in self._c])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = as_rational(other)
            return Poly._raw([v * s for v in self._c]) if s else Poly()
        a, b = self._c, other._c
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        s = as_rational(other)
        return Poly._raw([v / s for v in self._c])

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        db = len(other._c) - 1
        lb = other._c[-1]
        if len(rem) - 1 < db:
            return Poly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] / lb
            quo[k] = q
            if q:
                for i, v in enumerate(other._c):
                    rem[k + i] -= q * v
        return Poly._raw(quo), Poly._raw(rem[:db])

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(parse_rational(s) if isinstance(s, str) else s for s in data)


ZERO = Poly()
ONE = Poly([1])
Z = Poly([0, 1])


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(as_rational(x) for r in rows for x in r))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def mul_vec(self, x: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(self.row(i), x)), Fraction(0))
                for i in range(self.rows)]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None
         ) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns ``(nonzero rows, pivot columns)``."""
    m = [[as_rational(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rational_nullspace(m: RatMatrix) -> list[list[Fraction]]:
    """Right nullspace basis in reduced echelon normal form.

    The basis vectors, stacked as rows, form a matrix in reduced row echelon
    form: each vector's first nonzero entry is 1 and these leading positions
    ascend.  For ``[[1, 2], [2, 4]]`` this gives ``[(1, -1/2)]``.
    """
    n = m.cols
    if n == 0:
        return []
    red, pivots = rref(m.to_rows(), n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return []
    normal, _ = rref(basis, n)
    return normal


def solve_particular(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
                     ) -> list[Fraction] | None:
    """One solution of ``A x = b`` with every free coordinate set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [as_rational(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def rat_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [[as_rational(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        rows = [[Poly._coerce(x) for x in r] for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int, scale: Poly = ONE) -> "PolyMatrix":
        return cls.from_rows([[scale if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Poly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            out.append([sum((self[i, t] * other[t, j] for t in range(self.cols)), ZERO)
                        for j in range(other.cols)])
        return PolyMatrix.from_rows(out)

    def to_json(self) -> list[list[list[str]]]:
        return [[p.to_json() for p in r] for r in self.to_rows()]


def _bareiss_det(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 0:
        return ONE
    m = [list(r) for r in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def poly_det(m: PolyMatrix) -> Poly:
    """Determinant by fraction-free (Bareiss) elimination over Q[z]."""
    if m.rows != m.cols:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    return _bareiss_det(m.to_rows())


def poly_matrix_det_adjugate(m: PolyMatrix) -> tuple[Poly, PolyMatrix]:
    """Return ``(det m, adj m)`` with ``m @ adj == det * I`` exactly."""
    if m.rows != m.cols:
        raise ValueError(f"adjugate of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    rows = m.to_rows()
    det = _bareiss_det(rows)
    if n == 1:
        return det, PolyMatrix.from_rows([[ONE]])
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for t, r in enumerate(rows) if t != i]
            cof = _bareiss_det(minor)
            # adj[j][i] is the (i, j) cofactor
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return det, PolyMatrix.from_rows(adj)
