"""Moment functionals and their adjoint calculus.

A functional is known only through finitely many moments mu_n = <u, z^n>,
n = 0..K.  Operators act by duality,

    <D_x u, f> = -<u, D_x f>,   <S_x u, f> = <u, S_x f>,   <g u, f> = <u, g f>,

so any expression ``word(u)`` can be paired with a polynomial as long as the
adjoint image of that polynomial has degree at most K.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import Lattice, alpha_n, gamma
from .linalg import Poly, as_rational, format_rational, parse_rational, rref
from .ops import DX, SX, Mul, OpWord, dx_monomial, dx_poly, sx_monomial, sx_poly, t_table
from .report import Check, Report


class OrderError(ValueError):
    """A pairing needs moments beyond the stored truncation order."""

    def __init__(self, required: int, available: int, what: str = "functional"):
        self.required = required
        self.available = available
        super().__init__(f"{what}: needs moments up to order {required}, "
                         f"only {available} available")


class RegularityError(ValueError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"functional is not regular: Hankel determinant of order {n} vanishes")


@dataclass(frozen=True)
class Functional:
    moments: tuple

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(as_rational(m) for m in self.moments))

    @property
    def order(self) -> int:
        return len(self.moments) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.moments[n]

    def pair(self, p: Poly) -> Fraction:
        if p.degree > self.order:
            raise OrderError(int(p.degree), self.order)
        return sum((c * m for c, m in zip(p.coeffs, self.moments)), Fraction(0))

    def truncate(self, order: int) -> "Functional":
        return Functional(self.moments[:order + 1])

    def to_json(self) -> dict:
        return {"moments": [format_rational(m) for m in self.moments]}

    @classmethod
    def from_json(cls, data: dict) -> "Functional":
        if "moments" not in data:
            raise ValueError("functional: missing field 'moments'")
        ms = data["moments"]
        if not isinstance(ms, list) or not ms:
            raise ValueError("functional: 'moments' must be a non-empty list")
        return cls(tuple(parse_rational(m) if isinstance(m, str) else as_rational(m) for m in ms))


@dataclass(frozen=True)
class FunctionalExpr:
    """``word(base)``, with the word read outermost first as in :class:`OpWord`."""

    base: Functional
    word: OpWord = OpWord()

    @property
    def order(self) -> int:
        """Highest n for which <self, z^n> is computable from the base moments."""
        return self.base.order + self.word.n_dx - self.word.mul_degree


def adjoint_image(L: Lattice, w: Sequence, p: Poly) -> Poly:
    """The polynomial q with <w(u), p> = <u, q> for every u."""
    q = p
    for a in w:
        if a == DX:
            q = -dx_poly(L, q)
        elif a == SX:
            q = sx_poly(L, q)
        else:
            q = a.f * q
    return q


def pair(L: Lattice, e: FunctionalExpr, p: Poly) -> Fraction:
    q = adjoint_image(L, e.word, p)
    if q.degree > e.base.order:
        raise OrderError(int(q.degree), e.base.order)
    return e.base.pair(q)


def _act_atom(L: Lattice, u: Functional, a) -> Functional:
    K = u.order
    mu = u.moments
    if isinstance(a, Mul):
        f = a.f
        if f.is_zero():
            return Functional((Fraction(0),) * (K + 1))
        d = int(f.degree)
        out = [sum((c * mu[n + i] for i, c in enumerate(f.coeffs) if c), Fraction(0))
               for n in range(K - d + 1)]
    elif a == SX:
        out = [u.pair(sx_monomial(L, n)) for n in range(K + 1)]
    else:
        out = [-u.pair(dx_monomial(L, n)) for n in range(K + 2)]
    if not out:
        raise OrderError(K + 1, K, "act")
    return Functional(tuple(out))


def act(L: Lattice, u: Functional, w: Sequence) -> Functional:
    """Moments of ``w(u)`` on its whole valid range."""
    out = u
    for a in reversed(tuple(w)):
        out = _act_atom(L, out, a)
    return out


def scaled(c, w: Sequence = ()) -> OpWord:
    """The word ``c * w`` for a scalar or polynomial ``c``."""
    f = c if isinstance(c, Poly) else Poly([c])
    return OpWord([Mul(f)]) + OpWord(w)


# ---------------------------------------------------------------------------
# comparing two linear combinations of functional expressions

def side_order(side: Sequence[FunctionalExpr]) -> int:
    return min(e.order for e in side)


def side_moments(L: Lattice, side: Sequence[FunctionalExpr], J: int) -> list[Fraction]:
    total = [Fraction(0)] * (J + 1)
    for e in side:
        m = act(L, e.base, e.word).moments
        for j in range(J + 1):
            total[j] += m[j]
    return total


def compare_sides(L: Lattice, name: str, lhs: Sequence[FunctionalExpr],
                  rhs: Sequence[FunctionalExpr], j_max: int | None = None) -> Check:
    """Residuals <lhs - rhs, z^j> for every j both sides can be paired with."""
    J = min(side_order(lhs) if lhs else 10 ** 9, side_order(rhs) if rhs else 10 ** 9)
    if j_max is not None:
        J = min(J, j_max)
    if J < 0:
        need = max((e.base.order - e.order for e in (*lhs, *rhs)), default=0)
        raise OrderError(need, min(e.base.order for e in (*lhs, *rhs)), name)
    a = side_moments(L, lhs, J)
    b = side_moments(L, rhs, J)
    return Check(name, tuple(x - y for x, y in zip(a, b)), (0, J))


def check_functional_identities(L: Lattice, f: Poly, u: Functional, n_comm: int = 4) -> Report:
    al = L.alpha
    U1, U2 = L.U1, L.U2
    Df, Sf = dx_poly(L, f), sx_poly(L, f)
    E = lambda *atoms: FunctionalExpr(u, OpWord(atoms))  # noqa: E731
    M = Mul
    rep = Report("functional product rules")
    rep.add(compare_sides(L, "D_x(fu)", [E(DX, M(f))], [
        E(M(Sf - U1 * Df / al), DX),
        E(M(Df / al), SX),
    ]))
    rep.add(compare_sides(L, "S_x(fu)", [E(SX, M(f))], [
        E(M((U2 * al - U1 * U1 / al) * Df), DX),
        E(M(Sf + U1 * Df / al), SX),
    ]))
    rep.add(compare_sides(L, "f D_x u", [E(M(f), DX)], [
        E(DX, M(Sf)),
        E(M(Poly([-1])), SX, M(Df)),
    ]))
    for n in range(n_comm + 1):
        lhs = [FunctionalExpr(u, scaled(al, [DX] * n + [SX]))]
        rhs = [FunctionalExpr(u, scaled(alpha_n(L, n + 1), [SX] + [DX] * n)),
               FunctionalExpr(u, scaled(U1 * gamma(L, n), [DX] * (n + 1)))]
        rep.add(compare_sides(L, f"commutation n={n}", lhs, rhs))
    return rep


def leibniz_sides(L: Lattice, f: Poly, u: Functional, n: int
                  ) -> tuple[list[FunctionalExpr], list[FunctionalExpr]]:
    lhs = [FunctionalExpr(u, OpWord([DX] * n + [Mul(f)]))]
    rhs = [FunctionalExpr(u, OpWord([Mul(T)] + [DX] * (n - k) + [SX] * k))
           for k, T in enumerate(t_table(L, n, f))]
    return lhs, rhs


def check_leibniz(L: Lattice, f: Poly, u: Functional, n: int) -> Report:
    """D_x^n(f u) against sum_k T_{n,k}f D_x^{n-k} S_x^k u.

    The left side is paired through the adjoint of the word directly, so it
    never touches the T recursion.
    """
    lhs, rhs = leibniz_sides(L, f, u, n)
    J = min(side_order(lhs), side_order(rhs))
    if J < 0:
        raise OrderError(n + int(max(f.degree, 0)), u.order, "leibniz")
    left = [pair(L, lhs[0], Poly.monomial(j)) for j in range(J + 1)]
    right = side_moments(L, rhs, J)
    return Report(f"leibniz n={n}", [
        Check(f"leibniz n={n}", tuple(a - b for a, b in zip(left, right)), (0, J)),
    ])


# ---------------------------------------------------------------------------
# orthogonal polynomials from moments

@dataclass(frozen=True)
class OPSData:
    polys: tuple
    norms: tuple
    B: tuple
    C: tuple  # C[0] is C_1

    @property
    def depth(self) -> int:
        return len(self.polys) - 1

    def P(self, n: int) -> Poly:
        return self.polys[n]

    def h(self, n: int) -> Fraction:
        return self.norms[n]

    def to_json(self) -> dict:
        return {
            "polys": [p.to_json() for p in self.polys],
            "h": [format_rational(x) for x in self.norms],
            "B": [format_rational(x) for x in self.B],
            "C": [format_rational(x) for x in self.C],
        }


def _solve_unique(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(rows)
    red, piv = rref([r + [b] for r, b in zip(rows, rhs)], n + 1)
    if piv != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def ops_from_moments(u: Functional, n_max: int) -> OPSData:
    """Monic OPS P_0..P_{n_max} by solving the Hankel orthogonality systems."""
    if 2 * n_max > u.order:
        raise OrderError(2 * n_max, u.order, "ops_from_moments")
    mu = u.moments
    polys: list[Poly] = []
    norms: list[Fraction] = []
    for n in range(n_max + 1):
        if n == 0:
            P = Poly([1])
        else:
            H = [[mu[i + j] for j in range(n)] for i in range(n)]
            c = _solve_unique(H, [-mu[n + i] for i in range(n)])
            if c is None:
                raise RegularityError(n - 1)
            P = Poly(c + [1])
        h = u.pair(P * P)
        if h == 0:
            raise RegularityError(n)
        polys.append(P)
        norms.append(h)
    B = tuple(u.pair(Poly([0, 1]) * P * P) / h for P, h in zip(polys[:-1], norms[:-1]))
    C = tuple(norms[n] / norms[n - 1] for n in range(1, n_max + 1))
    z = Poly([0, 1])
    for n in range(n_max):
        nxt = (z - B[n]) * polys[n] - (C[n - 1] * polys[n - 1] if n else Poly())
        if nxt != polys[n + 1]:
            raise ArithmeticError(f"three-term recurrence fails at n={n}")
    return OPSData(tuple(polys), tuple(norms), B, C)


def basis_coordinates(basis: Sequence[Poly], p: Poly) -> list[Fraction]:
    """Coordinates of ``p`` in a simple set (``deg basis[n] == n``)."""
    if p.degree > len(basis) - 1:
        raise ValueError("polynomial degree exceeds the basis")
    coords = [Fraction(0)] * len(basis)
    r = p
    while not r.is_zero():
        d = int(r.degree)
        c = r.lead / basis[d].lead
        coords[d] = c
        r = r - basis[d] * c
    return coords
