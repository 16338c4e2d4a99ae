"""Slow, obviously-correct reference computations used to cross-check the library."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import comb


def cofactor_det(rows, zero=Fraction(0), one=Fraction(1)):
    """Laplace expansion along the first row; works over any commutative ring."""
    n = len(rows)
    if n == 0:
        return one
    if n == 1:
        return rows[0][0]
    total = zero
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor, zero, one)
        total = total + term if j % 2 == 0 else total - term
    return total


def rank_by_minors(rows) -> int:
    """Largest r with a nonzero r x r minor."""
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    for r in range(min(m, n), 0, -1):
        for ri in combinations(range(m), r):
            for ci in combinations(range(n), r):
                if cofactor_det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return r
    return 0


def small_kernel_vectors(rows, ncols: int, bound: int = 2):
    """Every integer vector with entries in [-bound, bound] killed by ``rows``."""
    out = []
    for v in product(range(-bound, bound + 1), repeat=ncols):
        if any(v) and all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows):
            out.append(v)
    return out


def in_span(basis, vec) -> bool:
    """Whether ``vec`` is a rational combination of ``basis`` (rank test)."""
    if not basis:
        return not any(vec)
    rows = [list(b) for b in basis]
    return rank_by_minors(rows + [list(vec)]) == rank_by_minors(rows)


def bell_by_recurrence(count: int) -> list[int]:
    """B_{n+1} = sum_k C(n, k) B_k."""
    b = [1]
    while len(b) < count:
        n = len(b) - 1
        b.append(sum(comb(n, k) * b[k] for k in range(n + 1)))
    return b


def gram_schmidt_monic(moments, count: int):
    """Monic OPS by Gram-Schmidt on 1, z, z^2, ... with <p, q> from moments."""
    def inner(p, q):
        return sum(a * b * moments[i + j] for i, a in enumerate(p) for j, b in enumerate(q))

    polys = []
    for n in range(count):
        p = [Fraction(0)] * n + [Fraction(1)]
        for q in polys:
            c = inner(p, q) / inner(q, q)
            p = [a - c * (q[i] if i < len(q) else 0) for i, a in enumerate(p)]
        polys.append(p)
    return polys


def grid_values(L, j: int):
    """x(j/2) evaluated straight from the lattice formula."""
    if L.kind == "q":
        c1, c2, c3 = L.c
        return c1 * L.p ** (-j) + c2 * L.p ** j + c3
    c4, c5, c6 = L.c
    s = Fraction(j, 2)
    return c4 * s ** 2 + c5 * s + c6


def horner(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def grid_residuals(L, f_coeffs, df_coeffs, sf_coeffs, points):
    """Residuals of the defining identities of D_x and S_x at s = j/2."""
    out = []
    for j in points:
        x, xp, xm = grid_values(L, j), grid_values(L, j + 1), grid_values(L, j - 1)
        fp, fm = horner(f_coeffs, xp), horner(f_coeffs, xm)
        out.append(horner(df_coeffs, x) * (xp - xm) - (fp - fm))
        out.append(2 * horner(sf_coeffs, x) - (fp + fm))
    return out
