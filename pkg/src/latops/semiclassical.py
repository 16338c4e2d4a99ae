"""Pearson pairs, rational modifications and the transfer between them.

u is semiclassical when phi D_x u = psi S_x u for nonzero polynomials
phi, psi; u and v are related by a rational modification when
pi2 u = pi1 v.  Both are found as exact nullspaces of moment matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .functional import Functional, FunctionalExpr, OrderError, act, compare_sides
from .lattice import Lattice
from .linalg import Poly, RatMatrix, rational_nullspace
from .ops import DX, SX, Mul, OpWord, dx_poly, sx_poly
from .report import Check, Report


class DegenerateTransfer(ArithmeticError):
    pass


@dataclass(frozen=True)
class PearsonPair:
    phi: Poly
    psi: Poly

    def __post_init__(self):
        if self.phi.is_zero() or self.psi.is_zero():
            raise ValueError("Pearson pair needs nonzero phi and psi")

    @property
    def classical(self) -> bool:
        return self.phi.degree <= 2 and self.psi.degree <= 1

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "psi": self.psi.to_json()}


@dataclass(frozen=True)
class ModPair:
    pi2: Poly
    pi1: Poly

    def __post_init__(self):
        if self.pi2.is_zero() or self.pi1.is_zero():
            raise ValueError("rational modification needs nonzero pi1 and pi2")

    def to_json(self) -> dict:
        return {"pi2": self.pi2.to_json(), "pi1": self.pi1.to_json()}


@dataclass
class SolveResult:
    """Nonzero solutions, the filtered degenerate basis vectors, and the
    residual report that re-verifies every returned solution."""

    solutions: list
    degenerate: list = field(default_factory=list)
    report: Report | None = None

    def to_json(self) -> dict:
        out = {
            "solutions": [s.to_json() for s in self.solutions],
            "degenerate": [[p.to_json() for p in d] for d in self.degenerate],
        }
        if self.report is not None:
            checks = self.report.checks
            out["residual_range"] = list(checks[0].j_range) if checks else None
            out["residuals"] = [c.to_json()["residuals"] for c in checks]
            out["passed"] = self.report.passed
        return out


def _split(vec, n1: int) -> tuple[Poly, Poly]:
    return Poly(vec[:n1]), Poly(vec[n1:])


def pearson_matrix(L: Lattice, u: Functional, dphi: int, dpsi: int, n_eq: int) -> RatMatrix:
    du = act(L, u, [DX]).moments
    su = act(L, u, [SX]).moments
    rows = [[du[i + j] for i in range(dphi + 1)] + [-su[i + j] for i in range(dpsi + 1)]
            for j in range(n_eq + 1)]
    return RatMatrix.from_rows(rows, dphi + dpsi + 2)


def verify_pearson(L: Lattice, u: Functional, pp: PearsonPair, n_eq: int) -> Report:
    lhs = [FunctionalExpr(u, OpWord([Mul(pp.phi), DX]))]
    rhs = [FunctionalExpr(u, OpWord([Mul(pp.psi), SX]))]
    chk = compare_sides(L, "phi D_x u = psi S_x u", lhs, rhs, j_max=n_eq)
    if chk.j_range[1] < n_eq:
        raise OrderError(n_eq + int(max(pp.phi.degree, pp.psi.degree)), u.order, "verify_pearson")
    return Report("pearson", [chk])


def detect_semiclassical(L: Lattice, u: Functional, dphi: int, dpsi: int,
                         n_eq: int) -> SolveResult:
    need = n_eq + max(dphi, dpsi) + 1
    if u.order < need:
        raise OrderError(need, u.order, "detect_semiclassical")
    basis = rational_nullspace(pearson_matrix(L, u, dphi, dpsi, n_eq))
    res = SolveResult([], [], Report("semiclassical detect"))
    for vec in basis:
        phi, psi = _split(vec, dphi + 1)
        if phi.is_zero() or psi.is_zero():
            res.degenerate.append((phi, psi))
            continue
        pp = PearsonPair(phi, psi)
        res.solutions.append(pp)
        chk = verify_pearson(L, u, pp, n_eq).checks[0]
        res.report.add(Check(f"solution {len(res.solutions) - 1}", chk.residuals, chk.j_range))
    return res


def modification_matrix(u: Functional, v: Functional, d2: int, d1: int, n_eq: int) -> RatMatrix:
    rows = [[u[i + j] for i in range(d2 + 1)] + [-v[i + j] for i in range(d1 + 1)]
            for j in range(n_eq + 1)]
    return RatMatrix.from_rows(rows, d2 + d1 + 2)


def verify_modification(u: Functional, v: Functional, mp: ModPair, n_eq: int | None = None) -> Report:
    """Residuals <pi2 u - pi1 v, z^j>."""
    J = min(u.order - int(mp.pi2.degree), v.order - int(mp.pi1.degree))
    if n_eq is not None:
        if J < n_eq:
            raise OrderError(n_eq + int(mp.pi2.degree), u.order, "verify_modification")
        J = n_eq
    if J < 0:
        raise OrderError(int(mp.pi2.degree), u.order, "verify_modification")
    res = []
    for j in range(J + 1):
        zj = Poly.monomial(j)
        res.append(u.pair(mp.pi2 * zj) - v.pair(mp.pi1 * zj))
    return Report("rational modification", [Check("pi2 u = pi1 v", res, (0, J))])


def solve_rational_modification(u: Functional, v: Functional, d2: int, d1: int,
                                n_eq: int) -> SolveResult:
    if u.order < n_eq + d2:
        raise OrderError(n_eq + d2, u.order, "solve_rational_modification (u)")
    if v.order < n_eq + d1:
        raise OrderError(n_eq + d1, v.order, "solve_rational_modification (v)")
    basis = rational_nullspace(modification_matrix(u, v, d2, d1, n_eq))
    res = SolveResult([], [], Report("rational modification solve"))
    for vec in basis:
        pi2, pi1 = _split(vec, d2 + 1)
        if pi2.is_zero() or pi1.is_zero():
            res.degenerate.append((pi2, pi1))
            continue
        mp = ModPair(pi2, pi1)
        res.solutions.append(mp)
        chk = verify_modification(u, v, mp, n_eq).checks[0]
        res.report.add(Check(f"solution {len(res.solutions) - 1}", chk.residuals, chk.j_range))
    return res


@dataclass(frozen=True)
class Transfer:
    Phi: Poly
    Psi: Poly
    K1: Poly
    K2: Poly

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("Phi", "Psi", "K1", "K2")}


def transfer_semiclassical(L: Lattice, mod: ModPair, pearson: PearsonPair) -> Transfer:
    """A Pearson pair for v from pi2 u = pi1 v and phi D_x u = psi S_x u.

    Eliminates S_x u between the D_x- and S_x-images of the modification,
    giving phi (Phi D_x v + Psi S_x v) = 0.  Everything is scaled by alpha^2.
    """
    a = L.alpha
    U1, U2 = L.U1, L.U2
    phi, psi = pearson.phi, pearson.psi
    D1, S1 = dx_poly(L, mod.pi1), sx_poly(L, mod.pi1)
    D2, S2 = dx_poly(L, mod.pi2), sx_poly(L, mod.pi2)
    A = S1 - U1 * D1 / a
    B = D1 / a
    C = (U2 * a - U1 * U1 / a) * D1
    D = S1 + U1 * D1 / a
    K1 = (phi * D2 + (S2 * a - U1 * D2) * psi) / a
    K2 = (phi * (S2 * a + U1 * D2) + psi * (U2 * (a * a) - U1 * U1) * D2) / a
    s = a * a
    Phi = (K2 * A - K1 * C) * s
    Psi = (K2 * B - K1 * D) * s
    if Phi.is_zero() and Psi.is_zero():
        raise DegenerateTransfer("transfer gives Phi = Psi = 0")
    return Transfer(Phi, Psi, K1, K2)


def verify_transfer(L: Lattice, v: Functional, phi: Poly, t: Transfer) -> Report:
    """Asserts phi (Phi D_x v + Psi S_x v) = 0; records the phi-free form as a note."""
    lhs = [FunctionalExpr(v, OpWord([Mul(phi * t.Phi), DX])),
           FunctionalExpr(v, OpWord([Mul(phi * t.Psi), SX]))]
    rep = Report("semiclassical transfer", [compare_sides(L, "phi (Phi D_x v + Psi S_x v)", lhs, [])])
    free = compare_sides(L, "Phi D_x v + Psi S_x v", [
        FunctionalExpr(v, OpWord([Mul(t.Phi), DX])),
        FunctionalExpr(v, OpWord([Mul(t.Psi), SX])),
    ], [])
    rep.notes["phi_free_identity"] = free.to_json()
    return rep


def proportional(f: Poly, g: Poly) -> bool:
    """True when f and g are nonzero scalar multiples of each other."""
    if f.is_zero() or g.is_zero() or f.degree != g.degree:
        return False
    return f * g.lead == g * f.lead


def same_ratio(a: tuple[Poly, Poly], b: tuple[Poly, Poly]) -> bool:
    """a[0]/a[1] == b[0]/b[1] as rational functions."""
    return (a[0] * b[1] - a[1] * b[0]).is_zero()

