"""Coherent pairs of OPS on a lattice.

Given monic OPS (P_n) for u and (Q_n) for v with

    sum_{j<=M} a_{j,n} P^{[k]}_{n-j} = sum_{j<=N} b_{j,n} Q^{[m]}_{n-j},

the dual bases of the two derivative sequences share the finitely supported
expansion a^{[k]}_n = sum_l a_{l-n,l} r_l, b^{[m]}_n = sum_l b_{l-n,l} r_l in
the dual basis (r_l) of R_n = sum_j a_{j,n} P^{[k]}_{n-j}.  Everything below
works on those finite coordinate vectors, never on infinite expansions:

* ``solve_connection`` finds a', b' with sum a'_i a^{[k]}_i = sum b'_j b^{[m]}_j,
* ``construct_lemma_polys`` turns them into psi, phi with
  psi u = D_x^{k-m}(phi v),
* ``build_B_matrix`` / ``solve_theorem_system`` apply D_x once more, expand
  with the Leibniz rule and Cramer-solve the resulting polynomial system.

The column index of the Cramer matrix uses T_{k-m+1, j-1}: column j >= 1
multiplies D_x^{k-m+2-j} S_x^{j-1} v.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .functional import (Functional, FunctionalExpr, OPSData, compare_sides,
                         ops_from_moments)
from .lattice import Lattice, gamma_factorial
from .linalg import (ZERO, Poly, format_rational, PolyMatrix, RatMatrix, poly_matrix_det_adjugate,
                     rat_det, solve_particular)
from .ops import DX, SX, Mul, OpWord, apply_word, dx_poly, sx_poly, t_table
from .report import Check, Report, jsonify
from .semiclassical import ModPair, verify_modification


class CoherenceError(ValueError):
    """A hypothesis needed by the construction does not hold."""


class DegenerateSystem(CoherenceError):
    pass


def normalized_derivative(L: Lattice, ops: OPSData, m: int, count: int | None = None) -> list[Poly]:
    """P^{[m]}_n = (gamma_n! / gamma_{n+m}!) D_x^m P_{n+m} for n < count."""
    if count is None:
        count = ops.depth - m + 1
    if count + m - 1 > ops.depth:
        raise CoherenceError(f"need P_{count + m - 1}, OPS only has depth {ops.depth}")
    out = []
    for n in range(count):
        d = apply_word(L, [DX] * m, ops.P(n + m))
        out.append(d * (gamma_factorial(L, n) / gamma_factorial(L, n + m)))
    return out


# ---------------------------------------------------------------------------
# specification

@dataclass
class CoherenceSpec:
    """Inputs of an (M, N)-coherent pair of order (m, k).

    ``a[j][n]`` is a_{j,n} (j = 0..M) and ``b[j][n]`` is b_{j,n} (j = 0..N);
    every row must cover n = 0..n_max.
    """

    lattice: Lattice
    u: Functional
    v: Functional
    k: int
    m: int
    M: int
    N: int
    a: list
    b: list
    n_max: int
    P: OPSData | None = None
    Q: OPSData | None = None

    def __post_init__(self):
        if min(self.k, self.m, self.M, self.N, self.n_max) < 0:
            raise ValueError("k, m, M, N, n_max must be non-negative")
        if self.k < self.m:
            raise ValueError("need k >= m")
        if len(self.a) != self.M + 1 or len(self.b) != self.N + 1:
            raise ValueError("coefficient tables need M+1 rows (a) and N+1 rows (b)")
        self.a = [[Fraction(x) for x in row] for row in self.a]
        self.b = [[Fraction(x) for x in row] for row in self.b]
        need = max(self.n_max, self.lemma_count - 1 + self.M + self.N)
        for name, tab in (("a", self.a), ("b", self.b)):
            for j, row in enumerate(tab):
                if len(row) < need + 1:
                    raise ValueError(f"{name}[{j}] covers n <= {len(row) - 1}, need n <= {need}")

    @property
    def d(self) -> int:
        return self.k - self.m

    @property
    def lemma_count(self) -> int:
        """Number of Lemma entries (n = 0..k-m+2) the Cramer step needs."""
        return self.d + 3

    @property
    def depth_P(self) -> int:
        return max(self.n_max + self.k, self.k + self.lemma_count - 1 + self.N)

    @property
    def depth_Q(self) -> int:
        return max(self.n_max + self.m, self.m + self.lemma_count - 1 + self.M)

    def coef_a(self, j: int, n: int) -> Fraction:
        return self.a[j][n] if 0 <= j <= self.M else Fraction(0)

    def coef_b(self, j: int, n: int) -> Fraction:
        return self.b[j][n] if 0 <= j <= self.N else Fraction(0)

    def ensure_ops(self) -> None:
        if self.P is None or self.P.depth < self.depth_P:
            self.P = ops_from_moments(self.u, self.depth_P)
        if self.Q is None or self.Q.depth < self.depth_Q:
            self.Q = ops_from_moments(self.v, self.depth_Q)

    def hypothesis_violations(self) -> list[str]:
        bad = []
        for n in range(self.n_max + 1):
            if self.a[0][n] != 1:
                bad.append(f"a_(0,{n}) != 1")
            if self.b[0][n] != 1:
                bad.append(f"b_(0,{n}) != 1")
            if self.a[self.M][n] * self.b[self.N][n] == 0:
                bad.append(f"a_(M,{n}) b_(N,{n}) == 0")
        return bad


def verify_coherence(spec: CoherenceSpec, n_range: Sequence[int] | None = None) -> Report:
    spec.ensure_ops()
    L = spec.lattice
    if n_range is None:
        n_range = range(spec.n_max + 1)
    top = max(n_range)
    Pk = normalized_derivative(L, spec.P, spec.k, top + 1)
    Qm = normalized_derivative(L, spec.Q, spec.m, top + 1)
    res = []
    for n in n_range:
        lhs = sum((Pk[n - j] * spec.coef_a(j, n) for j in range(spec.M + 1) if n - j >= 0), ZERO)
        rhs = sum((Qm[n - j] * spec.coef_b(j, n) for j in range(spec.N + 1) if n - j >= 0), ZERO)
        res.append(lhs - rhs)
    return Report("coherence relation", [Check("coherence relation", res, (min(n_range), top))])


# ---------------------------------------------------------------------------
# Lemma construction

def build_A_matrix(spec: CoherenceSpec) -> tuple[RatMatrix, Fraction]:
    M, N = spec.M, spec.N
    size = M + N
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if i <= N - 1 and i <= j <= M + i:
                rows[i][j] = spec.coef_a(j - i, j)
            elif N <= i and i - N <= j <= i:
                rows[i][j] = spec.coef_b(j - i + N, j)
    mat = RatMatrix.from_rows(rows, size)
    return mat, rat_det(rows)


@dataclass(frozen=True)
class ConnectionCoeffs:
    n: int
    a_prime: tuple  # a'_{n,0..n+N}
    b_prime: tuple  # b'_{n,0..n+M}

    def to_json(self) -> dict:
        return {"n": self.n,
                "a_prime": [format_rational(x) for x in self.a_prime],
                "b_prime": [format_rational(x) for x in self.b_prime]}


def r_coordinates(spec: CoherenceSpec, n: int, side: str, size: int) -> list[Fraction]:
    """Coordinates of a^{[k]}_n (side 'a') or b^{[m]}_n (side 'b') on r_0..r_{size-1}."""
    out = [Fraction(0)] * size
    width, coef = (spec.M, spec.coef_a) if side == "a" else (spec.N, spec.coef_b)
    for l in range(n, min(n + width, size - 1) + 1):
        out[l] = coef(l - n, l)
    return out


def connection_balance(spec: CoherenceSpec, cc: ConnectionCoeffs) -> list[Fraction]:
    """r-coordinates of sum a'_i a^{[k]}_i - sum b'_j b^{[m]}_j (all zero when balanced)."""
    size = cc.n + spec.M + spec.N + 1
    tot = [Fraction(0)] * size
    for i, c in enumerate(cc.a_prime):
        for l, x in enumerate(r_coordinates(spec, i, "a", size)):
            tot[l] += c * x
    for j, c in enumerate(cc.b_prime):
        for l, x in enumerate(r_coordinates(spec, j, "b", size)):
            tot[l] -= c * x
    return tot


def solve_connection(spec: CoherenceSpec, n: int) -> ConnectionCoeffs:
    """Normalized solution of the banded balance with free coordinates zero."""
    M, N = spec.M, spec.N
    _, det = build_A_matrix(spec)
    if det == 0:
        raise CoherenceError("det(A_{M+N}) = 0")
    na, nb = n + N + 1, n + M + 1
    size = n + M + N + 1
    cols_a = [r_coordinates(spec, i, "a", size) for i in range(na)]
    cols_b = [r_coordinates(spec, j, "b", size) for j in range(nb)]
    rows = [[cols_a[i][l] for i in range(na)] + [-cols_b[j][l] for j in range(nb)]
            for l in range(size)]
    rhs = [Fraction(0)] * size
    norm_a = [Fraction(0)] * (na + nb)
    norm_a[na - 1] = Fraction(1)
    norm_b = [Fraction(0)] * (na + nb)
    norm_b[na + nb - 1] = Fraction(1)
    rows += [norm_a, norm_b]
    rhs += [spec.coef_b(N, M + N + n), spec.coef_a(M, M + N + n)]
    x = solve_particular(rows, rhs)
    if x is None:
        raise CoherenceError(f"no normalized connection coefficients at n={n}")
    return ConnectionCoeffs(n, tuple(x[:na]), tuple(x[na:]))


@dataclass(frozen=True)
class LemmaEntry:
    n: int
    psi: Poly  # degree N+k+n
    phi: Poly  # degree M+m+n

    def to_json(self) -> dict:
        return {"n": self.n, "psi": self.psi.to_json(), "phi": self.phi.to_json()}


def construct_lemma_polys(spec: CoherenceSpec, cc: ConnectionCoeffs) -> LemmaEntry:
    spec.ensure_ops()
    L, k, m, n = spec.lattice, spec.k, spec.m, cc.n
    sk, sm = (-1) ** k, (-1) ** m
    psi = ZERO
    for i, a in enumerate(cc.a_prime):
        if a:
            w = sk * gamma_factorial(L, k + i) / (gamma_factorial(L, i) * spec.P.h(k + i))
            psi = psi + spec.P.P(k + i) * (w * a)
    phi = ZERO
    for j, b in enumerate(cc.b_prime):
        if b:
            w = sm * gamma_factorial(L, m + j) / (gamma_factorial(L, j) * spec.Q.h(m + j))
            phi = phi + spec.Q.P(m + j) * (w * b)
    if psi.degree != spec.N + k + n or phi.degree != spec.M + m + n:
        raise CoherenceError(
            f"degree shortfall at n={n}: deg psi={psi.degree}, deg phi={phi.degree}")
    return LemmaEntry(n, psi, phi)


def dual_relation_sides(u: Functional, v: Functional, psi: Poly, phi: Poly, d: int):
    return ([FunctionalExpr(u, OpWord([Mul(psi)]))],
            [FunctionalExpr(v, OpWord([DX] * d + [Mul(phi)]))])


def verify_dual_relation(L: Lattice, entry: LemmaEntry, u: Functional, v: Functional,
                         d: int) -> Report:
    """psi u = D_x^d (phi v), paired with z^j on the feasible range."""
    lhs, rhs = dual_relation_sides(u, v, entry.psi, entry.phi, d)
    name = f"psi u = D_x^{d}(phi v), n={entry.n}"
    return Report("dual relation", [compare_sides(L, name, lhs, rhs)])


# ---------------------------------------------------------------------------
# Cramer step

def cramer_matrix(L: Lattice, left: Sequence[Poly], right: Sequence[Poly], d: int) -> PolyMatrix:
    """Rows from D_x(left_i u) = D_x^{d+1}(right_i v), order d+3."""
    al = L.alpha
    U1 = L.U1
    rows = []
    for i in range(d + 3):
        lp, rp = left[i], right[i]
        T = t_table(L, d + 1, rp)
        row = [U1 * dx_poly(L, lp) - sx_poly(L, lp) * al]
        row += [T[j - 1] * al for j in range(1, d + 3)]
        rows.append(row)
    return PolyMatrix.from_rows(rows)


def unknown_words(d: int) -> list[OpWord]:
    """Words of the unknown vector (D_x u, D_x^{d+1} v, ..., S_x^{d+1} v)."""
    out = [OpWord([DX])]
    for j in range(1, d + 3):
        out.append(OpWord([DX] * (d + 2 - j) + [SX] * (j - 1)))
    return out


def row_equation_check(L: Lattice, mat: PolyMatrix, i: int, left: Poly,
                       u: Functional, v: Functional, d: int) -> Check:
    """D_x(left) S_x u = sum_j mat[i, j] * unknown_j."""
    words = unknown_words(d)
    lhs = [FunctionalExpr(u, OpWord([Mul(dx_poly(L, left)), SX]))]
    rhs = [FunctionalExpr(u if j == 0 else v, OpWord([Mul(mat[i, j])]) + words[j])
           for j in range(d + 3)]
    return compare_sides(L, f"row {i}", lhs, rhs)


def build_B_matrix(L: Lattice, entries: Sequence[LemmaEntry], spec: CoherenceSpec) -> PolyMatrix:
    d = spec.d
    if len(entries) < d + 3:
        raise CoherenceError(f"need Lemma entries n = 0..{d + 2}")
    return cramer_matrix(L, [e.psi for e in entries[:d + 3]],
                         [e.phi for e in entries[:d + 3]], d)


@dataclass
class TheoremSolution:
    Bdet: Poly
    pi1: Poly
    pi2: Poly
    pi3: Poly
    report: Report
    adjugate: PolyMatrix | None = None

    @property
    def pairs(self) -> dict:
        """(phi_i, psi_i) of the three conclusions."""
        return {
            "phi1 D_x u = psi1 S_x u": (self.Bdet, self.pi1),
            "phi2 S_x u = psi2 S_x^(d+1) v": (self.pi3, self.Bdet),
            "phi3 D_x S_x^d v = psi3 S_x^(d+1) v": (self.pi3, self.pi2),
        }

    def to_json(self) -> dict:
        return {
            "B": self.Bdet.to_json(),
            "pi1": self.pi1.to_json(),
            "pi2": self.pi2.to_json(),
            "pi3": self.pi3.to_json(),
            "pairs": {k: {"phi": p.to_json(), "psi": q.to_json()} for k, (p, q) in self.pairs.items()},
            "report": self.report.to_json(),
        }


def solve_cramer(L: Lattice, mat: PolyMatrix, left: Sequence[Poly],
                 u: Functional, v: Functional, d: int) -> TheoremSolution:
    det, adj = poly_matrix_det_adjugate(mat)
    if det.is_zero():
        raise DegenerateSystem("det of the Cramer matrix vanishes identically")
    n = d + 3
    dl = [dx_poly(L, left[i]) for i in range(n)]
    pis = [sum((adj[r, i] * dl[i] for i in range(n)), ZERO) for r in (0, d + 1, d + 2)]
    pi1, pi2, pi3 = pis
    rep = Report("cramer solve")
    prod = mat @ adj
    rep.add(Check("B adj(B) = det I",
                  [prod[i, j] - (det if i == j else ZERO) for i in range(n) for j in range(n)]))
    Sd = [SX] * d
    U = lambda *w: FunctionalExpr(u, OpWord(w))  # noqa: E731
    V = lambda *w: FunctionalExpr(v, OpWord(w))  # noqa: E731
    rep.add(compare_sides(L, "B D_x u = pi1 S_x u", [U(Mul(det), DX)], [U(Mul(pi1), SX)]))
    rep.add(compare_sides(L, "B D_x S_x^d v = pi2 S_x u",
                          [V(Mul(det), DX, *Sd)], [U(Mul(pi2), SX)]))
    rep.add(compare_sides(L, "B S_x^(d+1) v = pi3 S_x u",
                          [V(Mul(det), SX, *Sd)], [U(Mul(pi3), SX)]))
    rep.add(compare_sides(L, "pi3 D_x S_x^d v = pi2 S_x^(d+1) v",
                          [V(Mul(pi3), DX, *Sd)], [V(Mul(pi2), SX, *Sd)]))
    rep.notes["nonzero"] = {"pi1": not pi1.is_zero(), "pi2": not pi2.is_zero(),
                            "pi3": not pi3.is_zero()}
    return TheoremSolution(det, pi1, pi2, pi3, rep, adj)


def solve_theorem_system(L: Lattice, mat: PolyMatrix, entries: Sequence[LemmaEntry],
                         u: Functional, v: Functional, spec: CoherenceSpec) -> TheoremSolution:
    return solve_cramer(L, mat, [e.psi for e in entries], u, v, spec.d)


# ---------------------------------------------------------------------------
# full pipeline

@dataclass
class Analysis:
    report: Report
    outputs: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.report.passed

    def to_json(self) -> dict:
        return {"passed": self.passed, "report": self.report.to_json(),
                "outputs": jsonify(self.outputs)}


def _stage_failure(rep: Report, name: str, exc: Exception) -> None:
    rep.add(Check(name, [f"{type(exc).__name__}: {exc}"]))


def analyze_coherence(spec: CoherenceSpec) -> Analysis:
    """Coherence check, Lemma construction and the Cramer step, stage by stage.

    A stage that cannot be carried out is recorded as a failed check; the
    later stages that depend on it are skipped.
    """
    L = spec.lattice
    rep = Report("coherence analysis")
    out: dict = {}
    bad = spec.hypothesis_violations()
    rep.add(Check("hypotheses a_(0,n) = 1 = b_(0,n), a_(M,n) b_(N,n) != 0", bad))
    spec.ensure_ops()
    out["P"] = spec.P
    out["Q"] = spec.Q
    rep.extend(verify_coherence(spec).checks)

    A, det = build_A_matrix(spec)
    out["A"] = A.to_rows()
    out["detA"] = det
    entries: list[LemmaEntry] = []
    conns = []
    try:
        for n in range(spec.lemma_count):
            cc = solve_connection(spec, n)
            conns.append(cc)
            entries.append(construct_lemma_polys(spec, cc))
    except CoherenceError as exc:
        _stage_failure(rep, "lemma construction", exc)
    out["connection"] = conns
    out["lemma"] = entries
    for cc in conns:
        rep.add(Check(f"connection balance n={cc.n}", connection_balance(spec, cc)))
        norm = [cc.a_prime[-1] - spec.coef_b(spec.N, spec.M + spec.N + cc.n),
                cc.b_prime[-1] - spec.coef_a(spec.M, spec.M + spec.N + cc.n)]
        rep.add(Check(f"connection normalization n={cc.n}", norm))
    for e in entries:
        rep.extend(verify_dual_relation(L, e, spec.u, spec.v, spec.d).checks)
    if len(entries) < spec.lemma_count:
        return Analysis(rep, out)

    if spec.k == spec.m:
        e0 = entries[0]
        mp = ModPair(e0.psi, e0.phi)
        out["rational_modification"] = mp
        rep.extend(verify_modification(spec.u, spec.v, mp).checks)

    mat = build_B_matrix(L, entries, spec)
    out["B_matrix"] = mat
    for i, e in enumerate(entries):
        rep.add(row_equation_check(L, mat, i, e.psi, spec.u, spec.v, spec.d))
    try:
        sol = solve_theorem_system(L, mat, entries, spec.u, spec.v, spec)
    except DegenerateSystem as exc:
        if spec.k == spec.m:
            # the m = k conclusion does not use the Cramer step
            rep.notes["cramer"] = str(exc)
        else:
            _stage_failure(rep, "cramer solve", exc)
        return Analysis(rep, out)
    out["theorem"] = sol
    rep.extend(sol.report.checks)
    return Analysis(rep, out)


# ---------------------------------------------------------------------------
# pi_N-coherence (k = 0)

@dataclass
class PiCoherenceSpec:
    """pi_N P^{[m]}_n = sum_{j=n-M}^{n+N} c_{n,j} Q_j with N = deg pi_N.

    ``c[n][t]`` holds c_{n, n-M+t} for t = 0..M+N; entries with a negative
    column index are ignored.
    """

    lattice: Lattice
    u: Functional
    v: Functional
    pi: Poly
    m: int
    M: int
    c: list
    n_max: int
    P: OPSData | None = None
    Q: OPSData | None = None

    def __post_init__(self):
        if self.pi.is_zero():
            raise ValueError("pi_N must be nonzero")
        if min(self.m, self.M, self.n_max) < 0:
            raise ValueError("m, M, n_max must be non-negative")
        self.c = [[Fraction(x) for x in row] for row in self.c]
        width = self.M + self.N + 1
        if any(len(row) != width for row in self.c):
            raise ValueError(f"every row of c needs M+N+1 = {width} entries")
        need = max(self.n_max, self.m + 2 + self.M)
        if len(self.c) < need + 1:
            raise ValueError(f"c covers n <= {len(self.c) - 1}, need n <= {need}")

    @property
    def N(self) -> int:
        return int(self.pi.degree)

    def coef(self, n: int, j: int) -> Fraction:
        t = j - n + self.M
        if j < 0 or not 0 <= t <= self.M + self.N or n >= len(self.c):
            return Fraction(0)
        return self.c[n][t]

    @property
    def depth_P(self) -> int:
        return max(self.n_max, 2 + self.M + self.m) + self.m

    @property
    def depth_Q(self) -> int:
        return max(self.n_max + self.N, self.m + 2)

    def ensure_ops(self) -> None:
        if self.P is None or self.P.depth < self.depth_P:
            self.P = ops_from_moments(self.u, self.depth_P)
        if self.Q is None or self.Q.depth < self.depth_Q:
            self.Q = ops_from_moments(self.v, self.depth_Q)


def rho_poly(spec: PiCoherenceSpec, n: int) -> Poly:
    spec.ensure_ops()
    L, m = spec.lattice, spec.m
    hv = spec.Q.h(n)
    out = ZERO
    for j in range(max(0, n - spec.N), n + spec.M + 1):
        c = spec.coef(j, n)
        if c:
            w = (-1) ** m * c * gamma_factorial(L, m + j) * hv / (
                gamma_factorial(L, j) * spec.P.h(m + j))
            out = out + spec.P.P(m + j) * w
    return out


def analyze_pi_coherence(spec: PiCoherenceSpec) -> Analysis:
    L, m, M = spec.lattice, spec.m, spec.M
    rep = Report("pi-coherence analysis")
    out: dict = {}
    spec.ensure_ops()
    Pm = normalized_derivative(L, spec.P, m, spec.n_max + 1)
    res = []
    for n in range(spec.n_max + 1):
        rhs = sum((spec.Q.P(j) * spec.coef(n, j)
                   for j in range(max(0, n - M), n + spec.N + 1)), ZERO)
        res.append(spec.pi * Pm[n] - rhs)
    rep.add(Check("pi_N P^[m]_n = sum c_(n,j) Q_j", res, (0, spec.n_max)))
    lead = [f"c_({n},{n - M}) = 0" for n in range(M, spec.n_max + 1) if spec.coef(n, n - M) == 0]
    rep.add(Check("c_(n,n-M) != 0", lead))

    rhos = [rho_poly(spec, n) for n in range(m + 3)]
    out["rho"] = rhos
    rep.add(Check("deg rho_(M+m+n) = M+m+n",
                  [f"n={n}: deg {r.degree}" for n, r in enumerate(rhos) if r.degree != M + m + n]))
    right = [spec.pi * spec.Q.P(i) for i in range(m + 3)]
    for n in range(m + 3):
        lhs, rhs = dual_relation_sides(spec.u, spec.v, rhos[n], right[n], m)
        rep.add(compare_sides(L, f"rho u = D_x^{m}(pi_N Q_n v), n={n}", lhs, rhs))
    if not rep.passed:
        return Analysis(rep, out)

    if m == 0:
        mp = ModPair(rhos[0], spec.pi)
        out["rational_modification"] = mp
        rep.extend(verify_modification(spec.u, spec.v, mp).checks)

    mat = cramer_matrix(L, rhos, right, m)
    out["C_matrix"] = mat
    for i in range(m + 3):
        rep.add(row_equation_check(L, mat, i, rhos[i], spec.u, spec.v, m))
    try:
        sol = solve_cramer(L, mat, rhos, spec.u, spec.v, m)
    except DegenerateSystem as exc:
        if m == 0:
            # the m = 0 conclusion is the rational modification above
            rep.notes["cramer"] = str(exc)
        else:
            _stage_failure(rep, "cramer solve", exc)
        return Analysis(rep, out)
    out["theorem"] = sol
    rep.extend(sol.report.checks)
    return Analysis(rep, out)
