"""Desk-scale instances built from Bell (Poisson(1)) moments on x(s) = s.

* ``christoffel``: v = z u, so P_n = Q_n + e_n Q_{n-1}  ((M,N) = (0,1), k = m = 0).
* ``shifted_poisson``: v is u shifted by 1/2, so P^{[1]}_n = Q_n  (M = N = 0, k = 1, m = 0).
* ``pi_christoffel``: z P_n = sum_{j=n-2}^{n+1} c_{n,j} Q_j with v = z u  (M = 2, m = 0).

Run ``python -m latops.fixtures DIR`` to write them as JSON.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction
from math import comb
from pathlib import Path

from .coherence import CoherenceSpec, PiCoherenceSpec
from .functional import Functional, ops_from_moments
from .lattice import Lattice, quadratic_lattice
from .linalg import Poly, format_rational

DEFAULT_ORDER = 40


def identity_lattice() -> Lattice:
    return quadratic_lattice(0, 1, 0)


def bell_numbers(count: int) -> list[int]:
    """First ``count`` Bell numbers via the Bell triangle."""
    out = [1]
    row = [1]
    while len(out) < count:
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out[:count]


def bell_functional(order: int = DEFAULT_ORDER) -> Functional:
    return Functional(bell_numbers(order + 1))


def christoffel_of(u: Functional) -> Functional:
    """Moments of z u."""
    return Functional(u.moments[1:])


def shifted(u: Functional, c) -> Functional:
    """Moments of the functional f |-> <u, f(z + c)>."""
    c = Fraction(c)
    mu = u.moments
    return Functional(tuple(sum((comb(n, j) * c ** (n - j) * mu[j] for j in range(n + 1)), Fraction(0))
                            for n in range(len(mu))))


def christoffel(n_max: int = 6, order: int = DEFAULT_ORDER, u: Functional | None = None,
                lattice: Lattice | None = None) -> CoherenceSpec:
    """The relation has no derivatives, so any regular u on any lattice works."""
    u = bell_functional(order) if u is None else u
    v = christoffel_of(u)
    P = ops_from_moments(u, n_max + 2)
    Q = ops_from_moments(v, n_max + 2)
    e = [Fraction(1)]  # b_{1,0} multiplies Q_{-1} = 0; any nonzero value will do
    for n in range(1, n_max + 1):
        e.append(v.pair(P.P(n) * Q.P(n - 1)) / Q.h(n - 1))
    ones = [Fraction(1)] * (n_max + 1)
    return CoherenceSpec(lattice or identity_lattice(), u, v, k=0, m=0, M=0, N=1,
                         a=[ones], b=[list(ones), e], n_max=n_max)


def shifted_poisson(n_max: int = 5, order: int = DEFAULT_ORDER) -> CoherenceSpec:
    u = bell_functional(order)
    # the last two moments of v would never enter a pairing
    v = shifted(u, Fraction(1, 2)).truncate(order - 2)
    ones = [Fraction(1)] * (n_max + 1)
    return CoherenceSpec(identity_lattice(), u, v, k=1, m=0, M=0, N=0,
                         a=[ones], b=[list(ones)], n_max=n_max)


def pi_christoffel(n_max: int = 6, order: int = DEFAULT_ORDER) -> PiCoherenceSpec:
    u = bell_functional(order)
    v = christoffel_of(u)
    pi = Poly([0, 1])
    M, N = 2, 1
    P = ops_from_moments(u, n_max + 2)
    Q = ops_from_moments(v, n_max + N + 2)
    rows = []
    for n in range(n_max + 1):
        row = []
        for j in range(n - M, n + N + 1):
            row.append(v.pair(pi * P.P(n) * Q.P(j)) / Q.h(j) if j >= 0 else Fraction(0))
        rows.append(row)
    return PiCoherenceSpec(identity_lattice(), u, v, pi=pi, m=0, M=M, c=rows, n_max=n_max)


def _table_json(tab) -> list:
    return [[format_rational(x) for x in row] for row in tab]


def coherence_spec_json(spec: CoherenceSpec) -> dict:
    return {
        "lattice": spec.lattice.to_json(),
        "u": spec.u.to_json(),
        "v": spec.v.to_json(),
        "M": spec.M, "N": spec.N, "k": spec.k, "m": spec.m,
        "a": _table_json(spec.a),
        "b": _table_json(spec.b),
        "n_max": spec.n_max,
    }


def pi_spec_json(spec: PiCoherenceSpec) -> dict:
    return {
        "lattice": spec.lattice.to_json(),
        "u": spec.u.to_json(),
        "v": spec.v.to_json(),
        "pi": spec.pi.to_json(),
        "m": spec.m, "M": spec.M,
        "c": _table_json(spec.c),
        "n_max": spec.n_max,
    }


def write_all(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "lattice_identity.json": identity_lattice().to_json(),
        "lattice_square.json": quadratic_lattice(1, 0, 0).to_json(),
        "lattice_q2.json": Lattice("q", (0, 1, 0), Fraction(2)).to_json(),
        "lattice_q3_2.json": Lattice("q", (Fraction(1, 2), Fraction(1, 2), 0), Fraction(3, 2)).to_json(),
        "bell.json": bell_functional().to_json(),
        "bell_christoffel.json": christoffel_of(bell_functional()).to_json(),
        "christoffel.json": coherence_spec_json(christoffel()),
        "shifted_poisson.json": coherence_spec_json(shifted_poisson()),
        "pi_christoffel.json": pi_spec_json(pi_christoffel()),
    }
    out = []
    for name, data in files.items():
        path = directory / name
        path.write_text(json.dumps(data, indent=1) + "\n")
        out.append(path)
    return out


if __name__ == "__main__":
    for p in write_all(Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")):
        print(p)
