"""Seeded randomized run of every operator identity on one lattice."""
from __future__ import annotations

import random
from fractions import Fraction

from .functional import Functional, check_functional_identities, check_leibniz
from .lattice import Lattice
from .linalg import Poly
from .ops import check_grid, check_poly_identities
from .report import Check, Report

HEIGHT = 9
GRID_POINTS = tuple(range(-10, 10))


def random_rational(rng: random.Random, height: int = HEIGHT) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_poly(rng: random.Random, max_degree: int, height: int = HEIGHT) -> Poly:
    deg = rng.randint(0, max_degree)
    return Poly([random_rational(rng, height) for _ in range(deg + 1)])


def random_functional(rng: random.Random, order: int, height: int = HEIGHT) -> Functional:
    return Functional([random_rational(rng, height) for _ in range(order + 1)])


def _prefixed(prefix: str, rep: Report) -> list[Check]:
    return [Check(f"{prefix} {c.name}", c.residuals, c.j_range) for c in rep.checks]


def identity_suite(L: Lattice, seed: int, max_degree: int = 8, trials: int = 25,
                   order: int = 24, n_comm: int = 4, n_leibniz: int = 4) -> Report:
    """Grid, polynomial, functional, commutation and Leibniz identities on
    ``trials`` random (f, g, u) triples drawn from ``random.Random(seed)``."""
    if max_degree < 0 or trials < 0 or order < 0:
        raise ValueError("max_degree, trials and order must be non-negative")
    rng = random.Random(seed)
    rep = Report("identities")
    for t in range(trials):
        f = random_poly(rng, max_degree)
        g = random_poly(rng, max_degree)
        u = random_functional(rng, order)
        tag = f"trial {t}:"
        rep.extend(_prefixed(tag, check_grid(L, f, GRID_POINTS)))
        rep.extend(_prefixed(tag, check_poly_identities(L, f, g)))
        rep.extend(_prefixed(tag, check_functional_identities(L, f, u, n_comm)))
        for n in range(n_leibniz + 1):
            rep.extend(_prefixed(tag, check_leibniz(L, f, u, n)))
    rep.notes["seed"] = seed
    rep.notes["max_degree"] = max_degree
    rep.notes["trials"] = trials
    rep.notes["order"] = order
    return rep
