"""Residual reports shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .linalg import Poly, format_rational


def _is_zero(r) -> bool:
    if isinstance(r, Poly):
        return r.is_zero()
    return r == 0


def _jsonify(x) -> Any:
    if isinstance(x, Poly):
        return x.to_json()
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


@dataclass(frozen=True)
class Check:
    """One identity: its residuals (rationals or polynomials) and, when the
    residuals come from pairings with z^j, the inclusive range of j."""

    name: str
    residuals: tuple
    j_range: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "residuals", tuple(self.residuals))

    @property
    def passed(self) -> bool:
        return all(_is_zero(r) for r in self.residuals)

    def to_json(self) -> dict:
        d = {"passed": self.passed, "residuals": _jsonify(list(self.residuals))}
        if self.j_range is not None:
            d["residual_range"] = list(self.j_range)
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def extend(self, checks: Sequence[Check]) -> None:
        self.checks.extend(checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": {c.name: c.to_json() for c in self.checks},
            **({"notes": _jsonify(self.notes)} if self.notes else {}),
        }


jsonify = _jsonify
