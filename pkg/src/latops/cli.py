"""``latops`` command line.

Exit status: 0 when every check passes, 1 when some residual is nonzero
(the report is still written), 2 on malformed input or when a requested
check needs more moments than the input provides.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .coherence import (CoherenceError, CoherenceSpec, PiCoherenceSpec, analyze_coherence,
                        analyze_pi_coherence)
from .functional import Functional, OrderError, RegularityError, ops_from_moments
from .identities import identity_suite
from .lattice import Lattice, LatticeError
from .linalg import Poly, parse_rational
from .report import jsonify
from .semiclassical import detect_semiclassical, solve_rational_modification


class InputError(Exception):
    """Bad input; the message names the offending file or field."""


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _field(data: dict, key: str, where: str) -> Any:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    if key not in data:
        raise InputError(f"{where}: missing field '{key}'")
    return data[key]


def _parse(what: str, fn: Callable, data: Any):
    try:
        return fn(data)
    except (ValueError, TypeError, LatticeError) as exc:
        raise InputError(f"{what}: {exc}") from None


def _int(data: dict, key: str, where: str) -> int:
    x = _field(data, key, where)
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise InputError(f"{where}: field '{key}' must be a non-negative integer")
    return x


def _table(data: dict, key: str, where: str) -> list[list]:
    tab = _field(data, key, where)
    if not isinstance(tab, list) or not all(isinstance(r, list) for r in tab):
        raise InputError(f"{where}: field '{key}' must be a list of lists")
    return [[_parse(f"{where}: {key}[{i}][{j}]", _rational, x) for j, x in enumerate(row)]
            for i, row in enumerate(tab)]


def _rational(x):
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ValueError(f"expected a rational string, got {x!r}")


def load_lattice(data: Any, where: str) -> Lattice:
    return _parse(where, Lattice.from_json, data)


def load_functional(data: Any, where: str) -> Functional:
    return _parse(where, Functional.from_json, data)


def load_coherence_spec(data: Any, where: str) -> CoherenceSpec:
    w = where
    kw = {k: _int(data, k, w) for k in ("M", "N", "k", "m", "n_max")}
    parts = dict(
        lattice=load_lattice(_field(data, "lattice", w), f"{w}: lattice"),
        u=load_functional(_field(data, "u", w), f"{w}: u"),
        v=load_functional(_field(data, "v", w), f"{w}: v"),
        a=_table(data, "a", w), b=_table(data, "b", w))
    try:
        return CoherenceSpec(**parts, **kw)
    except ValueError as exc:
        raise InputError(f"{w}: {exc}") from None


def load_pi_spec(data: Any, where: str) -> PiCoherenceSpec:
    w = where
    pi = _field(data, "pi", w)
    if not isinstance(pi, list):
        raise InputError(f"{w}: field 'pi' must be a coefficient array")
    parts = dict(
        lattice=load_lattice(_field(data, "lattice", w), f"{w}: lattice"),
        u=load_functional(_field(data, "u", w), f"{w}: u"),
        v=load_functional(_field(data, "v", w), f"{w}: v"),
        pi=Poly(_parse(f"{w}: pi[{i}]", _rational, x) for i, x in enumerate(pi)),
        m=_int(data, "m", w), M=_int(data, "M", w), n_max=_int(data, "n_max", w),
        c=_table(data, "c", w))
    try:
        return PiCoherenceSpec(**parts)
    except ValueError as exc:
        raise InputError(f"{w}: {exc}") from None


# ---------------------------------------------------------------------------
# commands; each returns (report dict, passed)

def cmd_identities(args) -> tuple[dict, bool]:
    L = load_lattice(_load_json(args.lattice), args.lattice)
    rep = identity_suite(L, args.seed, max_degree=args.max_degree, trials=args.trials)
    return {"command": "identities", "lattice": L.to_json(), **rep.to_json()}, rep.passed


def cmd_ops(args) -> tuple[dict, bool]:
    u = load_functional(_load_json(args.moments), args.moments)
    ops = ops_from_moments(u, args.n_max)
    return {"command": "ops", "n_max": args.n_max, "passed": True, "ops": ops.to_json()}, True


def cmd_semiclassical(args) -> tuple[dict, bool]:
    L = load_lattice(_load_json(args.lattice), args.lattice)
    u = load_functional(_load_json(args.moments), args.moments)
    res = detect_semiclassical(L, u, args.deg_phi, args.deg_psi, args.n_eq)
    ok = res.report.passed
    return {"command": "semiclassical detect", **res.to_json(), "passed": ok}, ok


def cmd_modification(args) -> tuple[dict, bool]:
    u = load_functional(_load_json(args.u), args.u)
    v = load_functional(_load_json(args.v), args.v)
    res = solve_rational_modification(u, v, args.deg_pi2, args.deg_pi1, args.n_eq)
    ok = res.report.passed
    return {"command": "modification solve", **res.to_json(), "passed": ok}, ok


def cmd_coherence(args) -> tuple[dict, bool]:
    path = args.spec_file or args.spec
    if path is None:
        raise InputError("coherence analyze: a spec file is required")
    spec = load_coherence_spec(_load_json(path), path)
    an = analyze_coherence(spec)
    return {"command": "coherence analyze", **an.to_json()}, an.passed


def cmd_pi_coherence(args) -> tuple[dict, bool]:
    path = args.spec_file or args.spec
    if path is None:
        raise InputError("pi-coherence: a spec file is required")
    spec = load_pi_spec(_load_json(path), path)
    an = analyze_pi_coherence(spec)
    return {"command": "pi-coherence", **an.to_json()}, an.passed


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latops", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    p = sub.add_parser("identities", help="randomized operator identity suite")
    p.add_argument("--lattice", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--trials", type=int, default=25)
    common(p)
    p.set_defaults(run=cmd_identities)

    p = sub.add_parser("ops", help="monic OPS and recurrence coefficients from moments")
    p.add_argument("--moments", required=True)
    p.add_argument("--n-max", type=int, required=True)
    common(p)
    p.set_defaults(run=cmd_ops)

    p = sub.add_parser("semiclassical", help="Pearson pairs")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("detect")
    q.add_argument("--lattice", required=True)
    q.add_argument("--moments", required=True)
    q.add_argument("--deg-phi", type=int, required=True)
    q.add_argument("--deg-psi", type=int, required=True)
    q.add_argument("--n-eq", type=int, required=True)
    common(q)
    q.set_defaults(run=cmd_semiclassical)

    p = sub.add_parser("modification", help="rational modifications pi2 u = pi1 v")
    msub = p.add_subparsers(dest="action", required=True)
    q = msub.add_parser("solve")
    q.add_argument("--u", required=True, help="moments of u")
    q.add_argument("--v", required=True, help="moments of v")
    q.add_argument("--deg-pi2", type=int, required=True)
    q.add_argument("--deg-pi1", type=int, required=True)
    q.add_argument("--n-eq", type=int, required=True)
    common(q)
    q.set_defaults(run=cmd_modification)

    p = sub.add_parser("coherence", help="coherent pair pipeline")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("analyze")
    q.add_argument("spec_file", nargs="?")
    q.add_argument("--spec")
    common(q)
    q.set_defaults(run=cmd_coherence)

    p = sub.add_parser("pi-coherence", help="pi_N-coherence pipeline")
    p.add_argument("spec_file", nargs="?")
    p.add_argument("--spec")
    common(p)
    p.set_defaults(run=cmd_pi_coherence)
    return ap


def _validate(args) -> None:
    for name in ("n_max", "n_eq", "deg_phi", "deg_psi", "deg_pi1", "deg_pi2", "max_degree", "trials"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            raise InputError(f"--{name.replace('_', '-')} must be non-negative")


def dumps(report: dict) -> str:
    return json.dumps(jsonify(report), sort_keys=True, indent=1) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        _validate(args)
        report, passed = args.run(args)
    except (InputError, OrderError, RegularityError, CoherenceError, LatticeError) as exc:
        print(f"latops: error: {exc}", file=sys.stderr)
        return 2
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
