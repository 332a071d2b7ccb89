"""Command-line driver: ``hodgecorr <command> [flags]``.

Every command prints a JSON report (also written to ``--out`` when given) and
exits 0 iff its checks pass.  Bad flags or unparsable words exit 2.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
import re
import sys
import time
from typing import Callable, Sequence

from hodgecorr import __version__

COMMANDS = (
    "enumerate",
    "check-d2",
    "check-qme",
    "check-bv",
    "correlator",
    "one-loop",
    "green-elliptic",
    "kz-check",
    "mc-residual",
)

_COMPLEX = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?([+-]?(\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?[ij])?$")


def parse_complex(text: str, z: complex | None = None) -> complex:
    """``"2"``, ``"i"``, ``"-1+0.5i"``, ``"3j"`` or the symbol ``z``.

    >>> parse_complex("1-2i"), parse_complex("i"), parse_complex("z", 2)
    ((1-2j), 1j, (2+0j))
    """
    t = text.strip().replace(" ", "")
    if t == "z":
        if z is None:
            raise ValueError("the word uses z but --z was not given")
        return complex(z)
    if not t or not _COMPLEX.match(t):
        raise ValueError(f"cannot parse position {text!r}")
    t = t.replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    t = re.sub(r"([+-])j$", r"\g<1>1j", t)
    return complex(t)


def parse_word(text: str, z: complex | None) -> list[complex]:
    letters = [x for x in text.split(",") if x.strip()]
    if not letters:
        raise ValueError("empty word")
    return [parse_complex(x, z) for x in letters]


def _hash(args: argparse.Namespace) -> str:
    data = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "func", "timings")}
    return hashlib.sha256(json.dumps(data, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _cpx(c: complex) -> list[float]:
    return [c.real, c.imag]


# ---------------------------------------------------------------------------
# Commands; each returns (checks: dict[name, bool], payload)


def cmd_enumerate(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.effective_action import _multisets
    from hodgecorr.graph_core import alphabet, enumerate_graphs, graph_to_json

    codes = alphabet(a.s, a.genus)
    max_legs = (a.max_edges + 3) // 2
    found = {}
    for ms in _multisets(codes, max_legs):
        for g in enumerate_graphs(list(ms), a.loops, a.max_edges):
            found.setdefault(g.key, g)
    out = []
    for key in sorted(found):
        g = found[key]
        out.append({"graph": str(g), "aut": g.aut, "json": graph_to_json(g)})
    return {}, out


def cmd_check_d2(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.graph_complex import GraphVector, d_total
    from hodgecorr.graph_core import alphabet, enumerate_decorated_graphs

    graphs = enumerate_decorated_graphs(alphabet(a.s, a.genus), a.max_edges)
    bad = []
    for g in graphs:
        r = d_total(d_total(GraphVector.from_canonical(g), a.genus), a.genus)
        if r:
            bad.append(str(g))
    return {"d_squared_zero": not bad}, {"graphs": len(graphs), "failures": bad}


def cmd_check_qme(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.effective_action import build_action, qme_residual

    act = build_action(a.s, a.genus, a.max_edges)
    res = qme_residual(act)
    return {"qme_closure_safe_zero": res.ok}, {"terms": len(act), "counts": res.counts(), "components": res.report()}


def cmd_check_bv(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.bv import (
        BVPolynomial,
        bracket_via_derivatives,
        bracket_via_laplacian,
        bv_laplacian,
        jacobi_residual,
        qme_homotopy,
        random_polynomial,
    )

    rng = random.Random(a.seed)
    n = a.samples if a.samples is not None else 200
    sq = jac = agree = 0
    for _ in range(n):
        m = rng.randint(1, 3)
        f, g, h = (random_polynomial(rng, m, 4, 4, parity=rng.randint(0, 1)) for _ in range(3))
        if bv_laplacian(bv_laplacian(f)):
            sq += 1
        if bracket_via_laplacian(f, g) != bracket_via_derivatives(f, g):
            agree += 1
        j = jacobi_residual(f, g, h)
        if j:
            jac += 1
    # H = 0: with B = 0 the homotopy equation reduces to dS/dt = 0
    m = 1
    S = BVPolynomial.t(m) * BVPolynomial.x(m, 1) * BVPolynomial.x(m, 1)
    _, second = qme_homotopy(S, BVPolynomial(m))
    S0 = BVPolynomial.x(m, 1) * BVPolynomial.x(m, 1)
    _, second0 = qme_homotopy(S0, BVPolynomial(m))
    checks = {
        "laplacian_squares_to_zero": sq == 0,
        "graded_jacobi": jac == 0,
        "bracket_formulas_agree": agree == 0,
        "homotopy_forces_constancy": bool(second) and not second0,
    }
    return checks, {"polynomials": n, "failures": {"laplacian": sq, "jacobi": jac, "bracket": agree}}


def _word_target(pts: Sequence[complex]) -> tuple[complex | None, str]:
    from hodgecorr.correlator import levin_polylog, sv_polylog

    n = len(pts)
    if n == 2:
        if pts[0] == pts[1]:
            return 0j, "zero (repeated point)"
        return complex(math.log(abs(pts[0] - pts[1]))), "log|s1 - s2|"
    if n == 3 and len(set(pts)) == 3:
        r = (pts[2] - pts[0]) / (pts[1] - pts[0])
        return -sv_polylog(2, r), "-L2(cross ratio)"
    if n >= 4 and pts[0] == 1 and all(p == 0 for p in pts[2:]) and pts[1] not in (0, 1):
        return -levin_polylog(n - 1, pts[1]), f"-Levin L{n - 1}(z)"
    return None, "none"


def cmd_correlator(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.correlator import QuadratureConfig, correlator_tree

    pts = parse_word(a.word, a.z)
    cfg = QuadratureConfig(seed=a.seed, samples=a.samples or 2_000_000)
    r = correlator_tree(pts, cfg, label=a.word)
    target, what = _word_target(pts)
    payload = {"word": a.word, **r.to_dict(), "target": None if target is None else _cpx(target), "target_kind": what}
    checks = {}
    if target is not None:
        diff = abs(r.value - target)
        payload["abs_diff"] = diff
        checks["matches_target"] = diff <= a.tol * max(1.0, abs(target))
    return checks, payload


def cmd_one_loop(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.correlator import QuadratureConfig, correlator_one_loop, correlator_twistor
    from hodgecorr.graph_core import Label, from_vertex_form

    pts = parse_word(a.word, a.z)
    k = len(pts)
    if k < 1:
        raise ValueError("need at least one leg")
    # polygon with one leg per internal vertex; k = 1 is the tadpole, which is a zero pattern
    labels = [Label("s", i + 1).code for i in range(k)] + [0] * k
    edges = [(i, k + i) for i in range(k)] + [(k + i, k + (i + 1) % k) for i in range(k)]
    if k == 1:
        edges = [(0, 1), (1, 1)]
        labels = labels[:2]
    g = from_vertex_form(labels, edges)
    cfg = QuadratureConfig(seed=a.seed, samples=a.samples or 1_000_000)
    positions = {i + 1: p for i, p in enumerate(pts)}
    r = correlator_one_loop(g, positions, cfg) if a.u is None else correlator_twistor(g, a.u, positions, cfg)
    payload = {"word": a.word, **r.to_dict(), "label": f"polygon-{k}"}
    return {"finite": math.isfinite(abs(r.value)) and math.isfinite(r.error)}, payload


def cmd_green_elliptic(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.green import LatticeCutoff, green_elliptic

    cut = LatticeCutoff(a.cutoff)
    v, tail = green_elliptic(a.tau, a.z, cut)
    vm, _ = green_elliptic(a.tau, -a.z, cut)
    v2, _ = green_elliptic(a.tau, a.z, cut.doubled())
    checks = {"even": v == vm, "cutoff_doubling_stable": abs(v - v2) < a.tol}
    return checks, {"tau": _cpx(a.tau), "z": _cpx(a.z), "value": v, "tail": tail, "doubled": v2}


def cmd_kz_check(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.kz import g11_derivation_form, kz_compare

    r1, r0 = kz_compare(1), kz_compare(0)
    return {"u1_residual_zero": r1.is_zero(), "u0_residual_zero": r0.is_zero()}, {
        "g11": g11_derivation_form().report(),
        "residual_u1": r1.report(),
        "residual_u0": r0.report(),
    }


def cmd_mc_residual(a: argparse.Namespace) -> tuple[dict, object]:
    from hodgecorr.correlator import mc_residual_component

    z = a.z if a.z is not None else 2 + 0j
    u = float(a.u.real) if a.u is not None else 0.3
    two = mc_residual_component("two-leg", u, (z, 0.5j))
    three = mc_residual_component("three-star", u, (-1, 1, z))
    tol = a.tol if a.tol is not None else 1e-2
    return {"two_leg": two < 1e-4, "three_star": three < tol}, {
        "z": _cpx(z),
        "u": u,
        "two_leg_residual": two,
        "three_star_residual": three,
    }


HANDLERS: dict[str, Callable[[argparse.Namespace], tuple[dict, object]]] = {
    "enumerate": cmd_enumerate,
    "check-d2": cmd_check_d2,
    "check-qme": cmd_check_qme,
    "check-bv": cmd_check_bv,
    "correlator": cmd_correlator,
    "one-loop": cmd_one_loop,
    "green-elliptic": cmd_green_elliptic,
    "kz-check": cmd_kz_check,
    "mc-residual": cmd_mc_residual,
}


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hodgecorr", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--s", type=int, default=2, help="number of S-labels")
        sp.add_argument("--genus", type=int, default=0)
        sp.add_argument("--loops", type=int, default=1)
        sp.add_argument("--max-edges", type=int, default=4)
        sp.add_argument("--word", default="0,1,z", help='comma-separated positions, e.g. "0,1,z"')
        sp.add_argument("--z", type=_complex_arg, default=None)
        sp.add_argument("--u", type=_complex_arg, default=None)
        sp.add_argument("--tau", type=_complex_arg, default=1j)
        sp.add_argument("--cutoff", type=float, default=64.0)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--timings", action="store_true", help="add wall-clock timings (breaks byte-for-byte reproducibility)")
    return p


_DEFAULT_TOL = {"correlator": 1e-3, "green-elliptic": 1e-6}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.tol is None and a.command in _DEFAULT_TOL:
        a.tol = _DEFAULT_TOL[a.command]
    if a.command == "green-elliptic" and a.z is None:
        a.z = complex(0.5, 0.5)
    t0 = time.perf_counter()
    try:
        checks, payload = HANDLERS[a.command](a)
    except ValueError as e:
        parser.print_usage(sys.stderr)
        print(f"hodgecorr: error: {e}", file=sys.stderr)
        return 2
    report = {
        "command": a.command,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "config_hash": _hash(a),
        "version": __version__,
        "checks": checks,
        "ok": all(checks.values()),
        "result": payload,
    }
    if a.timings:
        report["seconds"] = time.perf_counter() - t0
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["ok"] else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
