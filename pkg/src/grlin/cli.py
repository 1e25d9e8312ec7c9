"""Command line: ranks, verification suites, certificate checks, regrading, tuple evaluation, Cramer splits.

Exit codes: 0 success, 1 failed check or counterexample, 2 parse or schema error, 3 distribution violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gdlin, loc, mideal, rank
from .grp import GroupError
from .hmat import DistributionError, HMatrix, MalformedWitness, ShapeError, apply_hom_matrix, fmt_matrix, \
    matrix_from_json, matrix_to_json
from .ring import GradedElement, RingError, catalog_hom, ring_from_json

SCHEMA = "grlin/1"
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DIST = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _plain(x):
    """JSON-ready form of library objects."""
    if isinstance(x, GradedElement):
        return x.ring.element_to_json(x)
    if isinstance(x, HMatrix):
        return matrix_to_json(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return str(x)
    return repr(x)


def _emit(payload: dict, as_json: bool, out=None):
    out = out or sys.stdout
    payload = dict(payload)
    payload["schema"] = SCHEMA
    if as_json:
        out.write(json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n")
        return
    for k in sorted(payload):
        v = payload[k]
        if isinstance(v, HMatrix):
            out.write(f"{k}:\n{fmt_matrix(v)}\n")
        elif isinstance(v, (dict, list)):
            out.write(f"{k}: {json.dumps(_plain(v), sort_keys=True)}\n")
        else:
            out.write(f"{k}: {v}\n")


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _ring(spec: str):
    if spec.startswith("catalog:"):
        spec = spec.split(":", 1)[1]
    if spec.endswith(".json"):
        return ring_from_json(_load_json(spec))
    return ring_from_json(spec)


def _matrix_arg(R, path: str) -> HMatrix:
    d = _load_json(path)
    if isinstance(d, dict) and "matrix" in d:
        d = d["matrix"]
    return matrix_from_json(R, d)


def cmd_rank(args) -> int:
    R = _ring(args.ring)
    A = _matrix_arg(R, args.matrix)
    if args.hom:
        f = catalog_hom(args.hom)
        if f.source is not R:
            raise UsageError(f"{args.hom} does not start at {R.name}")
        B = apply_hom_matrix(f, A)
    else:
        if not R.is_graded_division:
            raise UsageError(f"{R.name} is not a graded division ring; pass --hom")
        B = A
    ech = gdlin.echelon(B, "row")
    payload = {"ring": R.name, "rank": ech.rank, "shape": list(A.shape)}
    if args.hom:
        payload["hom"] = args.hom
    if args.certificate:
        payload["echelon"] = ech.matrix
        payload["transform"] = ech.transform
        payload["pivots"] = [list(p) for p in ech.pivots]
    _emit(payload, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import examples, suites
    if args.suite == "examples":
        names = [args.name] if args.name else list(examples.EXAMPLE_NAMES)
        res = {n: examples.run_example(n) for n in names}
        passed = all(r["passed"] for r in res.values())
        _emit({"suite": "examples", "seed": args.seed, "passed": passed, "results": res}, args.json)
        return EXIT_OK if passed else EXIT_FAIL
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    res = suites.run_suite(args.suite, args.ring, args.seed, args.budget, args.hom)
    res["seed"] = args.seed
    _emit(res, args.json)
    return EXIT_OK if res["passed"] else EXIT_FAIL


def _bundled_cert(kind: str, name: str) -> dict:
    from . import examples
    if kind == "malcolmson":
        for fname, c, sigma, f in examples.malcolmson_fixtures():
            if fname == name:
                return {"ring": c.L.ring.name, "sigma": f.name, "certificate": loc.cert_to_json(c)}
    elif name == "ab-decomposition":
        target, cert = examples.ab_decomposition()
        return {"ring": target.ring.name, "certificate": mideal.cert_to_json(cert)}
    raise UsageError(f"no bundled {kind} certificate named {name!r}")


def cmd_check_cert(args) -> int:
    if args.file.startswith("bundled:"):
        d = _bundled_cert(args.kind, args.file.split(":", 1)[1])
    else:
        d = _load_json(args.file)
    if not isinstance(d, dict) or "ring" not in d or "certificate" not in d:
        raise UsageError("certificate file needs 'ring' and 'certificate'")
    R = ring_from_json(d["ring"])
    if args.kind == "malcolmson":
        if "sigma" not in d:
            raise UsageError("malcolmson certificate needs 'sigma' (a map whose invertible matrices form Sigma)")
        f = catalog_hom(d["sigma"])
        c = loc.cert_from_json(R, d["certificate"])
        v = loc.malcolmson_verify(c, loc.inverting_set_of(f))
        payload = {"kind": "malcolmson", "accepted": v.ok, "reason": v.reason,
                   "cell": list(v.cell) if v.cell else None}
        if v.ok:
            fr, chain = loc.malcolmson_soundness(c, f)
            payload["image_of_r"] = fr
    else:
        gens = [matrix_from_json(R, g) for g in d.get("generators", [])]
        c = mideal.cert_from_json(R, d["certificate"])
        ok = mideal.verify_derivation(c, gens)
        payload = {"kind": "derivation", "accepted": ok, "depth": mideal.depth(c), "size": mideal.size(c)}
    _emit(payload, args.json)
    return EXIT_OK if payload["accepted"] else EXIT_FAIL


def cmd_regrade(args) -> int:
    from .regrade import regrade_matrix, regrade_ring
    R = _ring(args.ring)
    A = _matrix_arg(R, args.matrix)
    omega = "all" if args.omega == "all" else ([] if args.omega == "" else
                                                [json.loads(x) for x in args.omega.split(";")])
    view = regrade_ring(R, omega)
    B = regrade_matrix(A, view)
    G = view.group
    payload = {"ring": view.name, "alpha": [G.to_json(a) for a in B.alpha], "beta": [G.to_json(b) for b in B.beta],
               "rows": [[R.element_to_json(x) for x in r] for r in B.rows]}
    _emit(payload, args.json)
    return EXIT_OK


def cmd_eval_tuple(args) -> int:
    d = _load_json(args.file)
    if not isinstance(d, dict) or "ring" not in d or "tuple" not in d:
        raise UsageError("tuple file needs 'ring' and 'tuple'")
    R = ring_from_json(d["ring"])
    f = catalog_hom(args.hom or d.get("hom", f"id_{R.name}"))
    t = loc.tuple_from_json(R, d["tuple"])
    v = t.check()
    if not v:
        raise DistributionError(v.reason, v.cell)
    _emit({"value": loc.tuple_eval(f, t), "hom": f.name, "degree": R.group.to_json(t.gamma)}, args.json)
    return EXIT_OK


def cmd_cramer(args) -> int:
    d = _load_json(args.file)
    if not isinstance(d, dict) or not {"ring", "A", "u"} <= set(d):
        raise UsageError("Cramer file needs 'ring', 'A' and 'u'")
    R = ring_from_json(d["ring"])
    f = catalog_hom(args.hom or d.get("hom", f"id_{R.name}"))
    A = matrix_from_json(R, d["A"])
    u = matrix_from_json(f.target, d["u"])
    res = loc.cramer_split(A, u, f)
    payload = {"x": res.x, "x_invertible": res.x_invertible, "numerator_invertible": res.numerator_invertible,
               "numerator": res.numerator, "denominator": res.denominator}
    if res.witness is not None:
        payload["witness"] = {"P": res.witness.P, "Q": res.witness.Q}
    _emit(payload, args.json)
    return EXIT_OK if res.x_invertible == res.numerator_invertible else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grlin", description="Linear algebra over graded rings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="Q2", help="catalog name (optionally catalog:NAME) or a ring JSON file")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--depth", type=int, default=2, help="derivation search depth")
    common.add_argument("--size", type=int, default=2, help="derivation padding size")
    common.add_argument("--degree-ball", type=int, default=1, help="radius of sampled degrees")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rank", parents=[common], help="rank of a homogeneous matrix")
    s.add_argument("matrix")
    s.add_argument("--hom", help="catalog map into a graded division ring")
    s.add_argument("--certificate", action="store_true", help="include the echelon form and transform")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    s.add_argument("suite")
    s.add_argument("--budget", type=int, default=200)
    s.add_argument("--hom")
    s.add_argument("--name", help="example name for the examples suite")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("check-cert", parents=[common], help="check a certificate file (or bundled:NAME)")
    s.add_argument("kind", choices=["malcolmson", "derivation"])
    s.add_argument("file")
    s.set_defaults(func=cmd_check_cert)

    s = sub.add_parser("check-malcolmson", parents=[common], help="shorthand for check-cert malcolmson")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_cert, kind="malcolmson")

    s = sub.add_parser("regrade", parents=[common], help="project a matrix to a coarser grading")
    s.add_argument("matrix")
    s.add_argument("--omega", default="all", help='"all", or generators as JSON separated by ";"')
    s.set_defaults(func=cmd_regrade)

    s = sub.add_parser("eval-tuple", parents=[common], help="evaluate F A^-1 X under a map")
    s.add_argument("file")
    s.add_argument("--hom")
    s.set_defaults(func=cmd_eval_tuple)

    s = sub.add_parser("cramer", parents=[common], help="split a closure element into numerator and denominator")
    s.add_argument("file")
    s.add_argument("--hom")
    s.set_defaults(func=cmd_cramer)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DistributionError as exc:
        _emit({"error": "distribution", "message": str(exc), "cell": list(exc.cell) if exc.cell else None},
              getattr(args, "json", False), sys.stderr)
        return EXIT_DIST
    except (UsageError, RingError, GroupError, ShapeError, MalformedWitness, KeyError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, getattr(args, "json", False), sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
