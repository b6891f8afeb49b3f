"""Command-line frontend.

Every subcommand reads polytope (or support) documents from file arguments or
stdin (``-``), writes JSON to stdout and diagnostics to stderr.  Exit codes:
0 success, 2 parse error, 3 validation error, 4 precondition violated,
5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .bkk import build_free_sum_system, certify_mv_equals_vol, check_face_conditions
from .ehrhart import DEFAULT_BUDGET, ehrhart_data
from .errors import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    InternalConsistencyError,
    LowerDimensionalError,
    UnboundedDualError,
)
from .generate import ORIGIN_MODES, RandomInstanceSpec, gen_random
from .harness import selftest
from .polytope import Polytope, is_reflexive, points_from_dict, polar_dual, polytope_to_dict
from .rational_linalg import format_rational, parse_rational
from .sums import free_sum, minkowski_sum, mixed_volume, verify_product_formula
from .volume import euclidean_volume, normalized_volume

log = logging.getLogger("freesum")

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4, 5
MAX_DIM = 8
MAX_VERTICES = 64


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read_document(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror}", EXIT_PARSE) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}", EXIT_PARSE) from None


def _guard_points(points, path):
    if len(points[0]) > MAX_DIM:
        raise CLIError(f"{path}: dimension {len(points[0])} exceeds the limit of {MAX_DIM}", EXIT_PRECONDITION)
    if len(points) > MAX_VERTICES:
        raise CLIError(f"{path}: {len(points)} points exceed the limit of {MAX_VERTICES}", EXIT_PRECONDITION)


def _read_points(path):
    doc = _read_document(path)
    try:
        points = points_from_dict(doc)
    except (DomainError, DimensionError) as exc:
        raise CLIError(f"{path}: {exc}", EXIT_VALIDATION) from None
    _guard_points(points, path)
    if len(set(points)) != len(points):
        log.warning("%s: duplicate vertex rows removed", path)
    return points


def parse_polytope(path: str) -> Polytope:
    """Read and validate a polytope document; the hull must be full-dimensional."""
    points = _read_points(path)
    try:
        return Polytope(points)
    except LowerDimensionalError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_VALIDATION) from None


def _read_supports(path):
    doc = _read_document(path)
    if isinstance(doc, dict) and "polynomials" in doc:
        try:
            return [[t["exponents"] for t in poly["terms"]] for poly in doc["polynomials"]]
        except (KeyError, TypeError):
            raise CLIError(f"{path}: malformed system document", EXIT_VALIDATION) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("supports"), list) or not doc["supports"]:
        raise CLIError(f"{path}: expected an object with a nonempty 'supports' list", EXIT_VALIDATION)
    families = []
    for i, family in enumerate(doc["supports"]):
        if not isinstance(family, list) or not family:
            raise CLIError(f"{path}: support {i} must be a nonempty list of points", EXIT_VALIDATION)
        rows = []
        for j, row in enumerate(family):
            if not isinstance(row, list) or not row:
                raise CLIError(f"{path}: support {i}, point {j} is not a coordinate list", EXIT_VALIDATION)
            try:
                rows.append(tuple(parse_rational(v) for v in row))
            except DomainError as exc:
                raise CLIError(f"{path}: support {i}, point {j}: {exc}", EXIT_VALIDATION) from None
        families.append(rows)
    dims = {len(r) for f in families for r in f}
    if len(dims) != 1:
        raise CLIError(f"{path}: supports mix ambient dimensions {sorted(dims)}", EXIT_VALIDATION)
    return families


# subcommands


def cmd_volume(args):
    P = parse_polytope(args.polytope)
    return {"vol": format_rational(euclidean_volume(P)), "normalized_vol": format_rational(normalized_volume(P))}


def cmd_ehrhart(args):
    P = parse_polytope(args.polytope)
    if not P.is_lattice():
        raise CLIError("Ehrhart data requires a lattice polytope", EXIT_VALIDATION)
    data = ehrhart_data(P, budget=args.max_points)
    return {
        "dim": data.dim,
        "ehrhart": [format_rational(c) for c in data.ehrhart_poly.coefficients],
        "h_star": data.h_star_trimmed,
        "volume_check": format_rational(data.normalized_volume),
    }


def cmd_dual(args):
    return polytope_to_dict(polar_dual(parse_polytope(args.polytope)))


def cmd_reflexive(args):
    P = parse_polytope(args.polytope)
    if not P.is_lattice():
        raise CLIError("reflexivity requires a lattice polytope", EXIT_VALIDATION)
    return {"reflexive": is_reflexive(P)}


def cmd_freesum(args):
    S = free_sum(parse_polytope(args.p), parse_polytope(args.q))
    doc = polytope_to_dict(S)
    doc.update(S.meta)
    return doc


def cmd_minksum(args):
    A, B = parse_polytope(args.a), parse_polytope(args.b)
    if A.ambient_dim != B.ambient_dim:
        raise CLIError("Minkowski summands must share an ambient dimension", EXIT_VALIDATION)
    return polytope_to_dict(minkowski_sum(A, B))


def cmd_mixedvol(args):
    families = [_read_points(path) for path in args.polytopes]
    n = len(families)
    if any(len(f[0]) != n for f in families):
        raise CLIError(f"mixed volume needs {n} polytopes in R^{n}", EXIT_VALIDATION)
    return {"mixed_volume": format_rational(mixed_volume(families))}


def cmd_verify_product(args):
    r = verify_product_formula(parse_polytope(args.p), parse_polytope(args.q))
    return {
        "vol_p": format_rational(r.vol_p),
        "vol_q": format_rational(r.vol_q),
        "vol_sum": format_rational(r.vol_sum),
        "holds": r.holds,
        "preconditions": {
            "p_full_dim": r.p_full_dim,
            "q_full_dim": r.q_full_dim,
            "p_contains_origin": r.p_contains_origin,
            "q_contains_origin": r.q_contains_origin,
        },
    }


def cmd_braun(args):
    from .ehrhart import braun_check, trim_h_star

    P, Q = parse_polytope(args.p), parse_polytope(args.q)
    if not (P.is_lattice() and Q.is_lattice()):
        raise CLIError("Braun's formula concerns lattice polytopes", EXIT_VALIDATION)
    r = braun_check(P, Q, budget=args.max_points)
    if not r.hypotheses_met:
        log.warning("hypotheses not met (%s); result is advisory", "; ".join(r.notes))
    return {
        "h_star_p": trim_h_star(r.h_star_p),
        "h_star_q": trim_h_star(r.h_star_q),
        "product": trim_h_star(r.product),
        "direct": trim_h_star(r.direct),
        "equal": r.equal,
        "hypotheses_met": r.hypotheses_met,
        "notes": list(r.notes),
    }


def cmd_bkk_export(args):
    P, Q = parse_polytope(args.p), parse_polytope(args.q)
    if not (P.is_lattice() and Q.is_lattice()):
        raise CLIError("system export requires lattice polytopes", EXIT_VALIDATION)
    return build_free_sum_system(P, Q, args.seed).to_dict()


def _face_report_dict(report):
    return {
        "full_dimensional": report.full_dimensional,
        "certificate_passes": report.certificate_passes,
        "verdict_counts": report.verdict_counts(),
        "faces": [
            {
                "dim": f.face.dim,
                "vertices": list(f.face.vertex_indices),
                "meets": list(f.intersections),
                "verdict": f.verdict,
                "witness": list(f.witness) if f.witness else None,
            }
            for f in report.faces
        ],
    }


def cmd_check_conditions(args):
    return _face_report_dict(check_face_conditions(_read_supports(args.supports)))


def cmd_certify(args):
    families = _read_supports(args.supports)
    n = len(families)
    if len(families[0][0]) != n:
        raise CLIError(f"certification needs {n} supports in dimension {n}", EXIT_VALIDATION)
    r = certify_mv_equals_vol(families)
    if not r.consistent:
        raise InternalConsistencyError(f"certificate passed but MV={r.mv} != Vol={r.vol}")
    return {
        "certificate_passes": r.certificate_passes,
        "mv": format_rational(r.mv),
        "vol": format_rational(r.vol),
        "equal": r.equal,
    }


def cmd_gen_random(args):
    try:
        spec = RandomInstanceSpec(args.dim, args.points, args.bound, args.origin_mode, args.seed)
    except DomainError as exc:
        raise CLIError(str(exc), EXIT_VALIDATION) from None
    doc = {"seed": spec.seed, "origin_mode": spec.origin_mode}
    doc.update(polytope_to_dict(gen_random(spec)))
    return doc


def cmd_selftest(args):
    if args.trials < 1:
        raise CLIError("--trials must be at least 1", EXIT_VALIDATION)
    summary = selftest(args.trials, args.seed, fault=args.inject_fault)
    args.exit_code = EXIT_OK if summary.ok else EXIT_INTERNAL
    return summary.to_dict()


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freesum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "pretty"), default="json")
    common.add_argument("--max-points", type=int, default=DEFAULT_BUDGET,
                        help="lattice-point enumeration budget per dilate")
    common.add_argument("--seed", type=_u64, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positional, help=None):
        p = sub.add_parser(name, parents=[common], help=help)
        for arg in positional:
            if arg.endswith("..."):
                p.add_argument(arg[:-3], nargs="+")
            else:
                p.add_argument(arg)
        p.set_defaults(func=func)
        return p

    add("volume", cmd_volume, "polytope", help="Euclidean and normalized volume")
    add("ehrhart", cmd_ehrhart, "polytope", help="Ehrhart polynomial and h*-vector")
    add("hstar", cmd_ehrhart, "polytope", help="alias of ehrhart")
    add("dual", cmd_dual, "polytope", help="polar dual")
    add("reflexive", cmd_reflexive, "polytope", help="reflexivity test")
    add("freesum", cmd_freesum, "p", "q", help="free sum P (+) Q")
    add("minksum", cmd_minksum, "a", "b", help="Minkowski sum")
    add("mixedvol", cmd_mixedvol, "polytopes...", help="mixed volume of n polytopes in R^n")
    add("verify-product", cmd_verify_product, "p", "q", help="check Vol(P+Q) = Vol(P) Vol(Q)")
    add("braun", cmd_braun, "p", "q", help="compare h*(P+Q) with h*(P) h*(Q)")
    add("bkk-export", cmd_bkk_export, "p", "q", help="export the generic free-sum Laurent system")
    add("check-conditions", cmd_check_conditions, "supports", help="face-condition classification")
    add("certify", cmd_certify, "supports", help="certificate plus MV and Vol")
    g = add("gen-random", cmd_gen_random, help="seeded random lattice polytope")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--points", type=int, default=6)
    g.add_argument("--bound", type=int, default=3)
    g.add_argument("--origin-mode", choices=ORIGIN_MODES, default="any-containing")
    s = add("selftest", cmd_selftest, help="randomized invariant suites")
    s.add_argument("--trials", type=int, default=20)
    # test-only: corrupt one volume so the harness must report a failure
    s.add_argument("--inject-fault", choices=("flip-volume",), default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="freesum: %(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.exit_code = EXIT_OK
    try:
        result = args.func(args)
    except CLIError as exc:
        log.error("%s", exc)
        return exc.code
    except (LowerDimensionalError, UnboundedDualError, BudgetExceededError) as exc:
        log.error("%s", exc)
        return EXIT_PRECONDITION
    except (DomainError, DimensionError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except InternalConsistencyError as exc:
        log.error("internal consistency failure: %s", exc)
        return EXIT_INTERNAL
    indent = 2 if args.output == "pretty" else None
    sys.stdout.write(json.dumps(result, indent=indent) + "\n")
    return args.exit_code


if __name__ == "__main__":
    sys.exit(main())
