"""Command-line front end emitting deterministic JSON reports.

Exit codes: 0 success (or no violation), 2 a violation was found, 1 usage,
parse or internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .algebra import (
    GaussianRational,
    HolomorphicPolynomial,
    MixedPolynomial,
    expand_modulus_combination,
    is_real_valued,
    lowest_order_part,
    substitute_powers,
)
from .levi import decomposition_expand, hessian_det_direct, hessian_det_formula, levi_matrix
from .newton import (
    convex_hull,
    edge_weights,
    extreme_sets,
    hull_lattice_points,
    newton_diagram,
    restrict,
)
from .parser import ParseError, format_polynomial, parse, parse_modulus_combination
from .pshtest import SampleConfig, Violation, WitnessNotFound, curve_witness, psh_sample_check
from .verify import verify_all

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization ---------------------------------------------------------


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def gaussian(c: GaussianRational) -> dict:
    return {"re": rational(c.re), "im": rational(c.im)}


def poly_json(p: MixedPolynomial) -> dict:
    return {
        "text": format_polynomial(p),
        "terms": [{"exponents": list(q), "coeff": gaussian(c)} for q, c in p.items()],
    }


def points_json(pts: Iterable) -> List[List[int]]:
    return [[int(a), int(b)] for a, b in sorted(tuple(pt) for pt in pts)]


def record_json(rec, diagram) -> dict:
    p, q = edge_weights(rec, diagram)
    return {
        "kind": rec.kind,
        "points": points_json(rec.points),
        "slope": rational(rec.line.slope),
        "intercept": rational(rec.line.intercept),
        "weights": [p, q],
    }


def violation_json(v: Violation) -> dict:
    out = {
        "z": [v.z.real, v.z.imag],
        "w": [v.w.real, v.w.imag],
        "lambda_min": v.lambda_min,
        "scale": v.scale,
        "context": v.context,
    }
    if v.z_exact is not None:
        out["z_exact"] = gaussian(v.z_exact)
        out["w_exact"] = gaussian(v.w_exact)
        out["exact_det_negative"] = bool(v.exact_det < 0)
        out["exact_trace"] = rational(v.exact_trace)
    return out


def dump(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n").encode("utf-8")


# -- SVG -------------------------------------------------------------------


def render_svg(diagram, records) -> str:
    """600x600 drawing: A to the right, B up, hull dashed, extreme edges solid."""
    size, margin = 600, 50
    pts = sorted(diagram)
    extent = max([1] + [max(a, b) for a, b in pts])
    unit = (size - 2 * margin) / extent

    def xy(pt):
        return f"{margin + pt[0] * unit:.3f}", f"{size - margin - pt[1] * unit:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{size - margin / 2}" y2="{size - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{size - margin}" x2="{margin}" y2="{margin / 2}" stroke="black"/>',
        f'<text x="{size - margin / 2}" y="{size - margin / 2}" font-size="14">A</text>',
        f'<text x="{margin / 4}" y="{margin / 2}" font-size="14">B</text>',
    ]
    if len(pts) >= 2:
        hull = convex_hull(pts)
        coords = " ".join(",".join(xy(pt)) for pt in hull)
        out.append(f'<polygon points="{coords}" fill="none" stroke="gray" stroke-dasharray="6,4"/>')
    for rec in records:
        if rec.kind != "edge":
            continue
        ends = sorted(rec.points)
        (x1, y1), (x2, y2) = xy(ends[0]), xy(ends[-1])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="red" stroke-width="2"/>')
    for pt in pts:
        x, y = xy(pt)
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="black"><title>({pt[0]},{pt[1]})</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- commands --------------------------------------------------------------


def _parse_points(text: str) -> List[Tuple[int, int]]:
    try:
        data = json.loads(text)
        pts = [(int(a), int(b)) for a, b in data]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"points must be a JSON list of [A, B] pairs: {exc}") from None
    if any(a < 0 or b < 0 for a, b in pts):
        raise UsageError("lattice points must be non-negative")
    return pts


def _weights(text: str) -> Tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--weights expects p,q with positive integers, got {text!r}") from None
    if p < 1 or q < 1:
        raise UsageError("--weights must be positive")
    return p, q


def cmd_expand(args):
    p = parse(args.expr)
    return {"polynomial": poly_json(p), "real_valued": is_real_valued(p)}, EXIT_OK


def cmd_diagram(args):
    p = parse(args.expr)
    diagram = newton_diagram(p)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_svg(diagram, extreme_sets(diagram)))
    return {"diagram": points_json(diagram)}, EXIT_OK


def cmd_extreme(args):
    diagram = newton_diagram(parse(args.expr))
    records = extreme_sets(diagram)
    return {
        "diagram": points_json(diagram),
        "extreme_sets": [record_json(r, diagram) for r in records],
    }, EXIT_OK


def cmd_restrict(args):
    p = parse(args.expr)
    if args.points is not None:
        pts = _parse_points(args.points)
    else:
        corners = _parse_points(args.hull_of)
        if not corners:
            raise UsageError("--hull-of needs at least one point")
        pts = hull_lattice_points(corners)
    return {"points": points_json(pts), "polynomial": poly_json(restrict(p, pts))}, EXIT_OK


def cmd_levi(args):
    p = parse(args.expr)
    h = levi_matrix(p)
    return {
        "real_valued": is_real_valued(p),
        "levi": {
            "pzz": poly_json(h.pzz),
            "pwz": poly_json(h.pwz),
            "pzw": poly_json(h.pzw),
            "pww": poly_json(h.pww),
        },
    }, EXIT_OK


def cmd_det(args):
    if args.formula:
        mc = parse_modulus_combination(args.expr)
        d = hessian_det_formula(mc)
        expanded = decomposition_expand(d)
        direct = hessian_det_direct(expand_modulus_combination(mc))
        return {
            "terms": [
                {"sign": s, "wronskian": poly_json(wr.to_mixed()), "pair": list(pair)}
                for (s, wr), pair in zip(d.terms, d.pairs)
            ],
            "determinant": poly_json(expanded),
            "matches_direct": expanded == direct,
        }, EXIT_OK
    p = parse(args.expr)
    return {"determinant": poly_json(hessian_det_direct(p))}, EXIT_OK


def cmd_transform(args):
    k, l = _weights(args.weights)
    p = parse(args.expr)
    out = substitute_powers(p, k, l)
    return {
        "weights": [k, l],
        "polynomial": poly_json(out),
        "lowest_order_part": poly_json(lowest_order_part(out)) if out else None,
    }, EXIT_OK


def cmd_psh_check(args):
    p = parse(args.expr)
    cfg = SampleConfig(radius=args.radius, samples=args.samples, seed=args.seed, tolerance=args.tol)
    rep = psh_sample_check(p, cfg)
    res = {
        "verdict": rep.verdict,
        "samples_used": rep.samples_used,
        "violation": violation_json(rep.violation) if rep.violation else None,
    }
    return res, EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_witness(args):
    p = parse(args.expr)
    q = parse(args.curve)
    if not q.is_holomorphic():
        raise UsageError("--curve must be holomorphic in z, w")
    try:
        v = curve_witness(HolomorphicPolynomial.from_mixed(q), p, radius=args.radius, tol=args.tol)
    except WitnessNotFound as exc:
        return {"verdict": "not-found", "detail": str(exc), "violation": None}, EXIT_OK
    return {"verdict": "violated", "detail": "", "violation": violation_json(v)}, EXIT_VIOLATION


def cmd_verify_paper(args):
    results = verify_all()
    checks = [
        {"name": r.name, "status": r.status, "detail": r.detail, "data": r.data} for r in results
    ]
    failed = sum(1 for r in results if not r.passed)
    res = {"checks": checks, "passed": len(results) - failed, "failed": failed, "all_passed": failed == 0}
    return res, EXIT_OK if failed == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="pshnd", description="Newton diagrams and plurisubharmonicity checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    s = sub.add_parser("expand", help="parse and expand an expression")
    s.add_argument("expr")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("diagram", help="Newton diagram")
    s.add_argument("expr")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("extreme", help="extreme points and edges")
    s.add_argument("expr")
    s.set_defaults(func=cmd_extreme)

    s = sub.add_parser("restrict", help="restrict to lattice points")
    s.add_argument("expr")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", metavar="JSON")
    g.add_argument("--hull-of", metavar="JSON")
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("levi", help="Levi matrix entries")
    s.add_argument("expr")
    s.set_defaults(func=cmd_levi)

    s = sub.add_parser("det", help="Levi determinant")
    s.add_argument("expr")
    s.add_argument("--formula", action="store_true", help="signed Wronskian decomposition; EXPR must be +-abs2(f) terms")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("transform", help="substitute (z, w) -> (z^p, w^q)")
    s.add_argument("expr")
    s.add_argument("--weights", required=True, metavar="p,q")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("psh-check", help="sampled Levi positivity check")
    s.add_argument("expr")
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_psh_check)

    s = sub.add_parser("witness", help="certified violation on a holomorphic curve")
    s.add_argument("expr")
    s.add_argument("--curve", required=True, metavar="EXPR2")
    s.add_argument("--radius", type=float, default=0.1)
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("verify-paper", help="run the full reproduction battery")
    s.set_defaults(func=cmd_verify_paper)
    return ap


def _inputs(args) -> dict:
    return {
        k: v.strip() if isinstance(v, str) else v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "command")
    }


def _shield(argv: Sequence[str]) -> List[str]:
    # "-z*zb" would otherwise be read as an option; whitespace is insignificant
    # to the expression grammar, so a leading space makes it positional.
    return [" " + a if a.startswith("-") and not a.startswith("--") and a != "-h" else a for a in argv]


def run_command(argv: Sequence[str], stderr=None) -> Tuple[int, bytes]:
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(_shield(argv))
        results, code = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_ERROR, b""
    except ParseError as exc:
        print(f"parse error at {exc}", file=stderr)
        return EXIT_ERROR, b""
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR, b""
    report = {"command": args.command, "inputs": _inputs(args), "results": results, "version": __version__}
    return code, dump(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
