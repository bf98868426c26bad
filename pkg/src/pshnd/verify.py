"""Scripted exact reproduction of the counterexample and the worked examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .algebra import (
    HolomorphicPolynomial,
    MixedPolynomial,
    ModulusCombination,
    abs2,
    evaluate,
    expand_modulus_combination,
    is_real_valued,
    lowest_order_part,
    substitute_powers,
)
from .levi import decomposition_expand, hessian_det_direct, hessian_det_formula
from .newton import (
    bidegree_decompose,
    edge_weights,
    extreme_sets,
    extreme_sets_bruteforce,
    hull_lattice_points,
    newton_diagram,
    restrict,
)
from .parser import format_polynomial, parse
from .pshtest import SampleConfig, Violation, WitnessNotFound, curve_witness, psh_sample_check

COUNTEREXAMPLE_P = "abs2(z^2*w^2 + z^10*w + z*w^10) + abs2(z^4*w^2 + z^4*w^8)"
Q1 = "99*z^8*w^8 + 18*z^9 + 18*w^9"
Q2 = "16*w^15 - 38*w^6*z^9 + 19*w^9 - 8*z^9 - 4*z*w^7 + 2*z*w"

EXPECTED_DIAGRAM = frozenset(
    {(4, 4), (12, 3), (3, 12), (20, 2), (11, 11), (2, 20), (8, 4), (8, 10), (8, 16)}
)
E1 = frozenset({(4, 4), (3, 12), (2, 20)})
E2 = frozenset({(4, 4), (12, 3), (20, 2)})

THREE_EDGE_P = (
    "abs2(z)^3*abs2(w)^4 - 2*Re(z^3*w^4*conj(z^5*w^3)) + abs2(z)^2*abs2(w)^6"
    " + abs2(z)^5*abs2(w)^3 - 2*Re(z*w^10*conj(z^2*w^6)) + abs2(z)^9*abs2(w)^2"
    " + abs2(z)*abs2(w)^10 - 2*Re(z^9*w^2*conj(z^17*w)) + abs2(z)^17*abs2(w)"
    " + nsq^500"
)
THREE_EDGE_PIECES = (
    "abs2(z*w^10 - z^2*w^6)",
    "abs2(z^3*w^4 - z^5*w^3)",
    "abs2(z^9*w^2 - z^17*w)",
)
# (weights, lowest-order part as a modulus square, the same part written out)
THREE_EDGE_MAPS = (
    ((4, 1), "abs2(z^4*w^10 - z^8*w^6)", "abs2(z)^4*abs2(w)^10 - 2*Re(z^4*w^10*conj(z^8*w^6)) + abs2(z)^8*abs2(w)^6"),
    ((1, 2), "abs2(z^3*w^8 - z^5*w^6)", "abs2(z)^3*abs2(w)^8 - 2*Re(z^3*w^8*conj(z^5*w^6)) + abs2(z)^5*abs2(w)^6"),
    ((1, 8), "abs2(z^9*w^16 - z^17*w^8)", "abs2(z)^9*abs2(w)^16 - 2*Re(z^9*w^16*conj(z^17*w^8)) + abs2(z)^17*abs2(w)^8"),
)

SHARED_SUMMAND_P = (
    "abs2(z)^3 - 2*Re(z^3*conj(z^2*w^2)) + 2*abs2(z)^2*abs2(w)^2"
    " - 2*Re(z^2*w^2*conj(w^10)) + abs2(w)^10 + nsq^500"
)
SHARED_SUMMAND_PIECES = (
    "abs2(z)^3 - 2*Re(z^3*conj(z^2*w^2)) + 2*abs2(z)^2*abs2(w)^2",
    "2*abs2(z)^2*abs2(w)^2 - 2*Re(z^2*w^2*conj(w^10)) + abs2(w)^10",
)
SHARED_SUMMAND_SPLIT = ("abs2(z^3 - z^2*w^2)", "abs2(z^2*w^2 - w^10)")
SHARED_SUMMAND_SPLIT_WRITTEN = (
    "abs2(z)^3 - 2*Re(z^3*conj(z^2*w^2)) + abs2(z)^2*abs2(w)^2",
    "abs2(z)^2*abs2(w)^2 - 2*Re(z^2*w^2*conj(w^10)) + abs2(w)^10",
)
SHARED_SUMMAND_MAPS = (
    ((2, 1), "abs2(z)^6 - 2*Re(z^6*conj(z^4*w^2)) + 2*abs2(z)^4*abs2(w)^2"),
    ((4, 1), "2*abs2(z)^8*abs2(w)^2 - 2*Re(z^8*w^2*conj(w^10)) + abs2(w)^10"),
)

REFUTATION_RADII = (0.1, 0.01)
PSH_CONFIG = SampleConfig(radius=1.0, samples=10_000, seed=20240611, tolerance=1e-9)


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    data: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _check(name: str, ok: bool, detail: str = "", **data) -> CheckResult:
    return CheckResult(name, "pass" if ok else "fail", detail, data)


def describe_mismatch(got: MixedPolynomial, want: MixedPolynomial) -> str:
    """Bidegrees at which two polynomials differ, with both components."""
    if got == want:
        return ""
    diff = bidegree_decompose(got - want)
    lines = []
    g, w = bidegree_decompose(got), bidegree_decompose(want)
    zero = MixedPolynomial()
    for pt in diff:
        lines.append(
            f"bidegree {list(pt)}: got {format_polynomial(g.get(pt, zero))}; "
            f"expected {format_polynomial(w.get(pt, zero))}"
        )
    return "; ".join(lines)


def _equal(name: str, got: MixedPolynomial, want: MixedPolynomial, **data) -> CheckResult:
    return _check(name, got == want, describe_mismatch(got, want), **data)


@dataclass(frozen=True)
class Counterexample:
    P: MixedPolynomial
    mc: ModulusCombination
    f1: HolomorphicPolynomial
    f2: HolomorphicPolynomial
    f3: HolomorphicPolynomial
    g: HolomorphicPolynomial
    h: HolomorphicPolynomial

    def __iter__(self):
        return iter((self.P, self.mc, self.f1, self.f2, self.f3, self.g, self.h))

    @property
    def union_mc(self) -> ModulusCombination:
        f1, f2, f3 = self.f1, self.f2, self.f3
        return ModulusCombination([(1, f1 + f3), (1, f1 + f2), (-1, f1)])

    @property
    def hull_mc(self) -> ModulusCombination:
        return ModulusCombination([(1, self.f1 + self.f2 + self.f3), (1, self.g + self.h), (-1, self.h)])

    def union_part(self) -> MixedPolynomial:
        return restrict(self.P, E1 | E2)

    def hull_part(self) -> MixedPolynomial:
        return restrict(self.P, hull_lattice_points(E1 | E2))


def build_paper_counterexample() -> Counterexample:
    mono = HolomorphicPolynomial.monomial
    f1, f2, f3 = mono(2, 2), mono(10, 1), mono(1, 10)
    g, h = mono(4, 2), mono(4, 8)
    mc = ModulusCombination([(1, f1 + f2 + f3), (1, g + h)])
    return Counterexample(expand_modulus_combination(mc), mc, f1, f2, f3, g, h)


def _points(s: Iterable) -> List[List[int]]:
    return [list(pt) for pt in sorted(s)]


def verify_lemma42(P: Optional[MixedPolynomial] = None) -> List[CheckResult]:
    ce = build_paper_counterexample()
    P = ce.P if P is None else P
    out = []
    diagram = newton_diagram(P)
    out.append(
        _check(
            "lemma42.diagram",
            diagram == EXPECTED_DIAGRAM,
            "" if diagram == EXPECTED_DIAGRAM else f"got {_points(diagram)}",
            diagram=_points(diagram),
        )
    )
    records = extreme_sets(diagram)
    edges = {r.points for r in records if r.kind == "edge"}
    oracle = {r.points for r in extreme_sets_bruteforce(diagram)}
    ok = edges == {E1, E2} and oracle == {r.points for r in records}
    lines = {str(r.line.slope): str(r.line.intercept) for r in records if r.kind == "edge"}
    out.append(
        _check(
            "lemma42.extreme_edges",
            ok,
            "" if ok else f"edges {[_points(e) for e in edges]}",
            edges=[_points(e) for e in sorted(edges, key=sorted)],
            extreme_sets=len(records),
            lines=lines,
        )
    )
    f1, f2, f3 = ce.f1, ce.f2, ce.f3
    out.append(
        _equal(
            "lemma42.union_restriction",
            restrict(P, E1 | E2),
            abs2(f1 + f3) + abs2(f1 + f2) - abs2(f1),
        )
    )
    out.append(
        _equal(
            "lemma42.hull_restriction",
            restrict(P, hull_lattice_points(E1 | E2)),
            ce.P - abs2(ce.h),
        )
    )
    return out


def _is_pm(got: HolomorphicPolynomial, want: MixedPolynomial) -> bool:
    g = got.to_mixed()
    return g == want or g == -want


def verify_det_bounds() -> List[CheckResult]:
    ce = build_paper_counterexample()
    q1, q2 = parse(Q1), parse(Q2)
    z2w2, z4w2 = parse("z^2*w^2"), parse("z^4*w^2")
    out = []

    union = hessian_det_formula(ce.union_mc)
    signs = union.signs()
    out.append(_check("det.union_signs", signs == [1, -1, -1], f"signs {signs}", signs=signs))
    pos = [wr for s, wr in union.terms if s > 0]
    neg = [wr for s, wr in union.terms if s < 0]
    out.append(
        _check(
            "det.union_Q1",
            len(pos) == 1 and _is_pm(pos[0], z2w2 * q1),
            "" if pos else "no positive term",
            wronskian=format_polynomial(pos[0].to_mixed()) if pos else None,
        )
    )
    out.append(
        _check(
            "det.union_negative_18z2w11",
            any(_is_pm(wr, parse("18*z^2*w^11")) for wr in neg),
            negative=[format_polynomial(wr.to_mixed()) for wr in neg],
        )
    )
    out.append(
        _check(
            "det.union_negative_18z11w2",
            any(_is_pm(wr, parse("18*z^11*w^2")) for wr in neg),
        )
    )

    hull = hessian_det_formula(ce.hull_mc)
    hsigns = hull.signs()
    hpos = [wr for s, wr in hull.terms if s > 0]
    hneg = [wr for s, wr in hull.terms if s < 0]
    ok = (
        hsigns == [1, -1, -1]
        and len(hpos) == 1
        and _is_pm(hpos[0], z4w2 * q2 * (-2))
        and any(_is_pm(wr, parse("24*z^7*w^9")) for wr in hneg)
    )
    out.append(
        _check(
            "det.hull_Q2",
            ok,
            f"signs {hsigns}",
            wronskian=format_polynomial(hpos[0].to_mixed()) if hpos else None,
            negative=[format_polynomial(wr.to_mixed()) for wr in hneg],
        )
    )
    out.append(
        _equal(
            "det.union_formula_matches_direct",
            decomposition_expand(union),
            hessian_det_direct(ce.union_part()),
        )
    )
    out.append(
        _equal(
            "det.hull_formula_matches_direct",
            decomposition_expand(hull),
            hessian_det_direct(ce.hull_part()),
        )
    )
    # dropping the last non-positive term gives the displayed upper bounds
    out.append(
        _equal(
            "det.union_bound",
            decomposition_expand(union) + abs2(union.terms[2][1]),
            abs2(z2w2 * q1) - abs2(parse("18*z^2*w^11")),
        )
    )
    out.append(
        _equal(
            "det.hull_bound",
            decomposition_expand(hull) + abs2(hull.terms[1][1]),
            abs2(z4w2 * q2 * (-2)) - abs2(parse("24*z^7*w^9")),
        )
    )
    return out


def _violation_data(v: Violation, radius: float) -> Dict:
    return {
        "radius": radius,
        "z": [v.z.real, v.z.imag],
        "w": [v.w.real, v.w.imag],
        "lambda_min": v.lambda_min,
        "scale": v.scale,
        "context": v.context,
    }


def refute_psh(target: str = "union") -> Tuple[CheckResult, Optional[Violation]]:
    """Certified non-psh points on V(Q1) (union) or V(Q2) (hull) at two radii.

    ``target="full"`` runs the same pipeline on P itself with Q1; P is psh,
    so the resulting check is expected to fail.
    """
    ce = build_paper_counterexample()
    if target == "union":
        p, q = ce.union_part(), HolomorphicPolynomial.from_mixed(parse(Q1))
    elif target == "hull":
        p, q = ce.hull_part(), HolomorphicPolynomial.from_mixed(parse(Q2))
    elif target == "full":
        p, q = ce.P, HolomorphicPolynomial.from_mixed(parse(Q1))
    else:
        raise ValueError(f"unknown target {target!r}")
    name = f"refute.{target}"
    witnesses = []
    last = None
    for radius in REFUTATION_RADII:
        try:
            v = curve_witness(q, p, radius=radius)
        except WitnessNotFound as exc:
            return _check(name, False, str(exc), witnesses=witnesses), None
        ok = (
            v.z != 0
            and v.w != 0
            and abs(v.z) <= radius
            and abs(v.w) <= radius
            and v.lambda_min < 0
            and (v.exact_det < 0 or v.exact_trace < 0)
        )
        entry = _violation_data(v, radius)
        if target == "union":
            det_f = evaluate(hessian_det_direct(p), v.z, v.w).real
            bound = -0.5 * abs(18 * v.z**2 * v.w**11) ** 2
            entry["det_float"] = det_f
            ok = ok and det_f <= bound
        witnesses.append(entry)
        if not ok:
            return _check(name, False, f"witness at radius {radius} failed its checks", witnesses=witnesses), v
        last = v
    return _check(name, True, witnesses=witnesses), last


def verify_examples(psh_config: SampleConfig = PSH_CONFIG) -> List[CheckResult]:
    out = []
    P = parse(THREE_EDGE_P)
    pieces = [parse(s) for s in THREE_EDGE_PIECES]
    nsq = parse("nsq^500")
    out.append(_equal("three_edge.decomposition", P, pieces[0] + pieces[1] + pieces[2] + nsq))
    diagram = newton_diagram(P)
    records = extreme_sets(diagram)
    edge_sets = {r.points: r for r in records if r.kind == "edge"}
    for j, ((k, l), modsq, written) in enumerate(THREE_EDGE_MAPS, start=1):
        lowest = lowest_order_part(substitute_powers(P, k, l))
        want = parse(modsq)
        ok = lowest == want and parse(written) == want and substitute_powers(pieces[j - 1], k, l) == want
        out.append(_check(f"three_edge.lowest_order_phi{j}", ok, describe_mismatch(lowest, want)))
        support = newton_diagram(pieces[j - 1])
        rec = edge_sets.get(support)
        weights = edge_weights(rec, diagram) if rec else None
        out.append(
            _check(
                f"three_edge.edge_weights_phi{j}",
                rec is not None and weights == (k, l) and restrict(P, support) == pieces[j - 1],
                f"edge {_points(support)} weights {weights}",
                weights=list(weights) if weights else None,
            )
        )

    P2 = parse(SHARED_SUMMAND_P)
    split = [parse(s) for s in SHARED_SUMMAND_SPLIT]
    written_ok = all(parse(wr) == s for wr, s in zip(SHARED_SUMMAND_SPLIT_WRITTEN, split))
    total = split[0] + split[1] + nsq
    out.append(
        _check(
            "shared_summand.decomposition",
            P2 == total and written_ok,
            describe_mismatch(P2, total) or ("" if written_ok else "split pieces differ from their expansions"),
        )
    )
    raw = [parse(s) for s in SHARED_SUMMAND_PIECES]
    for j, ((k, l), written) in enumerate(SHARED_SUMMAND_MAPS, start=1):
        lowest = lowest_order_part(substitute_powers(P2, k, l))
        want = parse(written)
        ok = lowest == want and substitute_powers(raw[j - 1], k, l) == want
        out.append(_check(f"shared_summand.lowest_order_phi{j}", ok, describe_mismatch(lowest, want)))
    diagram2 = newton_diagram(P2)
    edges2 = [r for r in extreme_sets(diagram2) if r.kind == "edge"]
    weights2 = sorted(edge_weights(r, diagram2) for r in edges2)
    out.append(
        _check(
            "shared_summand.edge_weights",
            weights2 == [(2, 1), (4, 1)],
            f"weights {weights2}",
            weights=[list(x) for x in weights2],
        )
    )

    ce = build_paper_counterexample()
    targets = [("counterexample.P", ce.P)]
    targets += [(f"three_edge.P{j}", p) for j, p in enumerate(pieces, start=1)]
    targets += [(f"shared_summand.P{j}", p) for j, p in enumerate(raw, start=1)]
    targets += [(f"shared_summand.Ptilde{j}", p) for j, p in enumerate(split, start=1)]
    for label, p in targets:
        rep = psh_sample_check(p, psh_config)
        out.append(
            _check(
                f"psh_sample.{label}",
                is_real_valued(p) and rep.verdict == "no-violation-found",
                rep.verdict,
                samples=rep.samples_used,
            )
        )
    return out


def verify_all() -> List[CheckResult]:
    results = verify_lemma42() + verify_det_bounds()
    for target in ("union", "hull"):
        results.append(refute_psh(target)[0])
    results += verify_examples()
    return results
