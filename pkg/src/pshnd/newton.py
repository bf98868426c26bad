"""Newton diagrams, extreme sets and lattice restriction.

A lattice point ``(A, B)`` aggregates the monomials of bidegree ``A`` in
``z, zb`` and ``B`` in ``w, wb``. Extreme sets are the subsets of the diagram
cut out by a supporting line ``B = a*A + b`` of negative slope with every
other point strictly above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .algebra import MixedPolynomial

LatticePoint = Tuple[int, int]
NewtonDiagram = FrozenSet[LatticePoint]

BRUTEFORCE_CAP = 200


@dataclass(frozen=True)
class SupportLine:
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "intercept", Fraction(self.intercept))
        if self.slope >= 0:
            raise ValueError(f"support line slope must be negative, got {self.slope}")

    def offset(self, pt: LatticePoint) -> Fraction:
        """B - (a*A + b); zero on the line, positive above it."""
        return pt[1] - self.slope * pt[0] - self.intercept


@dataclass(frozen=True)
class ExtremeSetRecord:
    points: FrozenSet[LatticePoint]
    line: SupportLine

    @property
    def kind(self) -> str:
        return "edge" if len(self.points) >= 2 else "point"

    def sorted_points(self) -> List[LatticePoint]:
        return sorted(self.points)


class DiagramTooLarge(ValueError):
    pass


def bidegree(q) -> LatticePoint:
    a, b, c, d = q
    return (a + b, c + d)


def bidegree_decompose(p: MixedPolynomial) -> Dict[LatticePoint, MixedPolynomial]:
    buckets: Dict[LatticePoint, dict] = {}
    for q, v in p.items():
        buckets.setdefault(bidegree(q), {})[q] = v
    return {pt: MixedPolynomial(buckets[pt]) for pt in sorted(buckets)}


def newton_diagram(p: MixedPolynomial) -> NewtonDiagram:
    return frozenset(bidegree(q) for q in p.terms)


def restrict(p: MixedPolynomial, s: Iterable[LatticePoint]) -> MixedPolynomial:
    """Sum of the bidegree components of ``p`` lying at points of ``s``."""
    s = {tuple(pt) for pt in s}
    return MixedPolynomial({q: v for q, v in p.items() if bidegree(q) in s})


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_chain(points: Iterable[LatticePoint]) -> List[LatticePoint]:
    """Vertices of the lower-left boundary, left to right, slopes strictly negative."""
    pts = sorted(set(points))
    if not pts:
        return []
    lower: List[LatticePoint] = []
    for pt in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    # leftmost point with minimal B in the min-A column starts the chain
    chain = [lower[0]]
    for pt in lower[1:]:
        if pt[1] < chain[-1][1]:
            chain.append(pt)
        else:
            break
    return chain


def _slope(p1: LatticePoint, p2: LatticePoint) -> Fraction:
    return Fraction(p2[1] - p1[1], p2[0] - p1[0])


def _simplest_between(lo: Fraction, hi: Optional[Fraction]) -> Fraction:
    """Simplest fraction strictly inside (lo, hi) for 0 <= lo; ``hi=None`` is +inf.

    Continued-fraction descent of the Stern-Brocot tree.
    """
    n = floor(lo) + 1
    if hi is None or n < hi:
        return Fraction(n)
    base = n - 1
    lo_r, hi_r = lo - base, hi - base
    y = _simplest_between(1 / hi_r, None if lo_r == 0 else 1 / lo_r)
    return base + 1 / y


def _vertex_slope(left: Optional[Fraction], right: Optional[Fraction]) -> Fraction:
    """Representative slope for a chain vertex.

    ``left`` is the slope of the incoming (steeper) edge, ``right`` of the
    outgoing one; ``None`` marks an open end.
    """
    if left is None and right is None:
        return Fraction(-1)
    if left is None:
        return right - 1
    if right is None:
        # mediant of left = -p/q with 0/1
        return Fraction(left.numerator, left.denominator + 1)
    x = _simplest_between(-right, -left)
    return -x


def _record(diagram: NewtonDiagram, slope: Fraction, anchor: LatticePoint) -> ExtremeSetRecord:
    intercept = anchor[1] - slope * anchor[0]
    line = SupportLine(slope, intercept)
    pts = frozenset(pt for pt in diagram if line.offset(pt) == 0)
    return ExtremeSetRecord(pts, line)


def extreme_sets(diagram: Iterable[LatticePoint]) -> List[ExtremeSetRecord]:
    """All extreme points and extreme edges, steepest support line first."""
    diagram = frozenset(tuple(pt) for pt in diagram)
    chain = _lower_chain(diagram)
    if not chain:
        return []
    edge_slopes = [_slope(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
    records: List[ExtremeSetRecord] = []
    for i, v in enumerate(chain):
        left = edge_slopes[i - 1] if i > 0 else None
        right = edge_slopes[i] if i < len(edge_slopes) else None
        records.append(_record(diagram, _vertex_slope(left, right), v))
        if right is not None:
            records.append(_record(diagram, right, v))
    records.sort(key=lambda r: r.line.slope)
    return records


def extreme_sets_bruteforce(diagram: Iterable[LatticePoint]) -> List[ExtremeSetRecord]:
    """Independent enumeration by scanning candidate slopes.

    The minimizing set of ``B - a*A`` only changes at pairwise slopes, so
    testing every pairwise slope plus one slope inside each gap (and past
    each end) visits every extreme set.
    """
    diagram = frozenset(tuple(pt) for pt in diagram)
    if len(diagram) > BRUTEFORCE_CAP:
        raise DiagramTooLarge(f"brute force is capped at {BRUTEFORCE_CAP} points, got {len(diagram)}")
    if not diagram:
        return []
    breaks = sorted(
        {_slope(p1, p2) for p1, p2 in combinations(diagram, 2) if p1[0] != p2[0]}
    )
    breaks = [s for s in breaks if s < 0]
    if not breaks:
        candidates = [Fraction(-1)]
    else:
        candidates = list(breaks)
        for s1, s2 in zip(breaks, breaks[1:]):
            candidates.append(Fraction(s1.numerator + s2.numerator, s1.denominator + s2.denominator))
        candidates.append(breaks[0] - 1)
        candidates.append(Fraction(breaks[-1].numerator, breaks[-1].denominator + 1))
    seen = {}
    for a in sorted(candidates):
        values = {pt: pt[1] - a * pt[0] for pt in diagram}
        best = min(values.values())
        pts = frozenset(pt for pt, v in values.items() if v == best)
        if pts not in seen:
            seen[pts] = ExtremeSetRecord(pts, SupportLine(a, best))
    return sorted(seen.values(), key=lambda r: r.line.slope)


def check_record(record: ExtremeSetRecord, diagram: Iterable[LatticePoint]) -> bool:
    """Re-check the defining conditions of an extreme set exactly."""
    line = record.line
    if line.slope >= 0 or not record.points:
        return False
    for pt in diagram:
        off = line.offset(tuple(pt))
        if tuple(pt) in record.points:
            if off != 0:
                return False
        elif off <= 0:
            return False
    return record.points <= frozenset(tuple(pt) for pt in diagram)


def edge_weights(record: ExtremeSetRecord, diagram: Optional[Iterable[LatticePoint]] = None) -> Tuple[int, int]:
    """Weights ``(p, q)`` with slope ``-p/q``; the coordinate change is ``(z^p, w^q)``.

    ``p*A + q*B`` is constant on the record and strictly larger on every other
    diagram point (checked when ``diagram`` is given).
    """
    slope = record.line.slope
    p, q = -slope.numerator, slope.denominator
    degrees = {p * A + q * B for A, B in record.points}
    if len(degrees) != 1:
        raise ValueError(f"weighted degree not constant on {sorted(record.points)}")
    if diagram is not None:
        (d0,) = degrees
        for pt in diagram:
            pt = tuple(pt)
            if pt not in record.points and p * pt[0] + q * pt[1] <= d0:
                raise ValueError(f"point {pt} does not lie strictly above the support line")
    return p, q


def convex_hull(points: Iterable[LatticePoint]) -> List[LatticePoint]:
    """Counter-clockwise hull vertices (monotone chain, exact integers)."""
    pts = sorted(set(tuple(pt) for pt in points))
    if len(pts) <= 2:
        return pts
    lower: List[LatticePoint] = []
    for pt in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    upper: List[LatticePoint] = []
    for pt in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    hull = lower[:-1] + upper[:-1]
    return hull


def _in_hull(hull: List[LatticePoint], pt: LatticePoint) -> bool:
    if len(hull) == 1:
        return pt == hull[0]
    if len(hull) == 2:
        a, b = hull
        return (
            _cross(a, b, pt) == 0
            and min(a[0], b[0]) <= pt[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= pt[1] <= max(a[1], b[1])
        )
    n = len(hull)
    return all(_cross(hull[i], hull[(i + 1) % n], pt) >= 0 for i in range(n))


def hull_lattice_points(s: Iterable[LatticePoint]) -> FrozenSet[LatticePoint]:
    """Integer points inside or on the convex hull of ``s``."""
    pts = [tuple(pt) for pt in s]
    if not pts:
        raise ValueError("hull of an empty set")
    hull = convex_hull(pts)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return frozenset(
        (x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if _in_hull(hull, (x, y))
    )
