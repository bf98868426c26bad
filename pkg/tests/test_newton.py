import random
from fractions import Fraction
from math import gcd

import pytest

from pshnd.algebra import is_real_valued, lowest_order_part, substitute_powers, w, wb, z, zb
from pshnd.newton import (
    BRUTEFORCE_CAP,
    DiagramTooLarge,
    ExtremeSetRecord,
    SupportLine,
    bidegree_decompose,
    check_record,
    convex_hull,
    edge_weights,
    extreme_sets,
    extreme_sets_bruteforce,
    hull_lattice_points,
    newton_diagram,
    restrict,
)
from pshnd.parser import parse
from pshnd.verify import E1, E2, THREE_EDGE_P, SHARED_SUMMAND_P, EXPECTED_DIAGRAM

from conftest import rand_diagram, rand_real

PAPER_RECORDS = [
    ({(2, 20)}, Fraction(-9), Fraction(38)),
    (set(E1), Fraction(-8), Fraction(36)),
    ({(4, 4)}, Fraction(-1), Fraction(8)),
    (set(E2), Fraction(-1, 8), Fraction(9, 2)),
    ({(20, 2)}, Fraction(-1, 9), Fraction(38, 9)),
]


def point_sets(records):
    return {r.points for r in records}


def test_bidegree_decompose(ce_p):
    assert set(bidegree_decompose(z**3 * zb**3)) == {(6, 0)}
    comps = bidegree_decompose(ce_p)
    assert set(comps) == EXPECTED_DIAGRAM
    assert sum(comps.values(), start=0 * z) == ce_p
    assert all(is_real_valued(c) for c in comps.values())
    assert comps[(12, 3)] == z**2 * w**2 * zb**10 * wb + z**10 * w * zb**2 * wb**2


def test_newton_diagram_examples(ce_p):
    assert newton_diagram(0 * z) == frozenset()
    assert newton_diagram(ce_p) == EXPECTED_DIAGRAM
    p22 = parse(SHARED_SUMMAND_P) - parse("nsq^500")
    assert newton_diagram(p22) == {(6, 0), (5, 2), (4, 4), (2, 12), (0, 20)}


def test_counterexample_extreme_sets(ce_p):
    records = extreme_sets(newton_diagram(ce_p))
    got = [(set(r.points), r.line.slope, r.line.intercept) for r in records]
    assert got == PAPER_RECORDS
    edges = [r for r in records if r.kind == "edge"]
    assert [r.points for r in edges] == [E1, E2]
    assert point_sets(extreme_sets_bruteforce(newton_diagram(ce_p))) == point_sets(records)


def test_small_diagrams():
    assert point_sets(extreme_sets({(1, 1)})) == {frozenset({(1, 1)})}
    assert extreme_sets({(1, 1)})[0].line.slope == -1
    assert point_sets(extreme_sets({(1, 1), (2, 3)})) == {frozenset({(1, 1)})}
    assert point_sets(extreme_sets_bruteforce({(1, 1), (2, 3)})) == {frozenset({(1, 1)})}
    assert extreme_sets(set()) == [] == extreme_sets_bruteforce(set())


def test_degenerate_alignments():
    vertical = {(0, 0), (0, 3), (0, 5)}
    assert point_sets(extreme_sets(vertical)) == {frozenset({(0, 0)})}
    horizontal = {(0, 2), (3, 2), (7, 2)}
    assert point_sets(extreme_sets(horizontal)) == {frozenset({(0, 2)})}
    for d in (vertical, horizontal):
        assert point_sets(extreme_sets_bruteforce(d)) == point_sets(extreme_sets(d))


def test_collinear_interior_points_kept():
    d = {(0, 4), (1, 2), (2, 0), (3, 3)}
    recs = [r for r in extreme_sets(d) if r.kind == "edge"]
    assert [r.points for r in recs] == [frozenset({(0, 4), (1, 2), (2, 0)})]
    assert edge_weights(recs[0], d) == (2, 1)


def test_vertex_slopes_are_simplest():
    # incoming slope -3, outgoing -1/4: simplest strictly between is -1
    d = {(0, 7), (2, 1), (6, 0)}
    rec = [r for r in extreme_sets(d) if r.points == {(2, 1)}][0]
    assert rec.line.slope == -1
    # between -1/2 and -1/3 the simplest is -2/5
    d = {(0, 4), (2, 3), (5, 2)}
    recs = {r.points: r.line.slope for r in extreme_sets(d)}
    assert recs[frozenset({(2, 3)})] == Fraction(-2, 5)


def test_support_line_rejects_nonnegative_slope():
    with pytest.raises(ValueError):
        SupportLine(Fraction(0), Fraction(1))


def test_bruteforce_cap():
    big = {(i, 300 - i) for i in range(BRUTEFORCE_CAP + 1)}
    with pytest.raises(DiagramTooLarge):
        extreme_sets_bruteforce(big)


def test_oracle_agreement_random():
    rng = random.Random(7)
    for _ in range(400):
        d = rand_diagram(rng)
        fast = extreme_sets(d)
        assert point_sets(fast) == point_sets(extreme_sets_bruteforce(d)), sorted(d)
        slopes = [r.line.slope for r in fast]
        assert slopes == sorted(slopes)
        for r in fast:
            assert check_record(r, d)
            assert (r.kind == "edge") == (len(r.points) >= 2)
            p, q = edge_weights(r, d)
            assert p >= 1 and q >= 1 and gcd(p, q) == 1


def test_check_record_rejects_bad_record():
    d = {(0, 2), (1, 1), (2, 0), (3, 3)}
    bad = ExtremeSetRecord(frozenset({(0, 2)}), SupportLine(Fraction(-1), Fraction(2)))
    assert not check_record(bad, d)


def test_edge_weights_counterexample(ce_p):
    d = newton_diagram(ce_p)
    by_points = {r.points: r for r in extreme_sets(d)}
    assert edge_weights(by_points[E1], d) == (8, 1)
    assert edge_weights(by_points[E2], d) == (1, 8)
    assert {8 * A + B for A, B in E1} == {36}
    assert {A + 8 * B for A, B in E2} == {36}


def test_edge_weights_examples():
    p22 = parse(SHARED_SUMMAND_P)
    d = newton_diagram(p22)
    by_points = {r.points: r for r in extreme_sets(d)}
    assert edge_weights(by_points[frozenset({(6, 0), (5, 2), (4, 4)})], d) == (2, 1)
    p21 = parse(THREE_EDGE_P)
    d = newton_diagram(p21)
    by_points = {r.points: r for r in extreme_sets(d)}
    assert edge_weights(by_points[frozenset({(18, 4), (26, 3), (34, 2)})], d) == (1, 8)


def test_edge_weights_detects_inconsistency():
    rec = ExtremeSetRecord(frozenset({(0, 2), (1, 0)}), SupportLine(Fraction(-1), Fraction(2)))
    with pytest.raises(ValueError):
        edge_weights(rec)


def test_restrict(ce_p):
    d = newton_diagram(ce_p)
    assert restrict(ce_p, d) == ce_p
    assert restrict(ce_p, set()).is_zero()
    assert restrict(ce_p, {(0, 0), (1, 7)}).is_zero()


def test_hull_lattice_points():
    assert len(hull_lattice_points({(0, 0), (2, 0), (0, 2)})) == 6
    assert hull_lattice_points({(0, 0), (0, 3)}) == {(0, 0), (0, 1), (0, 2), (0, 3)}
    assert hull_lattice_points({(3, 4)}) == {(3, 4)}
    with pytest.raises(ValueError):
        hull_lattice_points(set())


def test_counterexample_hull(ce_p):
    inside = hull_lattice_points(E1 | E2) & newton_diagram(ce_p)
    assert inside == EXPECTED_DIAGRAM - {(8, 16)}


def test_convex_hull_ccw():
    hull = convex_hull({(0, 0), (4, 0), (4, 4), (0, 4), (2, 2), (2, 0)})
    assert hull == [(0, 0), (4, 0), (4, 4), (0, 4)]


# -- randomized properties -------------------------------------------------


def test_partition_of_unity_and_monotonicity():
    rng = random.Random(8)
    for _ in range(200):
        p = rand_real(rng)
        comps = bidegree_decompose(p)
        assert sum(comps.values(), start=0 * z) == p
        pts = sorted(newton_diagram(p))
        s1 = set(rng.sample(pts, len(pts) // 2))
        s2 = set(rng.sample(pts, len(pts) // 2)) | {(99, 99)}
        assert restrict(p, s1) + restrict(p, s2 - s1) == restrict(p, s1 | s2)


def test_transform_law():
    rng = random.Random(9)
    for _ in range(200):
        p = rand_real(rng)
        k, l = rng.randint(1, 5), rng.randint(1, 5)
        want = {(k * A, l * B) for A, B in newton_diagram(p)}
        assert newton_diagram(substitute_powers(p, k, l)) == want


def _weighted_lowest_part_holds(p):
    d = newton_diagram(p)
    for rec in extreme_sets(d):
        k, l = edge_weights(rec, d)
        lhs = lowest_order_part(substitute_powers(p, k, l))
        rhs = substitute_powers(restrict(p, rec.points), k, l)
        if lhs != rhs:
            return False
    return True


def test_weighted_lowest_part_random():
    rng = random.Random(10)
    checked = 0
    while checked < 250:
        p = rand_real(rng, degree=8)
        if p.is_zero():
            continue
        assert _weighted_lowest_part_holds(p)
        checked += 1


def test_weighted_lowest_part_counterexample(ce_p):
    assert _weighted_lowest_part_holds(ce_p)
    assert _weighted_lowest_part_holds(parse(SHARED_SUMMAND_P))
