import cmath
import math

import numpy as np
import pytest

from pshnd.algebra import GaussianRational, HolomorphicPolynomial, evaluate, w, wb, z, zb
from pshnd.levi import hessian_det_direct
from pshnd.parser import parse
from pshnd.pshtest import (
    NonFiniteEvaluation,
    NotRealValuedError,
    RootFindingError,
    SampleConfig,
    SplitMix64,
    WitnessNotFound,
    backward_error,
    curve_witness,
    exact_levi_check,
    levi_eigen_min,
    psh_sample_check,
    sample_bidisc,
    slice_schedule,
    univariate_roots,
)
from pshnd.verify import COUNTEREXAMPLE_P, Q1, Q2, build_paper_counterexample


def test_splitmix_reference_values():
    # published first outputs for seed 0 and seed 1234567
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]
    g = SplitMix64(1234567)
    assert g.next_u64() == 6457827717110365317


def test_sample_bidisc_inside_and_deterministic():
    zs, ws = sample_bidisc(0.5, 2000, 3)
    assert np.all(np.abs(zs) <= 0.5) and np.all(np.abs(ws) <= 0.5)
    zs2, ws2 = sample_bidisc(0.5, 2000, 3)
    assert np.array_equal(zs, zs2) and np.array_equal(ws, ws2)
    # uniform area: about a quarter of the points fall inside half the radius
    frac = float(np.mean(np.abs(zs) <= 0.25))
    assert 0.2 < frac < 0.3


def test_sample_config_validation():
    for bad in (dict(radius=0), dict(samples=0), dict(seed=-1), dict(seed=1 << 64), dict(tolerance=-1)):
        with pytest.raises(ValueError):
            SampleConfig(**bad)


def test_levi_eigen_min_examples():
    assert levi_eigen_min(z * zb + w * wb, 0.3 + 0.1j, -0.2j) == pytest.approx((1.0, math.sqrt(2)))
    lmin, scale = levi_eigen_min(-z * zb, 0.5, 0.5)
    assert lmin == pytest.approx(-1.0) and scale == pytest.approx(1.0)
    lmin, scale = levi_eigen_min(z * zb * w * wb, 1, 1)
    assert lmin == pytest.approx(0.0, abs=1e-15) and scale == pytest.approx(2.0)


def test_levi_eigen_min_rejects_non_real():
    with pytest.raises(NotRealValuedError):
        levi_eigen_min(z**2 * zb, 0.1, 0.1)


def test_levi_eigen_min_non_finite():
    with pytest.raises(NonFiniteEvaluation):
        levi_eigen_min(z**300 * zb**300, 1e3, 0)


def test_exact_levi_check():
    det, tr, frob2 = exact_levi_check(z * zb * w * wb, GaussianRational(1), GaussianRational(1))
    assert (det, tr, frob2) == (0, 2, 4)


def test_sample_check_counterexample_clean():
    rep = psh_sample_check(parse(COUNTEREXAMPLE_P), SampleConfig(radius=1.0, samples=10_000, seed=1, tolerance=1e-9))
    assert rep.verdict == "no-violation-found" and rep.violation is None
    assert rep.samples_used == 10_000


def test_sample_check_negative():
    rep = psh_sample_check(-z * zb, SampleConfig(samples=100, seed=9))
    assert rep.violated and rep.samples_used == 1
    v = rep.violation
    assert v.lambda_min < -1e-9 * v.scale
    assert v.exact_trace < 0 and complex(v.z_exact) == v.z


def test_sample_check_deterministic_across_threads(monkeypatch):
    p = parse("z*zb*w*wb - 1/10*abs2(z^2 + w^2) + abs2(z)^2")
    cfg = SampleConfig(radius=1.0, samples=3000, seed=42)
    one = psh_sample_check(p, cfg, threads=1)
    assert psh_sample_check(p, cfg, threads=4) == one
    monkeypatch.setenv("PSHND_THREADS", "3")
    assert psh_sample_check(p, cfg) == one
    monkeypatch.setenv("PSHND_THREADS", "zero")
    with pytest.raises(ValueError):
        psh_sample_check(p, cfg)


def test_sample_check_union_part_outcome():
    # the negative region hugs V(Q1) and is too thin to be hit by sampling
    ce = build_paper_counterexample()
    rep = psh_sample_check(ce.union_part(), SampleConfig(radius=0.1, samples=10_000, seed=0, tolerance=1e-9))
    assert rep.verdict == "no-violation-found"


def test_roots_examples():
    assert univariate_roots([1, -3, 2]) == pytest.approx([1, 2])
    roots = univariate_roots([1, 0, 0, 0, 0, 0, 0, 0, 0, 1])
    assert len(roots) == 9
    for r in roots:
        assert abs(abs(r) - 1) < 1e-12
        assert abs(r**9 + 1) < 1e-12
    t = 0.05
    coeffs = [18, 99 * t**8] + [0] * 7 + [18 * t**9]
    roots = univariate_roots(coeffs)
    assert len(roots) == 9
    for r in roots:
        assert abs(abs(r) - t) < 1e-3 * t
        assert backward_error(coeffs, r) <= 1e-10


def test_roots_multiplicity_and_zero_roots():
    roots = univariate_roots([1, -2, 1, 0, 0], tol=1e-8)
    assert roots[:2] == [0, 0]
    assert roots[2:] == pytest.approx([1, 1], abs=1e-6)


def test_roots_errors():
    with pytest.raises(ValueError):
        univariate_roots([0, 5])
    with pytest.raises(RootFindingError) as info:
        univariate_roots([1, 0, 0, 0, 0, 0, 1], max_iter=0, tol=1e-14)
    assert len(info.value.best) == 6


def test_slice_schedule():
    s = slice_schedule(0.1)
    assert len(s) == 320
    assert abs(s[0] - 0.05) < 1e-15
    assert abs(abs(s[-1]) - 0.1 * 2.0**-40) < 1e-25


def _check_witness(v, p, radius):
    assert v.z != 0 and v.w != 0
    assert abs(v.z) <= radius and abs(v.w) <= radius
    assert v.lambda_min < 0
    det, tr, _ = exact_levi_check(p, v.z_exact, v.w_exact)
    assert det == v.exact_det and (det < 0 or tr < 0)


@pytest.mark.parametrize("radius", [0.1, 0.01])
def test_witness_union(radius):
    ce = build_paper_counterexample()
    p = ce.union_part()
    v = curve_witness(HolomorphicPolynomial.from_mixed(parse(Q1)), p, radius=radius)
    _check_witness(v, p, radius)
    det_f = evaluate(hessian_det_direct(p), v.z, v.w).real
    assert det_f <= -0.5 * abs(18 * v.z**2 * v.w**11) ** 2
    q1 = parse(Q1)
    scale = sum(abs(complex(c)) * abs(v.z) ** a * abs(v.w) ** cc for (a, _, cc, _), c in q1.items())
    assert abs(evaluate(q1, v.z, v.w)) <= 1e-10 * scale


@pytest.mark.parametrize("radius", [0.1, 0.01])
def test_witness_hull(radius):
    ce = build_paper_counterexample()
    p = ce.hull_part()
    v = curve_witness(HolomorphicPolynomial.from_mixed(parse(Q2)), p, radius=radius)
    _check_witness(v, p, radius)


def test_witness_not_found_on_axis():
    with pytest.raises(WitnessNotFound):
        curve_witness(HolomorphicPolynomial.monomial(0, 1), z * zb, radius=0.1, depth=5)


def test_witness_rejects_w_free_curve():
    with pytest.raises(ValueError):
        curve_witness(HolomorphicPolynomial.monomial(1, 0), z * zb)
