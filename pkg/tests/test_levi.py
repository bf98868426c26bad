import random
from fractions import Fraction

from pshnd.algebra import (
    HolomorphicPolynomial,
    MixedPolynomial,
    ModulusCombination,
    abs2,
    expand_modulus_combination,
    is_real_valued,
    w,
    wb,
    z,
    zb,
)
from pshnd.levi import (
    HessianDetDecomposition,
    decomposition_expand,
    hessian_det_direct,
    hessian_det_formula,
    levi_matrix,
    wronskian,
)
from pshnd.parser import parse
from pshnd.verify import build_paper_counterexample

from conftest import rand_holo, rand_mc, rand_real

ONE = MixedPolynomial.constant(1)


def H(a, c, coeff=1):
    return HolomorphicPolynomial.monomial(a, c, coeff)


def test_levi_examples(ce_p):
    assert levi_matrix(z * zb + w * wb).rows() == ((ONE, 0 * z), (0 * z, ONE))
    h = levi_matrix(z * zb * w * wb)
    assert (h.pzz, h.pwz, h.pzw, h.pww) == (w * wb, z * wb, zb * w, z * zb)
    h = levi_matrix(ce_p)
    assert is_real_valued(h.pzz) and is_real_valued(h.pww)
    assert h.pzw == h.pwz.conjugate()


def test_direct_det_examples():
    assert hessian_det_direct(z * zb + w * wb) == ONE
    f = H(2, 3) + H(5, 0, 7)
    assert hessian_det_direct(abs2(f)).is_zero()


def test_union_det_closed_form():
    ce = build_paper_counterexample()
    q1 = parse("99*z^8*w^8 + 18*z^9 + 18*w^9")
    want = abs2(z**2 * w**2 * q1) - abs2(18 * z**2 * w**11) - abs2(18 * z**11 * w**2)
    assert hessian_det_direct(ce.union_part()) == want


def test_wronskian_examples():
    assert wronskian(H(1, 0), H(0, 1)) == ONE
    assert wronskian(H(2, 2), H(10, 1)) == H(11, 2, -18)
    assert wronskian(H(4, 2), H(4, 8)) == H(7, 9, 24)


def test_wronskian_antisymmetric():
    rng = random.Random(20)
    for _ in range(100):
        f, g = rand_holo(rng), rand_holo(rng)
        assert wronskian(f, g) == -wronskian(g, f)
        assert wronskian(f, f).is_zero()


def test_formula_examples():
    assert len(hessian_det_formula(ModulusCombination([(1, H(1, 1))]))) == 0
    d = hessian_det_formula(ModulusCombination([(1, H(2, 2)), (1, H(10, 1))]))
    assert d.terms == ((1, H(11, 2, -18)),)
    assert d.pairs == ((0, 1),)


def test_formula_counterexample_union():
    ce = build_paper_counterexample()
    d = hessian_det_formula(ce.union_mc)
    assert d.signs() == [1, -1, -1]
    negatives = {abs2(wr) for s, wr in d.terms if s < 0}
    assert negatives == {abs2(H(2, 11, 18)), abs2(H(11, 2, 18))}


def test_decomposition_expand_examples():
    assert decomposition_expand(HessianDetDecomposition(())).is_zero()
    assert decomposition_expand(HessianDetDecomposition(((1, H(0, 0)),))) == ONE
    ce = build_paper_counterexample()
    for mc in (ce.mc, ce.union_mc, ce.hull_mc):
        assert decomposition_expand(hessian_det_formula(mc)) == hessian_det_direct(expand_modulus_combination(mc))


def test_formula_matches_direct_random():
    rng = random.Random(21)
    for _ in range(250):
        mc = rand_mc(rng)
        assert decomposition_expand(hessian_det_formula(mc)) == hessian_det_direct(expand_modulus_combination(mc))


def test_single_summand_zero():
    rng = random.Random(22)
    for _ in range(50):
        f = rand_holo(rng)
        sign = rng.choice((-1, 1))
        assert hessian_det_direct(expand_modulus_combination(ModulusCombination([(sign, f)]))).is_zero()


def test_det_real_and_scaling():
    rng = random.Random(23)
    for _ in range(100):
        p = rand_real(rng, degree=5)
        d = hessian_det_direct(p)
        assert is_real_valued(d)
        lam = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        assert hessian_det_direct(p * lam) == d * (lam * lam)
