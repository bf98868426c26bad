"""Numeric plurisubharmonicity tests.

Positivity is only ever observed ("no violation at N samples"); negativity
is certified. Every reported :class:`Violation` has been re-checked in exact
Gaussian-rational arithmetic at a dyadic point, so refutations never rest on
floating-point noise.

Sampling uses SplitMix64 (constants 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
0x94D049BB133111EB); each sample consumes four outputs ``u1..u4`` mapped to
``[0, 1)`` by ``(x >> 11) * 2**-53`` and places ``z = R*sqrt(u1)*e^{2 pi i u2}``,
``w = R*sqrt(u3)*e^{2 pi i u4}``, i.e. uniformly in the bidisc of radius R.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .algebra import (
    GaussianRational,
    HolomorphicPolynomial,
    MixedPolynomial,
    evaluate_exact,
    exact_point,
    is_real_valued,
)
from .levi import levi_matrix

MASK64 = (1 << 64) - 1
EPS = 2.0**-52


class NotRealValuedError(ValueError):
    pass


class NonFiniteEvaluation(ArithmeticError):
    pass


class RootFindingError(ArithmeticError):
    def __init__(self, message: str, best: Sequence[complex]):
        super().__init__(message)
        self.best = list(best)


class WitnessNotFound(LookupError):
    pass


class SplitMix64:
    """64-bit SplitMix generator; fully specified so reports are portable."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        x = self.state
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
        return x ^ (x >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def sample_bidisc(radius: float, samples: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = SplitMix64(seed)
    zs = np.empty(samples, dtype=complex)
    ws = np.empty(samples, dtype=complex)
    tau = 2.0 * math.pi
    for k in range(samples):
        r1, a1, r2, a2 = rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()
        zs[k] = cmath.rect(radius * math.sqrt(r1), tau * a1)
        ws[k] = cmath.rect(radius * math.sqrt(r2), tau * a2)
    return zs, ws


@dataclass(frozen=True)
class SampleConfig:
    radius: float = 1.0
    samples: int = 10_000
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclass(frozen=True)
class Violation:
    z: complex
    w: complex
    lambda_min: float
    scale: float
    context: str = ""
    # the dyadic point at which the exact check was carried out
    z_exact: Optional[GaussianRational] = field(default=None, compare=False)
    w_exact: Optional[GaussianRational] = field(default=None, compare=False)
    exact_det: Optional[Fraction] = field(default=None, compare=False)
    exact_trace: Optional[Fraction] = field(default=None, compare=False)


@dataclass(frozen=True)
class PshReport:
    verdict: str
    violation: Optional[Violation]
    samples_used: int

    @property
    def violated(self) -> bool:
        return self.verdict == "violated"


# -- Levi data shared by the float, multiprecision and exact paths ---------


class _LeviData:
    def __init__(self, p: MixedPolynomial):
        if not is_real_valued(p):
            raise NotRealValuedError("polynomial is not real-valued")
        self.p = p
        self.levi = levi_matrix(p)
        self.det = self.levi.determinant()
        self.arrays = [_compile(e) for e in (self.levi.pzz, self.levi.pwz, self.levi.pww, self.det)]


@lru_cache(maxsize=64)
def _levi_data(p: MixedPolynomial) -> _LeviData:
    return _LeviData(p)


def _compile(p: MixedPolynomial):
    quads = np.array(list(p.terms), dtype=np.int64).reshape(-1, 4)
    coeffs = np.array([complex(v) for v in p.terms.values()], dtype=complex)
    return quads, coeffs


def _powers(x: np.ndarray, n: int) -> List[np.ndarray]:
    out = [np.ones_like(x)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _eval_many(compiled, z: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Values and absolute-term sums at many points, canonical term order."""
    quads, coeffs = compiled
    total = np.zeros_like(z)
    absum = np.zeros(z.shape, dtype=float)
    if len(coeffs) == 0:
        return total, absum
    n = int(quads.max())
    zp, zbp = _powers(z, n), _powers(np.conj(z), n)
    wp, wbp = _powers(w, n), _powers(np.conj(w), n)
    for (a, b, c, d), v in zip(quads, coeffs):
        t = v * (zp[a] * zbp[b]) * (wp[c] * wbp[d])
        total = total + t
        absum = absum + np.abs(t)
    return total, absum


def _lambda_from_parts(pzz, pwz, pww, det):
    """Stable minimal eigenvalue of [[pzz, pwz], [conj(pwz), pww]].

    The determinant comes from the exactly-cancelled determinant polynomial,
    so det/lambda_max avoids the cancellation of tr - sqrt(tr^2 - 4 det).
    """
    m = 0.5 * (pzz + pww)
    s = np.hypot(0.5 * (pzz - pww), np.abs(pwz))
    lmax = m + s
    with np.errstate(divide="ignore", invalid="ignore"):
        lmin = np.where(lmax > 0, det / np.where(lmax > 0, lmax, 1.0), m - s)
    scale = np.sqrt(pzz * pzz + pww * pww + 2.0 * np.abs(pwz) ** 2)
    return lmin, scale


def _levi_eval_many(data: _LeviData, z: np.ndarray, w: np.ndarray):
    with np.errstate(over="ignore", invalid="ignore"):
        (pzz, _), (pwz, _), (pww, _), (det, det_abs) = (_eval_many(c, z, w) for c in data.arrays)
        lmin, scale = _lambda_from_parts(pzz.real, pwz, pww.real, det.real)
    return lmin, scale, det.real, det_abs


def levi_eigen_min(p: MixedPolynomial, z: complex, w: complex) -> Tuple[float, float]:
    """Minimal Levi eigenvalue and Frobenius norm of the Levi matrix at (z, w)."""
    data = _levi_data(p)
    lmin, scale, _, _ = _levi_eval_many(data, np.array([complex(z)]), np.array([complex(w)]))
    lmin, scale = float(lmin[0]), float(scale[0])
    if not (math.isfinite(lmin) and math.isfinite(scale)):
        raise NonFiniteEvaluation(f"non-finite Levi data at z={z!r}, w={w!r}")
    return lmin, scale


# -- exact and multiprecision evaluation ----------------------------------


def exact_levi_check(p: MixedPolynomial, z, w) -> Tuple[Fraction, Fraction, Fraction]:
    """Exact (det, trace, squared Frobenius norm) of the Levi matrix at a Gaussian-rational point."""
    data = _levi_data(p)
    z, w = GaussianRational.coerce(z), GaussianRational.coerce(w)
    pzz = evaluate_exact(data.levi.pzz, z, w).re
    pww = evaluate_exact(data.levi.pww, z, w).re
    pwz = evaluate_exact(data.levi.pwz, z, w)
    det = pzz * pww - pwz.abs2()
    return det, pzz + pww, pzz * pzz + pww * pww + 2 * pwz.abs2()


def _certified_negative(det: Fraction, trace: Fraction) -> bool:
    return det < 0 or trace < 0


def _mpf(ctx, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


def _mpc(ctx, x: GaussianRational):
    return ctx.mpc(_mpf(ctx, x.re), _mpf(ctx, x.im))


def _mp_eval(ctx, p: MixedPolynomial, z, w):
    zb, wb = ctx.conj(z), ctx.conj(w)
    total = ctx.mpc(0)
    for (a, b, c, d), v in p.items():
        total += _mpc(ctx, v) * (z**a * zb**b) * (w**c * wb**d)
    return total


def _mp_lambda(ctx, data: _LeviData, z, w):
    pzz = _mp_eval(ctx, data.levi.pzz, z, w).real
    pww = _mp_eval(ctx, data.levi.pww, z, w).real
    pwz = _mp_eval(ctx, data.levi.pwz, z, w)
    det = _mp_eval(ctx, data.det, z, w).real
    m = (pzz + pww) / 2
    s = ctx.sqrt(((pzz - pww) / 2) ** 2 + abs(pwz) ** 2)
    lmax = m + s
    lmin = det / lmax if lmax > 0 else m - s
    scale = ctx.sqrt(pzz**2 + pww**2 + 2 * abs(pwz) ** 2)
    return lmin, scale


def _mpc_to_exact(x) -> GaussianRational:
    def conv(v):
        man, exp = v.man_exp
        man = int(man)
        return Fraction(man) * (Fraction(2) ** int(exp))

    return GaussianRational(conv(x.real), conv(x.imag))


# -- sampling --------------------------------------------------------------


def _threads() -> int:
    raw = os.environ.get("PSHND_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PSHND_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"PSHND_THREADS must be a positive integer, got {raw!r}")
    return n


def psh_sample_check(p: MixedPolynomial, cfg: SampleConfig, threads: Optional[int] = None) -> PshReport:
    """Sample the bidisc and report the lowest-index certified violation."""
    data = _levi_data(p)
    zs, ws = sample_bidisc(cfg.radius, cfg.samples, cfg.seed)
    threads = threads or _threads()
    chunks = np.array_split(np.arange(cfg.samples), max(1, min(threads, cfg.samples)))

    def work(idx):
        return _levi_eval_many(data, zs[idx], ws[idx])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    lmin = np.concatenate([pt[0] for pt in parts])
    scale = np.concatenate([pt[1] for pt in parts])
    bad = ~(np.isfinite(lmin) & np.isfinite(scale))
    if bad.any():
        k = int(np.argmax(bad))
        raise NonFiniteEvaluation(f"non-finite Levi data at sample {k}: z={zs[k]!r}, w={ws[k]!r}")
    for k in np.flatnonzero(lmin < -cfg.tolerance * scale):
        k = int(k)
        ze, we = exact_point(zs[k]), exact_point(ws[k])
        det, tr, _ = exact_levi_check(p, ze, we)
        if _certified_negative(det, tr):
            v = Violation(
                complex(zs[k]), complex(ws[k]), float(lmin[k]), float(scale[k]),
                context=f"sample {k}", z_exact=ze, w_exact=we, exact_det=det, exact_trace=tr,
            )
            return PshReport("violated", v, k + 1)
    return PshReport("no-violation-found", None, cfg.samples)


# -- univariate roots ------------------------------------------------------


def _horner(coeffs: Sequence[complex], x: complex) -> Tuple[complex, complex, float]:
    """p(x), p'(x) and sum |c_k||x|^k for descending coefficients."""
    p, dp, s = 0j, 0j, 0.0
    ax = abs(x)
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
        s = s * ax + abs(c)
    return p, dp, s


def backward_error(coeffs: Sequence[complex], x: complex) -> float:
    p, _, s = _horner(coeffs, x)
    return abs(p) / s if s else abs(p)


def univariate_roots(coeffs: Sequence[complex], tol: float = 1e-10, max_iter: int = 500) -> List[complex]:
    """All roots (with multiplicity) of a polynomial given by descending coefficients.

    Aberth-Ehrlich iteration started on the Cauchy-bound circle, then Newton
    polishing. Each root meets ``|q(r)| <= tol * sum |c_k| |r|^k``.
    """
    cs = [complex(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) < 2:
        raise ValueError("need a polynomial of degree >= 1 with nonzero leading coefficient")
    zeros = 0
    while cs[-1] == 0:
        cs.pop()
        zeros += 1
    n = len(cs) - 1
    roots = [0j] * zeros
    if n == 0:
        return roots
    lead = cs[0]
    bound = 1.0 + max(abs(c / lead) for c in cs[1:])
    xs = [cmath.rect(bound, 2 * math.pi * k / n + 0.5 / n) for k in range(n)]
    for _ in range(max_iter):
        done = True
        for k in range(n):
            xk = xs[k]
            p, dp, s = _horner(cs, xk)
            if p == 0:
                continue
            if abs(p) <= EPS * s:
                continue
            ratio = p / dp if dp != 0 else p / (EPS * s)
            rep = sum(1.0 / (xk - xs[j]) for j in range(n) if j != k and xk != xs[j])
            step = ratio / (1.0 - ratio * rep)
            xs[k] = xk - step
            if abs(step) > 4 * EPS * abs(xs[k]):
                done = False
        if done:
            break
    polished = []
    for x in xs:
        best, best_err = x, backward_error(cs, x)
        for _ in range(5):
            p, dp, _ = _horner(cs, best)
            if dp == 0:
                break
            cand = best - p / dp
            err = backward_error(cs, cand)
            if err < best_err:
                best, best_err = cand, err
            else:
                break
        polished.append(best)
    worst = max(backward_error(cs, x) for x in polished)
    if worst > tol:
        raise RootFindingError(f"root finder did not converge (backward error {worst:.3g})", polished)
    roots.extend(polished)
    return sorted(roots, key=lambda r: (abs(r), cmath.phase(r)))


# -- witness search on a vanishing curve ------------------------------------


SLICE_DEPTH = 40
SLICE_PHASES = 8
PRECISION_LADDER = (128, 256, 512, 1024, 2048, 4096, 8192)


def slice_schedule(radius: float, depth: int = SLICE_DEPTH) -> List[complex]:
    return [
        cmath.rect(radius * 2.0**-j, math.pi * m / 4)
        for j in range(1, depth + 1)
        for m in range(SLICE_PHASES)
    ]


def _w_coefficients_exact(q: HolomorphicPolynomial, t: GaussianRational) -> List[GaussianRational]:
    """Ascending coefficients of q(t, .) computed exactly."""
    n = max((c for _, c in q.terms), default=0)
    out = [GaussianRational(0)] * (n + 1)
    powers = {}
    for (a, c), v in q.terms.items():
        if a not in powers:
            x = GaussianRational(1)
            for _ in range(a):
                x = x * t
            powers[a] = x
        out[c] = out[c] + v * powers[a]
    return out


def _refine_and_certify(q, data: _LeviData, t_exact: GaussianRational, w0: complex):
    """Newton-refine the root at rising precision until the eigenvalue settles.

    Returns (lambda_min, scale, w_exact, det, trace, precision) for a
    certified negative point, or None.
    """
    coeffs = _w_coefficients_exact(q, t_exact)
    prev = None
    ctx = mpmath.MPContext()
    w = None
    for prec in PRECISION_LADDER:
        ctx.prec = prec
        cs = [_mpc(ctx, c) for c in coeffs]
        t = _mpc(ctx, t_exact)
        w = ctx.mpc(w0) if w is None else ctx.mpc(w)
        for _ in range(2 * int(math.log2(prec)) + 4):
            val = ctx.mpc(0)
            der = ctx.mpc(0)
            for c in reversed(cs):
                der = der * w + val
                val = val * w + c
            if der == 0:
                return None
            step = val / der
            w = w - step
            if abs(step) <= abs(w) * ctx.ldexp(1, -prec + 4):
                break
        lmin, scale = _mp_lambda(ctx, data, t, w)
        if prev is not None and (lmin < 0) == (prev < 0) and abs(lmin - prev) <= abs(lmin) * ctx.mpf(1e-6):
            if lmin >= 0:
                return None
            w_exact = _mpc_to_exact(w)
            det, tr, _ = exact_levi_check(data.p, t_exact, w_exact)
            if _certified_negative(det, tr):
                return float(lmin), float(scale), w_exact, det, tr, prec
            return None
        prev = lmin
    return None


def curve_witness(
    q: HolomorphicPolynomial,
    p: MixedPolynomial,
    radius: float = 0.1,
    tol: float = 1e-10,
    depth: int = SLICE_DEPTH,
) -> Violation:
    """Search V(q) near the origin for a point where the Levi matrix of p is indefinite.

    Slices z = t follow ``slice_schedule``; roots of ``q(t, .)`` with
    ``0 < |w| <= radius`` and relative residual ``<= tol`` are refined and
    certified exactly. The first certified point in schedule order wins.
    """
    if all(c == 0 for _, c in q.terms):
        raise ValueError("q must depend on w to be sliced")
    data = _levi_data(p)
    for idx, t in enumerate(slice_schedule(radius, depth)):
        if not 0 < abs(t) <= radius:
            continue
        t_exact = exact_point(t)
        asc = [complex(c) for c in _w_coefficients_exact(q, t_exact)]
        desc = asc[::-1]
        while desc and desc[0] == 0:
            desc.pop(0)
        if len(desc) < 2:
            continue
        roots = univariate_roots(desc, tol=tol)
        for r in roots:
            if not 0 < abs(r) <= radius:
                continue
            resid = backward_error(desc, r)
            if resid > tol:
                continue
            lmin_f, _, det_f, det_abs = (
                float(x[0]) for x in _levi_eval_many(data, np.array([t]), np.array([r]))
            )
            if det_f > 1e3 * EPS * det_abs and lmin_f > 0:
                # both eigenvalues robustly positive at this point
                continue
            got = _refine_and_certify(q, data, t_exact, r)
            if got is None:
                continue
            lmin, scale, w_exact, det, tr, prec = got
            return Violation(
                z=complex(t),
                w=complex(w_exact),
                lambda_min=lmin,
                scale=scale,
                context=(
                    f"slice {idx}; float root residual {resid:.3e}; "
                    f"refined at {prec} bits; float lambda_min at float root {lmin_f:.3e}"
                ),
                z_exact=t_exact,
                w_exact=w_exact,
                exact_det=det,
                exact_trace=tr,
            )
    raise WitnessNotFound(
        f"no certified violation on the curve within radius {radius} after {depth} slice levels"
    )
