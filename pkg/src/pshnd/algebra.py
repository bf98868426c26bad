"""Exact polynomials in z, zb, w, wb over the Gaussian rationals.

The conjugate variables are independent ring generators, so a monomial is
an exponent quadruple ``(a, b, c, d)`` standing for ``z^a zb^b w^c wb^d``.
Realness is a checked predicate rather than a type constraint.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

Quad = Tuple[int, int, int, int]
Scalar = Union[int, Fraction, "GaussianRational"]

VARIABLES = ("z", "zb", "w", "wb")


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    @staticmethod
    def _operand(x):
        if isinstance(x, (GaussianRational, int, Fraction, complex)):
            return GaussianRational.coerce(x)
        return None

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        o = GaussianRational._operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational._operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianRational._operand(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational._operand(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational._operand(other)
        if o is None:
            return NotImplemented
        n = o.abs2()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _check_quad(q) -> Quad:
    q = tuple(int(e) for e in q)
    if len(q) != 4 or min(q) < 0:
        raise ValueError(f"invalid exponent quadruple {q!r}")
    return q  # type: ignore[return-value]


class MixedPolynomial:
    """Sparse polynomial in z, zb, w, wb with Gaussian-rational coefficients.

    Zero coefficients are never stored, so equality is structural. Instances
    are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Quad, Scalar] | Iterable[Tuple[Quad, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for q, c in items:
            q = _check_quad(q)
            c = GaussianRational.coerce(c)
            if q in acc:
                acc[q] = acc[q] + c
            else:
                acc[q] = c
        self._terms = {q: acc[q] for q in sorted(acc) if not acc[q].is_zero()}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict) -> "MixedPolynomial":
        p = cls.__new__(cls)
        p._terms = {q: terms[q] for q in sorted(terms) if not terms[q].is_zero()}
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> "MixedPolynomial":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, a=0, b=0, c=0, d=0, coeff: Scalar = 1) -> "MixedPolynomial":
        return cls({(a, b, c, d): coeff})

    @classmethod
    def var(cls, name: str) -> "MixedPolynomial":
        q = [0, 0, 0, 0]
        q[VARIABLES.index(name)] = 1
        return cls({tuple(q): 1})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> Mapping[Quad, GaussianRational]:
        return self._terms

    def items(self) -> Iterator[Tuple[Quad, GaussianRational]]:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, a, b, c, d) -> GaussianRational:
        return self._terms.get((a, b, c, d), ZERO)

    def degree(self) -> int:
        return max((sum(q) for q in self._terms), default=-1)

    def is_holomorphic(self) -> bool:
        return all(q[1] == 0 and q[3] == 0 for q in self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for q, c in other._terms.items():
            out[q] = out[q] + c if q in out else c
        return MixedPolynomial._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return MixedPolynomial._from_clean({q: -c for q, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, HolomorphicPolynomial):
            other = other.to_mixed()
        if not isinstance(other, MixedPolynomial):
            c = GaussianRational.coerce(other)
            return MixedPolynomial._from_clean({q: v * c for q, v in self._terms.items()})
        out: dict = {}
        for (a1, b1, c1, d1), x in self._terms.items():
            for (a2, b2, c2, d2), y in other._terms.items():
                q = (a1 + a2, b1 + b2, c1 + c2, d1 + d2)
                v = x * y
                out[q] = out[q] + v if q in out else v
        return MixedPolynomial._from_clean(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MixedPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "MixedPolynomial":
        return MixedPolynomial._from_clean(
            {(b, a, d, c): v.conjugate() for (a, b, c, d), v in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, MixedPolynomial):
            return self._terms == other._terms
        try:
            return self == MixedPolynomial.constant(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .parser import format_polynomial

        return f"MixedPolynomial({format_polynomial(self)!r})"


def _as_poly(x) -> MixedPolynomial:
    if isinstance(x, MixedPolynomial):
        return x
    if isinstance(x, HolomorphicPolynomial):
        return x.to_mixed()
    return MixedPolynomial.constant(x)


def is_real_valued(p: MixedPolynomial) -> bool:
    """True iff coeff(a,b,c,d) equals the conjugate of coeff(b,a,d,c) everywhere."""
    t = p.terms
    for (a, b, c, d), v in t.items():
        partner = t.get((b, a, d, c))
        if partner is None or partner != v.conjugate():
            return False
    return True


_DERIV_INDEX = {"z": 0, "zb": 1, "w": 2, "wb": 3}


def wirtinger_derive(p: MixedPolynomial, var: str) -> MixedPolynomial:
    """Formal partial derivative in one of z, zb, w, wb."""
    if var not in _DERIV_INDEX:
        raise ValueError(f"unknown variable {var!r}; expected one of z, zb, w, wb")
    k = _DERIV_INDEX[var]
    out = {}
    for q, v in p.items():
        e = q[k]
        if e:
            nq = list(q)
            nq[k] = e - 1
            out[tuple(nq)] = v * e
    return MixedPolynomial._from_clean(out)


def substitute_powers(p: MixedPolynomial, k: int, l: int) -> MixedPolynomial:
    """Compose with the singular map (z, w) -> (z^k, w^l)."""
    if k < 1 or l < 1:
        raise ValueError(f"substitution powers must be positive, got ({k}, {l})")
    return MixedPolynomial._from_clean(
        {(k * a, k * b, l * c, l * d): v for (a, b, c, d), v in p.items()}
    )


def lowest_order_part(p: MixedPolynomial) -> MixedPolynomial:
    """Terms of minimal total degree a+b+c+d."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no lowest-order part")
    m = min(sum(q) for q in p.terms)
    return MixedPolynomial._from_clean({q: v for q, v in p.items() if sum(q) == m})


def norm_power(n: int) -> MixedPolynomial:
    """(z zb + w wb)^n expanded with exact binomial coefficients."""
    if n < 1:
        raise ValueError("norm_power needs n >= 1")
    return MixedPolynomial._from_clean(
        {(k, k, n - k, n - k): GaussianRational(comb(n, k)) for k in range(n + 1)}
    )


def _power_table(x: complex, n: int) -> list:
    table = [1 + 0j]
    for _ in range(n):
        table.append(table[-1] * x)
    return table


def evaluate(p: MixedPolynomial, z: complex, w: complex) -> complex:
    """Float evaluation with zb = conj(z), wb = conj(w).

    Terms are accumulated in canonical order. Overflow propagates as inf/nan.
    """
    if p.is_zero():
        return 0j
    z, w = complex(z), complex(w)
    ma = max(max(q[0], q[1]) for q in p.terms)
    mc = max(max(q[2], q[3]) for q in p.terms)
    zt, zbt = _power_table(z, ma), _power_table(z.conjugate(), ma)
    wt, wbt = _power_table(w, mc), _power_table(w.conjugate(), mc)
    total = 0j
    for (a, b, c, d), v in p.items():
        total += complex(v) * (zt[a] * zbt[b]) * (wt[c] * wbt[d])
    return total


def evaluate_exact(p: MixedPolynomial, z: Scalar, w: Scalar) -> GaussianRational:
    """Exact evaluation at a Gaussian-rational point."""
    z = GaussianRational.coerce(z)
    w = GaussianRational.coerce(w)
    if p.is_zero():
        return ZERO

    def table(x, n):
        t = [ONE]
        for _ in range(n):
            t.append(t[-1] * x)
        return t

    ma = max(max(q[0], q[1]) for q in p.terms)
    mc = max(max(q[2], q[3]) for q in p.terms)
    zt, zbt = table(z, ma), table(z.conjugate(), ma)
    wt, wbt = table(w, mc), table(w.conjugate(), mc)
    total = ZERO
    for (a, b, c, d), v in p.items():
        total = total + v * zt[a] * zbt[b] * wt[c] * wbt[d]
    return total


class HolomorphicPolynomial:
    """Polynomial in z and w only; keys are (a, c) exponent pairs."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], Scalar] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for (a, c), v in items:
            if a < 0 or c < 0:
                raise ValueError(f"invalid exponent pair {(a, c)!r}")
            v = GaussianRational.coerce(v)
            acc[(a, c)] = acc[(a, c)] + v if (a, c) in acc else v
        self._terms = {k: acc[k] for k in sorted(acc) if not acc[k].is_zero()}

    @classmethod
    def monomial(cls, a: int, c: int, coeff: Scalar = 1) -> "HolomorphicPolynomial":
        return cls({(a, c): coeff})

    @classmethod
    def from_mixed(cls, p: MixedPolynomial) -> "HolomorphicPolynomial":
        if not p.is_holomorphic():
            raise ValueError("polynomial depends on zb or wb")
        return cls({(a, c): v for (a, _, c, _), v in p.items()})

    @property
    def terms(self) -> Mapping[Tuple[int, int], GaussianRational]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def to_mixed(self) -> MixedPolynomial:
        return MixedPolynomial._from_clean({(a, 0, c, 0): v for (a, c), v in self._terms.items()})

    def conjugate_mixed(self) -> MixedPolynomial:
        return MixedPolynomial._from_clean(
            {(0, a, 0, c): v.conjugate() for (a, c), v in self._terms.items()}
        )

    def dz(self) -> "HolomorphicPolynomial":
        return HolomorphicPolynomial({(a - 1, c): v * a for (a, c), v in self._terms.items() if a})

    def dw(self) -> "HolomorphicPolynomial":
        return HolomorphicPolynomial({(a, c - 1): v * c for (a, c), v in self._terms.items() if c})

    def coefficients_in_w(self, z: complex) -> list:
        """Coefficients of w^0..w^n after fixing z (ascending powers)."""
        n = max((c for _, c in self._terms), default=0)
        out = [0j] * (n + 1)
        for (a, c), v in self._terms.items():
            out[c] += complex(v) * z**a
        return out

    def __add__(self, other):
        out = dict(self._terms)
        for k, v in _as_holo(other)._terms.items():
            out[k] = out[k] + v if k in out else v
        return HolomorphicPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return HolomorphicPolynomial({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_holo(other))

    def __rsub__(self, other):
        return _as_holo(other) - self

    def __mul__(self, other):
        if not isinstance(other, HolomorphicPolynomial):
            c = GaussianRational.coerce(other)
            return HolomorphicPolynomial({k: v * c for k, v in self._terms.items()})
        out: dict = {}
        for (a1, c1), x in self._terms.items():
            for (a2, c2), y in other._terms.items():
                k = (a1 + a2, c1 + c2)
                out[k] = out[k] + x * y if k in out else x * y
        return HolomorphicPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HolomorphicPolynomial):
            return self._terms == other._terms
        if isinstance(other, MixedPolynomial):
            return self.to_mixed() == other
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        from .parser import format_polynomial

        return f"HolomorphicPolynomial({format_polynomial(self.to_mixed())!r})"


def _as_holo(x) -> HolomorphicPolynomial:
    if isinstance(x, HolomorphicPolynomial):
        return x
    return HolomorphicPolynomial({(0, 0): x})


def abs2(f: HolomorphicPolynomial | MixedPolynomial) -> MixedPolynomial:
    """f * conj(f) in the four-variable ring."""
    if isinstance(f, HolomorphicPolynomial):
        return f.to_mixed() * f.conjugate_mixed()
    return f * f.conjugate()


class ModulusCombination:
    """Signed sum of squared moduli, sum of sign * |f|^2 with sign in {-1, +1}."""

    __slots__ = ("summands",)

    def __init__(self, summands: Sequence[Tuple[int, HolomorphicPolynomial]]):
        checked = []
        for sign, f in summands:
            if sign not in (-1, 1):
                raise ValueError(f"sign must be -1 or +1, got {sign!r}")
            if isinstance(f, MixedPolynomial):
                f = HolomorphicPolynomial.from_mixed(f)
            checked.append((int(sign), f))
        self.summands = tuple(checked)

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def __repr__(self):
        return f"ModulusCombination({list(self.summands)!r})"


def expand_modulus_combination(mc: ModulusCombination) -> MixedPolynomial:
    total = MixedPolynomial()
    for sign, f in mc:
        total = total + abs2(f) * sign
    return total


z = MixedPolynomial.var("z")
zb = MixedPolynomial.var("zb")
w = MixedPolynomial.var("w")
wb = MixedPolynomial.var("wb")


def exact_point(x: complex) -> GaussianRational:
    """The float's exact dyadic value as a Gaussian rational."""
    x = complex(x)
    if not (cmath.isfinite(x)):
        raise ValueError(f"non-finite point {x!r}")
    return GaussianRational(Fraction(x.real), Fraction(x.imag))
