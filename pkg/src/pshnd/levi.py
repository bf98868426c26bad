"""Levi (complex Hessian) matrices and the signed-Wronskian determinant formula."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .algebra import (
    HolomorphicPolynomial,
    MixedPolynomial,
    ModulusCombination,
    abs2,
    wirtinger_derive,
)


@dataclass(frozen=True)
class LeviMatrix:
    """Entries laid out as ((pzz, pwz), (pzw, pww)).

    ``pzz = d2P/dz dzb``, ``pwz = d2P/dw dzb``, ``pzw = d2P/dz dwb``,
    ``pww = d2P/dw dwb``.
    """

    pzz: MixedPolynomial
    pwz: MixedPolynomial
    pzw: MixedPolynomial
    pww: MixedPolynomial

    def rows(self):
        return ((self.pzz, self.pwz), (self.pzw, self.pww))

    def determinant(self) -> MixedPolynomial:
        return self.pzz * self.pww - self.pwz * self.pzw

    def trace(self) -> MixedPolynomial:
        return self.pzz + self.pww


def levi_matrix(p: MixedPolynomial) -> LeviMatrix:
    d_zb = wirtinger_derive(p, "zb")
    d_wb = wirtinger_derive(p, "wb")
    return LeviMatrix(
        pzz=wirtinger_derive(d_zb, "z"),
        pwz=wirtinger_derive(d_zb, "w"),
        pzw=wirtinger_derive(d_wb, "z"),
        pww=wirtinger_derive(d_wb, "w"),
    )


def hessian_det_direct(p: MixedPolynomial) -> MixedPolynomial:
    return levi_matrix(p).determinant()


def wronskian(f: HolomorphicPolynomial, g: HolomorphicPolynomial) -> HolomorphicPolynomial:
    """df/dz * dg/dw - dg/dz * df/dw."""
    return f.dz() * g.dw() - g.dz() * f.dw()


@dataclass(frozen=True)
class HessianDetDecomposition:
    """det H_P as a sum of sign * |W|^2, one term per unordered pair."""

    terms: Tuple[Tuple[int, HolomorphicPolynomial], ...]
    pairs: Tuple[Tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.terms)

    def signs(self) -> List[int]:
        return [s for s, _ in self.terms]


def hessian_det_formula(mc: ModulusCombination) -> HessianDetDecomposition:
    summands = list(mc)
    terms = []
    pairs = []
    for i in range(len(summands)):
        ci, fi = summands[i]
        for j in range(i + 1, len(summands)):
            cj, fj = summands[j]
            wij = wronskian(fi, fj)
            if wij.is_zero():
                continue
            terms.append((ci * cj, wij))
            pairs.append((i, j))
    return HessianDetDecomposition(tuple(terms), tuple(pairs))


def decomposition_expand(d: HessianDetDecomposition) -> MixedPolynomial:
    total = MixedPolynomial()
    for sign, wr in d.terms:
        total = total + abs2(wr) * sign
    return total
