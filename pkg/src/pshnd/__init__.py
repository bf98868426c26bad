"""Exact Newton-diagram and plurisubharmonicity toolkit for polynomials in z, zb, w, wb."""

__version__ = "0.1.0"
