"""Homogeneous bivariate enumerator polynomials and their linear substitutions.

A polynomial of degree ``n`` is stored densely as ``coeffs[d]``, the
coefficient of ``x^(n-d) y^d``.  Every transform (primed/unprimed change,
MacWilliams, shadow) is a substitution ``x -> αx + βy, y -> γx + δy`` and
goes through :func:`substitute`; with rational inputs the output is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .gaussian import GaussianRational, collapse


def _norm(c):
    if isinstance(c, GaussianRational):
        return collapse(c)
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


@dataclass(frozen=True)
class EnumPolynomial:
    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        if len(coeffs) == 0:
            raise ValueError("a degree-n polynomial needs n+1 coefficients")
        object.__setattr__(self, "coeffs", tuple(_norm(c) for c in coeffs))

    @classmethod
    def parse(cls, text: str) -> "EnumPolynomial":
        """From a comma-separated list of integers or ``p/q`` rationals (decimals allowed)."""
        return cls([Fraction(t.strip()) for t in text.split(",") if t.strip()])

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x, y):
        n = self.n
        return sum((c * x ** (n - d) * y ** d for d, c in enumerate(self.coeffs)), 0)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "EnumPolynomial") -> "EnumPolynomial":
        if self.n != other.n:
            raise ValueError("degrees differ")
        return EnumPolynomial([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "EnumPolynomial") -> "EnumPolynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "EnumPolynomial":
        return EnumPolynomial([c * a for a in self.coeffs])

    def swap(self) -> "EnumPolynomial":
        """``p(y, x)``: coefficient reversal."""
        return EnumPolynomial(self.coeffs[::-1])

    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, GaussianRational)) for c in self.coeffs)

    def max_abs_diff(self, other: "EnumPolynomial") -> float:
        if self.n != other.n:
            return math.inf
        return max(abs(complex(a - b)) for a, b in zip(self.coeffs, other.coeffs))

    def to_strings(self) -> list[str]:
        return [format_coeff(c) for c in self.coeffs]

    def __str__(self):
        n = self.n
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", n - d), ("y", d)) if e
            )
            terms.append(f"({c}){mono}" if mono else f"({c})")
        return " + ".join(terms) or "0"


def format_coeff(c) -> str:
    if isinstance(c, (Fraction, int)):
        return str(Fraction(c))
    if isinstance(c, GaussianRational):
        return str(c)
    if isinstance(c, complex):
        return repr(c.real) if c.imag == 0 else repr(c)
    return repr(c)


def _binomial_row(m: int, a, b) -> list:
    """Coefficients of ``(a x + b y)^m`` by power of ``y``."""
    return [math.comb(m, j) * a ** (m - j) * b ** j for j in range(m + 1)]


def substitute(p: EnumPolynomial, alpha, beta, gamma, delta) -> EnumPolynomial:
    """``p(αx + βy, γx + δy)`` as a degree-``n`` polynomial."""
    n = p.n
    out = [0] * (n + 1)
    for d, c in enumerate(p.coeffs):
        if c == 0:
            continue
        left = _binomial_row(n - d, alpha, beta)
        right = _binomial_row(d, gamma, delta)
        for j, u in enumerate(left):
            if u == 0:
                continue
            for k, v in enumerate(right):
                out[j + k] = out[j + k] + c * u * v
    return EnumPolynomial(out)


def _q(x):
    return Fraction(x) if isinstance(x, int) else x


def to_primed(p: EnumPolynomial, D: int = 2) -> EnumPolynomial:
    """Shor-Laflamme to unitary: ``p'(x, y) = p(x + y/D, y/D)``."""
    inv = Fraction(1, D)
    return substitute(p, 1, inv, 0, inv)


def from_primed(p: EnumPolynomial, D: int = 2) -> EnumPolynomial:
    """Unitary to Shor-Laflamme: ``p(x, y) = p'(x - y, D y)``."""
    return substitute(p, 1, -1, 0, _q(D))


def macwilliams(p: EnumPolynomial, D: int = 2) -> EnumPolynomial:
    """``p((x + (D^2-1) y)/D, (x - y)/D)``; maps ``B`` to ``A`` and is an involution."""
    inv = Fraction(1, D)
    return substitute(p, inv, (D * D - 1) * inv, inv, -inv)


def shadow_poly(aprime: EnumPolynomial) -> EnumPolynomial:
    """Shadow enumerator from the unitary ``A'``: ``S(x, y) = A'(x + y, y - x)``."""
    return substitute(aprime, 1, 1, -1, 1)


def shadow_from_shor_laflamme(a: EnumPolynomial, D: int = 2) -> EnumPolynomial:
    """Shadow enumerator from ``A`` directly: ``A(((D-1)x + (D+1)y)/D, (y - x)/D)``.

    For qubits this is ``A((x + 3y)/2, (y - x)/2)``.
    """
    inv = Fraction(1, D)
    return substitute(a, (D - 1) * inv, (D + 1) * inv, -inv, inv)


def from_weights(weights) -> EnumPolynomial:
    """Polynomial from a coefficient sequence or a ``WeightDistribution``."""
    return EnumPolynomial(list(getattr(weights, "coeffs", weights)))
