"""Exact Gaussian-rational scalars and arrays.

The exact backend stores a matrix with entries in Q(i) as two arrays of
Python integers (real and imaginary numerators) over one shared positive
denominator.  Every operation the enumerator calculus needs (reshapes, axis
traces, products, tensor products) is linear or bilinear in the numerators,
so numpy's object-dtype loops do the work and no per-entry ``Fraction`` is
ever allocated.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = ["GaussianRational", "GaussianRationalArray", "collapse", "to_exact_scalar"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class GaussianRational:
    """A complex number ``real + i*imag`` with rational parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = _frac(real)
        self.imag = _frac(imag)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational, str)):
            return cls(x, 0)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x), 0)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    @staticmethod
    def _is_exact(x) -> bool:
        return isinstance(x, (GaussianRational, int, Rational))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.real, -self.imag)

    def __add__(self, other):
        if self._is_exact(other):
            o = GaussianRational.coerce(other)
            return GaussianRational(self.real + o.real, self.imag + o.imag)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if self._is_exact(other) or isinstance(other, (float, complex)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._is_exact(other):
            o = GaussianRational.coerce(other)
            return GaussianRational(
                self.real * o.real - self.imag * o.imag,
                self.real * o.imag + self.imag * o.real,
            )
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if self._is_exact(other):
            o = GaussianRational.coerce(other)
            n = o.real * o.real + o.imag * o.imag
            if n == 0:
                raise ZeroDivisionError("division by zero")
            return self * GaussianRational(o.real / n, -o.imag / n)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / self ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, (int, Rational)):
            return self.imag == 0 and self.real == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __float__(self):
        if self.imag != 0:
            raise TypeError("GaussianRational with nonzero imaginary part has no float value")
        return float(self.real)

    def __abs__(self):
        n = self.real * self.real + self.imag * self.imag
        num, den = math.isqrt(n.numerator), math.isqrt(n.denominator)
        if num * num == n.numerator and den * den == n.denominator:
            return Fraction(num, den)
        return math.sqrt(n)

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __repr__(self):
        return f"GaussianRational({str(self.real)!r}, {str(self.imag)!r})"

    def __str__(self):
        if self.imag == 0:
            return str(self.real)
        sign = "+" if self.imag >= 0 else "-"
        return f"{self.real}{sign}{abs(self.imag)}i"


def collapse(z):
    """Return ``z.real`` as a ``Fraction`` when ``z`` has no imaginary part."""
    if isinstance(z, GaussianRational) and z.imag == 0:
        return z.real
    return z


def to_exact_scalar(x):
    """Coerce an int, Fraction, "p/q" string or GaussianRational to exact form."""
    return collapse(GaussianRational.coerce(x))


def _int_array(a) -> np.ndarray:
    out = np.empty(np.shape(a), dtype=object)
    flat = np.asarray(a, dtype=object).ravel()
    out.ravel()[:] = [int(v) for v in flat]
    return out


def _gcd_all(*arrays) -> int:
    g = 0
    for a in arrays:
        if isinstance(a, np.ndarray):
            if a.size:
                g = math.gcd(g, int(np.gcd.reduce(a.ravel())))
        else:
            g = math.gcd(g, int(a))
        if g == 1:
            return 1
    return g


class GaussianRationalArray:
    """Array of Gaussian rationals as ``(re + i*im) / den`` with integer numerators.

    Supports the subset of the ndarray surface used by the operator algebra:
    reshape, transpose, axis traces and sums, fancy indexing, elementwise and
    matrix products, outer products and conjugation.
    """

    __slots__ = ("re", "im", "den")
    __array_ufunc__ = None

    def __init__(self, re, im=None, den: int = 1, *, normalize: bool = True):
        re = re if isinstance(re, np.ndarray) and re.dtype == object else _int_array(re)
        if im is None:
            im = np.zeros(re.shape, dtype=object)
            im[...] = 0
        elif not (isinstance(im, np.ndarray) and im.dtype == object):
            im = _int_array(im)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        if re.shape != im.shape:
            raise ValueError("real and imaginary numerators differ in shape")
        self.re, self.im, self.den = re, im, den
        if normalize:
            self._normalize()

    def _normalize(self):
        if self.den == 1:
            return
        g = _gcd_all(self.den, self.re, self.im)
        if g > 1:
            self.re = self.re // g
            self.im = self.im // g
            self.den //= g

    # ---- construction -------------------------------------------------
    @classmethod
    def from_numbers(cls, values) -> "GaussianRationalArray":
        """Build from nested sequences of ints, Fractions, "p/q" strings or GaussianRationals."""
        arr = np.asarray(values, dtype=object)
        flat = [GaussianRational.coerce(v) for v in arr.ravel()]
        den = 1
        for z in flat:
            den = math.lcm(den, z.real.denominator, z.imag.denominator)
        re = np.empty(arr.shape, dtype=object)
        im = np.empty(arr.shape, dtype=object)
        re.ravel()[:] = [int(z.real * den) for z in flat]
        im.ravel()[:] = [int(z.imag * den) for z in flat]
        return cls(re, im, den)

    @classmethod
    def from_complex(cls, a, max_denominator: int | None = None) -> "GaussianRationalArray":
        """Rationalize a float array (exactly, or to the nearest fraction with bounded denominator)."""
        a = np.asarray(a, dtype=complex)

        def conv(x: float) -> Fraction:
            f = Fraction(float(x))
            return f.limit_denominator(max_denominator) if max_denominator else f

        vals = np.empty(a.shape, dtype=object)
        vals.ravel()[:] = [GaussianRational(conv(z.real), conv(z.imag)) for z in a.ravel()]
        return cls.from_numbers(vals)

    @classmethod
    def zeros(cls, shape) -> "GaussianRationalArray":
        z = np.zeros(shape, dtype=object)
        z[...] = 0
        return cls(z, z.copy(), 1, normalize=False)

    @classmethod
    def identity(cls, n: int) -> "GaussianRationalArray":
        re = np.zeros((n, n), dtype=object)
        re[...] = 0
        for i in range(n):
            re[i, i] = 1
        return cls(re, None, 1, normalize=False)

    def _new(self, re, im, den, normalize=False):
        return GaussianRationalArray(re, im, den, normalize=normalize)

    # ---- shape --------------------------------------------------------
    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    @property
    def size(self):
        return self.re.size

    def __len__(self):
        return len(self.re)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return self._new(self.re.reshape(shape), self.im.reshape(shape), self.den)

    def transpose(self, *axes):
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        return self._new(self.re.transpose(axes or None), self.im.transpose(axes or None), self.den)

    @property
    def T(self):
        return self.transpose()

    def copy(self):
        return self._new(self.re.copy(), self.im.copy(), self.den)

    def __getitem__(self, key):
        re, im = self.re[key], self.im[key]
        if not isinstance(re, np.ndarray):
            return collapse(GaussianRational(Fraction(re, self.den), Fraction(im, self.den)))
        return self._new(re, im, self.den, normalize=True)

    # ---- reductions ---------------------------------------------------
    def _scalar(self, re, im):
        return collapse(GaussianRational(Fraction(int(re), self.den), Fraction(int(im), self.den)))

    def trace(self, offset=0, axis1=0, axis2=1):
        re = np.trace(self.re, offset, axis1, axis2)
        im = np.trace(self.im, offset, axis1, axis2)
        if isinstance(re, np.ndarray):
            return self._new(re, im, self.den, normalize=True)
        return self._scalar(re, im)

    def sum(self, axis=None):
        re = self.re.sum(axis=axis)
        im = self.im.sum(axis=axis)
        if isinstance(re, np.ndarray):
            return self._new(re, im, self.den, normalize=True)
        return self._scalar(re, im)

    # ---- arithmetic ---------------------------------------------------
    def conj(self):
        return self._new(self.re, -self.im, self.den)

    conjugate = conj

    def __neg__(self):
        return self._new(-self.re, -self.im, self.den)

    def _align(self, other: "GaussianRationalArray"):
        if self.den == other.den:
            return self.re, self.im, other.re, other.im, self.den
        den = math.lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        return self.re * a, self.im * a, other.re * b, other.im * b, den

    def __add__(self, other):
        if isinstance(other, GaussianRationalArray):
            r1, i1, r2, i2, den = self._align(other)
            return self._new(r1 + r2, i1 + i2, den, normalize=True)
        if isinstance(other, np.ndarray):
            return self.to_complex() + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRationalArray):
            return self + (-other)
        if isinstance(other, np.ndarray):
            return self.to_complex() - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRationalArray):
            re = self.re * other.re - self.im * other.im
            im = self.re * other.im + self.im * other.re
            return self._new(re, im, self.den * other.den, normalize=True)
        if isinstance(other, np.ndarray):
            return self.to_complex() * other
        if isinstance(other, (int, Rational, GaussianRational)):
            z = GaussianRational.coerce(other)
            den = math.lcm(z.real.denominator, z.imag.denominator)
            zr, zi = int(z.real * den), int(z.imag * den)
            re = self.re * zr - self.im * zi
            im = self.re * zi + self.im * zr
            return self._new(re, im, self.den * den, normalize=True)
        if isinstance(other, (float, complex)):
            return self.to_complex() * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, GaussianRational)):
            return self * (GaussianRational(1) / GaussianRational.coerce(other))
        if isinstance(other, (float, complex)):
            return self.to_complex() / other
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, GaussianRationalArray):
            re = self.re @ other.re - self.im @ other.im
            im = self.re @ other.im + self.im @ other.re
            if not isinstance(re, np.ndarray):
                return collapse(GaussianRational(Fraction(re, self.den * other.den),
                                                 Fraction(im, self.den * other.den)))
            return self._new(re, im, self.den * other.den, normalize=True)
        if isinstance(other, np.ndarray):
            return self.to_complex() @ other
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return other @ self.to_complex()
        return NotImplemented

    def outer(self, other: "GaussianRationalArray") -> "GaussianRationalArray":
        """Tensor outer product; result shape is ``self.shape + other.shape``."""
        mo = np.multiply.outer
        re = mo(self.re, other.re) - mo(self.im, other.im)
        im = mo(self.re, other.im) + mo(self.im, other.re)
        return self._new(re, im, self.den * other.den, normalize=True)

    # ---- comparison / conversion -------------------------------------
    def array_equal(self, other) -> bool:
        if not isinstance(other, GaussianRationalArray):
            other = GaussianRationalArray.from_numbers(other)
        if self.shape != other.shape:
            return False
        r1, i1, r2, i2, _ = self._align(other)
        return bool(np.all(r1 == r2)) and bool(np.all(i1 == i2))

    def is_zero(self) -> bool:
        return not np.any(self.re != 0) and not np.any(self.im != 0)

    def is_real(self) -> bool:
        return not np.any(self.im != 0)

    def to_complex(self) -> np.ndarray:
        den = self.den
        out = np.empty(self.shape, dtype=complex)
        out.ravel()[:] = [complex(r / den, i / den) for r, i in zip(self.re.ravel(), self.im.ravel())]
        return out

    def to_numbers(self) -> np.ndarray:
        """Object array of collapsed exact scalars (Fraction or GaussianRational)."""
        out = np.empty(self.shape, dtype=object)
        den = self.den
        out.ravel()[:] = [
            collapse(GaussianRational(Fraction(r, den), Fraction(i, den)))
            for r, i in zip(self.re.ravel(), self.im.ravel())
        ]
        return out

    def __repr__(self):
        return f"GaussianRationalArray(shape={self.shape}, den={self.den})"
