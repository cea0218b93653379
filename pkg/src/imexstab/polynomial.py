"""Dense polynomials in one and two variables.

Coefficients are stored in increasing powers: ``coeffs[k]`` multiplies
``x**k`` and ``coeffs[j, k]`` multiplies ``x**j * y**k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

__all__ = ["UniPoly", "BiPoly", "ComplexBiPoly"]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class UniPoly:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 1:
            raise ValueError("UniPoly coefficients must be one-dimensional")
        if not np.all(np.isfinite(c)):
            raise ValueError("UniPoly coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0.0
        object.__setattr__(self, "coeffs", _readonly(c))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports ``-1``."""
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0.0

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def deriv(self) -> "UniPoly":
        c = self.coeffs
        if len(c) == 1:
            return UniPoly([0.0])
        return UniPoly(c[1:] * np.arange(1, len(c)))

    def trimmed(self, rtol: float) -> "UniPoly":
        """Drop leading coefficients below ``rtol`` times the largest one."""
        c = self.coeffs
        if self.is_zero:
            return self
        cut = rtol * self.scale
        n = len(c)
        while n > 1 and abs(c[n - 1]) <= cut:
            n -= 1
        return UniPoly(c[:n])

    def __eq__(self, other):
        return isinstance(other, UniPoly) and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()!r})"


def _highest_nonzero(mask: np.ndarray) -> int:
    idx = np.flatnonzero(mask)
    return int(idx[-1]) if idx.size else 0


@dataclass(frozen=True, eq=False)
class BiPoly:
    """Real bivariate polynomial with a dense coefficient matrix."""

    coeffs: np.ndarray

    _dtype = float

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if not np.iscomplexobj(c) or self._dtype is complex:
            c = c.astype(self._dtype)
        else:
            raise TypeError(f"{type(self).__name__} needs real coefficients")
        c = np.atleast_2d(c)
        if c.ndim != 2:
            raise ValueError("bivariate coefficients must form a matrix")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", _readonly(c))

    @property
    def deg_x(self) -> int:
        return _highest_nonzero(np.any(self.coeffs != 0, axis=1))

    @property
    def deg_y(self) -> int:
        return _highest_nonzero(np.any(self.coeffs != 0, axis=0))

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, x, y):
        if np.isscalar(x) and np.isscalar(y):
            c = self.coeffs
            return (x ** np.arange(c.shape[0])) @ c @ (y ** np.arange(c.shape[1]))
        return npoly.polyval2d(x, y, self.coeffs)

    def deriv_x(self):
        c = self.coeffs
        if c.shape[0] == 1:
            return type(self)(np.zeros_like(c))
        return type(self)(npoly.polyder(c, axis=0))

    def deriv_y(self):
        c = self.coeffs
        if c.shape[1] == 1:
            return type(self)(np.zeros_like(c))
        return type(self)(npoly.polyder(c, axis=1))

    def at_y(self, y) -> UniPoly:
        """Specialize the second variable, giving a polynomial in ``x``."""
        return UniPoly(npoly.polyval(y, self.coeffs.T))

    def at_x(self, x) -> UniPoly:
        """Specialize the first variable, giving a polynomial in ``y``."""
        return UniPoly(npoly.polyval(x, self.coeffs))

    def __mul__(self, other):
        return type(self)(convolve2d(self.coeffs, other.coeffs))

    def __add__(self, other):
        return type(self)(_pad_add(self.coeffs, other.coeffs, 1.0))

    def __sub__(self, other):
        return type(self)(_pad_add(self.coeffs, other.coeffs, -1.0))

    def __eq__(self, other):
        return type(other) is type(self) and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.coeffs.tolist()!r})"


def _pad_add(a: np.ndarray, b: np.ndarray, sign: float) -> np.ndarray:
    shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
    out = np.zeros(shape, dtype=np.result_type(a, b))
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += sign * b
    return out


class ComplexBiPoly(BiPoly):
    """Complex coefficients in two real variables.

    Intermediate for expanding squared moduli: for real arguments
    ``|h(x, y)|**2 == (h * h.conj())(x, y)``.
    """

    _dtype = complex

    def conj(self) -> "ComplexBiPoly":
        return ComplexBiPoly(np.conj(self.coeffs))

    def real_part(self, rtol: float) -> BiPoly:
        """Return the real part, insisting the imaginary residue is negligible."""
        c = self.coeffs
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        resid = float(np.max(np.abs(c.imag))) if c.size else 0.0
        if resid > rtol * scale:
            raise ArithmeticError(
                f"imaginary residue {resid:.3e} exceeds {rtol:g} of coefficient scale {scale:.3e}")
        return BiPoly(c.real)
