"""Stability function ``R(z1, z2) = p(z1, z2) / q(z1)`` of an IMEX pair.

``p`` and ``q`` are determinants::

    p = det(I - z1 A - z2 B + z1 e w^T + z2 e omega^T)
    q = det(I - z1 A)

and their coefficients are recovered by evaluating the determinants on a
Chebyshev tensor grid and interpolating.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InterpolationError, PoleError, SingularStageSystem
from .polynomial import BiPoly, UniPoly
from .tableau import ImexTableau, Severity, TableauError, validate

__all__ = [
    "StabilityFunction",
    "stability_polynomials",
    "p_matrix",
    "q_matrix",
    "direct_p",
    "direct_q",
    "eval_R",
    "scalar_step",
    "stiff_limit",
]

GRID_HALF_WIDTH = 2.0
SNAP_RTOL = 1e-12
_MAX_VANDERMONDE_COND = 1e12


@dataclass(frozen=True, eq=False)
class StabilityFunction:
    p: BiPoly
    q: UniPoly
    s: int

    def __call__(self, z1, z2):
        return eval_R(self, z1, z2)


def p_matrix(t: ImexTableau, z1, z2) -> np.ndarray:
    """The matrix whose determinant is ``p(z1, z2)``; broadcasts over arrays."""
    z1 = np.asarray(z1)[..., None, None]
    z2 = np.asarray(z2)[..., None, None]
    e = np.ones(t.s)
    return (np.eye(t.s) - z1 * t.A - z2 * t.B
            + z1 * np.outer(e, t.w) + z2 * np.outer(e, t.omega))


def q_matrix(t: ImexTableau, z1) -> np.ndarray:
    z1 = np.asarray(z1)[..., None, None]
    return np.eye(t.s) - z1 * t.A


# np.linalg.det factors by LU with partial pivoting.
def direct_p(t: ImexTableau, z1, z2):
    return np.linalg.det(p_matrix(t, z1, z2))


def direct_q(t: ImexTableau, z1):
    return np.linalg.det(q_matrix(t, z1))


def _chebyshev_nodes(n: int) -> np.ndarray:
    k = np.arange(n)
    return GRID_HALF_WIDTH * np.cos(np.pi * (2 * k + 1) / (2 * n))


def _snap(c: np.ndarray) -> np.ndarray:
    c = c.copy()
    c[np.abs(c) < SNAP_RTOL * np.max(np.abs(c))] = 0.0
    return c


def stability_polynomials(t: ImexTableau) -> StabilityFunction:
    errors = [d.message for d in validate(t) if d.severity is Severity.ERROR]
    if errors:
        raise TableauError("; ".join(errors))
    n = t.s + 1
    nodes = _chebyshev_nodes(n)
    V = np.vander(nodes, n, increasing=True)
    if np.linalg.cond(V) > _MAX_VANDERMONDE_COND:
        raise InterpolationError(f"interpolation grid ill-conditioned for s = {t.s}")

    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    p_vals = direct_p(t, X, Y)
    q_vals = direct_q(t, nodes)
    # p_vals = V @ C @ V.T
    C = np.linalg.solve(V, np.linalg.solve(V, p_vals.T).T)
    c = np.linalg.solve(V, q_vals)
    return StabilityFunction(p=BiPoly(_snap(C)), q=UniPoly(_snap(c)), s=t.s)


def _near_pole(q: UniPoly, z1: complex, qv: complex) -> bool:
    mag = np.polynomial.polynomial.polyval(abs(z1), np.abs(q.coeffs))
    return abs(qv) < 1e-300 or abs(qv) <= 1e-14 * mag


def eval_R(sf: StabilityFunction, z1: complex, z2: complex) -> complex:
    qv = complex(sf.q(z1))
    if _near_pole(sf.q, z1, qv):
        raise PoleError(f"q({z1}) = {qv:.3e}: z1 is on a pole of R")
    return complex(sf.p(z1, z2)) / qv


def scalar_step(t: ImexTableau, z1: complex, z2: complex) -> complex:
    """One IMEX step on ``u' = lambda1 u + lambda2 u`` from ``u = 1``.

    Works directly with the stage equations and does not touch ``p`` or
    ``q``, so it serves as an independent check of ``eval_R``.
    """
    M = np.eye(t.s) - z1 * t.A - z2 * t.B
    e = np.ones(t.s)
    if np.linalg.cond(M) > 1e14:
        raise SingularStageSystem(f"stage system singular at z1={z1}, z2={z2}")
    stages = np.linalg.solve(M, e.astype(complex))
    return complex(1.0 + (z1 * t.w + z2 * t.omega) @ stages)


def stiff_limit(sf: StabilityFunction, z2: complex) -> complex:
    """``lim R(z1, z2)`` as ``|z1| -> infinity``.

    Infinite when ``p`` carries a higher power of ``z1`` than ``q`` with a
    non-vanishing coefficient at ``z2``.
    """
    d = sf.q.degree
    if d < 1:
        raise ValueError("stiff limit needs q to depend on z1 (deg q >= 1)")
    rows = sf.p.coeffs
    for k in range(rows.shape[0] - 1, d, -1):
        if np.any(rows[k]) and np.polynomial.polynomial.polyval(z2, rows[k]) != 0:
            return complex(np.inf, 0.0)
    if rows.shape[0] <= d:
        return 0j
    return complex(np.polynomial.polynomial.polyval(z2, rows[d]) / sf.q.coeffs[d])
