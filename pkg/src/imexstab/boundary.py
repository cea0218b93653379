"""Tracing the L-stable region boundary ``rho(theta)`` around ``z2 = -1``.

Three tracers share one output type:

* ``root``: smallest verified root of the touching system on every ray;
* ``definition``: bisection on the membership test ``sup |R| <= 1``;
* ``continuation``: predictor-corrector along the touching curve in theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (ContinuationSeedError, DegenerateResultant, InteriorViolation,
                     NoRootOnRay, NotLStableAtInfinity)
from .raysolve import (RHO_EPS, RaySystem, build_ray_system, min_f_over_y,
                       smallest_valid_root)
from .stabfn import StabilityFunction, stiff_limit

__all__ = [
    "BoundaryPoint",
    "BoundaryCurve",
    "theta_grid",
    "trace_root_method",
    "trace_definition_method",
    "trace_continuation_method",
    "is_member",
    "area",
]

Status = Literal["ok", "fallback", "failed"]
Method = Literal["root", "definition", "continuation"]

CENTER = -1.0 + 0j
MIN_SAMPLES = 4
THETA_PERTURBATION = 1e-7


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    rho: float
    status: Status = "ok"

    @property
    def z2(self) -> complex:
        return CENTER + self.rho * complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class BoundaryCurve:
    method: Method
    points: tuple[BoundaryPoint, ...]
    center: complex = CENTER

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.points])

    @property
    def rhos(self) -> np.ndarray:
        return np.array([p.rho for p in self.points])

    @property
    def failed(self) -> list[BoundaryPoint]:
        return [p for p in self.points if p.status == "failed"]


def theta_grid(n_samples: int) -> np.ndarray:
    """Uniform angles ``2 pi k / n``.

    Computed as ``2 pi k / n`` (not ``k * (2 pi / n)``) so the grid for
    ``2n`` contains the grid for ``n`` bit for bit.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    return np.array([2 * math.pi * k / n_samples for k in range(n_samples)])


def _failed(theta: float) -> BoundaryPoint:
    return BoundaryPoint(float(theta), math.nan, "failed")


def trace_root_method(sf: StabilityFunction, n_samples: int,
                      rho_max: float) -> BoundaryCurve:
    """Boundary from the smallest verified root on each ray.

    A ray with no root below ``rho_max`` is marked failed.  A ray whose
    resultant vanishes identically is retried at ``theta +- 1e-7``, then
    handed to the bisection tracer; either way it is marked ``fallback``.
    """
    points = []
    for theta in theta_grid(n_samples):
        try:
            root = smallest_valid_root(build_ray_system(sf, theta), rho_max)
            points.append(BoundaryPoint(float(theta), root.rho))
        except NoRootOnRay:
            points.append(_failed(theta))
        except DegenerateResultant:
            points.append(_degenerate_ray(sf, theta, rho_max))
    return BoundaryCurve("root", tuple(points))


def _degenerate_ray(sf, theta, rho_max) -> BoundaryPoint:
    for shifted in (theta + THETA_PERTURBATION, theta - THETA_PERTURBATION):
        try:
            root = smallest_valid_root(build_ray_system(sf, shifted), rho_max)
            return BoundaryPoint(float(theta), root.rho, "fallback")
        except (DegenerateResultant, NoRootOnRay):
            continue
    rho = _bisect_ray(sf, build_ray_system(sf, theta), rho_max, 1e-10)
    if rho is None:
        return _failed(theta)
    return BoundaryPoint(float(theta), rho, "fallback")


def is_member(sf: StabilityFunction, rs: RaySystem, rho: float) -> bool:
    """Whether ``z2 = -1 + rho e^{i theta}`` lies in the L-stable region.

    ``sup |R|`` over the left half-plane is taken on the imaginary axis
    (``min_y F >= 0``) and at ``|z1| -> infinity``.  Schemes without an
    implicit part have ``R`` independent of ``z1`` and skip the latter.
    """
    if sf.q.degree >= 1:
        z2 = CENTER + rho * complex(math.cos(rs.theta), math.sin(rs.theta))
        if abs(stiff_limit(sf, z2)) > 1:
            return False
    try:
        return min_f_over_y(rs, rho)[0] >= 0
    except NotLStableAtInfinity:
        return False


def _bisect_ray(sf, rs, rho_max, tol, coarse=1024):
    if not is_member(sf, rs, 0.0):
        raise InteriorViolation(f"z2 = -1 is not inside the region (theta = {rs.theta!r})")
    h = rho_max / coarse
    for k in range(1, coarse + 1):
        if not is_member(sf, rs, k * h):
            lo, hi = (k - 1) * h, k * h
            break
    else:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_member(sf, rs, mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def trace_definition_method(sf: StabilityFunction, n_samples: int, rho_max: float,
                            tol: float = 1e-10) -> BoundaryCurve:
    """Boundary by bisection on the membership test, ray by ray.

    The first membership change on a coarse grid of step ``rho_max / 1024``
    is refined to width ``tol``.  Rays that stay inside up to ``rho_max``
    are marked failed.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    points = []
    for theta in theta_grid(n_samples):
        rho = _bisect_ray(sf, build_ray_system(sf, theta), rho_max, tol)
        points.append(_failed(theta) if rho is None else BoundaryPoint(float(theta), rho))
    return BoundaryCurve("definition", tuple(points))


class _Tracker:
    """Newton machinery on ``H = (F, G)`` for the continuation tracer."""

    def __init__(self, sf: StabilityFunction, fd_step: float = 1e-6):
        self.sf = sf
        self.fd_step = fd_step

    def system(self, theta):
        rs = build_ray_system(self.sf, theta)
        if rs.degenerate:
            # only F(rho) = 0 remains; y is frozen at 0
            F = rs.F.at_x(0.0)
            return rs, (lambda x: np.array([F(x[1])]), lambda x: np.array([[F.deriv()(x[1])]]))
        F, G = rs.F, rs.G
        Fr, Gy, Gr = F.deriv_y(), G.deriv_x(), G.deriv_y()

        def H(x):
            return np.array([F(*x), G(*x)])

        def J(x):
            return np.array([[G(*x), Fr(*x)], [Gy(*x), Gr(*x)]])
        return rs, (H, J)

    def predict(self, theta, x, dtheta):
        rs, (H, J) = self.system(theta)
        _, (Hp, _) = self.system(theta + self.fd_step)
        _, (Hm, _) = self.system(theta - self.fd_step)
        dH = (Hp(x) - Hm(x)) / (2 * self.fd_step)
        Jx = J(x)
        dx = -np.linalg.solve(Jx, dH)
        if rs.degenerate:
            return x + np.array([0.0, dx[0] * dtheta])
        return x + dx * dtheta

    def correct(self, theta, x, maxiter=20, rtol=1e-12):
        rs, (H, J) = self.system(theta)
        x = np.array(x, dtype=float)
        for _ in range(maxiter):
            try:
                dx = np.linalg.solve(J(x), H(x))
            except np.linalg.LinAlgError:
                return None
            if rs.degenerate:
                dx = np.array([0.0, dx[0]])
            x = x - dx
            if not np.all(np.isfinite(x)):
                return None
            if np.max(np.abs(dx)) <= rtol * (1 + np.max(np.abs(x))):
                return x
        return None


def trace_continuation_method(sf: StabilityFunction, theta_step: float,
                              rho_max: float) -> BoundaryCurve:
    """Follow ``(y(theta), rho(theta))`` on ``F = G = 0`` from ``theta = 0``.

    Euler predictor along the implicit-function tangent, Newton corrector at
    the new angle.  This tracks one branch of the touching curve and so goes
    wrong where the true boundary switches branches (corners).  A step whose
    corrector does not converge in 20 iterations, or leaves ``(0, rho_max]``,
    is marked failed and tracking restarts from a fresh root at the next
    angle.
    """
    if not theta_step > 0:
        raise ValueError("theta_step must be positive")
    n = max(1, math.ceil(2 * math.pi / theta_step - 1e-9))
    thetas = [k * theta_step for k in range(n)]
    tracker = _Tracker(sf)

    def seed(theta):
        root = smallest_valid_root(build_ray_system(sf, theta), rho_max)
        return np.array([root.y_witness, root.rho])

    try:
        x = seed(0.0)
    except (NoRootOnRay, DegenerateResultant) as exc:
        raise ContinuationSeedError(f"no starting point at theta = 0: {exc}") from exc

    points = [BoundaryPoint(0.0, float(x[1]))]
    for prev, theta in zip(thetas[:-1], thetas[1:]):
        new = None
        if x is not None:
            try:
                guess = tracker.predict(prev, x, theta - prev)
                new = tracker.correct(theta, guess)
            except np.linalg.LinAlgError:
                new = None
            if new is not None and not (RHO_EPS < new[1] <= rho_max):
                new = None
        if new is None and x is None:
            try:
                new = seed(theta)
                points.append(BoundaryPoint(theta, float(new[1])))
            except (NoRootOnRay, DegenerateResultant):
                points.append(_failed(theta))
            x = new
            continue
        if new is None:
            points.append(_failed(theta))
        else:
            points.append(BoundaryPoint(theta, float(new[1])))
        x = new
    return BoundaryCurve("continuation", tuple(points))


def area(curve: BoundaryCurve) -> float:
    """Area enclosed by ``rho(theta)``: periodic trapezoid rule on ``rho^2 / 2``."""
    if len(curve.points) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} boundary points")
    bad = curve.failed
    if bad:
        listing = ", ".join(f"{p.theta:.6g}" for p in bad)
        raise ValueError(f"cannot integrate: {len(bad)} failed ray(s) at theta = {listing}")
    th = curve.thetas
    half_sq = 0.5 * curve.rhos ** 2
    widths = np.diff(np.append(th, th[0] + 2 * math.pi))
    return float(np.sum(0.5 * (half_sq + np.roll(half_sq, -1)) * widths))
