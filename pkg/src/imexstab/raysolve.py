"""Boundary radius of the L-stable region along one ray ``z2 = -1 + rho e^{i theta}``.

For a fixed angle the touching condition is the real system::

    F(y, rho) = |q(iy)|^2 - |p(iy, -1 + rho e^{i theta})|^2 = 0
    G(y, rho) = dF/dy = 0

``y`` is eliminated with a Sylvester resultant; its real roots in ``rho``
are candidates, and the smallest one with a real ``y`` witness is the
boundary radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import chebyshev as cheb
from scipy.linalg import eigvals
from scipy.special import comb

from .errors import (DegenerateResultant, InteriorViolation, NoRootOnRay,
                     NotLStableAtInfinity)
from .polynomial import BiPoly, ComplexBiPoly, UniPoly
from .stabfn import StabilityFunction

__all__ = [
    "RaySystem",
    "RayRoot",
    "build_ray_system",
    "real_roots",
    "sylvester_matrix",
    "resultant_in_rho",
    "smallest_valid_root",
    "min_f_over_y",
    "newton_polish",
]

RHO_EPS = 1e-9
VERIFY_RTOL = 1e-8
IMAG_RTOL = 1e-10
CANDIDATE_IMAG_RTOL = 1e-3


@dataclass(frozen=True, eq=False)
class RaySystem:
    theta: float
    F: BiPoly
    G: BiPoly
    # largest |imag| of the complex expansion of F, relative to its scale
    imag_residue: float = 0.0

    @property
    def scale(self) -> float:
        return self.F.scale

    @property
    def degenerate(self) -> bool:
        """True when ``F`` does not depend on ``y`` (explicit-only schemes)."""
        return self.F.deg_x == 0

    def f_in_y(self, rho: float) -> UniPoly:
        return self.F.at_y(rho)

    def g_in_y(self, rho: float) -> UniPoly:
        return self.G.at_y(rho)


@dataclass(frozen=True)
class RayRoot:
    theta: float
    rho: float
    y_witness: float
    residuals: tuple[float, float]


def build_ray_system(sf: StabilityFunction, theta: float) -> RaySystem:
    """Expand ``F`` and ``G`` as real polynomials in ``(y, rho)``.

    ``F`` is stored with ``y`` as the first variable and ``rho`` as the
    second.
    """
    theta = float(theta)
    q = sf.q.coeffs
    # q(iy) as a polynomial in y, then |q(iy)|^2 = q(iy) * conj(q)(iy)
    qi = q * (1j ** np.arange(len(q)))
    qq = np.convolve(qi, np.conj(qi))

    p = sf.p.coeffs
    n1, n2 = p.shape
    # (-1 + rho e^{i theta})^k = sum_m C(k, m) (-1)^(k-m) e^{i m theta} rho^m
    k = np.arange(n2)[:, None]
    m = np.arange(n2)[None, :]
    T = comb(k, m) * np.where(m <= k, (-1.0) ** (k - m), 0.0) * np.exp(1j * m * theta)
    h = ComplexBiPoly((1j ** np.arange(n1))[:, None] * (p @ T))

    Fc = ComplexBiPoly(qq[:, None]) - h * h.conj()
    F = Fc.real_part(IMAG_RTOL)
    resid = float(np.max(np.abs(Fc.coeffs.imag))) / max(F.scale, np.finfo(float).tiny)
    return RaySystem(theta=theta, F=F, G=F.deriv_x(), imag_residue=resid)


def real_roots(u: UniPoly) -> list[float]:
    """Real roots in ascending order, from the balanced companion matrix.

    Eigenvalues with ``|imag| <= 1e-7 (1 + |real|)`` count as real; each is
    polished by one Newton step and kept only if the residual is below
    ``1e-8`` of the coefficient scale.
    """
    if u.is_zero:
        raise ValueError("the zero polynomial has no isolated roots")
    return _real_roots(u.coeffs)


def _real_roots(c: np.ndarray) -> list[float]:
    """``real_roots`` on a trimmed coefficient array (nonzero leading term)."""
    if len(c) < 2:
        return []
    # factor out roots at zero to keep the companion matrix well scaled
    nz = int(np.flatnonzero(c)[0])
    tail = c[nz:] / c[-1]
    roots = [0.0] * nz
    d = len(tail) - 1
    if d > 0:
        comp = np.zeros((d, d))
        comp[1:, :-1] = np.eye(d - 1)
        comp[:, -1] = -tail[:-1]
        # LAPACK geev balances the matrix before the QR iteration
        eig = np.linalg.eigvals(comp)
        keep = np.abs(eig.imag) <= 1e-7 * (1 + np.abs(eig.real))
        roots.extend(eig.real[keep].tolist())
    dc = c[1:] * np.arange(1, len(c))
    absc = np.abs(c)
    cmax = absc.max()
    out = []
    for x in roots:
        ux = _horner(c, x)
        dv = _horner(dc, x)
        if dv != 0:
            step = ux / dv
            if abs(step) <= 1e-6 * (1 + abs(x)):
                x = x - step
                ux = _horner(c, x)
        if abs(ux) <= VERIFY_RTOL * max(cmax, _horner(absc, abs(x))):
            out.append(float(x))
    return sorted(out)


def _horner(c, x: float) -> float:
    acc = 0.0
    for a in c[::-1].tolist():
        acc = acc * x + a
    return acc


def _rows_at(P: BiPoly, rho: float) -> np.ndarray:
    """Coefficients in ``y`` of ``P(., rho)``, leading terms below 1e-14 trimmed."""
    c = P.coeffs
    acc = c[:, -1].copy()
    for k in range(c.shape[1] - 2, -1, -1):
        acc = acc * rho + c[:, k]
    cut = 1e-14 * np.max(np.abs(acc))
    n = len(acc)
    while n > 1 and abs(acc[n - 1]) <= cut:
        n -= 1
    return acc[:n]


def sylvester_matrix(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Sylvester matrices of ``f`` and ``g`` (increasing coefficients).

    Leading axes broadcast, so a stack of coefficient vectors yields a stack
    of matrices.  Degrees are the formal ones given by the trailing axis.
    """
    f = np.asarray(f)
    g = np.asarray(g)
    m = f.shape[-1] - 1
    n = g.shape[-1] - 1
    size = m + n
    batch = np.broadcast_shapes(f.shape[:-1], g.shape[:-1])
    S = np.zeros(batch + (size, size), dtype=np.result_type(f, g))
    fr = f[..., ::-1]
    gr = g[..., ::-1]
    for i in range(n):
        S[..., i, i:i + m + 1] = fr
    for i in range(m):
        S[..., n + i, i:i + n + 1] = gr
    return S


def resultant_degree_bound(rs: RaySystem) -> int:
    F, G = rs.F, rs.G
    return F.deg_y * G.deg_x + G.deg_y * F.deg_x


def resultant_in_rho(rs: RaySystem, rho_max: float, lo: float = 0.0) -> Chebyshev:
    """``Res_y(F, G)`` as a polynomial in ``rho``, interpolated on ``[lo, rho_max]``.

    The result is a Chebyshev series on that interval (call
    ``.convert(kind=numpy.polynomial.Polynomial)`` for monomial form).
    Raises :class:`DegenerateResultant` when the Sylvester matrix is
    singular at every sample, i.e. ``F`` and ``G`` share a factor.
    """
    F, G = rs.F, rs.G
    if F.deg_x < 1:
        raise ValueError("F does not depend on y; use the degenerate path")
    deg = max(resultant_degree_bound(rs), 0)
    nodes = cheb.chebpts1(deg + 1) if deg > 0 else np.array([0.0])
    rhos = lo + (rho_max - lo) * (nodes + 1) / 2
    S = sylvester_matrix(_y_coeffs(F, rhos), _y_coeffs(G, rhos))
    dets = np.linalg.det(S)
    hadamard = np.prod(np.linalg.norm(S, axis=-1), axis=-1)
    # small |det| relative to the Hadamard bound is common for honest
    # resultants, so only a numerically rank-deficient matrix at every
    # sample counts as a shared factor
    if np.all(np.abs(dets) <= 1e-12 * hadamard):
        sv = np.linalg.svd(S, compute_uv=False)
        if np.all(sv[:, -1] <= 1e-13 * sv[:, 0]):
            raise DegenerateResultant(
                f"resultant vanishes identically at theta = {rs.theta!r}")
    coef = cheb.chebfit(nodes, dets, deg) if deg > 0 else dets[:1]
    return Chebyshev(coef, domain=[lo, rho_max])


def _y_coeffs(P: BiPoly, rhos: np.ndarray) -> np.ndarray:
    """Coefficient vectors in ``y`` (formal degree ``deg_x``) at each rho."""
    c = P.coeffs[: P.deg_x + 1]
    return np.stack([np.polynomial.polynomial.polyval(rhos, row) for row in c], axis=-1)


def _lead_positive(rs: RaySystem) -> bool:
    lead_row = rs.F.coeffs[rs.F.deg_x]
    return float(np.polynomial.polynomial.polyval(0.0, lead_row)) > 0


def min_f_over_y(rs: RaySystem, rho: float) -> tuple[float, float]:
    """Minimum of ``F(., rho)`` over real ``y`` and where it is attained.

    The minimum sits at a real root of ``G(., rho)``; with a positive
    leading coefficient of even degree it is global.
    """
    fc = _rows_at(rs.F, rho)
    if len(fc) == 1:
        return float(fc[0]), 0.0
    if fc[-1] <= 0 or (len(fc) - 1) % 2:
        raise NotLStableAtInfinity(
            f"F(y, {rho!r}) is unbounded below as |y| -> infinity (theta = {rs.theta!r})")
    ys = _real_roots(_rows_at(rs.G, rho)) or [0.0]
    vals = [_horner(fc, y) for y in ys]
    i = int(np.argmin(vals))
    return float(vals[i]), float(ys[i])


def newton_polish(rs: RaySystem, y: float, rho: float, maxiter: int = 20,
                  rtol: float = 1e-13, max_shift: float = math.inf):
    """Newton iteration on ``F = G = 0`` in ``(y, rho)`` at fixed theta.

    Returns the converged pair, or ``None`` on divergence, a singular
    Jacobian, or when ``rho`` wanders more than ``max_shift`` from its
    starting value.
    """
    F, G = rs.F, rs.G
    Fr, Gy, Gr = F.deriv_y(), G.deriv_x(), G.deriv_y()
    rho0 = rho
    for _ in range(maxiter):
        g = G(y, rho)
        r = np.array([F(y, rho), g])
        J = np.array([[g, Fr(y, rho)], [Gy(y, rho), Gr(y, rho)]])
        try:
            dy, drho = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return None
        if not (math.isfinite(dy) and math.isfinite(drho)):
            return None
        y, rho = y - dy, rho - drho
        if abs(rho - rho0) > max_shift:
            return None
        if abs(dy) + abs(drho) <= rtol * (1 + abs(y) + abs(rho)):
            return y, rho
    return None


def _verify(rs: RaySystem, rho: float):
    """Real-y witness at ``rho``: a root of ``G(., rho)`` where ``F`` vanishes."""
    tol = VERIFY_RTOL * rs.scale
    g = rs.g_in_y(rho)
    if g.is_zero:
        return None
    best = None
    for y in real_roots(g):
        fv = abs(rs.F(y, rho))
        if fv <= tol and (best is None or fv < best[1]):
            best = (y, fv)
    if best is None:
        return None
    y = best[0]
    return RayRoot(rs.theta, float(rho), float(y),
                   (float(abs(rs.F(y, rho))), float(abs(rs.G(y, rho)))))


def sylvester_pencil_roots(rs: RaySystem) -> np.ndarray:
    """All finite roots of ``Res_y(F, G)`` in ``rho`` (complex, unsorted).

    The Sylvester matrix is linear in the coefficients of ``F`` and ``G``,
    so ``S(rho) = sum_k S_k rho^k`` is a matrix polynomial and the zeros of
    its determinant are the eigenvalues of a companion linearization.  This
    avoids the huge dynamic range of the determinant itself.
    """
    F, G = rs.F, rs.G
    m = F.deg_x
    d = max(F.deg_y, G.deg_y)
    if d == 0:
        return np.empty(0, dtype=complex)
    fc = np.zeros((m + 1, d + 1))
    gc = np.zeros((m, d + 1))
    fc[:, : F.deg_y + 1] = F.coeffs[: m + 1, : F.deg_y + 1]
    gc[:, : G.deg_y + 1] = G.coeffs[:m, : G.deg_y + 1]
    S = sylvester_matrix(fc.T, gc.T)  # S[k] multiplies rho**k
    norms = np.linalg.norm(S, axis=(1, 2))
    if norms[0] > 0 and norms[d] > 0:
        sigma = (norms[0] / norms[d]) ** (1.0 / d)
    else:
        sigma = 1.0
    S = S * (sigma ** np.arange(d + 1))[:, None, None]
    S = S / np.max(np.linalg.norm(S, axis=(1, 2)))
    n = S.shape[1]
    X = np.eye(n * d)
    X[-n:, -n:] = S[d]
    Y = np.zeros((n * d, n * d))
    Y[:-n, n:] = np.eye(n * (d - 1))
    Y[-n:, :] = -np.concatenate(list(S[:d]), axis=1)
    with np.errstate(all="ignore"):
        lam = eigvals(Y, X)
    lam = lam[np.isfinite(lam)]
    return sigma * lam


def _check_not_degenerate(rs: RaySystem) -> None:
    probes = np.array([0.3141592653589793, 1.0471975511965976, 2.718281828459045])
    S = sylvester_matrix(_y_coeffs(rs.F, probes), _y_coeffs(rs.G, probes))
    sv = np.linalg.svd(S, compute_uv=False)
    if np.all(sv[:, -1] <= 1e-13 * sv[:, 0]):
        raise DegenerateResultant(f"resultant vanishes identically at theta = {rs.theta!r}")


def _check_centre(rs: RaySystem) -> None:
    # with no y-dependence the leading coefficient is F itself, which the
    # interior test below covers
    if not rs.degenerate and not _lead_positive(rs):
        raise NotLStableAtInfinity(
            f"leading y-coefficient of F is not positive at the centre (theta = {rs.theta!r})")
    fmin, ymin = min_f_over_y(rs, 0.0)
    if not fmin > 0:
        raise InteriorViolation(
            f"z2 = -1 is not strictly inside the region: F({ymin:.6g}, 0) = {fmin:.3e}")


def smallest_valid_root(rs: RaySystem, rho_max: float) -> RayRoot:
    """Smallest verified radius in ``(RHO_EPS, rho_max]`` solving ``F = G = 0``."""
    _check_centre(rs)
    if rs.degenerate:
        return _degenerate_root(rs, rho_max)
    _check_not_degenerate(rs)

    lam = sylvester_pencil_roots(rs)
    # noisy near-double roots come out as narrow complex pairs; the
    # real-witness verification below is the actual filter
    keep = ((np.abs(lam.imag) <= CANDIDATE_IMAG_RTOL * (1 + np.abs(lam.real)))
            & (lam.real > RHO_EPS) & (lam.real <= rho_max * (1 + 1e-9)))
    best = None
    for cand in np.sort(lam.real[keep]):
        if best is not None and cand > best.rho * (1 + 1e-3):
            break
        for root in _polish_candidate(rs, float(cand)):
            if RHO_EPS < root.rho <= rho_max and (best is None or root.rho < best.rho):
                best = root
    if best is None:
        raise NoRootOnRay(
            f"no verified boundary radius up to {rho_max!r} at theta = {rs.theta!r}")
    return best


def _polish_candidate(rs: RaySystem, cand: float) -> list[RayRoot]:
    """Verified roots reachable from a resultant root by Newton polishing."""
    g = rs.g_in_y(cand)
    if g.is_zero:
        return []
    found = []
    for y in real_roots(g):
        polished = newton_polish(rs, y, cand, max_shift=1e-3 * (1 + cand))
        if polished is None:
            continue
        root = _verify(rs, polished[1])
        if root is not None:
            found.append(root)
    root = _verify(rs, cand)
    if root is not None:
        found.append(root)
    return found


def _degenerate_root(rs: RaySystem, rho_max: float) -> RayRoot:
    u = rs.F.at_x(0.0)
    for rho in real_roots(u):
        if RHO_EPS < rho <= rho_max:
            return RayRoot(rs.theta, rho, 0.0, (float(abs(u(rho))), 0.0))
    raise NoRootOnRay(f"no boundary radius up to {rho_max!r} at theta = {rs.theta!r}")
