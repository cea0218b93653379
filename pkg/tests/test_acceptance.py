"""Acceptance criteria, one test each; a pass/fail line per criterion is
printed in the terminal summary."""
import math
import time

import numpy as np
import pytest

import conftest
from conftest import bisect, rk3_poly
from imexstab.boundary import (area, trace_continuation_method, trace_definition_method,
                               trace_root_method)
from imexstab.raysolve import build_ray_system, min_f_over_y, smallest_valid_root
from imexstab.stabfn import direct_p, direct_q, eval_R, scalar_step

N_RAYS = 256
RHO_MAX = 20.0


def _report(name, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def root_curves(stabfns):
    return {name: trace_root_method(sf, N_RAYS, RHO_MAX) for name, sf in stabfns.items()}


def test_closed_form_circle(euler):
    t0 = time.perf_counter()
    curve = trace_root_method(euler, 256, 10.0)
    a = area(curve)
    elapsed = time.perf_counter() - t0
    err = float(np.max(np.abs(curve.rhos - 1.0)))
    ok = err <= 1e-8 and abs(a - math.pi) <= 1e-9 and elapsed < 1.0
    _report("closed-form circle", ok,
            f"max |rho-1| = {err:.2e}, |area-pi| = {abs(a - math.pi):.2e}, {elapsed:.2f} s")


def test_explicit_part_boundary(rk3):
    t0 = time.perf_counter()
    curve = trace_root_method(rk3, 256, 10.0)
    elapsed = time.perf_counter() - t0
    rho_pi = curve.rhos[128]
    rho_0 = curve.rhos[0]
    # on the real axis z = -1 - r, and |P(z)| = 1 first happens where P(z) = -1
    oracle = bisect(lambda r: rk3_poly(-1.0 - r) + 1.0, 0.1, 2.0)
    ok = (abs(rho_pi - 1.5127) <= 1e-3 and abs(rho_pi - oracle) <= 1e-3
          and abs(rho_0 - 1.0) <= 1e-6 and elapsed < 1.0)
    _report("explicit-part boundary", ok,
            f"rho(pi) = {rho_pi:.10f} (oracle {oracle:.10f}), rho(0) = {rho_0:.10f}, "
            f"{elapsed:.2f} s")


def test_oracle_equivalence(stabfns):
    t0 = time.perf_counter()
    worst = {}
    for name, sf in stabfns.items():
        root = trace_root_method(sf, N_RAYS, RHO_MAX)
        defn = trace_definition_method(sf, N_RAYS, RHO_MAX)
        if root.failed or defn.failed:
            worst[name] = math.inf
            continue
        worst[name] = float(np.max(np.abs(root.rhos - defn.rhos) / defn.rhos))
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-6 and elapsed < 30.0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    _report("oracle equivalence", ok, f"max rel discrepancy {detail}; {elapsed:.1f} s")


def test_symmetry(root_curves):
    worst = {}
    for name, curve in root_curves.items():
        r = curve.rhos
        mirrored = r[(-np.arange(N_RAYS)) % N_RAYS]
        worst[name] = float(np.max(np.abs(r - mirrored)))
    ok = max(worst.values()) <= 1e-8
    _report("symmetry", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_stability_function_certification(tableaux, stabfns, rng):
    worst_pq = worst_step = 0.0
    for name, t in tableaux.items():
        sf = stabfns[name]
        z = rng.uniform(-2, 2, size=(100, 2)) + 1j * rng.uniform(-2, 2, size=(100, 2))
        for z1, z2 in z:
            ref_p, ref_q = direct_p(t, z1, z2), direct_q(t, z1)
            worst_pq = max(worst_pq,
                           abs(sf.p(z1, z2) - ref_p) / max(1.0, abs(ref_p)),
                           abs(sf.q(z1) - ref_q) / max(1.0, abs(ref_q)))
            if np.allclose(t.A, np.tril(t.A)) and abs(ref_q) > 1e-6:
                ref = scalar_step(t, z1, z2)
                worst_step = max(worst_step,
                                 abs(eval_R(sf, z1, z2) - ref) / max(1.0, abs(ref)))
    ok = worst_pq <= 1e-10 and worst_step <= 1e-10
    _report("stability-function certification", ok,
            f"p, q vs determinants {worst_pq:.1e}, step vs p/q {worst_step:.1e}")


def test_construction_certification(tableaux, stabfns, rng):
    worst = resid = 0.0
    for name, t in tableaux.items():
        sf = stabfns[name]
        for theta, y, rho in zip(rng.uniform(0, 2 * math.pi, 50), rng.uniform(-3, 3, 50),
                                 rng.uniform(0, 3, 50)):
            rs = build_ray_system(sf, theta)
            resid = max(resid, rs.imag_residue)
            z2 = -1 + rho * np.exp(1j * theta)
            ref = abs(direct_q(t, 1j * y)) ** 2 - abs(direct_p(t, 1j * y, z2)) ** 2
            worst = max(worst, abs(rs.F(y, rho) - ref) / max(1.0, abs(ref)))
    ok = worst <= 1e-10 and resid < 1e-10
    _report("construction certification", ok,
            f"F vs |q|^2-|p|^2 {worst:.1e}, imaginary residue {resid:.1e}")


def test_smallest_root_property(stabfns, root_curves):
    bad = []
    checked = 0
    for name, sf in stabfns.items():
        for theta in root_curves[name].thetas:
            rs = build_ray_system(sf, theta)
            root = smallest_valid_root(rs, RHO_MAX)
            checked += 1
            if max(root.residuals) > 1e-8 * rs.scale:
                bad.append((name, theta, "residual"))
            for frac in (0.99, 0.999):
                if not min_f_over_y(rs, frac * root.rho)[0] > 0:
                    bad.append((name, theta, frac))
    _report("smallest-root property", not bad,
            f"{checked} rays checked, {len(bad)} violations {bad[:3]}")


def _best_of(fn, repeats=2):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_speed_ordering(stabfns):
    sf = stabfns["ars443"]
    n = 128
    t_cont = _best_of(lambda: trace_continuation_method(sf, 2 * math.pi / n, RHO_MAX))
    t_root = _best_of(lambda: trace_root_method(sf, n, RHO_MAX))
    t_def = _best_of(lambda: trace_definition_method(sf, n, RHO_MAX))
    ok = t_cont < t_root < t_def
    _report("speed ordering", ok,
            f"ars443 (s = {sf.s}), {n} rays: continuation {t_cont:.2f} s, "
            f"root {t_root:.2f} s, definition {t_def:.2f} s")

