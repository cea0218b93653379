import math

import numpy as np
import pytest

from conftest import rk3_ray_oracle
from imexstab.boundary import (BoundaryCurve, BoundaryPoint, area, is_member, theta_grid,
                               trace_continuation_method, trace_definition_method,
                               trace_root_method)
from imexstab.errors import ContinuationSeedError
from imexstab.raysolve import build_ray_system


def test_theta_grid_nests_under_refinement():
    coarse, fine = theta_grid(16), theta_grid(32)
    assert np.array_equal(coarse, fine[::2])
    with pytest.raises(ValueError):
        theta_grid(3)


def test_root_method_euler_circle(euler):
    curve = trace_root_method(euler, 8, 10.0)
    assert curve.method == "root"
    assert not curve.failed
    assert np.allclose(curve.rhos, 1.0, atol=1e-12)
    assert np.allclose(curve.thetas, 2 * np.pi * np.arange(8) / 8)


def test_root_method_rk3(rk3):
    curve = trace_root_method(rk3, 4, 5.0)
    for theta, rho in zip(curve.thetas, curve.rhos):
        assert rho == pytest.approx(rk3_ray_oracle(theta), abs=1e-9)


def test_root_method_rejects_too_few_rays(euler):
    with pytest.raises(ValueError):
        trace_root_method(euler, 3, 10.0)


def test_root_method_marks_rays_beyond_cap(euler):
    curve = trace_root_method(euler, 8, 0.5)
    assert len(curve.failed) == 8
    assert all(math.isnan(p.rho) for p in curve.points)


def test_definition_method_euler(euler):
    curve = trace_definition_method(euler, 8, 10.0, tol=1e-10)
    assert np.all(np.abs(curve.rhos - 1.0) <= 1e-10)


def test_definition_method_rk3(rk3):
    curve = trace_definition_method(rk3, 4, 5.0)
    assert curve.rhos[2] == pytest.approx(rk3_ray_oracle(math.pi), abs=1e-9)


def test_definition_method_cap(euler):
    curve = trace_definition_method(euler, 8, 0.5)
    assert len(curve.failed) == 8


def test_definition_method_tol_must_be_positive(euler):
    with pytest.raises(ValueError):
        trace_definition_method(euler, 8, 2.0, tol=0.0)


@pytest.mark.parametrize("name", ["ssp2_222", "ssp3_433", "ars443"])
def test_definition_and_root_agree(stabfns, name):
    sf = stabfns[name]
    root = trace_root_method(sf, 16, 20.0)
    defn = trace_definition_method(sf, 16, 20.0)
    assert np.allclose(root.rhos, defn.rhos, rtol=1e-6)


def test_membership_probes(stabfns):
    sf = stabfns["ssp2_222"]
    root = trace_root_method(sf, 8, 20.0)
    for p in root.points:
        rs = build_ray_system(sf, p.theta)
        assert is_member(sf, rs, 0.5 * p.rho)
        assert is_member(sf, rs, p.rho * (1 - 1e-6))
        assert not is_member(sf, rs, p.rho * (1 + 1e-6))


def test_continuation_euler_circle(euler):
    curve = trace_continuation_method(euler, 2 * math.pi / 64, 10.0)
    assert len(curve.points) == 64
    assert not curve.failed
    assert np.allclose(curve.rhos, 1.0, atol=1e-10)


def test_continuation_rk3(rk3):
    curve = trace_continuation_method(rk3, 2 * math.pi / 32, 5.0)
    root = trace_root_method(rk3, 32, 5.0)
    assert np.allclose(curve.rhos, root.rhos, atol=1e-8)


def test_continuation_goes_astray_at_a_corner(stabfns):
    sf = stabfns["ssp3_433"]
    cont = trace_continuation_method(sf, 2 * math.pi / 256, 20.0)
    root = trace_root_method(sf, 256, 20.0)
    ok = np.array([p.status != "failed" for p in cont.points])
    # before the first corner both agree
    assert np.allclose(cont.rhos[:20], root.rhos[:20], rtol=1e-8)
    deviation = np.abs(cont.rhos[ok] - root.rhos[ok])
    assert cont.failed or deviation.max() > 1e-2


def test_continuation_step_must_be_positive(euler):
    for step in (0.0, -0.1):
        with pytest.raises(ValueError):
            trace_continuation_method(euler, step, 10.0)


def test_continuation_without_seed(euler):
    with pytest.raises(ContinuationSeedError):
        trace_continuation_method(euler, 0.5, 0.5)


def _constant(rho, n=16):
    th = theta_grid(n)
    return BoundaryCurve("root", tuple(BoundaryPoint(float(t), rho) for t in th))


def test_area_of_constant_curves():
    assert area(_constant(1.0)) == pytest.approx(math.pi, abs=1e-13)
    assert area(_constant(2.0)) == pytest.approx(4 * math.pi, abs=1e-12)


def test_area_euler(euler):
    assert area(trace_root_method(euler, 64, 10.0)) == pytest.approx(math.pi, abs=1e-9)


def test_area_refuses_failed_rays():
    pts = list(_constant(1.0).points)
    pts[3] = BoundaryPoint(pts[3].theta, math.nan, "failed")
    with pytest.raises(ValueError, match="failed"):
        area(BoundaryCurve("root", tuple(pts)))


def test_refinement_reproduces_shared_rays(stabfns):
    sf = stabfns["ars443"]
    coarse = trace_root_method(sf, 16, 20.0)
    fine = trace_root_method(sf, 32, 20.0)
    assert np.allclose(fine.rhos[::2], coarse.rhos, rtol=1e-12, atol=0)
