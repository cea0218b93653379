"""L-stable region boundaries of implicit-explicit Runge-Kutta schemes."""
from importlib import resources

from .boundary import (BoundaryCurve, BoundaryPoint, area, trace_continuation_method,
                       trace_definition_method, trace_root_method)
from .raysolve import (RayRoot, RaySystem, build_ray_system, min_f_over_y, real_roots,
                       resultant_in_rho, smallest_valid_root)
from .stabfn import StabilityFunction, eval_R, scalar_step, stability_polynomials, stiff_limit
from .tableau import ImexTableau, parse_tableau, serialize_tableau, validate

FIXTURES = ("euler", "rk3_explicit", "ssp2_222", "ssp3_433", "ars443")


def fixture_path(name: str):
    """Path of a bundled tableau fixture."""
    return resources.files(__name__) / "fixtures" / f"{name}.json"


def load_fixture(name: str) -> ImexTableau:
    return parse_tableau(fixture_path(name).read_text(encoding="utf-8"))


__all__ = [
    "BoundaryCurve", "BoundaryPoint", "FIXTURES", "ImexTableau", "RayRoot", "RaySystem",
    "StabilityFunction", "area", "build_ray_system", "eval_R", "fixture_path",
    "load_fixture", "min_f_over_y", "parse_tableau", "real_roots", "resultant_in_rho",
    "scalar_step", "serialize_tableau", "smallest_valid_root", "stability_polynomials",
    "stiff_limit", "trace_continuation_method", "trace_definition_method",
    "trace_root_method", "validate",
]
