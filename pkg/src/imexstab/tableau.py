"""IMEX Runge-Kutta tableau pairs: representation, JSON I/O and validation.

A scheme is stored as ``(A, w, B, omega)``: ``A``/``w`` drive the implicit
(stiff) part, ``B``/``omega`` the explicit part.  ``B`` must be strictly
lower triangular.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

__all__ = [
    "ImexTableau",
    "TableauError",
    "Severity",
    "Diagnostic",
    "parse_tableau",
    "serialize_tableau",
    "load_tableau",
    "validate",
]


class TableauError(ValueError):
    """Malformed or structurally invalid tableau document."""


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise TableauError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImexTableau:
    A: np.ndarray
    w: np.ndarray
    B: np.ndarray
    omega: np.ndarray
    name: Optional[str] = None
    s: int = field(init=False)

    def __post_init__(self):
        A = _frozen(self.A, 2, "A")
        B = _frozen(self.B, 2, "B")
        w = _frozen(self.w, 1, "w")
        omega = _frozen(self.omega, 1, "omega")
        s = A.shape[0]
        if s < 1:
            raise TableauError("stage count must be positive")
        for label, arr, shape in (("A", A, (s, s)), ("B", B, (s, s)),
                                  ("w", w, (s,)), ("omega", omega, (s,))):
            if arr.shape != shape:
                raise TableauError(
                    f"dimension mismatch: {label} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise TableauError(f"{label} contains non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "s", s)

    def __eq__(self, other):
        if not isinstance(other, ImexTableau):
            return NotImplemented
        return (self.name == other.name
                and all(np.array_equal(getattr(self, k), getattr(other, k))
                        for k in ("A", "w", "B", "omega")))

    __hash__ = None

    @property
    def is_dirk(self) -> bool:
        """True when ``A`` is lower triangular."""
        return not np.any(np.triu(self.A, 1))


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str

    def __str__(self):
        return f"{self.severity.value}: {self.message}"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def validate(t: ImexTableau) -> list[Diagnostic]:
    """Check a tableau; an empty list means every check passed.

    Only a non-strictly-lower-triangular ``B`` is an error.  First-order
    consistency, the sign of the implicit diagonal and a full (non-DIRK)
    ``A`` produce warnings.
    """
    out = []
    s = t.s
    bad = [(i, j) for i in range(s) for j in range(i, s) if t.B[i, j] != 0.0]
    if bad:
        i, j = bad[0]
        out.append(Diagnostic(
            Severity.ERROR,
            f"B not strictly lower triangular: b_{i + 1}{j + 1} = {_fmt(t.B[i, j])}"))
    for label, vec in (("w", t.w), ("omega", t.omega)):
        total = math.fsum(vec)
        if abs(total - 1.0) > 1e-12:
            out.append(Diagnostic(Severity.WARNING, f"sum({label}) = {_fmt(total)} != 1"))
    for i in range(s):
        if t.A[i, i] <= 0.0:
            out.append(Diagnostic(
                Severity.WARNING, f"a_{i + 1}{i + 1} = {_fmt(t.A[i, i])} <= 0"))
    if not t.is_dirk:
        out.append(Diagnostic(
            Severity.WARNING,
            "A not lower triangular: p/q may differ from the scalar amplification factor"))
    return out


def _require(doc: dict, key: str):
    if key not in doc:
        raise TableauError(f"missing field: {key!r}")
    return doc[key]


def _numbers(value, key: str, depth: int):
    """Check nesting and numeric types before numpy gets to coerce anything."""
    if depth == 0:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TableauError(f"non-numeric entry in {key}: {value!r}")
        return
    if not isinstance(value, list):
        raise TableauError(f"{key} must be a {'matrix' if depth == 2 else 'list'}")
    for v in value:
        _numbers(v, key, depth - 1)


def parse_tableau(text: str) -> ImexTableau:
    """Parse a JSON tableau document.

    Raises :class:`TableauError` on malformed JSON, missing fields, shape
    mismatches, non-numeric entries and a ``B`` that is not strictly lower
    triangular.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableauError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise TableauError("tableau document must be a JSON object")
    s = _require(doc, "s")
    if isinstance(s, bool) or not isinstance(s, int) or s < 1:
        raise TableauError(f"s must be a positive integer, got {s!r}")
    fields = {}
    for key, depth in (("A", 2), ("w", 1), ("B", 2), ("omega", 1)):
        value = _require(doc, key)
        _numbers(value, key, depth)
        if len(value) != s or (depth == 2 and any(len(row) != s for row in value)):
            raise TableauError(f"dimension mismatch: {key} does not match s = {s}")
        fields[key] = value
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise TableauError("name must be a string")
    t = ImexTableau(name=name, **fields)
    errors = [d for d in validate(t) if d.severity is Severity.ERROR]
    if errors:
        raise TableauError("; ".join(d.message for d in errors))
    return t


def serialize_tableau(t: ImexTableau) -> str:
    doc = {}
    if t.name is not None:
        doc["name"] = t.name
    doc.update(s=t.s, A=t.A.tolist(), w=t.w.tolist(), B=t.B.tolist(), omega=t.omega.tolist())
    return json.dumps(doc, indent=2)


def load_tableau(path) -> ImexTableau:
    with open(path, encoding="utf-8") as fh:
        return parse_tableau(fh.read())
