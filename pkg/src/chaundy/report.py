"""Outcome record shared by every identity check."""
from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .poly import MultiPoly, ScaledPoly

EXACT_PASS = "exact-pass"
NUMERIC_PASS = "numeric-pass"
FAIL = "fail"


@dataclass
class VerifyReport:
    identity: str
    params: dict[str, Any]
    status: str
    residual: Any  # Fraction for exact checks, float for numeric ones
    elapsed: float = 0.0  # seconds
    witness: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in (EXACT_PASS, NUMERIC_PASS)

    def to_json(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "identity": self.identity,
            "params": _jsonable(self.params),
            "status": self.status,
            "residual": _jsonable(self.residual),
            "elapsed_ms": round(self.elapsed * 1000.0, 3) if timing else 0,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return format_complex(value)
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # keep the output strict JSON
    if isinstance(value, (int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (MultiPoly, ScaledPoly)):
        return value.to_text()
    return str(value)


def format_complex(z: complex) -> str:
    """Render in the ``a+bi`` syntax the CLI accepts."""
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


@contextmanager
def stopwatch():
    """Yields a one-element list that receives the elapsed seconds on exit."""
    box = [0.0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - start


def exact_report(identity: str, params: dict, residuals, elapsed: float = 0.0,
                 details: dict | None = None) -> VerifyReport:
    """Build a report from one or more residual polynomials that should vanish.

    The residual magnitude is the largest absolute coefficient; the witness
    is the lowest-order surviving term of the first nonzero residual.
    """
    if isinstance(residuals, (MultiPoly, ScaledPoly)):
        residuals = [residuals]
    magnitude = Fraction(0)
    witness = None
    for r in residuals:
        core = r.core if isinstance(r, ScaledPoly) else r
        if core.is_zero():
            continue
        magnitude = max(magnitude, Fraction(core.max_abs_coefficient()))
        if witness is None:
            exp, c = core.sorted_terms()[0]
            witness = MultiPoly(core.arity, {exp: c}).to_text()
    status = EXACT_PASS if magnitude == 0 else FAIL
    return VerifyReport(identity, dict(params), status, magnitude, elapsed, witness,
                        dict(details or {}))


def numeric_report(identity: str, params: dict, residual: float, tolerance: float,
                   elapsed: float = 0.0, details: dict | None = None) -> VerifyReport:
    ok = residual <= tolerance
    witness = None if ok else f"residual {residual!r} > {tolerance!r}"
    d = {"tolerance": tolerance}
    d.update(details or {})
    return VerifyReport(identity, dict(params), NUMERIC_PASS if ok else FAIL,
                        float(residual), elapsed, witness, d)
