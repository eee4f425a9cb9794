"""Machine-readable report assembly.

Reports are JSON with a versioned ``schema`` field; identical configurations
produce byte-identical output (all sampling is seeded, reductions are
ordered, keys are sorted).  Every numeric leaf carries an estimated
precision field ``digits``; estimates come from the computation's own
diagnostics (Cauchy gaps, spreads, refinement residuals) and are capped at
machine precision.
"""

from __future__ import annotations

import json
import math

from .geometry import is_infinity

MACHINE_DIGITS = 15


def digits_from_error(err: float | None, cap: int = MACHINE_DIGITS) -> int:
    """Significant digits suggested by an absolute error estimate."""
    if err is None or err <= 0:
        return cap
    if not math.isfinite(err):
        return 0
    return max(0, min(cap, int(-math.log10(err))))


def num(value: float, digits: int = MACHINE_DIGITS) -> dict:
    if value is None:
        return {"value": None, "digits": 0}
    if isinstance(value, float) and math.isinf(value):
        return {"value": "inf" if value > 0 else "-inf", "digits": digits}
    return {"value": float(value), "digits": int(digits)}


def cnum(value, digits: int = MACHINE_DIGITS) -> dict:
    """Complex numeric leaf; the point at infinity serializes explicitly."""
    if value is None:
        return {"value": None, "digits": 0}
    if is_infinity(value):
        return {"infinity": True, "digits": int(digits)}
    w = complex(value)
    return {"re": w.real, "im": w.imag, "digits": int(digits)}


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def grid_csv(grid, values) -> str:
    """Flatten grid samples to (re z, im z, re val, im val) CSV rows."""
    lines = ["re_z,im_z,re_value,im_value"]
    for z, v in zip(grid, values):
        z, v = complex(z), complex(v)
        lines.append(f"{z.real!r},{z.imag!r},{v.real!r},{v.imag!r}")
    return "\n".join(lines) + "\n"
