"""Branch tracking for complex powers along radial segments.

Expressions like (f(z)/z)**(s-1) are only well defined once a branch of the
logarithm is chosen.  The principal branch is wrong as soon as the ratio
winds around the origin, so logs are continued along the segment [0, z]
starting from the known limit at the origin (where ratios of class-A maps
equal 1).
"""

from __future__ import annotations

import cmath
import math
from typing import Callable


class BranchTrackingError(ValueError):
    """Continuation failed: the tracked value crossed 0 or winds too fast."""


_MAX_STEP_IMAG = 1.5  # just under pi/2: one step may not rotate this much


def tracked_log(fn: Callable[[complex], complex], z: complex, anchor: complex,
                initial_steps: int = 48, max_steps: int = 3072) -> complex:
    """log(fn(z)) continued along the ray from 0, anchored at fn's 0-limit.

    Parameters
    ----------
    fn : callable
        Evaluates the tracked quantity at points of the open segment (0, z].
    z : complex
        Endpoint of the ray.
    anchor : complex
        A logarithm of lim_{t->0+} fn(t*z); fixes the branch.

    Returns
    -------
    complex
        The branch-continued logarithm of fn(z).
    """
    if z == 0:
        return anchor
    n = initial_steps
    while True:
        log_val = anchor
        prev = cmath.exp(anchor)
        ok = True
        for j in range(1, n + 1):
            w = fn(z * (j / n))
            if w == 0 or not (math.isfinite(w.real) and math.isfinite(w.imag)):
                raise BranchTrackingError(
                    "tracked value vanished or became non-finite on the ray at "
                    f"{z * (j / n)!r}"
                )
            step = cmath.log(w / prev)
            if abs(step.imag) > _MAX_STEP_IMAG:
                ok = False
                break
            log_val += step
            prev = w
        if ok:
            return log_val
        if n >= max_steps:
            raise BranchTrackingError(
                "branch tracking did not stabilize: value crosses 0 or winds "
                f"faster than {max_steps} subdivisions resolve"
            )
        n *= 2


def tracked_ratio_log(m, z: complex, initial_steps: int = 48) -> complex:
    """log(m(z)/z) continued along [0, z], anchored at log(m'(0)).

    `m` is any jet-capable map with m(0) = 0; for class-A maps the anchor is
    log(1) = 0 and the ratio starts at 1.
    """
    j0 = m.jet(0j)
    if j0.value != 0:
        raise BranchTrackingError("ratio tracking requires m(0) = 0")
    if j0.d1 == 0:
        raise BranchTrackingError("ratio tracking requires m'(0) != 0")
    anchor = cmath.log(j0.d1)
    if z == 0:
        return anchor
    return tracked_log(lambda w: m.jet(w).value / w, z, anchor, initial_steps)
