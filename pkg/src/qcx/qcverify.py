"""Numerical verification of quasiconformality.

Wirtinger derivatives come from a 4-point central stencil, the Beltrami
coefficient is their ratio, and the composition arithmetic of dilatation
bounds closes the loop from criterion report to measured extension.

The extensions built downstream are merely continuous (not smooth) across
the unit circle, so estimation grids must keep a guard band of 3h around
|z| = 1 and every accepted estimate has to survive a step-halving check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .grids import AnnulusGrid, DiskGrid
from .parallel import ordered_map

_DEGENERATE_DZ = 1e-10


def compose_dilatation(k1: float, k2: float) -> float:
    """(k1+k2)/(1+k1*k2): dilatation bound of a composition, still < 1."""
    if not (0 <= k1 < 1 and 0 <= k2 < 1):
        raise ValueError("dilatation bounds must lie in [0, 1)")
    return (k1 + k2) / (1 + k1 * k2)


def wirtinger(f: Callable[[complex], complex], z: complex,
              h: float = 1e-5) -> tuple[complex, complex]:
    """Central-difference Wirtinger derivatives (df/dz, df/dzbar) at z.

    Exact (up to rounding) on affine maps a*z + b*conj(z) + c by linearity
    of the stencil.
    """
    try:
        fe = f(z + h)
        fw = f(z - h)
        fn = f(z + 1j * h)
        fs = f(z - 1j * h)
    except ZeroDivisionError as exc:
        raise ValueError(f"non-finite sample in Wirtinger stencil at {z!r}") from exc
    for v in (fe, fw, fn, fs):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite sample in Wirtinger stencil at {z!r}")
    du = fe - fw
    dv = fn - fs
    dz = (du - 1j * dv) / (4 * h)
    dzbar = (du + 1j * dv) / (4 * h)
    return dz, dzbar


@dataclass(frozen=True)
class BeltramiEstimate:
    """Grid of Beltrami coefficients mu = df/dzbar / df/dz.

    K = (1+sup|mu|)/(1-sup|mu|) is the maximal dilatation (inf when
    sup|mu| >= 1).  `flagged` lists sample indices with a degenerate dz;
    `skipped` lists samples excluded because the stencil straddled a known
    non-smooth seam of the map.  Neither kind contributes to the sup.
    """

    points: np.ndarray
    mu: np.ndarray
    sup_abs_mu: float
    worst_point: complex
    h: float
    flagged: tuple[int, ...] = ()
    skipped: tuple[int, ...] = ()

    @property
    def K(self) -> float:
        if self.sup_abs_mu >= 1:
            return math.inf
        return (1 + self.sup_abs_mu) / (1 - self.sup_abs_mu)


def _guard_violated(points: Sequence[complex], h: float) -> complex | None:
    for z in points:
        if 1 - 3 * h <= abs(z) <= 1 + 3 * h:
            return z
    return None


def beltrami_on_grid(f: Callable[[complex], complex],
                     grid: AnnulusGrid | DiskGrid | Sequence[complex],
                     h: float = 1e-5,
                     seam: Callable[[complex], float] | None = None) -> BeltramiEstimate:
    """Estimate the Beltrami coefficient of f on every grid sample.

    Parameters
    ----------
    f : callable
        Total map of the plane (an extension, or any complex map).
    grid : AnnulusGrid, DiskGrid or sequence of points
        Samples; must avoid the band |z| in [1-3h, 1+3h] where extensions
        are not differentiable.
    h : float
        Stencil step.
    seam : callable, optional
        Real-valued indicator whose sign change across the stencil marks a
        sample as sitting on a non-smooth seam; such samples are skipped
        (the derivative does not exist there).
    """
    points = grid.points() if hasattr(grid, "points") else np.asarray(list(grid))
    bad = _guard_violated(points, h)
    if bad is not None:
        raise ValueError(
            f"grid point {bad!r} lies inside the guard band |z| in [1-3h, 1+3h]"
        )

    def one(z: complex):
        if seam is not None:
            signs = {math.copysign(1.0, seam(z + d))
                     for d in (h, -h, 1j * h, -1j * h)}
            if len(signs) > 1:
                return None  # stencil straddles the seam
        dz, dzb = wirtinger(f, z, h)
        if abs(dz) < _DEGENERATE_DZ:
            return False  # degenerate Jacobian
        return dzb / dz

    results = ordered_map(one, list(points))
    mu = np.zeros(len(points), dtype=complex)
    flagged: list[int] = []
    skipped: list[int] = []
    sup = 0.0
    worst = complex(points[0]) if len(points) else 0j
    for i, res in enumerate(results):
        if res is None:
            skipped.append(i)
            mu[i] = np.nan
            continue
        if res is False:
            flagged.append(i)
            mu[i] = np.nan
            continue
        mu[i] = res
        if abs(res) > sup:
            sup = abs(res)
            worst = complex(points[i])
    return BeltramiEstimate(
        points=np.asarray(points),
        mu=mu,
        sup_abs_mu=float(sup),
        worst_point=complex(worst),
        h=float(h),
        flagged=tuple(flagged),
        skipped=tuple(skipped),
    )


def stable_beltrami(f: Callable[[complex], complex],
                    grid, h: float = 1e-5, tol: float = 5e-3,
                    seam: Callable[[complex], float] | None = None):
    """Beltrami estimate plus the mandatory step-halving stability gate.

    Returns (estimate_at_h, estimate_at_h/2, stable, delta) where stable
    means the sup changed by less than `tol` when the step was halved.
    """
    est = beltrami_on_grid(f, grid, h, seam)
    est_half = beltrami_on_grid(f, grid, h / 2, seam)
    delta = abs(est.sup_abs_mu - est_half.sup_abs_mu)
    return est, est_half, delta < tol, delta
