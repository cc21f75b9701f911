"""Pointwise criterion functionals and their grid sup-estimation.

Each sufficient condition is exposed twice: as a pointwise functional
(returning the complex criterion value at one z) and through
`evaluate_criterion`, which scans a disk grid, applies one local refinement
pass around the worst sample, and emits a CriterionReport.

A reported pass means "numerically passes on this grid"; it is evidence,
not a proof, since the supremum may be attained only in the limit |z| -> 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .branches import tracked_log, tracked_ratio_log
from .grids import DiskGrid
from .maps import AnalyticMap, CompanionMap, IdentityMap
from .parallel import ordered_map
from .udisk import u_disk_margin, u_disk_ratio
from .qcverify import compose_dilatation

_INF = float("inf")


class PreconditionError(ValueError):
    """A criterion's hypothesis failed before any grid scan ran."""


# ---------------------------------------------------------------------------
# parameters and report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionParams:
    """Free parameters of the criteria; only the relevant subset is read.

    k        target dilatation class, in [0, 1)
    k_prime  criterion bound, in [0, k]
    c        constant multiplying |z|^2 in the Becker-type bound, |c| <= k_prime
    s        exponent alpha + i*beta with Re s > 0 (Bazilevic-type)
    p        starlike comparison map with p(0) = 0, p'(0) = 1
    c2       omitted value for the Moebius specialization, not in f(D)
    gamma, delta   Moebius derivative-condition coefficients, gamma != 0
    w0, lambda0, a sector vertex, initial ray (units of pi), opening (units of pi)
    """

    k: float | None = None
    k_prime: float | None = None
    c: complex = 0j
    s: complex = 1 + 0j
    p: AnalyticMap | None = None
    c2: complex | None = None
    gamma: complex | None = None
    delta: complex | None = None
    w0: complex | None = None
    lambda0: float | None = None
    a: float | None = None

    def __post_init__(self):
        if self.k is not None and not 0 <= self.k < 1:
            raise PreconditionError("k must lie in [0, 1)")
        if self.k_prime is not None:
            if not 0 <= self.k_prime < 1:
                raise PreconditionError("k_prime must lie in [0, 1)")
            if self.k is not None and self.k_prime > self.k + 1e-15:
                raise PreconditionError("k_prime must not exceed k")
            if abs(self.c) > self.k_prime + 1e-15:
                raise PreconditionError("|c| must not exceed k_prime")
        if self.s.real <= 0:
            raise PreconditionError("Re s must be positive")
        if self.a is not None and not 0 < self.a < 2:
            raise PreconditionError("sector opening a must lie in (0, 2)")


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one grid scan of a criterion functional."""

    criterion: str
    sup_value: float
    threshold: float
    strict: bool
    passed: bool
    margin: float
    worst_point: complex
    samples: int
    smallest_bound: float | None = None
    concluded_dilatation: float | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "passed": self.passed,
            "sup_value": self.sup_value,
            "threshold": self.threshold,
            "strict": self.strict,
            "margin": self.margin,
            "worst_re": self.worst_point.real,
            "worst_im": self.worst_point.imag,
            "samples": self.samples,
            "smallest_bound": self.smallest_bound,
            "concluded_dilatation": self.concluded_dilatation,
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# pointwise functionals
# ---------------------------------------------------------------------------


def _phi_at(phi, w: complex) -> complex:
    """Phi(w) for either a direct analytic map or a companion's Q/Q' view."""
    if isinstance(phi, CompanionMap):
        return phi.phi(w)
    return phi.jet(w).value


def _phi_deriv_origin(phi) -> complex:
    if isinstance(phi, CompanionMap):
        return phi.phi_deriv(0j)
    return phi.jet(0j).d1


def phi_like_value(f: AnalyticMap, phi, z: complex) -> complex:
    """z*f'(z)/Phi(f(z)); at z = 0 the limit f'(0)/Phi'(0).

    `phi` is either an AnalyticMap used directly as Phi, or a CompanionMap
    whose view Phi = Q/Q' is used.  Positivity of the real part on the disk
    is the phi-like (univalence) condition; spiral-likeness is the special
    case Phi(w) = e^{i*lam} * w.
    """
    jf = f.jet(z)
    if z == 0:
        d = _phi_deriv_origin(phi)
        if d == 0:
            return complex(_INF, 0)
        return jf.d1 / d
    den = _phi_at(phi, jf.value)
    if den == 0:
        return complex(_INF, 0)
    return z * jf.d1 / den


def gen_becker_value(f: AnalyticMap, q: CompanionMap, c: complex, z: complex) -> complex:
    """c|z|^2 + (1-|z|^2) * { z f''/f' + z f' * Omega(f(z)) } with Omega = Q''/Q'."""
    jf = f.jet(z)
    if jf.d1 == 0:
        return complex(_INF, 0)
    jq = q.jet(jf.value)
    if jq.d1 == 0:
        return complex(_INF, 0)
    r2 = abs(z) ** 2
    bracket = z * jf.d2 / jf.d1 + z * jf.d1 * (jq.d2 / jq.d1)
    return c * r2 + (1 - r2) * bracket


def nw_value(f: AnalyticMap, q: CompanionMap, z: complex) -> complex:
    """f'(z) * Q'(f(z)): the derivative condition tested against U(k')."""
    jf = f.jet(z)
    return jf.d1 * q.jet(jf.value).d1


def gen_bazilevic_value(f: AnalyticMap, psi, s: complex, p: AnalyticMap,
                        z: complex) -> complex:
    """f'(z) (f/z)^{s-1} / (p/z)^{alpha} * Psi(f(z)), branch-tracked from 0.

    `psi` is either an AnalyticMap used directly as Psi, or a CompanionMap Q,
    in which case Psi(w) = (Q(w)/w)^{s-1} Q'(w) and the whole product is
    evaluated as (Q(f)/z)^{s-1} * (Q o f)'(z) / (p/z)^{alpha} with a single
    tracked branch.
    """
    alpha = s.real
    if isinstance(psi, CompanionMap):
        def g_ratio(w: complex) -> complex:
            return psi.jet(f.jet(w).value).value / w

        jf0 = f.jet(0j)
        g0 = psi.jet(jf0.value).d1 * jf0.d1  # (Q o f)'(0)
        if z == 0:
            lg = cmath.log(g0)
            lp = 0j
            head = g0
        else:
            lg = tracked_log(g_ratio, z, cmath.log(g0))
            lp = tracked_ratio_log(p, z)
            jf = f.jet(z)
            head = psi.jet(jf.value).d1 * jf.d1
        return head * cmath.exp((s - 1) * lg - alpha * lp)
    # direct Psi
    jf = f.jet(z)
    if z == 0:
        lf = cmath.log(jf.d1)
        lp = 0j
    else:
        lf = tracked_ratio_log(f, z)
        lp = tracked_ratio_log(p, z)
    return jf.d1 * cmath.exp((s - 1) * lf - alpha * lp) * psi.jet(jf.value).value


def moebius_becker_value(f: AnalyticMap, c1: complex, c2: complex, z: complex) -> complex:
    """c1|z|^2 + (1-|z|^2) * { z f''/f' - 2 z f'/(f - c2) }."""
    jf = f.jet(z)
    if jf.d1 == 0 or jf.value == c2:
        return complex(_INF, 0)
    r2 = abs(z) ** 2
    bracket = z * jf.d2 / jf.d1 - 2 * z * jf.d1 / (jf.value - c2)
    return c1 * r2 + (1 - r2) * bracket


def moebius_nw_value(f: AnalyticMap, gamma: complex, delta: complex, z: complex) -> complex:
    """f'(z)/(gamma*f(z) + delta)^2, tested against U(k)."""
    jf = f.jet(z)
    den = gamma * jf.value + delta
    if den == 0:
        return complex(_INF, 0)
    return jf.d1 / (den * den)


def sector_becker_value(f: AnalyticMap, c: complex, w0: complex, a: float,
                        z: complex) -> complex:
    """c|z|^2 + (1-|z|^2) * { z f''/f' + (1/a - 1) z f'/(f - w0) }."""
    jf = f.jet(z)
    if jf.d1 == 0 or jf.value == w0:
        return complex(_INF, 0)
    r2 = abs(z) ** 2
    bracket = z * jf.d2 / jf.d1 + (1 / a - 1) * z * jf.d1 / (jf.value - w0)
    return c * r2 + (1 - r2) * bracket


def sector_nw_value(f: AnalyticMap, w0: complex, a: float, z: complex) -> complex:
    """f'(z) * (1 - f(z)/w0)^{1/a - 1}, branch tracked along [0, z]."""
    jf = f.jet(z)
    expo = 1 / a - 1
    if z == 0:
        return jf.d1
    lg = tracked_log(lambda w: 1 - f.jet(w).value / w0, z, 0j)
    return jf.d1 * cmath.exp(expo * lg)


# ---------------------------------------------------------------------------
# grid scan machinery
# ---------------------------------------------------------------------------


def _finite(x: float) -> bool:
    return math.isfinite(x)


def _scan(score_fn: Callable[[complex], float], points: Sequence[complex]):
    scores = ordered_map(score_fn, points)
    best = -_INF
    worst = 0j
    for z, sc in zip(points, scores):
        if not _finite(sc):
            return _INF, z, len(points), False
        if sc > best:
            best = sc
            worst = z
    return best, worst, len(points), True


def _refined_neighborhood(grid: DiskGrid, worst: complex) -> np.ndarray:
    """A 9x9 polar patch around the worst sample, clamped to the grid disk."""
    radii = grid.radii()
    r = abs(worst)
    theta = math.atan2(worst.imag, worst.real)
    idx = int(np.argmin(np.abs(radii - r)))
    dr_up = radii[min(idx + 1, len(radii) - 1)] - radii[idx]
    dr_dn = radii[idx] - radii[max(idx - 1, 0)]
    dr = max(dr_up, dr_dn, grid.eps * 0.5)
    dtheta = 2 * math.pi / grid.n_angular
    rs = np.clip(np.linspace(r - dr, r + dr, 9), 0.0, grid.max_radius)
    ts = np.linspace(theta - dtheta, theta + dtheta, 9)
    return (rs[:, None] * np.exp(1j * ts[None, :])).ravel()


def sup_over_grid(score_fn: Callable[[complex], float], grid: DiskGrid,
                  threshold: float, *, strict: bool = False, criterion: str = "",
                  refine: bool = True) -> CriterionReport:
    """Deterministic sup scan with one local refinement pass.

    The functional returns a real score per point; the criterion passes when
    the final sup is <= threshold (or < threshold when `strict`).  Non-finite
    scores fail the scan immediately at the offending point.
    """
    points = grid.points()
    sup, worst, n, ok = _scan(score_fn, points)
    if ok and refine:
        extra = _refined_neighborhood(grid, worst)
        sup2, worst2, n2, ok2 = _scan(score_fn, extra)
        n += n2
        if not ok2:
            sup, worst, ok = _INF, worst2, False
        elif sup2 > sup:
            sup, worst = sup2, worst2
    sup = float(sup)
    passed = bool(ok and (sup < threshold if strict else sup <= threshold))
    return CriterionReport(
        criterion=criterion,
        sup_value=sup,
        threshold=float(threshold),
        strict=strict,
        passed=passed,
        margin=threshold - sup if _finite(sup) else -_INF,
        worst_point=complex(worst),
        samples=n,
    )


# ---------------------------------------------------------------------------
# criterion dispatch
# ---------------------------------------------------------------------------

RE_CRITERIA = ("phi_like", "bazilevic")
SUP_CRITERIA = ("gen_becker", "moebius_becker", "sector_becker")
UDISK_CRITERIA = ("nw", "moebius_nw", "sector_nw", "phi_like_udisk", "bazilevic_udisk")

ALL_CRITERIA = RE_CRITERIA + SUP_CRITERIA + UDISK_CRITERIA


def check_starlike(p: AnalyticMap, grid: DiskGrid | None = None) -> None:
    """Numerically require p(0)=0, p'(0)=1 and Re(z p'/p) > 0 on the grid."""
    j0 = p.jet(0j)
    if j0.value != 0 or abs(j0.d1 - 1) > 1e-12:
        raise PreconditionError("comparison map must satisfy p(0)=0, p'(0)=1")
    grid = grid or DiskGrid(24, 48, 1e-2)
    for z in grid.points():
        if z == 0:
            continue
        j = p.jet(z)
        if j.value == 0:
            raise PreconditionError("comparison map vanishes inside the disk")
        if (z * j.d1 / j.value).real <= 0:
            raise PreconditionError(
                f"comparison map is not starlike on the grid (violation at {z!r})"
            )


def _image_avoids(f: AnalyticMap, omitted: complex, grid: DiskGrid,
                  what: str, tol: float = 1e-9) -> None:
    gap = min(abs(f.jet(z).value - omitted) for z in grid.points())
    if gap <= tol:
        raise PreconditionError(
            f"{what} = {omitted!r} is not separated from the image "
            f"(min distance {gap:.3g})"
        )


def _sector_contains_image(f: AnalyticMap, sector, grid: DiskGrid) -> None:
    for z in grid.points():
        w = f.jet(z).value
        if not sector.contains(w):
            raise PreconditionError(
                f"image point f({z!r}) = {w!r} escapes the sector domain"
            )


def _value_scan(value_fn: Callable[[complex], complex], grid: DiskGrid,
                score: Callable[[complex], float],
                ratio: Callable[[complex], float] | None,
                threshold: float, strict: bool, criterion: str,
                collect: bool):
    """Scan values once, deriving score sup and (optionally) smallest bound."""
    points = list(grid.points())
    values = ordered_map(value_fn, points)
    rows = list(zip(points, values)) if collect else None

    def one_pass(pts, vals):
        sup, worst, bound, ok = -_INF, 0j, -_INF, True
        for z, v in zip(pts, vals):
            sc = score(v)
            if not _finite(sc):
                return _INF, z, _INF, False
            if sc > sup:
                sup, worst = sc, z
            if ratio is not None:
                rb = ratio(v)
                if rb > bound:
                    bound = rb
        return sup, worst, bound, ok

    sup, worst, bound, ok = one_pass(points, values)
    n = len(points)
    if ok:
        extra = list(_refined_neighborhood(grid, worst))
        vals2 = ordered_map(value_fn, extra)
        if rows is not None:
            rows.extend(zip(extra, vals2))
        sup2, worst2, bound2, ok2 = one_pass(extra, vals2)
        n += len(extra)
        if not ok2:
            sup, worst, ok = _INF, worst2, False
        else:
            if sup2 > sup:
                sup, worst = sup2, worst2
            bound = max(bound, bound2)
    sup = float(sup)
    passed = bool(ok and (sup < threshold if strict else sup <= threshold))
    report = CriterionReport(
        criterion=criterion,
        sup_value=sup,
        threshold=float(threshold),
        strict=strict,
        passed=passed,
        margin=threshold - sup if _finite(sup) else -_INF,
        worst_point=complex(worst),
        samples=n,
        smallest_bound=(float(bound) if ratio is not None and _finite(bound) else None),
    )
    return report, rows


def evaluate_criterion(criterion: str, f: AnalyticMap,
                       companion: CompanionMap | None,
                       params: CriterionParams,
                       grid: DiskGrid | None = None,
                       *, collect: bool = False):
    """Run one named criterion over a grid and report.

    Returns the CriterionReport, or (report, rows) when `collect` is set,
    where rows is the list of (z, criterion value) pairs scanned.
    """
    grid = grid or DiskGrid()
    if criterion not in ALL_CRITERIA:
        raise PreconditionError(
            f"unknown criterion {criterion!r}; valid ids: {', '.join(ALL_CRITERIA)}"
        )

    kq = getattr(companion, "extension_dilatation", 0.0) if companion is not None else 0.0
    threshold, strict = 0.0, False
    ratio: Callable[[complex], float] | None = None

    if criterion in ("gen_becker",):
        if companion is None:
            raise PreconditionError("gen_becker needs a companion map")
        kp = params.k_prime if params.k_prime is not None else params.k
        if kp is None:
            raise PreconditionError("gen_becker needs k_prime (or k)")
        c = params.c
        value_fn = lambda z: gen_becker_value(f, companion, c, z)
        score = abs
        ratio = abs
        threshold = kp
    elif criterion == "moebius_becker":
        if params.c2 is None or params.k is None:
            raise PreconditionError("moebius_becker needs c2 and k")
        _image_avoids(f, params.c2, grid, "c2")
        c1, c2 = params.c, params.c2
        value_fn = lambda z: moebius_becker_value(f, c1, c2, z)
        score = abs
        ratio = abs
        threshold = params.k
    elif criterion == "sector_becker":
        sector = _require_sector(params)
        if params.k is None:
            raise PreconditionError("sector_becker needs k")
        _sector_contains_image(f, sector, grid)
        c, w0, a = params.c, sector.w0, sector.a
        value_fn = lambda z: sector_becker_value(f, c, w0, a, z)
        score = abs
        ratio = abs
        threshold = params.k
        kq = abs(1 - sector.a)
    elif criterion == "nw":
        if companion is None:
            raise PreconditionError("nw needs a companion map")
        kp = params.k_prime if params.k_prime is not None else params.k
        if kp is None:
            raise PreconditionError("nw needs k_prime (or k)")
        value_fn = lambda z: nw_value(f, companion, z)
        score = lambda v: -u_disk_margin(v, kp)
        ratio = u_disk_ratio
        threshold = 0.0
    elif criterion == "moebius_nw":
        if params.gamma is None or params.delta is None or params.k is None:
            raise PreconditionError("moebius_nw needs gamma, delta and k")
        if params.gamma == 0:
            raise PreconditionError("moebius_nw requires gamma != 0 "
                                    "(the affine case is the classical condition)")
        pole = -params.delta / params.gamma
        _image_avoids(f, pole, grid, "-delta/gamma")
        g, d, kk = params.gamma, params.delta, params.k
        value_fn = lambda z: moebius_nw_value(f, g, d, z)
        score = lambda v: -u_disk_margin(v, kk)
        ratio = u_disk_ratio
        threshold = 0.0
    elif criterion == "sector_nw":
        sector = _require_sector(params)
        if params.k is None:
            raise PreconditionError("sector_nw needs k")
        _sector_contains_image(f, sector, grid)
        w0, a, kk = sector.w0, sector.a, params.k
        value_fn = lambda z: sector_nw_value(f, w0, a, z)
        score = lambda v: -u_disk_margin(v, kk)
        ratio = u_disk_ratio
        threshold = 0.0
        kq = abs(1 - sector.a)
    elif criterion in ("phi_like", "phi_like_udisk"):
        if companion is None:
            raise PreconditionError("phi_like needs a companion (or direct Phi)")
        value_fn = lambda z: phi_like_value(f, companion, z)
        if criterion == "phi_like":
            score = lambda v: -v.real
            strict = True
        else:
            kp = params.k_prime if params.k_prime is not None else params.k
            if kp is None:
                raise PreconditionError("phi_like_udisk needs k_prime (or k)")
            score = lambda v: -u_disk_margin(v, kp)
            ratio = u_disk_ratio
    elif criterion in ("bazilevic", "bazilevic_udisk"):
        if companion is None:
            raise PreconditionError("bazilevic needs a companion (or direct Psi)")
        p = params.p or IdentityMap()
        check_starlike(p)
        s = params.s
        value_fn = lambda z: gen_bazilevic_value(f, companion, s, p, z)
        if criterion == "bazilevic":
            score = lambda v: -v.real
            strict = True
        else:
            kp = params.k_prime if params.k_prime is not None else params.k
            if kp is None:
                raise PreconditionError("bazilevic_udisk needs k_prime (or k)")
            score = lambda v: -u_disk_margin(v, kp)
            ratio = u_disk_ratio
    else:  # pragma: no cover
        raise PreconditionError(f"unhandled criterion {criterion!r}")

    report, rows = _value_scan(value_fn, grid, score, ratio, threshold, strict,
                               criterion, collect)

    concluded = None
    if report.passed and criterion not in RE_CRITERIA:
        bound_used = params.k_prime if params.k_prime is not None else params.k
        if criterion in ("moebius_becker", "moebius_nw", "sector_becker",
                         "sector_nw"):
            bound_used = params.k
        if bound_used is not None:
            concluded = compose_dilatation(bound_used, kq)
    if concluded is not None:
        report = _with_concluded(report, concluded)
    if collect:
        return report, rows
    return report


def _with_concluded(report: CriterionReport, value: float) -> CriterionReport:
    return CriterionReport(
        criterion=report.criterion,
        sup_value=report.sup_value,
        threshold=report.threshold,
        strict=report.strict,
        passed=report.passed,
        margin=report.margin,
        worst_point=report.worst_point,
        samples=report.samples,
        smallest_bound=report.smallest_bound,
        concluded_dilatation=value,
        note=report.note,
    )



def _require_sector(params: CriterionParams):
    from .sector import SectorDomain

    if params.w0 is None or params.lambda0 is None or params.a is None:
        raise PreconditionError("sector criteria need w0, lambda0 and a")
    return SectorDomain(params.w0, params.lambda0, params.a)
