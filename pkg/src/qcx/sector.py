"""Sector domains, the conformal power map onto the half-plane, and its
explicit |1-a|-quasiconformal extension to the whole plane.

A sector with vertex w0, initial ray at angle pi*lambda0 and opening pi*a
(both in units of pi, a in (0, 2)) is mapped onto the upper half-plane by

    Q2(w) = (e^{-i pi lambda0} (w - w0))^{1/a},

with the power taken on the branch arg in (0, 2pi) so the image argument
lands in (0, pi).  The plane extension P is conformal (z^{1/a}) on the
sector and a radial power stretch on the complementary sector; the stretch
side is reached through the rotation e^{-i pi a} z, which is what makes the
two branches agree on both shared boundary rays (an executable fact, see
the continuity tests).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .criteria import PreconditionError
from .grids import DiskGrid
from .jets import DomainError, Jet2
from .maps import AnalyticMap, CompanionMap

_TWO_PI = 2 * math.pi


class ContainmentError(PreconditionError):
    """A fitted or supplied sector fails to contain the sampled image."""


@dataclass(frozen=True)
class SectorDomain:
    """Infinite angular sector: pi*lambda0 < arg(w - w0) < pi*(lambda0 + a)."""

    w0: complex
    lambda0: float
    a: float

    def __post_init__(self):
        if not 0 < self.a < 2:
            raise PreconditionError("sector opening a must lie in (0, 2)")
        if not 0 <= self.lambda0 < 2:
            raise PreconditionError("lambda0 must lie in [0, 2)")
        object.__setattr__(self, "w0", complex(self.w0))

    def local_angle(self, w: complex) -> float:
        """arg(e^{-i pi lambda0}(w - w0)) reduced to [0, 2pi)."""
        zeta = cmath.exp(-1j * math.pi * self.lambda0) * (w - self.w0)
        ang = math.atan2(zeta.imag, zeta.real)
        if ang < 0:
            ang += _TWO_PI
        return ang

    def contains(self, w: complex) -> bool:
        if w == self.w0:
            return False
        ang = self.local_angle(w)
        return 0 < ang < math.pi * self.a


class SectorPowerMap(AnalyticMap):
    """The conformal map of the sector onto the upper half-plane, as jets.

    With `normalized=True` the map is divided by its derivative at 0, so the
    derivative condition at the origin is exactly 1; this requires 0 to lie
    inside the sector.
    """

    def __init__(self, sector: SectorDomain, normalized: bool = False):
        self.sector = sector
        self.normalized = bool(normalized)
        self._rot = cmath.exp(-1j * math.pi * sector.lambda0)
        self._scale = 1 + 0j
        if normalized:
            if not sector.contains(0j):
                raise PreconditionError(
                    "normalization requires the origin inside the sector"
                )
            self._scale = 1 / self._raw_jet(0j).d1

    def _raw_jet(self, w: complex) -> Jet2:
        sec = self.sector
        if not sec.contains(w):
            raise DomainError(f"w = {w!r} outside the sector domain")
        zeta = self._rot * (w - sec.w0)
        ang = sec.local_angle(w)
        inv_a = 1 / sec.a
        val = cmath.exp(inv_a * complex(math.log(abs(zeta)), ang))
        d1 = inv_a * val / (w - sec.w0)
        d2 = inv_a * (inv_a - 1) * val / ((w - sec.w0) ** 2)
        return Jet2(val, d1, d2)

    def jet(self, w: complex) -> Jet2:
        j = self._raw_jet(w)
        return j.scale(self._scale)

    @property
    def origin_derivative(self) -> complex:
        return self._raw_jet(0j).d1


def q2_apply(sector: SectorDomain, w: complex) -> complex:
    """Q2(w): conformal from the sector onto the upper half-plane."""
    return SectorPowerMap(sector).jet(w).value


def q2_jet(sector: SectorDomain, w: complex) -> Jet2:
    return SectorPowerMap(sector).jet(w)


def companion_from_sector(sector: SectorDomain, normalized: bool = True) -> CompanionMap:
    """The sector map as a companion with its declared dilatation |1 - a|."""
    base = SectorPowerMap(sector, normalized=normalized)
    return CompanionMap(base, abs(1 - sector.a), True, "sector")


# ---------------------------------------------------------------------------
# the plane extension P
# ---------------------------------------------------------------------------


def _arg_0_2pi(z: complex) -> float:
    ang = math.atan2(z.imag, z.real)
    return ang + _TWO_PI if ang < 0 else ang


def p_extension(a: float, z: complex) -> complex:
    """|1-a|-quasiconformal automorphism of the plane extending z^{1/a}.

    Conformal branch z^{1/a} on the open sector 0 < arg z < pi*a; on the
    closed complementary sector the composition of z^{1/(2-a)} and the
    radial stretch |z|^{(2-a)/a} z/|z|, taken after the rotation e^{-i pi a}
    and negated.  The two definitions agree on both boundary rays.
    """
    if not 0 < a < 2:
        raise PreconditionError("opening a must lie in (0, 2)")
    if z == 0:
        return 0j
    ang = _arg_0_2pi(z)
    if 0 < ang < math.pi * a:
        return cmath.exp((1 / a) * complex(math.log(abs(z)), ang))
    # stretch branch: zeta = e^{-i pi a} z has arg in [0, (2-a) pi]
    zeta = cmath.exp(-1j * math.pi * a) * z
    ang_z = _arg_0_2pi(zeta)
    if ang_z > (2 - a) * math.pi:
        # rounding pushed the boundary ray below 0; fold it back
        ang_z -= _TWO_PI
        if ang_z < 0:
            ang_z = 0.0
    p1 = cmath.exp((1 / (2 - a)) * complex(math.log(abs(zeta)), ang_z))
    # radial stretch preserves the argument
    p2 = abs(p1) ** ((2 - a) / a) * (p1 / abs(p1))
    return -p2


def p_extension_inverse(a: float, v: complex) -> complex:
    """Inverse of `p_extension`: v^a on the closed upper half-plane, the
    unwound stretch on the lower half-plane."""
    if not 0 < a < 2:
        raise PreconditionError("opening a must lie in (0, 2)")
    if v == 0:
        return 0j
    ang = _arg_0_2pi(v)
    if 0 < ang <= math.pi:
        return cmath.exp(a * complex(math.log(abs(v)), ang))
    w = -v  # arg in (0, pi]
    ang_w = _arg_0_2pi(w)
    y = abs(w) ** (a / (2 - a)) * (w / abs(w))
    zeta = cmath.exp((2 - a) * complex(math.log(abs(y)), ang_w))
    return cmath.exp(1j * math.pi * a) * zeta


class SectorExtension:
    """Total-plane extension of the sector map, with explicit inverse.

    `dilatation` is the measured-and-declared bound |1 - a|.  With
    `normalized=True` the extension and inverse carry the same 1/Q2'(0)
    normalization as the companion map.
    """

    def __init__(self, sector: SectorDomain, normalized: bool = False):
        self.sector = sector
        self.normalized = bool(normalized)
        self.dilatation = abs(1 - sector.a)
        self._rot = cmath.exp(-1j * math.pi * sector.lambda0)
        self._scale = 1 + 0j
        if normalized:
            if not sector.contains(0j):
                raise PreconditionError(
                    "normalization requires the origin inside the sector"
                )
            self._scale = 1 / SectorPowerMap(sector).origin_derivative

    def __call__(self, w: complex) -> complex:
        return self._scale * p_extension(self.sector.a, self._rot * (w - self.sector.w0))

    def inverse(self, v: complex) -> complex:
        zeta = p_extension_inverse(self.sector.a, v / self._scale)
        return self.sector.w0 + zeta / self._rot

    def seam_indicator(self, w: complex) -> float:
        """Positive inside the sector, negative outside, zero on the rays."""
        ang = self.sector.local_angle(w)
        opening = math.pi * self.sector.a
        if ang < opening:
            return min(ang, opening - ang)
        return -min(ang - opening, _TWO_PI - ang)

    def image_seam(self, v: complex) -> float:
        """Sign changes where the inverse switches branch (the real axis of
        the model plane).  Feed it the image of any map being composed with
        `inverse` so seam-straddling stencils can be skipped."""
        return (v / self._scale).imag


def extend_q2(sector: SectorDomain, normalized: bool = False) -> SectorExtension:
    """Conjugate the model extension by the affine sector coordinates."""
    return SectorExtension(sector, normalized)


# ---------------------------------------------------------------------------
# fitting a sector around a bounded image
# ---------------------------------------------------------------------------


def sup_abs_on_boundary(f: AnalyticMap, n_angles: int = 1024,
                        radius: float | None = None) -> float:
    """Estimate sup |f| over the disk by scanning a near-boundary circle,
    with one angular refinement pass around the maximizer."""
    if radius is None:
        radius = min(1 - 1e-3, 0.999 * f.analyticity_radius)
    best, best_j = -1.0, 0
    for j in range(n_angles):
        v = abs(f.jet(radius * cmath.exp(2j * math.pi * j / n_angles)).value)
        if v > best:
            best, best_j = v, j
    step = _TWO_PI / n_angles
    center = best_j * step
    for j in range(64):
        theta = center - step + 2 * step * j / 63
        v = abs(f.jet(radius * cmath.exp(1j * theta)).value)
        best = max(best, v)
    return best


def fit_sector(f: AnalyticMap, w0: complex, z0: complex = 0j,
               radius: float | None = None,
               grid: DiskGrid | None = None) -> tuple[SectorDomain, float]:
    """Smallest sector with vertex w0 containing the disk |w - z0| <= R.

    R defaults to the estimated sup |f| (with z0 = 0).  The two boundary
    rays are tangent to the enclosing circle; opening 2*arcsin(R/|w0-z0|).
    Returns (sector, R_used) after numerically asserting that the sampled
    image of f lies inside the sector.
    """
    w0 = complex(w0)
    z0 = complex(z0)
    big_r = sup_abs_on_boundary(f) if radius is None else float(radius)
    dist = abs(w0 - z0)
    if dist <= big_r:
        raise PreconditionError(
            f"vertex w0 = {w0!r} lies inside the enclosing disk (R = {big_r:.6g})"
        )
    a = 2 * math.asin(big_r / dist) / math.pi
    lam = (
        cmath.phase(z0 - w0)
        + cmath.phase(cmath.sqrt(dist * dist - big_r * big_r) - 1j * big_r)
    ) / math.pi
    lam %= 2.0
    sector = SectorDomain(w0, lam, a)
    check = grid or DiskGrid()
    for z in check.points():
        w = f.jet(z).value
        if not sector.contains(w):
            raise ContainmentError(
                f"fitted sector misses image point f({z!r}) = {w!r}"
            )
    return sector, big_r
