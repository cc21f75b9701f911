"""The disk family U(k) = {w : |w-1| <= k|w+1|}.

Equivalently the closed disk with center (1+k^2)/(1-k^2) and radius
2k/(1-k^2).  Membership of a criterion value in U(k) is what forces the
k-quasiconformal extendibility in the Becker-type results, so everything
here reports a signed margin rather than a bare boolean.
"""

from __future__ import annotations

import math


def _check_k(k: float) -> float:
    k = float(k)
    if not 0 <= k < 1:
        raise ValueError("dilatation bound k must lie in [0, 1)")
    return k


def u_disk_margin(w: complex, k: float) -> float:
    """Signed margin k|w+1| - |w-1|; >= 0 means w is inside U(k)."""
    k = _check_k(k)
    return k * abs(w + 1) - abs(w - 1)


def u_disk_contains(w: complex, k: float) -> tuple[bool, float]:
    """Membership test with the signed margin attached."""
    m = u_disk_margin(w, k)
    return m >= 0, m


def u_disk_ratio(w: complex) -> float:
    """|w-1|/|w+1|: the smallest k whose disk U(k) contains w (inf at w=-1)."""
    den = abs(w + 1)
    num = abs(w - 1)
    if den == 0:
        return math.inf if num > 0 else 0.0
    return num / den


def u_disk_center_radius(k: float) -> tuple[float, float]:
    k = _check_k(k)
    d = 1 - k * k
    return (1 + k * k) / d, 2 * k / d
