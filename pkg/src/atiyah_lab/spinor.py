"""Unit spinor pairs attached to ordered point pairs.

For an ordered pair (x_i, x_j) of distinct points the pair (z, w) satisfies
|z|^2 + |w|^2 = 1 and

    z / w = ((dx1 + i dx2)) / (|d| - dx3),      d = x_j - x_i,

with (z, w) = (1, 0) when the denominator vanishes (direction +e3). The
residual unit-phase freedom is fixed by the gauge "w real and >= 0", which
the formula below produces directly: with den = |d| - dx3 > 0,

    |num|^2 + den^2 = 2 |d| den,

so z = num / sqrt(2 |d| den) and w = sqrt(den / (2 |d|)).

The reversed pair (j, i) is (-conj(w), conj(z)), never the formula applied
to the reversed direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPointsError

# Only an exactly vanishing denominator (relative to the pair's own length)
# takes the special-case branch; the generic formula is stable elsewhere.
_VERTICAL_TOL = 1e-14


@dataclass(frozen=True)
class SpinorPair:
    z: complex
    w: complex

    def norm_sq(self) -> float:
        return abs(self.z) ** 2 + abs(self.w) ** 2


def hopf_pair(xi, xj) -> SpinorPair:
    """Spinor pair of the ordered pair (xi, xj), gauge w real >= 0."""
    d = np.asarray(xj, dtype=float) - np.asarray(xi, dtype=float)
    r = float(np.linalg.norm(d))
    if r == 0.0:
        # configuration-level scaled distinctness lives in the determinant
        raise CoincidentPointsError("coincident points have no direction")
    # r - dz cancels catastrophically near +e3; the equivalent quotient form
    # (dx^2 + dy^2) / (r + dz) is exact there
    if d[2] > 0.0:
        den = (d[0] * d[0] + d[1] * d[1]) / (r + d[2])
    else:
        den = r - d[2]
    if den < _VERTICAL_TOL * r:
        return SpinorPair(1.0 + 0.0j, 0.0 + 0.0j)
    num = d[0] + 1j * d[1]
    s = np.sqrt(2.0 * r * den)
    return SpinorPair(complex(num / s), complex(np.sqrt(den / (2.0 * r))))


def reverse_pair(p: SpinorPair) -> SpinorPair:
    """Pair for the reversed ordered pair: (-conj(w), conj(z))."""
    return SpinorPair(-np.conj(p.w), np.conj(p.z))


def pair_tables(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spinor tables z[..., i, j], w[..., i, j] for all ordered pairs.

    ``pts`` has shape (..., n, 3); entries with i < j come from the direct
    formula, entries with i > j from the reversal rule. Diagonals are unused
    and left at (1, 0). Coincidence is not checked here; callers validate.
    """
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[-2]
    diff = pts[..., None, :, :] - pts[..., :, None, :]  # [..., i, j, :] = x_j - x_i
    r = np.linalg.norm(diff, axis=-1)
    dz = diff[..., 2]
    # stable form of r - dz for dz > 0 (see hopf_pair)
    perp_sq = diff[..., 0] ** 2 + diff[..., 1] ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        den = np.where(dz > 0.0, perp_sq / np.where(r + dz > 0, r + dz, 1.0), r - dz)
    rsafe = np.where(r > 0, r, 1.0)
    vertical = den < _VERTICAL_TOL * rsafe
    densafe = np.where(vertical, 1.0, den)
    s = np.sqrt(2.0 * rsafe * densafe)
    z = np.where(vertical, 1.0 + 0.0j, (diff[..., 0] + 1j * diff[..., 1]) / s)
    w = np.where(vertical, 0.0, np.sqrt(densafe / (2.0 * rsafe)))

    iu, ju = np.triu_indices(n, 1)
    zt = z.copy()
    wt = w.astype(complex)
    zt[..., ju, iu] = -np.conj(wt[..., iu, ju])
    wt[..., ju, iu] = np.conj(z[..., iu, ju])
    idx = np.arange(n)
    zt[..., idx, idx] = 1.0
    wt[..., idx, idx] = 0.0
    return zt, wt
