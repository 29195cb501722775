"""Assembly and evaluation of the Atiyah determinant D(x_1, ..., x_n).

Row i of the n x n coefficient matrix holds the coefficients of

    f_i(t1, t2) = prod_{k != i} (z_{i,k} t1 - w_{i,k} t2),

column j (0-based) being the coefficient of t1^j t2^(n-1-j). The factors are
multiplied in index order k = 0, ..., n-1 skipping i, so results are
bit-reproducible per platform. D is the determinant of that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CoincidentPointsError, GeometryError
from .geom import REL_TOL, as_points, pairwise_distances
from .spinor import pair_tables

MAX_POINTS = 64


@dataclass(frozen=True)
class AtiyahResult:
    value: complex
    matrix_cond_hint: float  # reciprocal condition hint: min|u_ii| / max|u_ii|
    n: int

    @property
    def abs(self) -> float:
        return abs(self.value)


def host_polynomial(i: int, z_table: np.ndarray, w_table: np.ndarray) -> np.ndarray:
    """Coefficient vector of row i from the spinor pair tables.

    Returns a length-n complex array c with c[j] the coefficient of
    t1^j t2^(n-1-j).
    """
    n = z_table.shape[-1]
    c = np.zeros(z_table.shape[:-2] + (n,), dtype=complex)
    c[..., 0] = 1.0
    deg = 0
    for k in range(n):
        if k == i:
            continue
        z = z_table[..., i, k]
        w = w_table[..., i, k]
        # multiply by (z*s - w), s = t1/t2, coefficients ascending in s
        head = c[..., : deg + 1].copy()
        c[..., : deg + 1] = -w[..., None] * head
        c[..., 1 : deg + 2] += z[..., None] * head
        deg += 1
    return c


def coefficient_matrix(pts: np.ndarray) -> np.ndarray:
    """The (..., n, n) matrix (a_ij) for stacked configurations (..., n, 3)."""
    zt, wt = pair_tables(np.asarray(pts, dtype=float))
    n = zt.shape[-1]
    rows = [host_polynomial(i, zt, wt) for i in range(n)]
    return np.stack(rows, axis=-2)


def determinant_from_pair_tables(z_table: np.ndarray, w_table: np.ndarray):
    """D from explicit spinor tables (used by gauge-invariance tests)."""
    n = z_table.shape[-1]
    rows = [host_polynomial(i, z_table, w_table) for i in range(n)]
    m = np.stack(rows, axis=-2)
    d = np.linalg.det(m)
    return d if np.ndim(d) else complex(d)


def _check_distinct(pts: np.ndarray) -> None:
    d = pairwise_distances(pts)
    n = d.shape[0]
    iu = np.triu_indices(n, 1)
    if d[iu].min() < REL_TOL * d.max():
        raise CoincidentPointsError("configuration has (nearly) coincident points")


def atiyah_determinant(pts) -> AtiyahResult:
    """D for one configuration, via complex LU with partial pivoting."""
    a = as_points(pts)
    n = a.shape[0]
    if n < 2 or n > MAX_POINTS:
        raise GeometryError(f"need 2 <= n <= {MAX_POINTS} points, got {n}")
    _check_distinct(a)
    m = coefficient_matrix(a)
    lu, piv = scipy.linalg.lu_factor(m)
    diag = np.diag(lu)
    swaps = int(np.sum(piv != np.arange(n)))
    det = complex((-1.0) ** swaps * np.prod(diag))
    mags = np.abs(diag)
    hint = float(mags.min() / mags.max()) if mags.max() > 0 else 0.0
    return AtiyahResult(value=det, matrix_cond_hint=hint, n=n)


def atiyah_determinant_batch(pts: np.ndarray) -> np.ndarray:
    """D values for stacked configurations of shape (..., n, 3).

    Skips the distinctness check (bulk samplers enforce separation) and the
    condition hint; agrees with atiyah_determinant to floating accuracy.
    """
    return np.linalg.det(coefficient_matrix(pts))


def atiyah_determinant_three(a, b, c) -> complex:
    """Closed form for three points: 1 + delta(triangle) / 4."""
    from .geom import d3, distance

    r_ab, r_ac, r_bc = distance(a, b), distance(a, c), distance(b, c)
    if min(r_ab, r_ac, r_bc) == 0.0:
        raise CoincidentPointsError("coincident points")
    return complex(1.0 + d3(r_bc, r_ac, r_ab) / (2.0 * r_ab * r_ac * r_bc) / 4.0)
