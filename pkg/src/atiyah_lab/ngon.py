"""Closed-form and asymptotic results for the determinant of regular n-gons.

D_n grows like exp(0.0797 n^2) and overflows doubles near n ~ 95, so every
formula here is evaluated in log space; exponentiated values are offered only
where representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log, pi

import numpy as np

from . import constants
from .determinant import atiyah_determinant
from .errors import GeometryError

# Direct-determinant cross-checks stop here; conditioning and runtime are
# benign below this cap.
DIRECT_CAP = 24


def ngon_points(n: int) -> np.ndarray:
    """Vertices (cos u_k, sin u_k, 0), u_k = 2 pi k / n, k = 1..n."""
    if n < 2:
        raise GeometryError("an n-gon needs n >= 2")
    u = 2.0 * pi * np.arange(1, n + 1) / n
    return np.stack([np.cos(u), np.sin(u), np.zeros(n)], axis=-1)


def _cot_log_sum(n: int, weights: np.ndarray | None = None) -> float:
    """sum over 1 <= k <= n/2 of weight_k * ln cot(pi k / 2n)."""
    k = np.arange(1, n // 2 + 1, dtype=float)
    logs = np.log(1.0 / np.tan(pi * k / (2.0 * n)))
    if weights is None:
        return float(logs.sum())
    return float((weights * logs).sum())


def log_ngon_closed_form(n: int) -> float:
    """ln |D_n| = (n/2) ln n + n(1-n)/2 ln 2 + sum_k (n - 2k) ln cot(pi k / 2n)."""
    if n < 2:
        raise GeometryError("closed form needs n >= 2")
    k = np.arange(1, n // 2 + 1, dtype=float)
    return (
        0.5 * n * log(n)
        + 0.5 * n * (1 - n) * log(2.0)
        + _cot_log_sum(n, weights=(n - 2.0 * k))
    )


def ngon_closed_form(n: int) -> float:
    """|D_n| itself; overflows to inf for n beyond ~95."""
    with np.errstate(over="ignore"):
        return float(np.exp(log_ngon_closed_form(n)))


def log_dn_over_n2(n: int) -> float:
    """ln(D_n) / n^2, which tends to 7 zeta(3)/(2 pi^2) - ln(2)/2."""
    if n < 3:
        raise GeometryError("asymptotic form needs n >= 3")
    return log_ngon_closed_form(n) / float(n * n)


def cot_product_log_bounds(n: int) -> tuple[float, float]:
    """Log-space sandwich for sum_k (1 - 2k/n) ln cot(pi k / 2n).

    Lower bound B n - (1 - 1/n) ln n - (1 - ln(pi/2)), upper bound B n.
    """
    if n < 3:
        raise GeometryError("bounds need n >= 3")
    b = constants.growth_constant()
    upper = b * n
    lower = b * n - (1.0 - 1.0 / n) * log(n) - (1.0 - log(pi / 2.0))
    return lower, upper


def cot_product_bounds(n: int) -> tuple[float, float]:
    """Exponentiated bounds (inf when out of double range)."""
    lo, hi = cot_product_log_bounds(n)
    with np.errstate(over="ignore"):
        return float(np.exp(lo)), float(np.exp(hi))


def cot_product_log(n: int) -> float:
    """The bounded quantity: sum_k (1 - 2k/n) ln cot(pi k / 2n)."""
    k = np.arange(1, n // 2 + 1, dtype=float)
    return _cot_log_sum(n, weights=(1.0 - 2.0 * k / n))


def dn_exceeds_one_lower_bound(n) -> np.ndarray:
    """A positive lower bound for ln(D_n)/n, valid for n >= 20:

        0.0797 n - (1/2 - 1/n) ln n - 0.2019.

    Vectorized; D_n > 1 whenever this is positive.
    """
    n = np.asarray(n, dtype=float)
    return 0.0797 * n - (0.5 - 1.0 / n) * np.log(n) - 0.2019


@dataclass(frozen=True)
class DnCheck:
    n: int
    log_closed_form: float
    direct: float | None  # |D| from the determinant, n <= DIRECT_CAP only
    exceeds_one: bool
    rel_diff: float | None  # |direct - closed| / closed where direct exists


def verify_dn_exceeds_one(n_max: int) -> list[DnCheck]:
    """Check D_n > 1 for 3 <= n <= n_max.

    Direct determinant vs closed form up to DIRECT_CAP; the displayed
    lower-bound expression beyond it.
    """
    if n_max < 3:
        raise GeometryError("need n_max >= 3")
    out = []
    for n in range(3, min(n_max, DIRECT_CAP) + 1):
        lcf = log_ngon_closed_form(n)
        cf = float(np.exp(lcf))
        direct = abs(atiyah_determinant(ngon_points(n)).value)
        out.append(
            DnCheck(
                n=n,
                log_closed_form=lcf,
                direct=direct,
                exceeds_one=(direct > 1.0 and lcf > 0.0),
                rel_diff=abs(direct - cf) / cf,
            )
        )
    if n_max > DIRECT_CAP:
        ns = np.arange(DIRECT_CAP + 1, n_max + 1)
        bounds = dn_exceeds_one_lower_bound(ns)
        for n, b in zip(ns.tolist(), bounds.tolist()):
            out.append(
                DnCheck(
                    n=n,
                    log_closed_form=b * n,  # a valid lower bound for ln D_n
                    direct=None,
                    exceeds_one=bool(b > 0.0),
                    rel_diff=None,
                )
            )
    return out


def vandermonde_coeff_check(a: complex, n: int) -> float:
    """Max relative error between expanded and closed-form coefficients of
    h(z) = prod_{k=1..n} (z - a^k) = z^n - sum_k b_k z^k.

    Closed form: b_k = a^(n-k) prod_{l != k} (a^n - a^l) / prod_{l != k} (a^k - a^l),
    products over 0 <= l < n. Requires a != 0 and a^k != 1 for 1 <= k < n.
    """
    if n < 1 or n > 20:
        raise GeometryError("need 1 <= n <= 20")
    a = complex(a)
    if a == 0:
        raise GeometryError("need a != 0")
    powers = a ** np.arange(0, n + 1)
    if np.any(np.abs(powers[1:n] - 1.0) < 1e-8):
        raise GeometryError("a^k = 1 for some 1 <= k < n (within 1e-8)")

    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    for k in range(1, n + 1):
        root = powers[k]
        coeffs[1 : k + 1] = coeffs[1 : k + 1] - root * coeffs[:k].copy()
    # h(z) = sum_j coeffs[j] z^(n-j); b_k = -coeffs[n-k] for 0 <= k < n
    expanded_b = -coeffs[::-1][:n]

    max_err = 0.0
    base = powers[:n]  # a^l for 0 <= l < n
    an = powers[n]
    for k in range(n):
        mask = np.arange(n) != k
        num = np.prod(an - base[mask])
        den = np.prod(powers[k] - base[mask])
        b_k = a ** (n - k) * num / den
        err = abs(expanded_b[k] - b_k) / max(abs(b_k), 1e-300)
        max_err = max(max_err, err)
    return max_err


def check_f_decreasing(grid: int = 1000) -> bool:
    """(pi/4 - x) ln cot x is strictly decreasing on (0, pi/4)."""
    if grid < 2:
        raise GeometryError("need grid >= 2")
    eps = 1e-6
    x = np.linspace(eps, pi / 4.0 - eps, grid)
    f = (pi / 4.0 - x) * np.log(1.0 / np.tan(x))
    return bool(np.all(np.diff(f) < 0.0))
