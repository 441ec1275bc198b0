"""Stability of the drift matrix by two independent routes.

The eigenvalue route computes max Re(lambda) directly (dense LAPACK
Hessenberg + shifted QR); the algebraic route runs the Routh-Hurwitz test
on the characteristic polynomial.  Both are exposed so sweeps can
cross-validate away from the marginal boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

_ROUTH_EPS = 1e-30  # zero-pivot replacement, sign-tracked through the table


def characteristic_polynomial(m: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients via Faddeev-LeVerrier.

    Returns [1, c1, ..., cn] with p(lam) = lam^n + c1 lam^(n-1) + ... + cn;
    c1 equals -trace(m).
    """
    a = np.asarray(m, dtype=float)
    n = a.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    mk = np.eye(n)
    for k in range(1, n + 1):
        am = a @ mk
        ck = -np.trace(am) / k
        coeffs[k] = ck
        mk = am + ck * np.eye(n)
    return coeffs


def routh_first_column(coeffs) -> np.ndarray:
    """First column of the Routh table for a monic polynomial.

    Zero pivots with a nonzero remainder row are replaced by a tiny
    positive epsilon; an all-zero row is rebuilt from the derivative of
    the auxiliary polynomial of the row above.
    """
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    if n < 1:
        return np.array([c[0]])
    width = n // 2 + 1
    r0 = np.zeros(width + 1)
    r1 = np.zeros(width + 1)
    even = c[0::2]
    odd = c[1::2]
    r0[: len(even)] = even
    r1[: len(odd)] = odd
    rows = [r0, r1]
    for i in range(2, n + 1):
        prev2, prev = rows[-2], rows[-1]
        if not prev.any():
            # auxiliary polynomial from prev2, degree n-i+2; differentiate
            deg = n - i + 2
            prev = np.array([prev2[j] * max(deg - 2 * j, 0) for j in range(width + 1)],
                            dtype=float)
            rows[-1] = prev
        piv = prev[0]
        if piv == 0.0:
            piv = _ROUTH_EPS
        new = np.zeros(width + 1)
        for j in range(width):
            new[j] = (piv * prev2[j + 1] - prev2[0] * prev[j + 1]) / piv
        rows.append(new)
    return np.array([_ROUTH_EPS if row[0] == 0.0 else row[0] for row in rows])


def routh_hurwitz_stable(coeffs) -> bool:
    """True iff the Routh table finds no right-half-plane roots."""
    col = routh_first_column(coeffs)
    signs = np.sign(col)
    return bool(np.all(signs == signs[0]))


@dataclass(frozen=True, eq=False)
class StabilityReport:
    stable: bool
    max_re_eigenvalue: float
    routh_stable: bool
    char_poly: np.ndarray


def max_real_eigenvalue(m: np.ndarray) -> float:
    """Largest real part over the spectrum of m."""
    try:
        eig = np.linalg.eigvals(np.asarray(m, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed for matrix {m!r}") from exc
    return float(eig.real.max())


def is_stable(m: np.ndarray) -> StabilityReport:
    """Classify stability of a drift matrix; strict sign test on max Re(lambda).

    The Routh verdict is reported alongside; the two routes agree whenever
    the margin |max Re(lambda)| exceeds ~1e-9.
    """
    max_re = max_real_eigenvalue(m)
    coeffs = characteristic_polynomial(m)
    return StabilityReport(
        stable=max_re < 0.0,
        max_re_eigenvalue=max_re,
        routh_stable=routh_hurwitz_stable(coeffs),
        char_poly=coeffs,
    )
