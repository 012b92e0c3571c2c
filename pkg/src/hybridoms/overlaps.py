"""Franck-Condon-type overlaps between bare and photon-displaced dressed states.

A single cavity photon displaces the mechanics by ``beta`` and rotates the TLS
by ``alpha``. The resulting unitary ``U(1) = D(beta) exp(-i alpha sigma_y)`` is
real in the dressed basis; this module evaluates its matrix elements
``<n xi| U(1) |n' xi'>`` in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre

from .ladder import GROUND, PLUS, DressedLabel, ladder_labels
from .params import SystemParams, derive_params, mixing_angle

#: Largest Fock index for which :func:`displacement_element` is guaranteed finite.
MAX_FOCK = 200


def displacement_element(n: int, n_prime: int, beta: float) -> float:
    """``<n| exp[beta (b^dag - b)] |n'>`` for real ``beta``.

    The factorial prefactor and the power of ``beta`` are combined in log space,
    which keeps the result finite for indices up to :data:`MAX_FOCK`.
    """
    if n < 0 or n_prime < 0:
        raise ValueError("Fock indices must be non-negative")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    lo, hi = min(n, n_prime), max(n, n_prime)
    k = hi - lo
    if beta == 0.0:
        return 1.0 if k == 0 else 0.0
    x = beta * beta
    lag = float(eval_genlaguerre(lo, k, x))
    if lag == 0.0:
        return 0.0
    log_mag = (
        0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1))
        + k * math.log(beta)
        - 0.5 * x
        + math.log(abs(lag))
    )
    sign = math.copysign(1.0, lag)
    if n_prime > n and k % 2:
        sign = -sign  # (-beta)^(n'-n)
    return sign * math.exp(log_mag)


def displacement_matrix(size: int, beta: float) -> np.ndarray:
    """Matrix of :func:`displacement_element` for indices ``0 .. size-1``."""
    out = np.empty((size, size))
    for i in range(size):
        for j in range(size):
            out[i, j] = displacement_element(i, j, beta)
    return out


def poisson_cutoff(beta: float, tol: float = 1e-10) -> int:
    """Smallest ``n`` past the Poisson mode with ``exp(-b^2) b^(2n) / n! < tol``."""
    x = beta * beta
    n = int(math.ceil(x))
    while True:
        if x == 0.0:
            weight = 1.0 if n == 0 else 0.0
        else:
            weight = math.exp(-x + n * math.log(x) - math.lgamma(n + 1))
        if weight < tol:
            return n
        n += 1


def default_truncation(beta: float, tol: float = 1e-10, guard: int = 10) -> int:
    """Ladder truncation: Poisson-tail cutoff at ``tol`` plus ``guard`` levels."""
    return poisson_cutoff(beta, tol) + guard


def dressed_overlap(row: DressedLabel, col: DressedLabel, p: SystemParams, _disp=None) -> float:
    """``<row| U(1) |col>`` between TLS-MR dressed states.

    ``_disp`` optionally supplies a precomputed :func:`displacement_matrix`.
    """
    row.validate()
    col.validate()
    d = derive_params(p)
    beta, alpha = d.beta, d.alpha
    if _disp is None:
        def D(a, b):
            return displacement_element(a, b, beta)
    else:
        def D(a, b):
            return _disp[a, b]
    ca, sa = math.cos(alpha), math.sin(alpha)
    n, m = row.n, col.n

    if row.xi == GROUND and col.xi == GROUND:
        return ca * D(0, 0)
    if row.xi == GROUND:
        t = mixing_angle(m, p.lam, p.delta_ab)
        ct, st = math.cos(t), math.sin(t)
        if col.xi == PLUS:
            return sa * ct * D(0, m - 1) + ca * st * D(0, m)
        return -sa * st * D(0, m - 1) + ca * ct * D(0, m)
    if col.xi == GROUND:
        t = mixing_angle(n, p.lam, p.delta_ab)
        ct, st = math.cos(t), math.sin(t)
        if row.xi == PLUS:
            return -sa * ct * D(n - 1, 0) + ca * st * D(n, 0)
        return sa * st * D(n - 1, 0) + ca * ct * D(n, 0)

    t, tp = mixing_angle(n, p.lam, p.delta_ab), mixing_angle(m, p.lam, p.delta_ab)
    c, s, cp, sp = math.cos(t), math.sin(t), math.cos(tp), math.sin(tp)
    a, b, e, f = D(n - 1, m - 1), D(n - 1, m), D(n, m - 1), D(n, m)
    if row.xi == PLUS and col.xi == PLUS:
        return ca * c * cp * a - sa * c * sp * b + sa * s * cp * e + ca * s * sp * f
    if row.xi == PLUS:
        return -ca * c * sp * a - sa * c * cp * b - sa * s * sp * e + ca * s * cp * f
    if col.xi == PLUS:
        return -ca * s * cp * a + sa * s * sp * b + sa * c * cp * e + ca * c * sp * f
    return ca * s * sp * a + sa * s * cp * b - sa * c * sp * e + ca * c * cp * f


@dataclass(frozen=True)
class OverlapMatrix:
    """Real matrix ``<row| U(1) |col>`` over the truncated dressed ladder.

    ``labels[i]`` names row and column ``i``; the ordering is
    ``0g, 1+, 1-, 2+, 2-, ...``.
    """

    entries: np.ndarray
    labels: tuple
    beta: float
    alpha: float
    n_trunc: int

    def index(self, label: DressedLabel) -> int:
        n, xi = label
        if n > self.n_trunc:
            raise IndexError(f"label {label} beyond truncation n_trunc={self.n_trunc}")
        return 0 if xi == GROUND else 2 * n - 1 + (0 if xi == PLUS else 1)

    def __getitem__(self, key) -> float:
        row, col = key
        return float(self.entries[self.index(row), self.index(col)])

    def row_norm_defect(self) -> np.ndarray:
        """``1 - sum_col entry^2`` for every row (zero for an exact unitary)."""
        return 1.0 - np.sum(self.entries**2, axis=1)


def overlap_matrix(p: SystemParams, n_trunc: int | None = None) -> OverlapMatrix:
    """Dense overlap matrix over all labels with ``n <= n_trunc``."""
    d = derive_params(p)
    if n_trunc is None:
        n_trunc = default_truncation(d.beta)
    if n_trunc < 1:
        raise ValueError("n_trunc must be >= 1")
    if n_trunc >= MAX_FOCK:
        raise ValueError(f"n_trunc={n_trunc} exceeds the displacement stability bound {MAX_FOCK - 1}")
    disp = displacement_matrix(n_trunc + 1, d.beta)
    labels = tuple(ladder_labels(n_trunc))
    entries = np.array([[dressed_overlap(r, c, p, disp) for c in labels] for r in labels])
    return OverlapMatrix(entries, labels, d.beta, d.alpha, n_trunc)
