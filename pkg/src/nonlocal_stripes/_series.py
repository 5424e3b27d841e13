"""Accelerated alternating series and periodic power-law lattice sums.

Two summation problems recur throughout the package:

* alternating series ``sum_k (-1)^k a_k`` whose terms decay like a power
  ``k^-beta`` with ``beta`` possibly well below one, and
* one-sided lattice sums ``sum_{m>=0} sum_i w_i (y_i + m L)^-beta`` with
  ``sum_i w_i = 0``, which converge only because of that cancellation.

Plain truncation is hopeless for both when ``beta`` is small, so the first
uses the Cohen-Rodriguez Villegas-Zagier acceleration and the second a direct
head plus an Euler-Maclaurin tail.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, ToleranceError

_CVZ_RATE = 3.0 + math.sqrt(8.0)

# B_2, B_4, ..., B_12
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


def alternating_sum(term, tol=1e-15, max_terms=80):
    """Return ``(S, bound)`` for ``S = sum_{k>=0} (-1)^k term(k)``.

    ``term`` must accept an integer ndarray. The error bound
    ``2 term(0) / (3 + sqrt 8)^n`` holds whenever the terms are moments of a
    positive measure on [0, 1], which is the case for every completely
    monotone sequence such as ``(k h + c)^-beta``.
    """
    n = max(4, math.ceil(math.log(2.0 / tol) / math.log(_CVZ_RATE)))
    if n > max_terms:
        raise ToleranceError(f"alternating series: tol={tol:g} needs {n} > {max_terms} terms")
    a = np.asarray(term(np.arange(n)), dtype=float)
    d = _CVZ_RATE**n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        s += c * a[k]
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return s / d, 2.0 * abs(a[0]) / _CVZ_RATE**n


def dirichlet_eta(beta, tol=1e-15):
    """Alternating zeta ``sum_{k>=1} (-1)^(k+1) k^-beta`` for ``beta > 0``."""
    if beta <= 0:
        raise DomainError("dirichlet_eta needs beta > 0")
    value, _ = alternating_sum(lambda k: (k + 1.0) ** (-beta), tol)
    return value


def _antiderivative_gap(y, x, gamma):
    # int_x^{x+y} u^(gamma-1) du, stable for y << x
    t = np.log1p(y / x)
    if gamma == 0.0:
        return t
    return x**gamma * np.expm1(gamma * t) / gamma


def _wsum(w, values):
    # elementwise product and pairwise summation; avoids BLAS so results do not depend on threading
    return float(np.sum(values * w))


def power_lattice_sum(offsets, weights, period, beta, tol=1e-14, n_direct=16):
    """``sum_{m>=0} sum_i w_i (y_i + m*period)^-beta`` for positive ``y_i``.

    Requires ``sum_i w_i == 0`` when ``beta <= 1``. The first ``n_direct``
    images are summed directly, the rest by Euler-Maclaurin with Bernoulli
    corrections up to ``B_12``; ``n_direct`` doubles until the last
    correction is below ``tol`` relative to the size of the head terms.
    """
    y = np.atleast_1d(np.asarray(offsets, dtype=float)).ravel()
    w = np.atleast_1d(np.asarray(weights, dtype=float)).ravel()
    if y.size == 0:
        return 0.0
    if np.any(y <= 0.0):
        raise DomainError("lattice offsets must be strictly positive")
    L = float(period)
    balanced = abs(w.sum()) <= 1e-12 * np.abs(w).sum()
    if not balanced and beta <= 1.0:
        raise DomainError("lattice sum diverges: weights do not cancel and beta <= 1")
    scale = _wsum(np.abs(w), y ** (-beta))
    gamma = 1.0 - beta
    while True:
        m = np.arange(n_direct, dtype=float)
        head = _wsum(w, (y[None, :] + m[:, None] * L) ** (-beta))
        X = n_direct * L
        u = y + X
        if balanced:
            integral = -_wsum(w, _antiderivative_gap(y, X, gamma)) / L
        else:
            integral = _wsum(w, u**gamma) / ((beta - 1.0) * L)
        tail = integral + 0.5 * _wsum(w, u ** (-beta))
        # derivative of order 2k-1 of phi(x) = sum w (y + x L)^-beta at x = n_direct
        coeff = -beta
        power = -beta - 1.0
        last = 0.0
        for k, b2k in enumerate(_BERNOULLI, start=1):
            order = 2 * k - 1
            deriv = coeff * L**order * _wsum(w, u**power)
            last = b2k / math.factorial(2 * k) * deriv
            tail -= last
            coeff *= power * (power - 1.0)
            power -= 2.0
        if abs(last) <= tol * max(scale, 1e-300) or n_direct >= 1 << 14:
            if abs(last) > tol * max(scale, 1e-300):
                raise ToleranceError("Euler-Maclaurin tail did not converge")
            return head + tail
        n_direct *= 2


def symmetric_lattice_sum(offsets, weights, period, shift, beta, tol=1e-14):
    """``sum_{m in Z} sum_i w_i (|c_i + m*period| + shift)^-beta``.

    Offsets are folded into ``[0, period)`` and the two half-lattices summed
    separately; a folded offset of zero needs ``shift > 0``.
    """
    c = np.mod(np.asarray(offsets, dtype=float).ravel(), period)
    w = np.asarray(weights, dtype=float).ravel()
    y = np.concatenate([c + shift, (period - c) + shift])
    return power_lattice_sum(y, np.concatenate([w, w]), period, beta, tol)
