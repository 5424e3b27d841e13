"""The 1-norm power-law kernel, its fibre integral and the derived constants.

The kernel is ``K(zeta) = (|zeta|_1 + tau^(1/beta))^-p`` on ``R^d`` with
``p = d + 2 - alpha``, ``beta = 1 - alpha`` and ``q = 3 - alpha``.
Integrating out the ``d - 1`` directions orthogonal to one axis leaves the
reduced kernel ``c1 (|z| + tau^(1/beta))^-q`` on the line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from ._series import alternating_sum, dirichlet_eta
from .errors import DomainError, PreconditionError, ToleranceError


@dataclass(frozen=True)
class KernelParams:
    d: int
    alpha: float
    tau: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.d!r}")
        if not self.alpha < 1.0:
            raise DomainError(f"alpha must be < 1, got {self.alpha!r}")
        if not self.tau >= 0.0 or not math.isfinite(self.tau):
            raise DomainError(f"tau must be finite and >= 0, got {self.tau!r}")

    @property
    def p(self) -> float:
        return self.d + 2.0 - self.alpha

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    @property
    def q(self) -> float:
        return 3.0 - self.alpha

    @property
    def tau_pow(self) -> float:
        """Regularisation length ``tau^(1/beta)``."""
        return self.tau ** (1.0 / self.beta) if self.tau > 0 else 0.0

    def with_tau(self, tau) -> "KernelParams":
        return KernelParams(self.d, self.alpha, tau)


def make_params(d, alpha, tau) -> KernelParams:
    """Validated constructor; rejects ``alpha >= 1``, ``tau < 0`` and ``d < 1``."""
    return KernelParams(int(d) if float(d).is_integer() else d, float(alpha), float(tau))


@dataclass(frozen=True)
class KernelConstants:
    """Closed-form constants attached to one ``(d, alpha)``.

    ``c3`` is the alternating sum ``2 - 2^(3-q) + sum_{k>=3} (-1)^(k+1) k^-(q-2)``.
    ``c_stripe = 4 eta(q-2)`` is the coefficient that actually appears in the
    stripe energy at ``tau = 0``: ``e(h) = -1/h + c1 c2 c_stripe h^-(q-1)``.
    """

    c1: float
    c2: float
    c3: float
    j_c: float
    c_stripe: float


def kernel_value(params: KernelParams, zeta):
    """``(|zeta|_1 + tau_pow)^-p``; ``zeta`` has trailing axis of length d (or is scalar for d=1)."""
    z = np.asarray(zeta, dtype=float)
    if params.d == 1 and (z.ndim == 0 or z.shape[-1] != 1):
        norm = np.abs(z)
    else:
        if z.shape[-1] != params.d:
            raise DomainError(f"zeta must have trailing dimension {params.d}")
        norm = np.abs(z).sum(axis=-1)
    base = norm + params.tau_pow
    if np.any(base == 0.0):
        raise DomainError("kernel is singular at the origin when tau = 0")
    out = base ** (-params.p)
    return float(out) if np.ndim(out) == 0 else out


def _c1_closed_form(d, p):
    if d == 1:
        # zero-dimensional fibre: reduced kernel equals the kernel itself
        return 1.0
    m = d - 1
    return math.exp(m * math.log(2.0) + gammaln(p - m) - gammaln(p))


def perpendicular_integral(d, p, z, shift, epsrel=1e-12):
    """Direct quadrature of ``int_{R^(d-1)} (|z| + |xi|_1 + shift)^-p dxi``.

    Independent of the closed form; used to validate it. Supports d <= 3.
    """
    z = abs(float(z))
    base = z + shift
    if d == 1:
        return base ** (-p)
    if d == 2:
        val, _ = integrate.quad(lambda x: (base + x) ** (-p), 0.0, np.inf, epsabs=0.0, epsrel=epsrel, limit=200)
        return 2.0 * val
    if d == 3:
        # orthant integral in polar-like split to keep quad well conditioned
        inner = lambda y, x: (base + x + y) ** (-p)
        val, _ = integrate.dblquad(inner, 0.0, np.inf, 0.0, np.inf, epsabs=0.0, epsrel=epsrel)
        return 4.0 * val
    raise DomainError("direct perpendicular quadrature supports d <= 3")


@lru_cache(maxsize=256)
def _constants(d, alpha, tol):
    params = KernelParams(d, alpha, 0.0)
    p, q, beta = params.p, params.q, params.beta
    c1 = _c1_closed_form(d, p)
    if 2 <= d <= 3:
        check = perpendicular_integral(d, p, 0.0, 1.0)
        if abs(check - c1) > 1e-8 * c1:
            raise ToleranceError(f"c1 closed form {c1!r} disagrees with quadrature {check!r}")
    c2 = 1.0 / ((q - 1.0) * (q - 2.0))
    tail3, _ = alternating_sum(lambda k: (k + 3.0) ** (-beta), tol)
    c3 = float(2.0 - 2.0 ** (3.0 - q) + tail3)
    c_stripe = float(4.0 * dirichlet_eta(beta, tol))
    j_c = 2.0 * c1 * _first_moment_quadrature(q, tol)
    if abs(j_c - 2.0 * c1 * c2) > 1e-9 * j_c:
        raise ToleranceError("critical constant quadrature failed to reach tolerance")
    return KernelConstants(c1=c1, c2=c2, c3=c3, j_c=j_c, c_stripe=c_stripe)


def _first_moment_quadrature(q, tol, radius=64.0):
    # int_0^inf z (z+1)^-q dz: adaptive panels on [0, R], exact power-law tail beyond
    edges = np.concatenate([[0.0], np.geomspace(0.25, radius, 10)])
    body = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, _ = integrate.quad(lambda z: z * (z + 1.0) ** (-q), lo, hi, epsabs=0.0, epsrel=max(tol, 1e-14))
        body += v
    u = radius + 1.0
    tail = u ** (2.0 - q) / (q - 2.0) - u ** (1.0 - q) / (q - 1.0)
    return body + tail


def constants(params: KernelParams, tol=1e-12) -> KernelConstants:
    """Constants for ``(params.d, params.alpha)``; ``tau`` does not enter."""
    return _constants(params.d, params.alpha, tol)


def reduced_kernel(params: KernelParams, z):
    """Kernel integrated over the hyperplane orthogonal to one axis: ``c1 (|z| + tau_pow)^-q``."""
    base = np.abs(np.asarray(z, dtype=float)) + params.tau_pow
    if np.any(base == 0.0):
        raise DomainError("reduced kernel is singular at z = 0 when tau = 0")
    out = constants(params).c1 * base ** (-params.q)
    return float(out) if np.ndim(out) == 0 else out


def tail_integral(params: KernelParams, c):
    """``int_c^inf (z - c)(z + tau_pow)^-q dz = c2 (c + tau_pow)^(2-q)``."""
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise DomainError("tail integral needs c >= 0")
    base = c + params.tau_pow
    if np.any(base == 0.0):
        raise DomainError("tail integral diverges at c = 0 when tau = 0")
    out = constants(params).c2 * base ** (2.0 - params.q)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class MonotonicityReport:
    order: int
    worst: tuple  # min over the grid of (-1)^n Delta^n K_hat, n = 0..order
    tol: float
    ok: bool


def complete_monotonicity_report(params: KernelParams, z_grid, order, tol=None) -> MonotonicityReport:
    """Sign pattern of forward differences of the reduced kernel on a uniform grid.

    A completely monotone function has ``(-1)^n Delta^n f >= 0`` for all n;
    violations are reported, not raised.
    """
    if params.tau <= 0:
        raise PreconditionError("complete monotonicity report needs tau > 0")
    if not 0 <= order <= 6:
        raise PreconditionError("order must be between 0 and 6")
    z = np.asarray(z_grid, dtype=float)
    if z.size > 2:
        steps = np.diff(z)
        if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps.mean():
            raise PreconditionError("z_grid must be increasing and uniform")
    values = reduced_kernel(params, z)
    if tol is None:
        tol = 1e-13 * float(np.max(values)) * 2.0**order
    worst = []
    for n in range(order + 1):
        diff = np.diff(values, n) if n else values
        worst.append(float(np.min((-1) ** n * diff)) if diff.size else math.inf)
    return MonotonicityReport(order=order, worst=tuple(worst), tol=tol, ok=all(w >= -tol for w in worst))
