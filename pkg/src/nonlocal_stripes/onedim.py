"""One-dimensional periodic sets: energy, stripe series, optimal width and r-terms.

Every 1D interaction here is reduced to a lattice sum of the second
antiderivative of the reduced kernel, ``c1 c2 (|z| + tau_pow)^-beta``,
evaluated at signed boundary differences. No quadrature is involved.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._series import alternating_sum, power_lattice_sum
from .errors import BracketingError, DomainError, PreconditionError
from .kernel import KernelParams, constants


@dataclass(frozen=True)
class PeriodicSet1D:
    """An L-periodic subset of the line given by its boundary points in [0, L).

    ``inside_at_origin`` is the value of the indicator just to the right of 0,
    so with a boundary at 0 it says whether that boundary enters the set.
    """

    period: float
    boundaries: tuple = ()
    inside_at_origin: bool = False

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        L = float(self.period)
        if not L > 0:
            raise DomainError("period must be positive")
        if len(b) % 2:
            raise DomainError("a periodic set has an even number of boundary points")
        if b and (b[0] < 0 or b[-1] >= L):
            raise DomainError("boundary points must lie in [0, L)")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise DomainError("boundary points must be strictly increasing")

    @property
    def n_boundaries(self) -> int:
        return len(self.boundaries)

    def signs(self) -> np.ndarray:
        """+1 where the set is entered (left to right), -1 where it is left."""
        n = len(self.boundaries)
        if n == 0:
            return np.zeros(0)
        if self.boundaries[0] == 0.0:
            first = 1.0 if self.inside_at_origin else -1.0
        else:
            first = -1.0 if self.inside_at_origin else 1.0
        return first * (-1.0) ** np.arange(n)

    def gaps(self) -> np.ndarray:
        """Periodic gaps; gap k runs from boundary k to boundary k+1."""
        b = np.asarray(self.boundaries)
        if b.size == 0:
            return b
        return np.diff(np.append(b, b[0] + self.period))

    def measure(self) -> float:
        if not self.boundaries:
            return self.period if self.inside_at_origin else 0.0
        sig = self.signs()
        g = self.gaps()
        return float(np.sum(g[sig > 0]))

    def complement(self) -> "PeriodicSet1D":
        return PeriodicSet1D(self.period, self.boundaries, not self.inside_at_origin)

    def shifted(self, shift) -> "PeriodicSet1D":
        """Translate by ``shift`` modulo the period."""
        L = self.period
        if not self.boundaries:
            return self
        b = np.mod(np.asarray(self.boundaries) + shift, L)
        b[b >= L] = 0.0
        order = np.argsort(b, kind="stable")
        sig = self.signs()[order]
        b = b[order]
        inside = bool(sig[0] > 0) if b[0] == 0.0 else bool(sig[0] < 0)
        return PeriodicSet1D(L, tuple(b), inside)

    def indicator(self, x) -> np.ndarray:
        """Indicator evaluated away from boundary points."""
        x = np.mod(np.asarray(x, dtype=float), self.period)
        if not self.boundaries:
            return np.full(x.shape, self.inside_at_origin)
        b = np.asarray(self.boundaries)
        sig = self.signs()
        start = 1.0 if sig[0] < 0 else 0.0
        idx = np.searchsorted(b, x, side="right")
        states = np.concatenate([[start], (sig > 0).astype(float)])
        return states[idx].astype(bool)


@dataclass(frozen=True)
class StripeSpec:
    h: float
    nu: float = 0.0
    k: int = 1

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("stripe width must be positive")
        if not 0 <= self.nu < 2 * self.h:
            raise DomainError("phase must lie in [0, 2h)")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("number of periods must be a positive integer")


def make_stripes_1d(spec: StripeSpec) -> PeriodicSet1D:
    """Equal-gap stripes ``[nu + 2jh, nu + (2j+1)h]`` on a period of ``2kh``."""
    L = 2 * spec.k * spec.h
    raw = spec.nu + spec.h * np.arange(2 * spec.k)
    entering = np.arange(2 * spec.k) % 2 == 0
    b = np.mod(raw, L)
    order = np.argsort(b, kind="stable")
    b, entering = b[order], entering[order]
    inside = bool(entering[0]) if b[0] == 0.0 else bool(not entering[0])
    return PeriodicSet1D(L, tuple(b), inside)


def _folded(diff, L):
    # fold into (0, L]; coincident points map to the first nonzero image
    c = np.mod(diff, L)
    c[c <= 0.0] = L
    return c


def _pair_sum(params: KernelParams, S: PeriodicSet1D, tol):
    """``sum over ordered pairs and images with d > 0 of s_j s_k (d + tau_pow)^-beta``."""
    b = np.asarray(S.boundaries)
    sig = S.signs()
    L = S.period
    off = _folded(b[None, :] - b[:, None], L)
    w = sig[:, None] * sig[None, :]
    return power_lattice_sum(off.ravel() + params.tau_pow, w.ravel(), L, params.beta, tol)


def f1d_energy(params: KernelParams, S: PeriodicSet1D, tol=1e-14) -> float:
    """Per-period energy ``(1/L)[-Per + int K_hat(z)(Per |z| - int |chi(x) - chi(x+z)| dx) dz]``."""
    if not S.boundaries:
        return 0.0
    k = constants(params)
    P = len(S.boundaries)
    return (-P - 4.0 * k.c1 * k.c2 * _pair_sum(params, S, tol)) / S.period


def _stripe_series(params: KernelParams, h, tol):
    a = params.tau_pow
    s, _ = alternating_sum(lambda k: ((k + 1.0) * h + a) ** (-params.beta), tol)
    return s


def stripe_energy(params: KernelParams, h, tol=1e-15) -> float:
    """Energy per unit length of equal-gap stripes of width ``h``.

    ``e(h) = -1/h + (4 c1 c2 / h) sum_{k>=1} (-1)^(k+1) (k h + tau_pow)^-beta``;
    at ``tau = 0`` this is ``-1/h + c1 c2 c_stripe h^-(q-1)``.
    """
    h = float(h)
    if not h > 0:
        raise DomainError("stripe width must be positive")
    k = constants(params)
    if params.tau == 0:
        return float(-1.0 / h + k.c1 * k.c2 * k.c_stripe * h ** (1.0 - params.q))
    return float(-1.0 / h + 4.0 * k.c1 * k.c2 * _stripe_series(params, h, tol) / h)


def stripe_energy_slope(params: KernelParams, h, tol=1e-15) -> float:
    """Derivative of ``stripe_energy`` with respect to the width."""
    h = float(h)
    if not h > 0:
        raise DomainError("stripe width must be positive")
    k = constants(params)
    c = 4.0 * k.c1 * k.c2
    if params.tau == 0:
        return float(1.0 / h**2 - (params.q - 1.0) * c * 0.25 * k.c_stripe * h ** (-params.q))
    a, b = params.tau_pow, params.beta
    s0 = _stripe_series(params, h, tol)
    # k (k h + a)^(-b-1) = ((k h + a)^-b - a (k h + a)^(-b-1)) / h keeps every series completely monotone
    s1, _ = alternating_sum(lambda j: ((j + 1.0) * h + a) ** (-b - 1.0), tol)
    return float(1.0 / h**2 - c * s0 / h**2 - c * b * (s0 - a * s1) / h**2)


def minimize_width(params: KernelParams, bracket, xtol=1e-10):
    """Golden-section search on ``bracket = (lo, mid, hi)``, then a root polish of the slope.

    Golden section alone resolves the width only to about the square root of
    machine precision because the energy is flat at its minimum.
    """
    res = optimize.minimize_scalar(lambda h: stripe_energy(params, h), bracket=bracket, method="golden",
                                   options={"xtol": xtol})
    h = float(res.x)
    lo, hi = bracket[0], bracket[-1]
    slope = lambda x: stripe_energy_slope(params, x)
    if slope(lo) < 0 < slope(hi):
        h = float(optimize.brentq(slope, lo, hi, xtol=1e-15 * h, rtol=1e-15))
    return h, stripe_energy(params, h)


def optimal_width_closed_form(params: KernelParams):
    """``(h*, C*)`` at ``tau = 0`` from the stationarity condition of the stripe energy."""
    k = constants(params)
    q = params.q
    h = ((q - 1.0) * k.c1 * k.c2 * k.c_stripe) ** (1.0 / (q - 2.0))
    return h, -(q - 2.0) / ((q - 1.0) * h)


def optimal_width(params: KernelParams, alpha_max=0.95, n_scan=64, xtol=1e-10):
    """Minimize ``stripe_energy`` over the width.

    At ``tau = 0`` the closed form is returned. Otherwise a log-spaced scan
    over ``[h0/4, 4 h0]`` (``h0`` the ``tau = 0`` optimum) locates brackets,
    widening up to three times, and every interior local minimum of the scan
    is refined with ``minimize_width``. The lowest refined minimum wins; if
    the starts end at different widths a ``UserWarning`` lists them.
    """
    if params.alpha > alpha_max:
        raise PreconditionError(f"alpha={params.alpha} above the configured limit {alpha_max}")
    h0, c0 = optimal_width_closed_form(params)
    if params.tau == 0:
        return h0, c0
    lo, hi = h0 / 4.0, h0 * 4.0
    trace = []
    for _ in range(4):
        hs = np.geomspace(lo, hi, n_scan)
        es = np.array([stripe_energy(params, h) for h in hs])
        trace.append((lo, hi, hs, es))
        i = int(np.argmin(es))  # first occurrence: ties go to smaller h
        if 0 < i < n_scan - 1:
            break
        if i == 0:
            lo /= 4.0
        else:
            hi *= 4.0
    else:
        raise BracketingError("stripe energy has no interior minimum in the scanned range", trace)
    starts = [j for j in range(1, n_scan - 1) if es[j] <= es[j - 1] and es[j] <= es[j + 1]]
    found = [minimize_width(params, (hs[j - 1], hs[j], hs[j + 1]), xtol / hs[j]) for j in starts]
    best = min(found, key=lambda hc: (hc[1], hc[0]))
    distinct = sorted({round(h, 8) for h, _ in found})
    if len(distinct) > 1:
        warnings.warn(f"stripe energy has {len(distinct)} local minima at widths {distinct}; returning the lowest",
                      stacklevel=2)
    return best


def r_interval_sum(params: KernelParams, S: PeriodicSet1D, lo, hi, tol=1e-14) -> float:
    """Sum of r-terms over the boundary points in ``[lo, hi)``, counting periodic copies."""
    if not hi >= lo:
        raise DomainError("interval must satisfy lo <= hi")
    if len(S.boundaries) < 2:
        return 0.0
    r = r_terms_1d(params, S, tol)
    b = np.asarray(S.boundaries)
    L = S.period
    total = 0.0
    for m in range(math.floor((lo - b.max()) / L), math.ceil((hi - b.min()) / L) + 1):
        pts = b + m * L
        total += float(np.sum(r[(pts >= lo) & (pts < hi)]))
    return total


def _half_r(params: KernelParams, b, sig, L, i_s, i_prev, tol):
    # c1 c2 a^-beta minus the mixed integral over (s-, s) x (0, inf)
    tau_j = sig * sig[i_s]
    o1 = _folded(b - b[i_s], L)
    o2 = _folded(b - b[i_prev], L)
    off = np.concatenate([o1, o2]) + params.tau_pow
    w = np.concatenate([-tau_j, tau_j])
    return power_lattice_sum(off, w, L, params.beta, tol)


def r_term_1d(params: KernelParams, S: PeriodicSet1D, s, tol=1e-14) -> float:
    """Boundary penalty at ``s``: ``-1 + int |rho| K_hat`` minus the two mixed integrals."""
    n = len(S.boundaries)
    if n < 2:
        raise PreconditionError("r-term needs at least two boundary points")
    b = np.asarray(S.boundaries)
    matches = np.flatnonzero(np.isclose(b, s, rtol=0.0, atol=1e-12 * S.period))
    if matches.size != 1:
        raise DomainError(f"{s!r} is not a boundary point of the set")
    return float(_r_at(params, S, int(matches[0]), tol))


def _r_at(params, S, i, tol):
    k = constants(params)
    b = np.asarray(S.boundaries)
    sig = S.signs()
    L = S.period
    n = b.size
    left = _half_r(params, b, sig, L, i, (i - 1) % n, tol)
    rb = np.mod(L - b, L)
    right = _half_r(params, rb, -sig, L, i, (i + 1) % n, tol)
    return -1.0 + k.c1 * k.c2 * (left + right)


def r_terms_1d(params: KernelParams, S: PeriodicSet1D, tol=1e-14) -> np.ndarray:
    """r-term at every boundary point, in boundary order."""
    if len(S.boundaries) < 2:
        raise PreconditionError("r-term needs at least two boundary points")
    return np.array([_r_at(params, S, i, tol) for i in range(len(S.boundaries))])


def r_lower_bound(params: KernelParams, gap_minus, gap_plus) -> float:
    """``-1 + c1 c2 [min(gap+^-beta, 1/tau) + min(gap-^-beta, 1/tau)]``.

    A valid lower bound for the r-term only at ``tau = 0``; for ``tau > 0``
    use :func:`r_lower_bound_exact`.
    """
    if not (gap_minus > 0 and gap_plus > 0):
        raise DomainError("gaps must be positive")
    k = constants(params)
    cap = math.inf if params.tau == 0 else 1.0 / params.tau
    terms = [min(g ** (-params.beta), cap) for g in (gap_minus, gap_plus)]
    return -1.0 + k.c1 * k.c2 * sum(terms)


def r_lower_bound_exact(params: KernelParams, gap_minus, gap_plus) -> float:
    """``-1 + c1 c2 [(gap- + tau_pow)^-beta + (gap+ + tau_pow)^-beta]``, a valid lower bound for the r-term."""
    if not (gap_minus > 0 and gap_plus > 0):
        raise DomainError("gaps must be positive")
    k = constants(params)
    a = params.tau_pow
    return -1.0 + k.c1 * k.c2 * ((gap_minus + a) ** (-params.beta) + (gap_plus + a) ** (-params.beta))


def eta0_threshold(params: KernelParams) -> float:
    """``(c1 c2)^(1/beta)``, the gap below which ``r_lower_bound`` is positive.

    Guarantees a positive r-term only at ``tau = 0``; see :func:`eta0_threshold_exact`.
    """
    k = constants(params)
    cc = k.c1 * k.c2
    if not params.tau < cc:
        raise PreconditionError(f"need tau < c1 c2 = {cc}")
    return cc ** (1.0 / params.beta)


def eta0_threshold_exact(params: KernelParams) -> float:
    """``(c1 c2)^(1/beta) - tau_pow``, the gap below which ``r_lower_bound_exact`` is positive."""
    k = constants(params)
    g = (k.c1 * k.c2) ** (1.0 / params.beta) - params.tau_pow
    if not g > 0:
        raise PreconditionError("tau too large: no gap makes the exact bound positive")
    return g


@dataclass
class BruteForceResult:
    best: PeriodicSet1D
    energy: float
    trace: list = field(default_factory=list)  # (n_boundaries, energy, cell indices) per count


def brute_force_min_1d(params: KernelParams, L, grid_n, max_boundaries, budget=2_000_000):
    """Exhaustive minimum of ``f1d_energy`` over boundary sets on ``{j L / grid_n}``.

    Translations are factored out by putting a boundary at 0 that enters the
    set; the complement has equal energy so one orientation suffices. Ties
    go to fewer boundaries, then to the lexicographically smaller cell tuple.
    """
    if max_boundaries % 2:
        raise DomainError("max_boundaries must be even")
    if not (grid_n <= 64 or max_boundaries <= 8):
        raise PreconditionError("enumeration budget guard: need grid_n <= 64 or max_boundaries <= 8")
    total = sum(math.comb(grid_n - 1, m - 1) for m in range(2, max_boundaries + 1, 2))
    if total > budget:
        raise PreconditionError(f"{total} candidates exceed the budget of {budget}")
    step = L / grid_n
    empty = PeriodicSet1D(L, (), False)
    best = (0.0, 0, ())
    trace = [(0, 0.0, ())]
    for m in range(2, max_boundaries + 1, 2):
        if m > grid_n:
            break
        level = None
        for rest in itertools.combinations(range(1, grid_n), m - 1):
            cells = (0,) + rest
            S = PeriodicSet1D(L, tuple(c * step for c in cells), True)
            e = f1d_energy(params, S)
            if level is None or e < level[0] - 1e-12 * max(1.0, abs(e)):
                level = (e, cells)
        trace.append((m, level[0], level[1]))
        if level[0] < best[0] - 1e-12 * max(1.0, abs(level[0])):
            best = (level[0], m, level[1])
    energy, m, cells = best
    S = empty if m == 0 else PeriodicSet1D(L, tuple(c * step for c in cells), True)
    return BruteForceResult(S, energy, trace)
