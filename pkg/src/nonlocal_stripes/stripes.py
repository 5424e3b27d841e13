"""Stripe constructions and the L1 distance of a set from unions of stripes inside a cube."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .gridset import GridSet
from .onedim import PeriodicSet1D


@dataclass(frozen=True)
class Cube:
    """Grid-aligned cube of ``m`` cells per side whose first cell is ``lo`` (wraps periodically)."""

    lo: tuple
    m: int

    def indices(self, n):
        return [np.arange(l, l + self.m) % n for l in self.lo]

    def is_torus(self, n) -> bool:
        return self.m == n


def cube_at(S: GridSet, z, l) -> Cube:
    """Cube ``Q_l(z) = z + [-l/2, l/2)^d``; its faces must lie on cell faces."""
    s = S.cell
    m = l / s
    if abs(m - round(m)) > 1e-9 * max(1.0, m) or round(m) < 1:
        raise DomainError("cube side must be a positive multiple of the cell size")
    m = int(round(m))
    if m > S.n:
        raise DomainError("cube side exceeds the period")
    z = np.broadcast_to(np.asarray(z, dtype=float), (S.d,))
    lo = (z - l / 2.0) / s
    if np.any(np.abs(lo - np.round(lo)) > 1e-9 * max(1.0, S.n)):
        raise DomainError("cube is not aligned to the cell grid")
    return Cube(tuple(int(v) % S.n for v in np.round(lo)), m)


def cube_center(S: GridSet, cube: Cube) -> np.ndarray:
    return np.mod((np.asarray(cube.lo) + cube.m / 2.0) * S.cell, S.L)


def _restrict(S: GridSet, cube: Cube) -> np.ndarray:
    return S.occupancy[np.ix_(*cube.indices(S.n))]


@dataclass(frozen=True)
class StripePattern:
    """A set that varies only along ``axis`` with 1D profile ``profile``."""

    axis: int
    profile: PeriodicSet1D
    d: int

    def __post_init__(self):
        if not 0 <= self.axis < self.d:
            raise DomainError("axis out of range")

    @property
    def L(self) -> float:
        return self.profile.period


def rasterize_stripes(pattern: StripePattern, n: int, return_rounding=False):
    """Cell lattice whose every slice along ``pattern.axis`` equals the profile.

    Boundaries are snapped to the nearest cell face; the largest shift is
    returned alongside the set when ``return_rounding`` is true.
    """
    L = pattern.L
    s = L / n
    b = np.asarray(pattern.profile.boundaries)
    k = np.round(b / s).astype(int) % n
    rounding = float(np.max(np.abs(np.round(b / s) * s - b))) if b.size else 0.0
    if len(set(k.tolist())) != k.size:
        raise DomainError("two boundaries snap to the same cell face; refine the grid")
    prof = pattern.profile
    if b.size:
        snapped = PeriodicSet1D(L, tuple(sorted(k * s)), _snap_inside(prof, k))
        column = snapped.indicator((np.arange(n) + 0.5) * s)
    else:
        column = np.full(n, prof.inside_at_origin)
    shape = [1] * pattern.d
    shape[pattern.axis] = n
    occ = np.broadcast_to(column.reshape(shape), (n,) * pattern.d)
    out = GridSet(L, occ)
    return (out, rounding) if return_rounding else out


def _snap_inside(prof, k):
    order = np.argsort(k, kind="stable")
    first_sign = prof.signs()[order][0]
    return bool(first_sign > 0) if k[order][0] == 0 else bool(first_sign < 0)


def is_admissible(pattern: StripePattern, eta) -> bool:
    """All periodic gaps between profile boundaries are at least ``eta``; no boundary is admissible."""
    if not eta > 0:
        raise DomainError("eta must be positive")
    g = pattern.profile.gaps()
    return bool(g.size == 0 or np.min(g) >= eta * (1 - 1e-12))


def _column_counts(S: GridSet, cube: Cube, axis: int) -> np.ndarray:
    sub = _restrict(S, cube)
    other = tuple(a for a in range(S.d) if a != axis)
    return np.sum(sub, axis=other, dtype=np.int64) if other else sub.astype(np.int64)


def column_profile(S: GridSet, cube: Cube, axis: int) -> np.ndarray:
    """Occupied fraction of each cross-section of the cube orthogonal to ``axis``."""
    return _column_counts(S, cube, axis) / cube.m ** (S.d - 1)


def min_run(eta, cell) -> int:
    """Smallest run of cells whose length is at least ``eta``."""
    return max(1, math.ceil(eta / cell - 1e-9))


def _dp_open(cost1, cost0, k):
    # first and last runs unconstrained; inner runs need length >= k
    INF = np.iinfo(np.int64).max // 4
    # state[v][r][started], r in 1..k stored at index r-1
    cur = np.full((2, k, 2), INF, dtype=np.int64)
    cur[1, 0, 0] = cost1[0]
    cur[0, 0, 0] = cost0[0]
    for t in range(1, len(cost1)):
        nxt = np.full_like(cur, INF)
        for v, c in ((0, cost0[t]), (1, cost1[t])):
            stay = cur[v]
            nxt[v, 1:, :] = np.minimum(nxt[v, 1:, :], stay[:-1, :] + c)
            nxt[v, k - 1, :] = np.minimum(nxt[v, k - 1, :], stay[k - 1, :] + c)
            other = cur[1 - v]
            best = min(other[:, 0].min(), other[k - 1, 1])
            if best < INF:
                nxt[v, 0, 1] = min(nxt[v, 0, 1], best + c)
        cur = nxt
    return int(cur.min())


def _dp_cyclic(cost1, cost0, k):
    n = len(cost1)
    best = min(int(np.sum(cost1)), int(np.sum(cost0)))
    if 2 * k > n:
        return best
    INF = np.iinfo(np.int64).max // 4
    for rot in range(n):
        c1 = np.roll(cost1, -rot)
        c0 = np.roll(cost0, -rot)
        for v0 in (0, 1):
            # interface at position 0; all runs, including the one closing the loop, need >= k cells
            cur = np.full((2, k), INF, dtype=np.int64)
            cur[v0, 0] = c0[0] if v0 == 0 else c1[0]
            for t in range(1, n):
                nxt = np.full_like(cur, INF)
                for v, c in ((0, c0[t]), (1, c1[t])):
                    stay = cur[v]
                    nxt[v, 1:] = np.minimum(nxt[v, 1:], stay[:-1] + c)
                    nxt[v, k - 1] = min(nxt[v, k - 1], stay[k - 1] + c)
                    if cur[1 - v, k - 1] < INF:
                        nxt[v, 0] = min(nxt[v, 0], cur[1 - v, k - 1] + c)
                cur = nxt
            best = min(best, int(cur[1 - v0, k - 1]))
    return best


def _costs(S, cube, axis):
    counts = _column_counts(S, cube, axis)
    area = cube.m ** (S.d - 1)
    return area - counts, counts, area  # cost of F=1, cost of F=0


def distance_to_stripes_dir(S: GridSet, cube: Cube, axis: int, eta) -> float:
    """Smallest normalised L1 distance inside ``cube`` to a stripe set along ``axis`` with gaps >= eta.

    Interfaces of the competitor sit on cell faces. On a cube smaller than
    the torus the runs touching the cube faces are unconstrained.
    """
    if not eta > 0:
        raise DomainError("eta must be positive")
    cost1, cost0, area = _costs(S, cube, axis)
    k = min_run(eta, S.cell)
    if cube.is_torus(S.n):
        total = _dp_cyclic(cost1, cost0, k)
    else:
        total = _dp_open(cost1, cost0, k)
    return total / (area * cube.m)


def distance_by_enumeration(S: GridSet, cube: Cube, axis: int, eta) -> float:
    """Exhaustive counterpart of :func:`distance_to_stripes_dir` for at most 16 columns."""
    cost1, cost0, area = _costs(S, cube, axis)
    m = cube.m
    if m > 16:
        raise PreconditionError("enumeration limited to 16 columns")
    k = min_run(eta, S.cell)
    torus = cube.is_torus(S.n)
    best = None
    for bits in itertools.product((0, 1), repeat=m):
        if not _admissible_bits(bits, k, torus):
            continue
        total = sum(cost1[t] if b else cost0[t] for t, b in enumerate(bits))
        best = total if best is None else min(best, total)
    return best / (area * m)


def _admissible_bits(bits, k, torus):
    m = len(bits)
    cuts = [t for t in range(1, m) if bits[t] != bits[t - 1]]
    if torus:
        if bits[0] != bits[-1]:
            cuts.append(m)
        if not cuts:
            return True
        cuts.sort()
        runs = [b - a for a, b in zip(cuts, cuts[1:])] + [cuts[0] + m - cuts[-1]]
        return min(runs) >= k
    runs = [b - a for a, b in zip(cuts, cuts[1:])]
    return not runs or min(runs) >= k


def distance_to_stripes(S: GridSet, cube: Cube, eta):
    """``(min over axes of the directional distance, argmin axis)``; ties go to the lowest axis."""
    values = [distance_to_stripes_dir(S, cube, i, eta) for i in range(S.d)]
    i = int(np.argmin(values))
    return values[i], i


def _torus_gap(a, b, n):
    diff = np.abs(np.asarray(a) - np.asarray(b)) % n
    return np.minimum(diff, n - diff)


def lipschitz_probe(S: GridSet, eta, l, pairs) -> float:
    """Largest ``|D(Q_l(z)) - D(Q_l(z'))| * l / |z - z'|_inf`` over cube-corner index pairs."""
    m = int(round(l / S.cell))
    worst = 0.0
    for a, b in pairs:
        a, b = tuple(a), tuple(b)
        dist = float(np.max(_torus_gap(a, b, S.n))) * S.cell
        if dist == 0:
            continue
        da, _ = distance_to_stripes(S, Cube(a, m), eta)
        db, _ = distance_to_stripes(S, Cube(b, m), eta)
        worst = max(worst, abs(da - db) * l / dist)
    return worst


@dataclass(frozen=True)
class TwoDirectionResult:
    applicable: bool
    min_volume: float
    distances: tuple


def two_direction_probe(S: GridSet, cube: Cube, eta, delta) -> TwoDirectionResult:
    """``min(|Q minus E|, |E within Q|)`` when two directions are both delta-close to stripes."""
    dist = tuple(distance_to_stripes_dir(S, cube, i, eta) for i in range(S.d))
    close = sum(v <= delta for v in dist)
    sub = _restrict(S, cube)
    filled = int(np.count_nonzero(sub))
    vol = min(filled, sub.size - filled) * S.cell**S.d
    return TwoDirectionResult(close >= 2, vol if close >= 2 else math.nan, dist)
