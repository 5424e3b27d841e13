"""Energy of periodic cell sets in d <= 3 and its slice decomposition.

Cell-pair interactions come from a table ``W(delta)``: the kernel integrated
over one cell and every periodic image of the cell shifted by ``delta``.
Near images use tensor Gauss-Legendre quadrature, images outside a box of
``M`` periods are replaced by their continuum mean, and the table is then
adjusted so that summing out the transverse offsets reproduces the exact
1D cell interaction of the reduced kernel.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ._series import symmetric_lattice_sum
from .errors import DomainError, PreconditionError, ToleranceError
from .gridset import GridSet, per1_dir, profile_to_set
from .kernel import KernelParams, constants
from .onedim import r_terms_1d
from .stripes import Cube, cube_center, distance_to_stripes_dir

_MAX_N = {1: 4096, 2: 64, 3: 32}


@dataclass(frozen=True, eq=False)
class CellKernelTable:
    params: KernelParams
    L: float
    n: int
    images: int  # direct images per axis on each side
    weights: np.ndarray  # W over residues, shape (n,)*d
    line_weights: np.ndarray  # exact transverse marginal per residue along one axis
    tail_bound: float  # largest marginal discrepancy before adjustment

    @property
    def d(self):
        return self.params.d

    @property
    def cell(self):
        return self.L / self.n


def line_cell_weights(params: KernelParams, L, n, tol=1e-14) -> np.ndarray:
    """``s^(d-1) sum_m int_cell int_(cell + (j + n m) s) K_hat`` for ``j = 0..n-1``."""
    if params.tau <= 0:
        raise PreconditionError("cell interactions need tau > 0")
    k = constants(params)
    s = L / n
    a = params.tau_pow
    kappa = k.c1 * a ** (-params.beta - 1.0) / (params.beta + 1.0)
    out = np.empty(n)
    for j in range(n):
        offs = (j + np.array([-1.0, 0.0, 1.0])) * s
        val = k.c1 * k.c2 * symmetric_lattice_sum(offs, [1.0, -2.0, 1.0], L, a, params.beta, tol)
        if j == 0:
            val += 2.0 * s * kappa
        out[j] = val
    return out * s ** (params.d - 1)


def _half_rule(nodes, s, a, graded):
    x, w = np.polynomial.legendre.leggauss(nodes)
    if graded:
        levels = max(1, math.ceil(math.log(4.0 * s / a) / math.log(4.0)))
        inner = [s * 0.5 * 4.0 ** (-k) for k in range(levels, 0, -1)]
        edges = np.array([0.0] + inner + [s / 2] + [s - t for t in reversed(inner)] + [s])
    else:
        edges = np.array([0.0, s])
    lo, hi = edges[:-1], edges[1:]
    u = ((hi - lo)[:, None] * (x[None, :] + 1.0) / 2.0 + lo[:, None]).ravel()
    wt = ((hi - lo)[:, None] * w[None, :] / 2.0).ravel()
    return u, wt


def _axis_rule(nodes, s, a, graded):
    u, wt = _half_rule(nodes, s, a, graded)
    u = np.concatenate([-u[::-1], u])
    wt = np.concatenate([wt[::-1], wt])
    return u, wt * (s - np.abs(u))


def _tent_integrals(params, centers, nodes, s, graded):
    """``int_{[-s,s]^d} prod_k (s - |u_k|) K(c + u) du`` for each row ``c`` of ``centers``."""
    d, a, p = params.d, params.tau_pow, params.p
    u, wt = _axis_rule(nodes, s, a, graded)
    N = u.size
    chunk = max(1, 4_000_000 // N**d)
    out = np.empty(len(centers))
    for start in range(0, len(centers), chunk):
        c = centers[start : start + chunk]
        acc = np.full((len(c),) + (N,) * d, a)
        for ax in range(d):
            shape = [len(c)] + [1] * d
            shape[1 + ax] = N
            acc = acc + np.abs(c[:, ax, None] + u[None, :]).reshape(shape)
        vals = acc ** (-p)
        for ax in range(d):
            vals = np.sum(vals * wt, axis=-1)
        out[start : start + chunk] = vals
    return out


def _outside_box_mass(params, center, half):
    """``int K`` over the complement of the box ``center + [-half, half]^d``, exactly."""
    d, a, p = params.d, params.tau_pow, params.p
    coef = math.exp(gammaln(p - d) - gammaln(p))
    total = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=d):
        B = half + np.asarray(signs) * center
        for r in range(1, d + 1):
            for S in itertools.combinations(range(d), r):
                total += (-1.0) ** (r + 1) * coef * (a + B[list(S)].sum()) ** (d - p)
    return total


def build_kernel_table(params: KernelParams, L, n, R=None, tol=None) -> CellKernelTable:
    """Tabulate periodic cell-pair weights; images with ``|m|_inf <= ceil(R/L)`` are integrated directly.

    Defaults: ``R = 64 L`` and ``tol = 1e-8`` for d <= 2, ``R = 8 L`` and
    ``tol = 1e-6`` for d = 3. The mean-field remainder decays like ``(L/R)^4``.
    """
    d = params.d
    if params.tau <= 0:
        raise PreconditionError("the cell table needs tau > 0")
    if n < 1 or n > _MAX_N.get(d, 0):
        raise PreconditionError(f"n={n} outside the supported range for d={d}")
    if R is None:
        R = (64.0 if d < 3 else 8.0) * L
    if tol is None:
        tol = 1e-8 if d < 3 else 1e-6
    if R < L:
        raise PreconditionError("image radius R must be at least L")
    M = int(math.ceil(R / L - 1e-12))
    s = L / n
    line = line_cell_weights(params, L, n)
    if d == 1:
        return CellKernelTable(params, float(L), n, M, line.copy(), line, 0.0)

    a = params.tau_pow
    half = n // 2
    grid = np.arange(-M, M + 1)
    images = np.array(list(itertools.product(grid, repeat=d)), dtype=float)
    canon = {}
    for key in itertools.combinations_with_replacement(range(half + 1), d):
        c = np.array(key[::-1], dtype=float)
        centers = (c[None, :] + n * images) * s
        gap = np.sum(np.maximum(np.abs(centers) - s, 0.0), axis=1) + a
        touching = np.max(np.abs(centers), axis=1) <= s * (1 + 1e-12)
        total = 0.0
        classes = [
            (touching, 16, a < s),
            (~touching & (gap < 2 * s), 16, False),
            (~touching & (gap >= 2 * s) & (gap < 8 * s), 8, False),
            (~touching & (gap >= 8 * s), 4, False),
        ]
        for mask, nodes, graded in classes:
            if np.any(mask):
                total += float(np.sum(_tent_integrals(params, centers[mask], nodes, s, graded)))
        far = (s**d / n**d) * _outside_box_mass(params, c * s, L * (M + 0.5))
        canon[key] = total + far

    idx = np.minimum(np.arange(n), n - np.arange(n))
    W = np.empty((n,) * d)
    for pos in itertools.product(range(n), repeat=d):
        W[pos] = canon[tuple(sorted((int(idx[p]) for p in pos), reverse=False))]

    marginal = W.reshape(n, -1).sum(axis=1)
    defect = line - marginal
    tail = float(np.max(np.abs(defect)))
    if tail > tol:
        raise ToleranceError(f"cell table marginal defect {tail:.3e} exceeds tol {tol:.1e}; increase R")
    # spread the defect as a sum of one-axis terms so every marginal is exact
    mean_e = defect.sum() / (d * n ** (d - 1))
    e = (defect - (d - 1) * n ** (d - 2) * mean_e) / n ** (d - 1)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = n
        W = W + e.reshape(shape)
    W.setflags(write=False)
    return CellKernelTable(params, float(L), n, M, W, line, tail)


def _check_table(params, S: GridSet, table: CellKernelTable):
    if table.params != params or table.n != S.n or table.L != S.L or table.d != S.d:
        raise PreconditionError("kernel table was built for different parameters or grid")


def _pair_mismatch_counts(occ) -> np.ndarray:
    """``N(delta)`` = number of cells whose occupancy differs from the cell shifted by delta."""
    x = occ.astype(float)
    f = np.fft.rfftn(x)
    auto = np.fft.irfftn(f * np.conj(f), s=x.shape, axes=tuple(range(x.ndim)))
    auto = np.rint(auto).astype(np.int64)
    return 2 * (int(occ.sum()) - auto)


@dataclass
class LocalFields:
    """Per-axis cell fields: r and v sit on the lower face of their cell along the axis."""

    r: list
    v: list
    w: list


@dataclass
class EnergyBreakdown:
    per1_dir: np.ndarray
    kernel_perimeter: float
    exchange: float
    r_sum: np.ndarray
    v_sum: np.ndarray
    w_sum: np.ndarray
    total: float

    @property
    def decomposed(self) -> float:
        return float(np.sum(self.r_sum) + np.sum(self.v_sum) + np.sum(self.w_sum))


def first_moment(params: KernelParams) -> float:
    """``int |zeta_i| K(zeta) d zeta = 2 c1 c2 tau_pow^-beta``."""
    k = constants(params)
    return 2.0 * k.c1 * k.c2 * params.tau_pow ** (-params.beta)


def _w_field(S: GridSet, table: CellKernelTable, axis):
    d, n = S.d, S.n
    if d == 1:
        return np.zeros(S.occupancy.shape)
    occ = S.occupancy
    flat = occ.ravel()
    Wm = np.moveaxis(table.weights, axis, 0).reshape(n, -1)
    A = np.empty((flat.size, n))
    for j in range(n):
        A[:, j] = np.roll(occ, -j, axis=axis).ravel() != flat
    others = [ax for ax in range(d) if ax != axis]
    B = np.empty((flat.size, n ** (d - 1)))
    for col, shift in enumerate(itertools.product(range(n), repeat=d - 1)):
        B[:, col] = np.roll(occ, [-k for k in shift], axis=others).ravel() != flat
    vals = np.einsum("pj,jk,pk->p", A, Wm, B) / d
    return vals.reshape(occ.shape)


def local_fields(params: KernelParams, S: GridSet, table: CellKernelTable) -> LocalFields:
    """r, v and w of every slice boundary and every cell, integrated over the transverse cell face."""
    if params.tau <= 0:
        raise PreconditionError("decomposition needs tau > 0")
    _check_table(params, S, table)
    d, n, s = S.d, S.n, S.cell
    area = s ** (d - 1)
    rs, vs, ws = [], [], []
    for axis in range(d):
        w = _w_field(S, table, axis)
        occ_t = np.moveaxis(S.occupancy, axis, -1)
        w_t = np.moveaxis(w, axis, -1)
        r_t = np.zeros(occ_t.shape)
        v_t = np.zeros(occ_t.shape)
        cache = {}
        for index in itertools.product(range(n), repeat=d - 1):
            col = occ_t[index]
            cuts = np.flatnonzero(col != np.roll(col, 1))
            if cuts.size < 2:
                continue
            key = col.tobytes()
            if key not in cache:
                cache[key] = r_terms_1d(params, profile_to_set(col, S.L))
            r_t[index][cuts] = cache[key] * area
            wc = w_t[index]
            ring = np.concatenate([wc, wc])
            csum = np.concatenate([[0.0], np.cumsum(ring)])
            m = cuts.size
            for q, k in enumerate(cuts):
                prev = cuts[(q - 1) % m]
                nxt = cuts[(q + 1) % m]
                span = (nxt - prev) % n or n
                v_t[index][k] = 0.5 * (csum[prev + span] - csum[prev])
        rs.append(np.moveaxis(r_t, -1, axis))
        vs.append(np.moveaxis(v_t, -1, axis))
        ws.append(w)
    return LocalFields(rs, vs, ws)


def decomposition_terms(params: KernelParams, S: GridSet, table: CellKernelTable, fields=None):
    """Per-axis ``(r_sum, v_sum, w_sum)``, each normalised by ``1/L^d``."""
    f = fields if fields is not None else local_fields(params, S, table)
    vol = S.L**S.d
    r = np.array([x.sum() for x in f.r]) / vol
    v = np.array([x.sum() for x in f.v]) / vol
    w = np.array([x.sum() for x in f.w]) / vol
    return r, v, w


def functional_energy(params: KernelParams, S: GridSet, table: CellKernelTable, decompose=True) -> EnergyBreakdown:
    """Total energy per unit volume with its perimeter, kernel-perimeter and exchange parts."""
    _check_table(params, S, table)
    pd = np.array([per1_dir(S, i) for i in range(S.d)])
    kp = first_moment(params) * float(pd.sum())
    N = _pair_mismatch_counts(S.occupancy)
    exchange = float(np.sum(table.weights * N))
    total = (-float(pd.sum()) + kp - exchange) / S.L**S.d
    if decompose:
        r, v, w = decomposition_terms(params, S, table)
    else:
        r = v = w = np.full(S.d, math.nan)
    return EnergyBreakdown(pd, kp, exchange, r, v, w, total)


def lower_bound_check(params: KernelParams, S: GridSet, table: CellKernelTable):
    """``(lhs, rhs, lhs - rhs)`` with lhs the energy and rhs the summed decomposition."""
    br = functional_energy(params, S, table)
    rhs = br.decomposed
    return br.total, rhs, br.total - rhs


def _box_sum(field, m):
    out = field
    for ax in range(field.ndim):
        acc = np.zeros_like(out)
        for t in range(m):
            acc = acc + np.roll(out, -t, axis=ax)
        out = acc
    return out


@dataclass
class LocalizedEnergy:
    per_axis: np.ndarray
    total: float


def _cube_sizes(S, l):
    m = l / S.cell
    if abs(m - round(m)) > 1e-9 * max(1.0, m) or round(m) < 1:
        raise DomainError("cube side must be a positive multiple of the cell size")
    m = int(round(m))
    if m >= S.n:
        raise DomainError("cube side must be smaller than the period")
    return m


def localized_fbar(params: KernelParams, S: GridSet, cube: Cube, table: CellKernelTable, fields=None) -> LocalizedEnergy:
    """Energy density restricted to a grid-aligned cube (faces: lower closed, upper open)."""
    if cube.m >= S.n:
        raise DomainError("cube side must be smaller than the period")
    f = fields if fields is not None else local_fields(params, S, table)
    ix = np.ix_(*cube.indices(S.n))
    vol = (cube.m * S.cell) ** S.d
    per_axis = np.array([(f.r[i][ix].sum() + f.v[i][ix].sum() + f.w[i][ix].sum()) / vol for i in range(S.d)])
    return LocalizedEnergy(per_axis, float(per_axis.sum()))


def fbar_field(params: KernelParams, S: GridSet, l, table: CellKernelTable, fields=None) -> np.ndarray:
    """Localized energy for every grid-aligned cube of side ``l``, indexed by the cube's first cell."""
    m = _cube_sizes(S, l)
    f = fields if fields is not None else local_fields(params, S, table)
    dens = sum(f.r[i] + f.v[i] + f.w[i] for i in range(S.d))
    return _box_sum(dens, m) / (m * S.cell) ** S.d


def fbar_average(params: KernelParams, S: GridSet, l, table: CellKernelTable) -> float:
    """Mean of :func:`fbar_field` over all grid-aligned cube positions."""
    return float(np.mean(fbar_field(params, S, l, table)))


@dataclass
class Classification:
    labels: np.ndarray  # -1, 0 or axis+1, indexed by cube corner cell
    distances: np.ndarray  # directional distances, shape (d,) + labels.shape
    fbar: np.ndarray
    rigid: np.ndarray  # fbar > M, meaningful on label 0
    centers: np.ndarray


def _dilate(mask, radius_cells):
    out = mask.copy()
    if radius_cells <= 0:
        return out
    for ax in range(mask.ndim):
        acc = out.copy()
        for t in range(1, radius_cells + 1):
            acc |= np.roll(out, t, axis=ax) | np.roll(out, -t, axis=ax)
        out = acc
    return out


def classify_cubes(params: KernelParams, S: GridSet, l, eta, delta, M, rho, table=None) -> Classification:
    """Label every grid-aligned cube: -1 two-direction close, 0 far from stripes, i+1 close along axis i.

    Far cubes are dilated by ``rho`` and two-direction cubes by 1 (sup-norm,
    in length units); -1 takes precedence over 0, which takes precedence
    over the directional labels.
    """
    m = _cube_sizes(S, l)
    n, d = S.n, S.d
    shape = (n,) * d
    dist = np.empty((d,) + shape)
    for pos in itertools.product(range(n), repeat=d):
        cube = Cube(pos, m)
        for i in range(d):
            dist[(i,) + pos] = distance_to_stripes_dir(S, cube, i, eta)
    far = dist.min(axis=0) >= delta
    close = dist <= delta
    twice = close.sum(axis=0) >= 2
    A_m1 = _dilate(twice, int(math.floor(1.0 / S.cell + 1e-9)))
    A_0 = _dilate(far, int(math.floor(rho / S.cell + 1e-9)))
    labels = np.argmax(close, axis=0) + 1
    labels[A_0] = 0
    labels[A_m1] = -1
    if table is not None:
        fb = fbar_field(params, S, l, table)
    else:
        fb = np.full(shape, math.nan)
    centers = np.array([cube_center(S, Cube(pos, m)) for pos in itertools.product(range(n), repeat=d)])
    return Classification(labels, dist, fb, (fb > M) & (labels == 0), centers.reshape(shape + (d,)))


@dataclass
class StabilityReport:
    r: float
    v: float
    sum: float
    far_from_faces: bool
    other_directions_close: bool
    ok: bool


def stability_probe(params, S: GridSet, cube: Cube, axis, column, boundary_cell, table, eta0, eps, eta, tol=1e-9, fields=None) -> StabilityReport:
    """r + v at one slice boundary inside a cube, with the two local-stability hypotheses.

    ``column`` is the transverse cell index (d-1 ints) and the boundary sits
    at the lower face of ``boundary_cell`` along ``axis``. Values are per unit
    transverse area.
    """
    f = fields if fields is not None else local_fields(params, S, table)
    pos = list(column)
    pos.insert(axis, boundary_cell)
    pos = tuple(pos)
    area = S.cell ** (S.d - 1)
    r = float(f.r[axis][pos]) / area
    v = float(f.v[axis][pos]) / area
    if r == 0.0 and v == 0.0:
        raise DomainError("no slice boundary at the requested position")
    n, s = S.n, S.cell
    lo = cube.lo[axis]
    offset = (boundary_cell - lo) % n
    if offset >= cube.m:
        raise DomainError("boundary lies outside the cube")
    x = offset * s
    side = cube.m * s
    far = min(x, side - x) >= eta0
    l = cube.m * s
    thresh = eps**S.d / (16.0 * l**S.d)
    others = [distance_to_stripes_dir(S, cube, j, eta) for j in range(S.d) if j != axis]
    close = all(val <= thresh for val in others)
    total = r + v
    ok = total >= -tol if (far and close) else True
    return StabilityReport(r, v, total, far, close, ok)
