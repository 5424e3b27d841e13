"""Independent reference implementations used only by the tests.

They share no summation code with the package: sums are truncated directly
and integrals go through scipy quadrature.
"""
import math

import numpy as np
from scipy import integrate


def c1_by_quadrature(d, p):
    """Integral of (1 + |y|_1)^-p over R^(d-1)."""
    if d == 1:
        return 1.0
    if d == 2:
        return 2 * integrate.quad(lambda y: (1 + y) ** (-p), 0, np.inf, epsabs=0, epsrel=1e-13)[0]
    inner = lambda y, x: (1 + x + y) ** (-p)
    return 4 * integrate.dblquad(inner, 0, np.inf, 0, np.inf, epsabs=0, epsrel=1e-12)[0]


def perpendicular_by_quadrature(d, p, z, a):
    """Integral of (|z| + |y|_1 + a)^-p over the orthogonal hyperplane, by brute-force quadrature."""
    base = abs(z) + a
    if d == 2:
        return 2 * integrate.quad(lambda y: (base + y) ** (-p), 0, np.inf, epsabs=0, epsrel=1e-13)[0]
    f = lambda y, x: (base + x + y) ** (-p)
    return 4 * integrate.dblquad(f, 0, np.inf, 0, np.inf, epsabs=0, epsrel=1e-10)[0]


def _averaged_limit(partial, rounds=8):
    # repeated averaging of consecutive partial sums (Euler transform of the tail)
    for _ in range(rounds):
        partial = 0.5 * (partial[1:] + partial[:-1])
    return float(partial[-1])


def eta_by_richardson(beta, terms=20_000):
    """Dirichlet eta from repeatedly averaged partial sums (slow but independent)."""
    k = np.arange(1, terms + 1, dtype=float)
    return _averaged_limit(np.cumsum((-1.0) ** (k + 1) * k ** (-beta)))


def stripe_energy_direct(c1, c2, beta, a, h, terms=20_000):
    """-1/h + 4 c1 c2 / h * sum (-1)^(k+1) (k h + a)^-beta with the same averaging."""
    k = np.arange(1, terms + 1, dtype=float)
    s = _averaged_limit(np.cumsum((-1.0) ** (k + 1) * (k * h + a) ** (-beta)))
    return -1.0 / h + 4 * c1 * c2 * s / h


def r_term_by_quadrature(c1, c2, q, beta, a, S, i, images=4000):
    """Boundary term at boundary ``i`` from its defining double integrals.

    ``-1 + 2 c1 c2 a^-beta`` minus the interaction of the gap before the point
    with everything after it, and likewise mirrored; the inner integrals are
    piecewise closed forms over the set's intervals, the outer ones use quad.
    """
    b = np.asarray(S.boundaries)
    L, n = S.period, b.size
    sig = S.signs()
    s = b[i]
    s_prev = b[i - 1] if i > 0 else b[-1] - L
    s_next = b[i + 1] if i + 1 < n else b[0] + L
    fwd = np.concatenate([b + m * L for m in range(images)])
    fsig = np.tile(sig, images)
    keep = fwd >= s - 1e-12
    fwd, jump_f = fwd[keep], np.cumsum(fsig[keep])
    bwd = np.concatenate([b - m * L for m in range(images)])
    bsig = np.tile(sig, images)
    keep = bwd <= s + 1e-12
    order = np.argsort(-bwd[keep])
    bwd, jump_b = bwd[keep][order], -np.cumsum(bsig[keep][order])

    def ahead(u):
        F = lambda x: c1 * (x - u + a) ** (1 - q) / (q - 1)
        return float(np.sum(jump_f * (F(fwd) - np.append(F(fwd[1:]), 0.0))))

    def behind(u):
        G = lambda x: c1 * (u - x + a) ** (1 - q) / (q - 1)
        return float(np.sum(jump_b * (G(bwd) - np.append(G(bwd[1:]), 0.0))))

    t1 = integrate.quad(ahead, s_prev, s, epsabs=1e-13, limit=200)[0]
    t2 = integrate.quad(behind, s, s_next, epsabs=1e-13, limit=200)[0]
    return -1 + 2 * c1 * c2 * a ** (-beta) - sig[i] * t1 + sig[i] * t2


def r_term_monte_carlo(c1, c2, q, beta, a, S, i, samples=20_000, seed=0):
    """Same quantity with the outer integrals replaced by Monte-Carlo means; returns (value, stderr)."""
    rng = np.random.default_rng(seed)
    b = np.asarray(S.boundaries)
    L, n = S.period, b.size
    s = b[i]
    s_prev = b[i - 1] if i > 0 else b[-1] - L
    s_next = b[i + 1] if i + 1 < n else b[0] + L
    sig = S.signs()
    images = 400
    fwd = np.concatenate([b + m * L for m in range(images)])
    fs = np.tile(sig, images)
    keep = fwd >= s - 1e-12
    fwd, jf = fwd[keep], np.cumsum(fs[keep])
    bwd = np.concatenate([b - m * L for m in range(images)])
    bs = np.tile(sig, images)
    keep = bwd <= s + 1e-12
    order = np.argsort(-bwd[keep])
    bwd, jb = bwd[keep][order], -np.cumsum(bs[keep][order])
    u1 = rng.uniform(s_prev, s, samples)
    u2 = rng.uniform(s, s_next, samples)
    vals1 = np.empty(samples)
    vals2 = np.empty(samples)
    for k in range(samples):
        F = c1 * (fwd - u1[k] + a) ** (1 - q) / (q - 1)
        vals1[k] = np.sum(jf * (F - np.append(F[1:], 0.0)))
        G = c1 * (u2[k] - bwd + a) ** (1 - q) / (q - 1)
        vals2[k] = np.sum(jb * (G - np.append(G[1:], 0.0)))
    t1 = (s - s_prev) * vals1.mean()
    t2 = (s_next - s) * vals2.mean()
    se = math.hypot((s - s_prev) * vals1.std() / math.sqrt(samples), (s_next - s) * vals2.std() / math.sqrt(samples))
    return -1 + 2 * c1 * c2 * a ** (-beta) - sig[i] * t1 + sig[i] * t2, se


def f1d_by_pairs(c1, c2, beta, a, S, images=4000):
    """(1/L)(-P - 4 c1 c2 sum_{j,k} sigma_j sigma_k sum_{m>=0} (off_jk + m L + a)^-beta).

    ``off_jk`` is the offset from boundary j forward to boundary k in (0, L].
    The sum over m is truncated and the remainder replaced by the midpoint
    integral, which is exact enough once the truncation point is large.
    """
    b = np.asarray(S.boundaries)
    if b.size == 0:
        return 0.0
    L = S.period
    sig = S.signs()
    offs, wts = [], []
    for j in range(b.size):
        for k in range(b.size):
            off = (b[k] - b[j]) % L
            offs.append(L if off == 0.0 else off)
            wts.append(sig[j] * sig[k])
    offs, wts = np.array(offs), np.array(wts)
    m = np.arange(images, dtype=float)
    head = float(np.sum(wts[:, None] * (offs[:, None] + m * L + a) ** (-beta)))
    x = offs + (images - 0.5) * L + a
    g = 1.0 - beta
    # weights cancel, so (x^g - 1)/g may replace x^g/g; expm1 keeps it stable as beta -> 1
    tail = -float(np.sum(wts * (np.log(x) if g == 0 else np.expm1(g * np.log(x)) / g))) / L
    return (-b.size - 4 * c1 * c2 * (head + tail)) / L


def line_weight_by_quadrature(c1, q, a, s, n, j, d, near=40, far=200_000):
    """s^(d-1) sum_m int_cell int_(cell + (j + n m) s) c1 (|z| + a)^-q, by tent quadrature and a direct far sum."""
    L = n * s
    K = lambda z: c1 * (np.abs(z) + a) ** (-q)
    total = 0.0
    for m in range(-near, near + 1):
        x = (j + n * m) * s
        f = lambda xi: (s - abs(xi)) * K(xi + x)
        total += integrate.quad(f, -s, 0, epsabs=1e-15, epsrel=1e-13)[0]
        total += integrate.quad(f, 0, s, epsabs=1e-15, epsrel=1e-13)[0]
    # far images: 5-point Gauss on each half of the tent, then the integral of the remainder
    gx, gw = np.polynomial.legendre.leggauss(5)
    for sign in (1, -1):
        m = np.arange(near + 1, far + 1, dtype=float) * sign
        centers = (j + n * m) * s
        acc = np.zeros_like(centers)
        for lo in (-s, 0.0):
            xi = lo + 0.5 * s * (gx + 1)
            acc += 0.5 * s * np.sum(gw[:, None] * (s - np.abs(xi[:, None])) * K(xi[:, None] + centers), axis=0)
        total += float(np.sum(acc))
        edge = abs(j * s + sign * (far + 0.5) * L) + a
        total += s * s * c1 * edge ** (1 - q) / ((q - 1) * L)
    return total * s ** (d - 1)
