"""Brute-force reference values of the layer potentials.

Off the curve the full kernel is integrated by a vectorized adaptive
Gauss-Kronrod (15/31) scheme, batched across targets and started with a
breakpoint at the parameter closest to the target. A second, dissimilar
rule (adaptive Gauss-Legendre n versus 2n) is available for self-checks.
On the curve the single layer is split into a smooth part and a pure
logarithm handled on geometrically graded panels.
"""
from dataclasses import dataclass

import numpy as np

from .boundary import secant_slope
from .kernels import kernel_full, kernel_split_parts
from .quadrature import composite_gauss_legendre, gauss_kronrod, gauss_legendre

_EPS = np.finfo(float).eps


@dataclass
class OracleResult:
    value: complex
    est_error: float
    subdivisions: int
    converged: bool = True


@dataclass
class OracleBatch:
    values: np.ndarray
    est_error: np.ndarray
    subdivisions: np.ndarray
    converged: np.ndarray

    def __getitem__(self, i):
        return OracleResult(complex(self.values[i]), float(self.est_error[i]),
                            int(self.subdivisions[i]), bool(self.converged[i]))


def _rule(kind):
    if kind == "gk":
        x, wk, gmask, wg = gauss_kronrod(15)
        wlow = np.zeros_like(wk)
        wlow[gmask] = wg
        return x, wk, wlow
    if kind == "gl":
        # 32-point Gauss-Legendre against 16 points on the two halves
        x, w = gauss_legendre(32)
        xh, wh = gauss_legendre(16)
        x2 = np.concatenate([0.5 * (xh - 1), 0.5 * (xh + 1)])
        nodes = np.concatenate([x, x2])
        whigh = np.concatenate([w, np.zeros_like(x2)])
        wlow = np.concatenate([np.zeros_like(x), 0.5 * wh, 0.5 * wh])
        return nodes, whigh, wlow
    raise ValueError(f"unknown rule {kind!r}")


def adaptive_batch(func, owner, a, b, n_targets, tol, rule="gk", max_sub=2000):
    """Integrate func(owner_idx, t) over the intervals [a, b] assigned to targets.

    ``func`` receives an index array (n,) and nodes (n, m) and returns values
    (n, m). Intervals are bisected until |high - low| <= tol * len / 2 or the
    roundoff level; each target may be split at most ``max_sub`` times.
    """
    x, wh, wl = _rule(rule)
    owner = np.asarray(owner, dtype=int)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    total = np.zeros(n_targets, dtype=complex)
    err = np.zeros(n_targets)
    nsub = np.zeros(n_targets, dtype=int)
    flag = np.ones(n_targets, bool)
    while owner.size:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        t = mid[:, None] + half[:, None] * x[None, :]
        f = func(owner, t)
        hi = (f @ wh) * half
        lo = (f @ wl) * half
        e = np.abs(hi - lo)
        mag = (np.abs(f) @ np.abs(wh)) * half
        ok = (e <= tol * half) | (e <= 50 * _EPS * mag) | (half < 1e-15)
        stuck = nsub[owner] >= max_sub
        flag[owner[stuck & ~ok]] = False
        done = ok | stuck
        np.add.at(total, owner[done], hi[done])
        np.add.at(err, owner[done], e[done])
        keep = ~done
        owner, a, b, mid = owner[keep], a[keep], b[keep], mid[keep]
        np.add.at(nsub, owner, 1)
        owner = np.concatenate([owner, owner])
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    return total, err, nsub, flag


def _initial_intervals(problem, ws, n_panels=8):
    tstar = problem.boundary.closest_parameters(ws)
    base = np.linspace(-1.0, 1.0, n_panels + 1)
    owner, a, b = [], [], []
    for i, ts in enumerate(np.atleast_1d(tstar)):
        br = np.unique(np.concatenate([base, [ts]]))
        owner.append(np.full(br.size - 1, i))
        a.append(br[:-1])
        b.append(br[1:])
    return np.concatenate(owner), np.concatenate(a), np.concatenate(b)


def reference_many(problem, ws, tol=1e-14, rule="gk", max_sub=2000):
    """Reference layer potential at each target (distance >= 1e-8 from the curve)."""
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    n = ws.size
    if problem.density.is_zero:
        z = np.zeros(n)
        return OracleBatch(z.astype(complex), z, z.astype(int), np.ones(n, bool))
    dist = problem.boundary.distance(ws)
    if np.any(np.atleast_1d(dist) < 1e-8):
        raise ValueError("targets closer than 1e-8 to the curve need the on-boundary oracle")
    owner, a, b = _initial_intervals(problem, ws)

    def func(idx, t):
        return kernel_full(problem, ws[idx][:, None], t) * problem.density(t)

    tot, err, nsub, ok = adaptive_batch(func, owner, a, b, n, tol, rule, max_sub)
    return OracleBatch(tot, err, nsub, ok)


def reference_eval(problem, w, tol=1e-14, rule="gk", max_sub=2000):
    return reference_many(problem, [w], tol, rule, max_sub)[0]


def _log_panels(length, n, ratio=0.25, floor=1e-20, max_width=0.125):
    """Panels on (0, length], graded geometrically toward 0 and at most max_width wide."""
    top = min(length, max_width)
    br = [top]
    while br[-1] > floor:
        br.append(br[-1] * ratio)
    br.append(0.0)
    br = br[::-1]
    if length > top:
        m = int(np.ceil((length - top) / max_width))
        br.extend(np.linspace(top, length, m + 1)[1:])
    return composite_gauss_legendre(np.array(br), n)


def reference_on_boundary_single(problem, t0, tol=1e-14):
    """Single-layer potential at the curve point z(t0), t0 in (-1, 1)."""
    if problem.is_double:
        raise ValueError("on-boundary reference is provided for the single layer only")
    t0 = float(t0)
    if not -1.0 < t0 < 1.0:
        raise ValueError("t0 must lie strictly inside (-1, 1)")
    if problem.density.is_zero:
        return OracleResult(0j, 0.0, 0)
    seg = problem.boundary
    w = complex(seg.z(t0))

    def smooth(idx, t):
        k1, k2, _ = kernel_split_parts(problem, w, t)
        m = secant_slope(seg, t, t0)
        return (k2 + k1 * np.log1p(m * m)) * problem.density(t)

    owner = np.zeros(2, dtype=int)
    tot, err, nsub, ok = adaptive_batch(smooth, owner, np.array([-1.0, t0]), np.array([t0, 1.0]),
                                        1, tol)
    # 2 ln|u| K1 psi on panels graded toward t0 from both sides
    log_part = []
    for n in (16, 32):
        acc = 0j
        for sgn, length in ((1.0, 1.0 - t0), (-1.0, 1.0 + t0)):
            u, wu = _log_panels(length, n)
            t = t0 + sgn * u
            k1, _, _ = kernel_split_parts(problem, w, t)
            acc += np.sum(wu * 2.0 * np.log(u) * k1 * problem.density(t))
        log_part.append(acc)
    value = complex(tot[0] + log_part[1])
    est = float(err[0] + abs(log_part[1] - log_part[0]))
    return OracleResult(value, est, int(nsub[0]), bool(ok[0]))
