"""Polynomial boundary segments z(t) = t + i s(t) and their complexified roots."""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

AXIS_TOL = 1e-12
_EPS = np.finfo(float).eps


class RootFindingError(ArithmeticError):
    """Simultaneous iteration did not converge."""

    def __init__(self, msg, best_residual):
        super().__init__(f"{msg} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass(frozen=True)
class BoundarySegment:
    """Curve t -> t + i s(t) on [-1, 1] with s(0) = s'(0) = 0.

    ``s_coeffs`` is ascending-degree; trailing zeros are dropped.
    """

    s_coeffs: tuple = ()

    def __post_init__(self):
        c = [float(v) for v in self.s_coeffs]
        if any(not np.isfinite(v) for v in c):
            raise ValueError("s_coeffs must be finite")
        if len(c) >= 1 and c[0] != 0.0 or len(c) >= 2 and c[1] != 0.0:
            raise ValueError("s(0) and s'(0) must vanish: first two coefficients must be 0")
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "s_coeffs", tuple(c))

    @classmethod
    def flat(cls):
        return cls(())

    @classmethod
    def from_config(cls, cfg):
        if "s_coeffs" not in cfg:
            raise ValueError("boundary config needs 's_coeffs'")
        return cls(tuple(cfg["s_coeffs"]))

    def to_config(self):
        return {"s_coeffs": [0.0, 0.0, *self.s_coeffs[2:]] if self.s_coeffs else [0.0, 0.0]}

    @property
    def degree(self):
        return max(len(self.s_coeffs) - 1, 0)

    @property
    def is_flat(self):
        return not self.s_coeffs

    @property
    def coeffs(self):
        return np.array(self.s_coeffs if self.s_coeffs else (0.0,))

    @property
    def dcoeffs(self):
        return npoly.polyder(self.coeffs)

    def s(self, t):
        return npoly.polyval(t, self.coeffs)

    def ds(self, t):
        return npoly.polyval(t, self.dcoeffs)

    def z(self, t):
        return t + 1j * self.s(t)

    def speed(self, t):
        """|z'(t)| = sqrt(1 + s'(t)**2)."""
        return np.hypot(1.0, self.ds(t))

    def closest_parameters(self, w, n_samples=2001):
        """Parameter t in [-1, 1] of the curve point nearest to each target."""
        w = np.asarray(w, dtype=complex)
        t = np.linspace(-1.0, 1.0, n_samples)
        zz = self.z(t)
        tt = t[np.argmin(np.abs(w[..., None] - zz), axis=-1)]
        d2 = npoly.polyder(self.coeffs, 2) if self.degree >= 2 else np.zeros(1)
        for _ in range(8):
            # Newton on d/dt |w - z(t)|^2
            dz = 1.0 + 1j * self.ds(tt)
            ddz = 1j * npoly.polyval(tt, d2)
            diff = self.z(tt) - w
            g = np.real(np.conj(diff) * dz)
            h = np.abs(dz) ** 2 + np.real(np.conj(diff) * ddz)
            step = np.where(h > 0, g / np.where(h > 0, h, 1.0), 0.0)
            tt = np.clip(tt - step, -1.0, 1.0)
        return tt

    def distance(self, w, n_samples=2001):
        """Distance from w (scalar or array) to the curve over t in [-1, 1]."""
        w = np.asarray(w, dtype=complex)
        t = np.linspace(-1.0, 1.0, n_samples)
        coarse = np.abs(w[..., None] - self.z(t)).min(axis=-1)
        tt = self.closest_parameters(w, n_samples)
        dist = np.minimum(np.abs(self.z(tt) - w), coarse)
        return dist if dist.ndim else float(dist)

    def closest_parameter(self, w, n_samples=2001):
        return float(self.closest_parameters(complex(w), n_samples))

    def root_polynomial(self, w):
        """Ascending coefficients of q(z) = i s(z) + z - w."""
        d = max(self.degree, 1)
        q = np.zeros(d + 1, dtype=complex)
        q[: len(self.s_coeffs)] += 1j * np.array(self.s_coeffs)
        q[0] -= w
        q[1] += 1.0
        return q


def curve_eval(seg, t):
    return seg.z(t)


def curve_deriv(seg, t):
    """(s'(t), |z'(t)|)."""
    return seg.ds(t), seg.speed(t)


@dataclass
class RootSet:
    upper: np.ndarray
    lower: np.ndarray
    on_axis: np.ndarray
    residual_bound: float
    lead: complex = 1.0

    @property
    def all(self):
        return np.concatenate([self.upper, self.lower, self.on_axis])

    def __len__(self):
        return self.upper.size + self.lower.size + self.on_axis.size


def aberth(coeffs, max_iter=500, tol=None):
    """Simultaneous Aberth-Ehrlich iteration for a batch of polynomials.

    ``coeffs`` has shape (B, d+1), ascending degree, nonzero leading term.
    Returns (roots (B, d), converged (B,), residuals (B,)).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    B, d1 = coeffs.shape
    d = d1 - 1
    lead = coeffs[:, -1:]
    a = coeffs / lead
    if d == 1:
        r = -a[:, :1]
        return r, np.ones(B, bool), np.zeros(B)
    # starting circle from the Fujiwara bound, around the root centroid
    ratios = np.abs(a[:, :-1]) ** (1.0 / (d - np.arange(d)))
    radius = 2.0 * ratios.max(axis=1, keepdims=True)
    radius[:, 0] = np.maximum(radius[:, 0], 1e-3)
    center = -a[:, d - 1 : d] / d
    ang = 2 * np.pi * np.arange(d) / d + 0.4
    z = center + 0.5 * radius * np.exp(1j * ang)
    da = a[:, 1:] * np.arange(1, d + 1)
    absa = np.abs(a)
    tol = 4 * _EPS if tol is None else tol
    active = np.ones(B, bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zi = z[idx]
        p = _horner(a[idx], zi)
        dp = _horner(da[idx], zi)
        # backward-error bound for the evaluation
        bound = _horner(absa[idx], np.abs(zi)).real * 8 * _EPS
        done = np.abs(p) <= bound
        ratio = np.where(done, 0.0, p / np.where(dp == 0, 1.0, dp))
        diff = zi[:, :, None] - zi[:, None, :]
        np.einsum("bii->bi", diff)[...] = np.inf
        s = (1.0 / diff).sum(axis=2)
        step = ratio / (1.0 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        z[idx] = zi - step
        small = np.abs(step) <= tol * np.maximum(1.0, np.abs(zi))
        finished = np.all(small | done, axis=1)
        active[idx[finished]] = False
    res = np.abs(_horner(coeffs, z)).max(axis=1)
    return z, ~active, res


def _horner(a, z):
    # a: (B, m), z: (B, k) -> sum_j a[:, j] z**j
    out = np.zeros(z.shape, dtype=complex) + a[:, -1:]
    for j in range(a.shape[1] - 2, -1, -1):
        out = out * z + a[:, j : j + 1]
    return out


def _newton_polish(coeffs, z, steps=2):
    dc = coeffs[:, 1:] * np.arange(1, coeffs.shape[1])
    for _ in range(steps):
        p = _horner(coeffs, z)
        dp = _horner(dc, z)
        ok = np.abs(dp) > 0
        zn = np.where(ok, z - p / np.where(ok, dp, 1.0), z)
        better = np.abs(_horner(coeffs, zn)) <= np.abs(p)
        z = np.where(better, zn, z)
    return z


def root_scale(seg, w):
    return max(1.0, abs(w)) * max(1.0, float(np.abs(seg.coeffs).sum()))


def roots_batch(seg, ws, max_iter=500):
    """All roots of i s(z) + z - w for each w in ``ws``; shape (len(ws), d)."""
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    if seg.is_flat:
        return ws[:, None].copy()
    base = seg.root_polynomial(0.0)
    coeffs = np.tile(base, (ws.size, 1))
    coeffs[:, 0] = -ws
    z, ok, res = aberth(coeffs, max_iter=max_iter)
    z = _newton_polish(coeffs, z)
    res = np.abs(_horner(coeffs, z))
    scale = np.maximum(1.0, np.abs(ws)) * max(1.0, float(np.abs(seg.coeffs).sum()))
    rel = (res / np.maximum(1.0, np.abs(z)) ** seg.degree).max(axis=1) / scale
    bad = (~ok) & (rel > 1e-12)
    if np.any(bad):
        raise RootFindingError("Aberth iteration did not converge", float(res[bad].max()))
    return z


def classify(roots, axis_tol=AXIS_TOL):
    im = roots.imag
    on = np.abs(im) <= axis_tol
    return (im > 0) & ~on, (im < 0) & ~on, on


def find_roots(seg, w, axis_tol=AXIS_TOL, max_iter=500):
    """Roots of w - (z + i s(z)) = 0, split by half-plane."""
    w = complex(w)
    r = roots_batch(seg, [w], max_iter=max_iter)[0]
    up, lo, on = classify(r, axis_tol)
    q = seg.root_polynomial(w)
    res = float(np.abs(npoly.polyval(r, q)).max()) if r.size else 0.0
    return RootSet(upper=r[up], lower=r[lo], on_axis=r[on], residual_bound=res,
                   lead=complex(q[-1]))


@dataclass
class Cluster:
    members: np.ndarray
    centroid: complex
    half: str = "upper"

    @property
    def size(self):
        return self.members.size


def _closure(points, tol):
    n = points.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def detect_clusters(roots, cluster_tol):
    """Group roots whose pairwise chains stay below ``cluster_tol``, per half-plane."""
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    out = []
    for half, pts in (("upper", roots.upper), ("lower", roots.lower), ("axis", roots.on_axis)):
        pts = np.asarray(pts, dtype=complex)
        for g in _closure(pts, cluster_tol):
            m = pts[g]
            out.append(Cluster(members=m, centroid=complex(m.mean()), half=half))
    return out


def secant_slope(seg, t, t0):
    """(s(t) - s(t0)) / (t - t0) without cancellation; equals s'(t0) at t = t0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(np.broadcast(t, t0).shape)
    for j, cj in enumerate(seg.s_coeffs):
        if j == 0 or cj == 0.0:
            continue
        # (t^j - t0^j)/(t - t0) = sum_a t^a t0^(j-1-a)
        acc = np.zeros_like(out)
        for a in range(j):
            acc = acc + t ** a * t0 ** (j - 1 - a)
        out = out + cj * acc
    return out
