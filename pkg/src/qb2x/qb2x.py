"""Quadrature by two expansions: complex Taylor part plus plane-wave residues.

For a target w the layer potential is reduced, after the log split and an
integration by parts, to a boundary term, a smooth Gauss-Legendre integral
and canonical Cauchy-type integrals

    I(g; w) = int_{-1}^{1} g(t) / (w - t - i s(t)) dt,   g(t) = sum_p g_p e^{i p pi t/2}.

Each I is continued into the complex plane: the residues at the roots of
w = z + i s(z) give the plane-wave part, and the remaining integrals over
the real tails (curved) or unit semicircles (flat) are expanded in powers
of (w - c) with target-independent tables.
"""
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import AXIS_TOL, BoundarySegment, RootSet, classify, roots_batch
from .fourext import (ExtensionOperator, FourierCoeffs, antiderivative_array,
                      build_extension_operator, conjugate_array)
from .kernels import LayerProblem, kernel_split_parts, rho_samples
from .quadrature import composite_gauss_legendre, gauss_legendre

AUTO, UPPER, LOWER = "auto", "upper_limit", "lower_limit"
DEFAULT_BOX = (-1 / 3, 1 / 3, -1 / 3, 1 / 3)
_TAIL_NODES = 20


class AmbiguousSideError(ValueError):
    """A root lies on the real axis and no side was requested."""


class InvalidClusterError(ValueError):
    """A non-member root sits inside the cluster tolerance."""


# ---------------------------------------------------------------- tables


def _tail_polynomial(seg, c):
    q = np.zeros(max(seg.degree, 1) + 1, dtype=complex)
    q[: len(seg.s_coeffs)] += 1j * np.array(seg.s_coeffs)
    q[0] -= c
    q[1] += 1.0
    return q


def _power_sums(inv, weights, n_terms):
    """sum_j weights_j inv_j^(n+1) for n = 0..n_terms-1; weights/inv share shape (..., m)."""
    out = np.empty(inv.shape[:-1] + (n_terms,), dtype=complex)
    v = weights * inv
    for n in range(n_terms):
        out[..., n] = v.sum(axis=-1)
        v = v * inv
    return out


def build_tail_table(seg, c, P, N, tol=1e-14):
    """T[p + P, n] = (int_1^inf + int_-inf^-1) e^{i p pi z/2} / (z + i s(z) - c)^(n+1) dz.

    p = 0 uses z = +-1/u with panels graded geometrically toward u = 0; for
    p != 0 the tails are cut at +-Z beyond all roots of z + i s(z) = c and
    the rest is deformed onto vertical rays where the exponential decays.
    """
    if seg.is_flat or seg.degree < 2:
        raise ValueError("tail tables need a curved boundary of degree >= 2")
    c = complex(c)
    q = _tail_polynomial(seg, c)
    d = q.size - 1
    npoly = np.polynomial.polynomial
    roots = roots_batch(seg, [c])[0]
    z_right = max(1.0, 1.0 + float(roots.real.max()))
    z_left = max(1.0, 1.0 - float(roots.real.min()))
    table = np.zeros((2 * P + 1, N + 1), dtype=complex)

    # p = 0: u^{d(n+1)-2} / D(u)^{n+1},  D(u) = u^d q(+-1/u)
    breaks = np.concatenate([[0.0], 2.0 ** -np.arange(60, -1, -1)])
    u, wu = composite_gauss_legendre(breaks, _TAIL_NODES)
    for sign in (1.0, -1.0):
        # the coefficient of u^(d-j) is q_j sign^j
        D = npoly.polyval(u, (q * sign ** np.arange(d + 1))[::-1])
        ratio = u ** d / D
        v = wu * u ** (d - 2) / D
        for n in range(N + 1):
            table[P, n] += v.sum()
            v = v * ratio
    if P == 0:
        return table

    # p != 0: real pieces [1, Z_R] and [-Z_L, -1] shared by all p
    p = np.arange(-P, P + 1)
    width = min(0.1, 4.0 / P)
    pieces = []
    for a, b in ((1.0, z_right), (-z_left, -1.0)):
        if b > a:
            n_pan = max(1, int(math.ceil((b - a) / width)))
            pieces.append(composite_gauss_legendre(np.linspace(a, b, n_pan + 1), _TAIL_NODES))
    if pieces:
        x = np.concatenate([pc[0] for pc in pieces])
        wx = np.concatenate([pc[1] for pc in pieces])
        E = np.exp(0.5j * np.pi * np.outer(p, x))
        inv = 1.0 / npoly.polyval(x, q)
        V = np.empty((x.size, N + 1), dtype=complex)
        v = wx * inv
        for n in range(N + 1):
            V[:, n] = v
            v = v * inv
        real_part = E @ V
        real_part[P] = 0.0
        table += real_part

    # vertical rays, parametrized by tau = |p| pi y / 2 in [0, 40]
    for pp in range(1, P + 1):
        y_max = 80.0 / (pp * np.pi)
        n_pan = max(4, int(math.ceil(y_max / 0.25)))
        y, wy = composite_gauss_legendre(np.linspace(0.0, y_max, n_pan + 1), _TAIL_NODES)
        for sgn in (1, -1):
            pv = sgn * pp
            # right ray Z_R + sgn*i*y with factor sgn*i, left ray -Z_L + sgn*i*y with factor -sgn*i
            zr = z_right + sgn * 1j * y
            zl = -z_left + sgn * 1j * y
            fr = np.exp(0.5j * np.pi * pv * zr) * wy * (sgn * 1j)
            fl = np.exp(0.5j * np.pi * pv * zl) * wy * (-sgn * 1j)
            table[pv + P] += _power_sums(1.0 / npoly.polyval(zr, q), fr, N + 1)
            table[pv + P] += _power_sums(1.0 / npoly.polyval(zl, q), fl, N + 1)
    return table


def build_flat_arc_table(c, P, N, tol=1e-14):
    """Integrals of e^{i p pi z/2}/(z - c)^(n+1) over the unit semicircles.

    Both arcs run from +1 to -1: the upper one through i, the lower one
    through -i. Returns (upper, lower), each indexed [p + P, n].
    """
    c = complex(c)
    n_pan = max(8, int(math.ceil(P / 2)))
    th, wt = composite_gauss_legendre(np.linspace(0.0, np.pi, n_pan + 1), _TAIL_NODES)
    p = np.arange(-P, P + 1)
    out = []
    for sgn in (1, -1):
        z = np.exp(sgn * 1j * th)
        dz = sgn * 1j * z * wt
        inv = 1.0 / (z - c)
        E = np.exp(0.5j * np.pi * np.outer(p, z))
        V = np.empty((z.size, N + 1), dtype=complex)
        v = dz * inv
        for n in range(N + 1):
            V[:, n] = v
            v = v * inv
        out.append(E @ V)
    return out[0], out[1]


def combined_flat_table(upper, lower):
    P = (upper.shape[0] - 1) // 2
    table = lower.copy()
    table[P:] = upper[P:]
    return table


def table_cache_key(seg, c, P, N, tol):
    blob = json.dumps({"s": list(seg.s_coeffs), "c": [complex(c).real, complex(c).imag],
                       "P": P, "N": N, "tol": tol}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:20]


# ---------------------------------------------------------------- clusters


def complete_homogeneous(deltas, m_terms):
    """h_0..h_{m_terms-1} of the given values (coefficients of prod 1/(1 - d x))."""
    h = np.zeros(m_terms, dtype=complex)
    h[0] = 1.0
    for dv in np.asarray(deltas, dtype=complex):
        # multiply the series by 1/(1 - dv x)
        for j in range(1, m_terms):
            h[j] += dv * h[j - 1]
    return h


def _phi_taylor(center, others, p, order):
    """Taylor coefficients (with 1/m!) at ``center`` of e^{i p pi z/2}/prod(z - r_l)."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    a = 0.5j * np.pi * p
    m = np.arange(order + 1)
    # exponential part: e^{a center} a^m / m!
    ex = np.empty((p.size, order + 1), dtype=complex)
    ex[:, 0] = np.exp(a * center)
    for j in range(1, order + 1):
        ex[:, j] = ex[:, j - 1] * a / j
    rat = np.zeros(order + 1, dtype=complex)
    rat[0] = 1.0
    for r in np.asarray(others, dtype=complex):
        # 1/(center - r + u) = sum (-1)^m u^m / (center - r)^(m+1)
        g = (-1.0) ** m / (center - r) ** (m + 1)
        rat = np.convolve(rat, g)[: order + 1]
    out = np.empty((p.size, order + 1), dtype=complex)
    for i in range(p.size):
        out[i] = np.convolve(ex[i], rat)[: order + 1]
    return out


def cluster_symmetric_h(poly, center, others, q, n_terms):
    """h_0..h_{n_terms-1} of the cluster offsets, from the polynomial itself.

    The cluster factor prod(u - d_i) is the Taylor series of poly(center + u)
    divided by lead * prod_others(center + u - r_l); its coefficients are the
    signed elementary symmetric polynomials e_k, accurate to roundoff even
    when the roots themselves are only known to sqrt(eps) (double roots).
    h_j then follows from 1 / sum_k (-1)^k e_k x^k.
    """
    poly = np.asarray(poly, dtype=complex)
    d = poly.size - 1
    # Taylor coefficients of poly at center
    Q = np.zeros(d + 1, dtype=complex)
    for k in range(d + 1):
        j = np.arange(k, d + 1)
        binom = np.array([math.comb(int(jj), k) for jj in j], dtype=float)
        Q[k] = np.sum(binom * poly[k:] * center ** (j - k))
    m = np.arange(q + 1)
    rat = np.zeros(q + 1, dtype=complex)
    rat[0] = 1.0 / poly[-1]
    for r in np.asarray(others, dtype=complex):
        rat = np.convolve(rat, (-1.0) ** m / (center - r) ** (m + 1))[: q + 1]
    c = np.convolve(Q, rat)[: q + 1]
    e = np.array([(-1.0) ** k * c[q - k] / c[q] for k in range(q + 1)])
    h = np.zeros(n_terms, dtype=complex)
    h[0] = 1.0
    for j in range(1, n_terms):
        ks = np.arange(1, min(j, q) + 1)
        h[j] = np.sum((-1.0) ** (ks + 1) * e[ks] * h[j - ks])
    return h


def stable_cluster_residue(cluster, others, lead, p, M=None, cluster_tol=1e-3, max_terms=60,
                           poly=None):
    """Sum of residues of e^{i p pi z/2}/(lead prod(z - r_i)) over a root cluster.

    The cluster roots r_i = r_c + d_i are expanded about their centroid r_c:
    the result is sum_j h_j(d) phi_{q-1+j} / lead, with h_j the complete
    homogeneous symmetric polynomials and phi_m the Taylor coefficients of
    e^{i p pi z/2}/prod_others(z - r_l) at r_c. ``M`` fixes the number of
    terms; by default terms are added until two in a row are below 1e-17 of
    the sum (at most ``max_terms``). ``p`` may be an array. If ``poly`` (the
    ascending coefficients of lead * prod(z - r)) is given, h_j is formed
    from it rather than from the computed roots.
    """
    cl = np.asarray(cluster, dtype=complex)
    others = np.asarray(others, dtype=complex)
    q = cl.size
    if q < 1:
        raise ValueError("empty cluster")
    rc = complex(cl.mean())
    if others.size and np.min(np.abs(others - rc)) < cluster_tol:
        raise InvalidClusterError("a non-member root lies within cluster_tol of the centroid")
    scalar = np.ndim(p) == 0
    n_terms = max_terms if M is None else M
    if M is not None and M < max(q - 1, 1):
        raise ValueError("M must be at least q - 1")
    if poly is None:
        h = complete_homogeneous(cl - rc, n_terms)
    else:
        h = cluster_symmetric_h(poly, rc, others, q, n_terms)
    phi = _phi_taylor(rc, others, p, q - 1 + n_terms - 1)
    terms = h[None, :] * phi[:, q - 1 : q - 1 + n_terms]
    if M is None:
        acc = np.cumsum(terms, axis=1)
        mag = np.abs(terms)
        ok = mag <= 1e-17 * np.maximum(np.abs(acc), 1e-300)
        # two negligible terms in a row: odd h_j vanish for symmetric clusters
        ok2 = ok[:, :-1] & ok[:, 1:]
        stop = np.where(ok2.any(axis=1), ok2.argmax(axis=1) + 1, n_terms - 1)
        out = acc[np.arange(acc.shape[0]), stop]
    else:
        out = terms.sum(axis=1)
    out = out / lead
    return complex(out[0]) if scalar else out


def naive_cluster_residue(cluster, others, lead, p):
    """Same quantity as ``stable_cluster_residue`` from per-root residues."""
    cl = np.asarray(cluster, dtype=complex)
    allr = np.concatenate([cl, np.asarray(others, dtype=complex)])
    tot = 0j
    for i, r in enumerate(cl):
        den = lead
        for j, s in enumerate(allr):
            if j != i:
                den = den * (r - s)
        tot = tot + np.exp(0.5j * np.pi * np.asarray(p) * r) / den
    return tot


# ---------------------------------------------------------------- context


@dataclass(frozen=True, eq=False)
class QB2XContext:
    problem: LayerProblem
    P: int
    N: int
    center: complex
    box: tuple
    table: np.ndarray
    op: ExtensionOperator
    quad_nodes: np.ndarray
    quad_weights: np.ndarray
    axis_tol: float = AXIS_TOL
    cluster_tol: float = 0.1
    arc_tables: tuple = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_flat(self):
        return self.problem.boundary.is_flat

    @property
    def seg(self):
        return self.problem.boundary

    def node_exponentials(self):
        if "E" not in self._cache:
            p = np.arange(-self.P, self.P + 1)
            self._cache["E"] = np.exp(0.5j * np.pi * np.outer(p, self.op.nodes))
            self._cache["Eends"] = np.exp(0.5j * np.pi * np.outer(p, [-1.0, 1.0]))
        return self._cache["E"], self._cache["Eends"]

    def density_terms(self):
        """Cauchy-integral coefficients of the Laplace double-layer piece."""
        if "lap" not in self._cache:
            nodes = self.op.nodes
            psi = self.problem.density(nodes).astype(complex)
            sp = self.seg.ds(nodes)
            e_psi = self.op.apply(psi)
            e_spsi = self.op.apply(sp * psi)
            h = e_psi + 1j * e_spsi
            ht = conjugate_array(e_psi - 1j * e_spsi)
            self._cache["lap"] = (-h / (4j * np.pi), -ht / (4j * np.pi))
        return self._cache["lap"]


def build_context(problem, P=50, N=36, c=None, box=DEFAULT_BOX, quad_order=None,
                  oversampling=2.0, eps_reg=1e-14, tol=1e-14, axis_tol=AXIS_TOL,
                  cluster_tol=None, table=None):
    """Precompute everything that does not depend on the target."""
    x0, x1, y0, y1 = box
    if c is None:
        c = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    c = complex(c)
    if not (x0 <= c.real <= x1 and y0 <= c.imag <= y1):
        raise ValueError("expansion center must lie inside the leaf box")
    op = build_extension_operator(int(P), float(oversampling), float(eps_reg))
    arcs = None
    if table is None:
        if problem.boundary.is_flat:
            arcs = build_flat_arc_table(c, P, N, tol)
            table = combined_flat_table(*arcs)
        else:
            table = build_tail_table(problem.boundary, c, P, N, tol)
    table = np.asarray(table, dtype=complex)
    if table.shape != (2 * P + 1, N + 1):
        raise ValueError("table shape does not match (2P+1, N+1)")
    order = quad_order or 2 * (P + 10)
    xq, wq = gauss_legendre(order)
    if cluster_tol is None:
        cluster_tol = 0.15 * (x1 - x0)
    return QB2XContext(problem=problem, P=int(P), N=int(N), center=c, box=tuple(box), table=table,
                       op=op, quad_nodes=xq, quad_weights=wq, axis_tol=axis_tol,
                       cluster_tol=cluster_tol, arc_tables=arcs)


# ---------------------------------------------------------------- evaluation


@dataclass
class QB2XEval:
    value: complex
    taylor_part: complex
    planewave_part: complex
    smooth_part: complex
    boundary_term: complex
    roots_used: RootSet
    stable_path_used: bool


@dataclass
class QB2XBatch:
    """Per-target pieces; ``taylor_terms`` allows partial sums over N."""

    targets: np.ndarray
    boundary_term: np.ndarray
    smooth_part: np.ndarray
    planewave_part: np.ndarray
    taylor_terms: np.ndarray
    stable_path_used: np.ndarray

    @property
    def taylor_part(self):
        return self.taylor_terms.sum(axis=1)

    def values(self, N=None):
        tt = self.taylor_terms if N is None else self.taylor_terms[:, : N + 1]
        return self.boundary_term + self.smooth_part + self.planewave_part + tt.sum(axis=1)


def _assign_roots(ctx, roots, side):
    """Masks (upper, lower) of shape roots.shape after applying the side rule."""
    up, lo, on = classify(roots, ctx.axis_tol)
    if np.any(on):
        if side == AUTO:
            raise AmbiguousSideError("target lies on the boundary; pass side='upper_limit' or 'lower_limit'")
        if side == UPPER:
            up = up | on
        elif side == LOWER:
            lo = lo | on
        else:
            raise ValueError(f"unknown side {side!r}")
    return up, lo


def _planewave_sums(ctx, roots, up, lo, exclude=None):
    """Per target and p: residue sums S_p over upper (p >= 0) or lower (p < 0) roots.

    Returns (B, 2P+1) with the -2 pi i / +2 pi i factors included, so the
    plane-wave part of I(g; w) is sum_p g_p * out[:, p]. Entries of
    ``exclude`` (B, d, 2P+1) drop single root/order pairs.
    """
    P = ctx.P
    B = roots.shape[0]
    p = np.arange(-P, P + 1)
    if ctx.is_flat:
        dsr = np.ones_like(roots)
    else:
        dsr = 1.0 + 1j * np.polynomial.polynomial.polyval(roots, ctx.seg.dcoeffs)
    out = np.zeros((B, 2 * P + 1), dtype=complex)
    pos, neg = p >= 0, p < 0
    for mask, sel, factor in ((up, pos, -2j * np.pi), (lo, neg, 2j * np.pi)):
        if not mask.any():
            continue
        rr = np.where(mask, roots, 0.0)
        wgt = np.where(mask, 1.0 / dsr, 0.0)
        # only decaying combinations are formed: Im r > 0 with p >= 0 and vice versa
        ex = np.exp(0.5j * np.pi * rr[:, :, None] * p[sel][None, None, :])
        if exclude is not None:
            ex = np.where(exclude[:, :, sel], 0.0, ex)
        out[:, sel] = factor * np.einsum("bj,bjp->bp", wgt, ex)
    return out


# the delta series is used for orders with |p pi/2| * cluster radius below this
_STABLE_PHASE = 2.0
# and only while the cluster radius is below this fraction of the distance to other roots
_STABLE_RATIO = 0.25


def _cluster_terms(ctx, ws, roots, up, lo):
    """Stable residue sums for clustered roots.

    Returns (exclude, extra, used): plane-wave entries to drop from the
    per-root sums, their replacement (B, 2P+1) and a per-target flag.
    """
    B, d = roots.shape
    used = np.zeros(B, bool)
    if ctx.is_flat or d < 2:
        return None, None, used
    P = ctx.P
    p = np.arange(-P, P + 1)
    base = ctx.seg.root_polynomial(0.0)
    lead = complex(base[-1])
    diff = np.abs(roots[:, :, None] - roots[:, None, :])
    np.einsum("bii->bi", diff)[...] = np.inf
    cand = np.nonzero((diff < ctx.cluster_tol).any(axis=(1, 2)))[0]
    if cand.size == 0:
        return None, None, used
    exclude = np.zeros((B, d, 2 * P + 1), bool)
    extra = np.zeros((B, 2 * P + 1), dtype=complex)
    for b in cand:
        r = roots[b]
        poly = base.copy()
        poly[0] = -ws[b]
        for mask, sel, factor in ((up[b], p >= 0, -2j * np.pi), (lo[b], p < 0, 2j * np.pi)):
            idx = np.nonzero(mask)[0]
            if idx.size < 2:
                continue
            for g in _groups(r[idx], ctx.cluster_tol):
                if len(g) < 2:
                    continue
                mem = idx[g]
                members = r[mem]
                others = np.delete(r, mem)
                rc = members.mean()
                rad = np.abs(members - rc).max()
                if others.size and rad > _STABLE_RATIO * np.abs(others - rc).min():
                    continue
                cols = np.nonzero(sel)[0]
                cols = cols[0.5 * np.pi * np.abs(p[cols]) * rad <= _STABLE_PHASE]
                if cols.size == 0:
                    continue
                val = stable_cluster_residue(members, others, lead, p[cols],
                                             cluster_tol=0.0, poly=poly)
                extra[b, cols] += factor * val
                exclude[b, mem[:, None], cols[None, :]] = True
                used[b] = True
    return exclude, extra, used


def _groups(points, tol):
    from .boundary import _closure
    return _closure(np.asarray(points), tol)


def _canonical_batch(ctx, G, ws, roots, up, lo, sums):
    """Taylor terms (B, N+1) and plane-wave part (B,) of I(g; w) for rows of G."""
    coef = G @ ctx.table
    powers = (ws - ctx.center)[:, None] ** np.arange(ctx.N + 1)
    return coef * powers, (G * sums).sum(axis=1)


def evaluate_many(ctx, ws, side=AUTO, chunk=256):
    """Evaluate the layer potential at many targets; returns a QB2XBatch."""
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    parts = [_evaluate_chunk(ctx, ws[i : i + chunk], side) for i in range(0, ws.size, chunk)]
    if not parts:
        z = np.zeros(0, dtype=complex)
        return QB2XBatch(ws, z, z, z, np.zeros((0, ctx.N + 1), complex), np.zeros(0, bool))
    return QB2XBatch(ws, *[np.concatenate([getattr(pt, f) for pt in parts])
                           for f in ("boundary_term", "smooth_part", "planewave_part",
                                     "taylor_terms", "stable_path_used")])


def _evaluate_chunk(ctx, ws, side):
    prob, op, seg = ctx.problem, ctx.op, ctx.seg
    E, Eends = ctx.node_exponentials()
    # Fourier extension of rho = K1 psi and its antiderivative f
    a = op.apply(rho_samples(prob, ws, op.nodes))
    b = antiderivative_array(a, op)
    # boundary term [ln(r^2) f]_{-1}^{1}
    f_ends = b @ Eends
    zend = np.array([-1.0, 1.0]) + 1j * seg.s(np.array([-1.0, 1.0]))
    lnr2 = np.log(np.abs(ws[:, None] - zend[None, :]) ** 2)
    boundary = lnr2[:, 1] * f_ends[:, 1] - lnr2[:, 0] * f_ends[:, 0]
    # smooth remainder
    k1, k2, _ = kernel_split_parts(prob, ws[:, None], ctx.quad_nodes)
    smooth = (k2 * prob.density(ctx.quad_nodes)) @ ctx.quad_weights
    # canonical integrals
    if ctx.is_flat:
        h1 = b
        h2 = conjugate_array(b)
    else:
        sf = op.apply((b @ E) * seg.ds(op.nodes))
        h1 = b + 1j * sf
        h2 = conjugate_array(b - 1j * sf)
    if prob.is_double:
        l1, l2 = ctx.density_terms()
        h1 = h1 + l1
        h2 = h2 + l2
    roots = ws[:, None].copy() if ctx.is_flat else roots_batch(seg, ws)
    up, lo = _assign_roots(ctx, roots, side)
    exclude, extra, used = _cluster_terms(ctx, ws, roots, up, lo)
    sums = _planewave_sums(ctx, roots, up, lo, exclude)
    if extra is not None:
        sums += extra
    t1, pw1 = _canonical_batch(ctx, h1, ws, roots, up, lo, sums)
    t2, pw2 = _canonical_batch(ctx, h2, ws, roots, up, lo, sums)
    return QB2XBatch(ws, boundary, smooth, pw1 + np.conj(pw2), t1 + np.conj(t2), used)


def evaluate(ctx, w, side=AUTO):
    w = complex(w)
    batch = evaluate_many(ctx, [w], side)
    if ctx.is_flat:
        r = np.array([w])
    else:
        r = roots_batch(ctx.seg, [w])[0]
    up, lo, on = classify(r, ctx.axis_tol)
    rs = RootSet(upper=r[up], lower=r[lo], on_axis=r[on], residual_bound=0.0)
    return QB2XEval(value=complex(batch.values()[0]), taylor_part=complex(batch.taylor_part[0]),
                    planewave_part=complex(batch.planewave_part[0]),
                    smooth_part=complex(batch.smooth_part[0]),
                    boundary_term=complex(batch.boundary_term[0]), roots_used=rs,
                    stable_path_used=bool(batch.stable_path_used[0]))


def canonical_integral(ctx, g, w, side=AUTO):
    """(taylor, planewave) parts of int_{-1}^{1} g(t)/(w - t - i s(t)) dt."""
    G = np.atleast_2d(g.coeffs if isinstance(g, FourierCoeffs) else np.asarray(g, dtype=complex))
    if G.shape[1] != 2 * ctx.P + 1:
        raise ValueError("coefficient order does not match the context")
    ws = np.array([complex(w)])
    roots = ws[:, None].copy() if ctx.is_flat else roots_batch(ctx.seg, ws)
    up, lo = _assign_roots(ctx, roots, side)
    exclude, extra, _ = _cluster_terms(ctx, ws, roots, up, lo)
    sums = _planewave_sums(ctx, roots, up, lo, exclude)
    if extra is not None:
        sums += extra
    terms, pw = _canonical_batch(ctx, G, ws, roots, up, lo, sums)
    return complex(terms.sum()), complex(pw[0])


def suggest_order(digits, ratio=math.sqrt(2) / 3):
    """Expansion order for a digit target given the convergence ratio
    max|w - c| / min|z - c| (digit-table rule: N = floor(digits / -log10 ratio))."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    return int(math.floor(digits / -math.log10(ratio) + 1e-9))
