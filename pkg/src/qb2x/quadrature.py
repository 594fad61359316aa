"""Fixed quadrature rules shared by the evaluators.

Gauss-Legendre rules come from numpy; the Gauss-Kronrod pair is generated
on first use from the Stieltjes polynomial of the Gauss rule.
"""
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as L


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    x, w = L.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_interval(n, a, b):
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def composite_gauss_legendre(breaks, n):
    """Panel-wise Gauss-Legendre rule over consecutive breakpoints."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    a = breaks[:-1, None]
    b = breaks[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


@lru_cache(maxsize=None)
def gauss_kronrod(n: int = 15):
    """Kronrod extension of the n-point Gauss rule.

    Returns ``(nodes, kronrod_weights, gauss_mask, gauss_weights)`` where the
    2n+1 nodes are sorted ascending and ``gauss_mask`` selects the n Gauss
    nodes among them. The Kronrod rule is exact for degree 3n+1.
    """
    xg, wg = gauss_legendre(n)
    # Stieltjes polynomial E = P_{n+1} + sum_j e_j P_j, orthogonal to P_n*P_k
    # for k <= n. Triple products integrate exactly with 2n+2 Gauss points.
    xq, wq = L.leggauss(2 * n + 2)
    V = L.legvander(xq, n + 1)  # columns P_0..P_{n+1}
    Pn = V[:, n]
    A = np.einsum("q,qk,qj->kj", wq * Pn, V[:, : n + 1], V[:, : n + 1])
    rhs = -np.einsum("q,qk->k", wq * Pn * V[:, n + 1], V[:, : n + 1])
    e, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    coef = np.concatenate([e, [1.0]])
    coef[np.abs(coef) < 1e-14] = 0.0
    xs = np.sort(L.legroots(coef).real)
    dcoef = L.legder(coef)
    for _ in range(3):
        xs = xs - L.legval(xs, coef) / L.legval(xs, dcoef)

    nodes = np.sort(np.concatenate([xg, xs]))
    V = L.legvander(nodes, 2 * n).T
    moments = np.zeros(2 * n + 1)
    moments[0] = 2.0
    wk = np.linalg.solve(V, moments)
    gauss_mask = np.isin(np.arange(nodes.size), np.searchsorted(nodes, xg))
    for arr in (nodes, wk, gauss_mask):
        arr.setflags(write=False)
    return nodes, wk, gauss_mask, wg
