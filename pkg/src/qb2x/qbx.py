"""Quadrature by expansion: partial-wave expansion about an off-curve center.

    u(w) ~ sum_{n=-N}^{N} alpha_n J_n(k |w - c|) e^{-i n theta},  theta = arg(w - c),

with alpha_n obtained from Graf's addition theorem by Gauss-Legendre
quadrature over the boundary parameter.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

from .quadrature import gauss_legendre
from .specfun import N_MAX


class IllConditionedCenterError(ValueError):
    """Expansion center too close to the curve."""


@dataclass(frozen=True, eq=False)
class QBXExpansion:
    center: complex
    k: float
    order: int
    coeffs: np.ndarray  # alpha_n for n = -N..N

    def __call__(self, w):
        return eval_qbx(self, w)


def _orders(N):
    return np.arange(-N, N + 1)


def build_qbx(problem, c, N, quad_order=None, min_distance=1e-3):
    """Coefficients alpha_{-N..N}; double layer via the analytic normal derivative."""
    c = complex(c)
    seg = problem.boundary
    if N > N_MAX - 1:
        raise ValueError(f"order {N} exceeds the supported maximum {N_MAX - 1}")
    if seg.distance(c) < min_distance:
        raise IllConditionedCenterError(f"center {c} is within {min_distance} of the curve")
    quad_order = quad_order or 16 * (N + max(seg.degree, 1))
    t, wt = gauss_legendre(quad_order)
    z = seg.z(t)
    sp = seg.ds(t)
    zeta = z - c
    rho = np.abs(zeta)
    e = zeta / rho  # e^{i theta_z}
    k = problem.k
    n = _orders(N)
    psi = problem.density(t)
    if not problem.is_double:
        H = special.hankel1(n[:, None], k * rho[None, :])
        integrand = H * e[None, :] ** n[:, None] * np.hypot(1.0, sp)
    else:
        # (d_x - i d_y) Z_n e^{in th} = k Z_{n-1} e^{i(n-1)th}
        # (d_x + i d_y) Z_n e^{in th} = -k Z_{n+1} e^{i(n+1)th}
        Hm = special.hankel1(n[:, None] - 1, k * rho[None, :]) * e[None, :] ** (n[:, None] - 1)
        Hp = special.hankel1(n[:, None] + 1, k * rho[None, :]) * e[None, :] ** (n[:, None] + 1)
        dbar = -k * Hp
        dd = k * Hm
        gx = 0.5 * (dd + dbar)
        gy = (dbar - dd) / 2j
        integrand = -sp[None, :] * gx + gy
    alpha = 0.25j * (integrand * (psi * wt)[None, :]).sum(axis=1)
    return QBXExpansion(center=c, k=float(k), order=int(N), coeffs=alpha)


def eval_qbx(e, w, N=None):
    """Sum the expansion at targets ``w``; optional truncation ``N`` <= e.order."""
    w = np.asarray(w, dtype=complex)
    N = e.order if N is None else int(N)
    n = _orders(N)
    alpha = e.coeffs[e.order - N : e.order + N + 1]
    d = w - e.center
    rho = np.abs(d)
    ph = np.where(rho > 0, d / np.where(rho > 0, rho, 1.0), 1.0)
    J = special.jv(n[:, None], e.k * rho.ravel()[None, :])
    terms = alpha[:, None] * J * np.conj(ph.ravel())[None, :] ** n[:, None]
    out = terms.sum(axis=0).reshape(w.shape)
    return out if out.ndim else complex(out)
