"""Real-argument Bessel and Hankel functions with the logarithm split.

For n in {0, 1} the second-kind function is written as

    Y_n(x) = (2/pi) ln(x/2) J_n(x) + R_n(x)

where R_0 is entire in x**2 and R_1(x) = -2/(pi x) + x * (entire in x**2).
The regular parts are summed from their power series for small x, so the
logarithm is never subtracted numerically where it dominates.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

N_MAX = 64
EULER_GAMMA = 0.57721566490153286060651209
_SERIES_CUTOFF = 2.0
_SERIES_TERMS = 28

# harmonic numbers H_k and digamma(k+1) = H_k - gamma
_H = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, _SERIES_TERMS + 2))])


class DomainError(ValueError):
    """Argument or order outside the supported range."""


class PoleError(ArithmeticError):
    """Evaluation hits the 1/x pole of R_1 at x = 0."""


@dataclass(frozen=True)
class BesselEval:
    order: int
    argument: float
    j: float
    y_regular: float
    hankel1: complex


def _check_order(n, n_max=N_MAX):
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a non-negative integer, got {n}")
    if n > n_max:
        raise DomainError(f"order {n} exceeds N_max={n_max}")


def bessel_j(n, x, n_max=N_MAX):
    """J_n(x) for integer 0 <= n <= n_max and x >= 0 (array-aware)."""
    _check_order(n, n_max)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("bessel_j needs finite x >= 0")
    out = special.jv(n, x)
    return out if out.ndim else float(out)


def bessel_y(n, x, n_max=N_MAX):
    """Y_n(x) for x > 0."""
    _check_order(n, n_max)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_y needs x > 0")
    out = special.yv(n, x)
    return out if out.ndim else float(out)


def hankel1(n, x, n_max=N_MAX):
    """H_n^(1)(x) = J_n(x) + i Y_n(x) for x > 0."""
    _check_order(n, n_max)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("hankel1 has a branch point at x = 0; need x > 0")
    out = special.hankel1(n, x)
    return out if out.ndim else complex(out)


def _r0_series(x):
    q = 0.25 * x * x
    term = np.ones_like(x)
    acc = np.zeros_like(x)
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * k)
        acc -= _H[k] * term
    return (2.0 / np.pi) * (EULER_GAMMA * special.j0(x) + acc)


def _r1_smooth_series(x):
    # R_1(x) + 2/(pi x) = -(1/pi) sum_k (-1)^k (psi(k+1)+psi(k+2)) (x/2)^(2k+1) / (k!(k+1)!)
    half = 0.5 * x
    q = half * half
    term = half.copy()
    acc = (2.0 * _H[0] - 2.0 * EULER_GAMMA + 1.0) * term
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * (k + 1))
        acc += (_H[k] + _H[k + 1] - 2.0 * EULER_GAMMA) * term
    return -acc / np.pi


def y_regular(n, x):
    """R_n(x) = Y_n(x) - (2/pi) ln(x/2) J_n(x) for n in {0, 1}.

    R_0(0) is the finite limit 2*gamma/pi; R_1 has a -2/(pi x) pole and
    raises PoleError at x = 0.
    """
    if n not in (0, 1):
        raise DomainError(f"log split is provided for n in {{0, 1}}, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("y_regular needs x >= 0")
    if n == 0:
        out = y0_regular(x)
    else:
        if np.any(x == 0):
            raise PoleError("R_1 contains -2/(pi x); combine with the 1/r prefactor")
        out = y1_regular_smooth(x) - 2.0 / (np.pi * x)
    return out if np.ndim(out) else float(out)


def y0_regular(x):
    """R_0(x), evaluated without cancellation for small x."""
    x = np.asarray(x, dtype=float)
    small = x <= _SERIES_CUTOFF
    out = np.empty_like(x)
    if np.any(small):
        out[small] = _r0_series(x[small])
    big = ~small
    if np.any(big):
        xb = x[big]
        out[big] = special.y0(xb) - (2.0 / np.pi) * np.log(0.5 * xb) * special.j0(xb)
    return out


def y1_regular_smooth(x):
    """R_1(x) + 2/(pi x): odd, analytic, vanishes linearly at 0."""
    x = np.asarray(x, dtype=float)
    small = x <= _SERIES_CUTOFF
    out = np.empty_like(x)
    if np.any(small):
        out[small] = _r1_smooth_series(x[small])
    big = ~small
    if np.any(big):
        xb = x[big]
        out[big] = (special.y1(xb) - (2.0 / np.pi) * np.log(0.5 * xb) * special.j1(xb)
                    + 2.0 / (np.pi * xb))
    return out


def j1_over_x(x):
    """J_1(x)/x with the limit 1/2 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, 0.5)
    nz = x > 1e-8
    out[nz] = special.j1(x[nz]) / x[nz]
    tiny = ~nz
    out[tiny] = 0.5 - x[tiny] ** 2 / 16.0
    return out


def bessel_eval(n, x):
    """Bundle J_n, R_n and H_n^(1) at a single point (n in {0, 1})."""
    j = bessel_j(n, x)
    yr = y_regular(n, x)
    h = hankel1(n, x)
    return BesselEval(order=n, argument=float(x), j=j, y_regular=yr, hankel1=h)


def y1_regular_smooth_over_x(x):
    """(R_1(x) + 2/(pi x)) / x, an even analytic function with finite value at 0."""
    x = np.asarray(x, dtype=float)
    small = x <= _SERIES_CUTOFF
    out = np.empty_like(x)
    if np.any(small):
        xs = x[small]
        q = 0.25 * xs * xs
        term = np.full_like(xs, 0.5)
        acc = (2.0 * _H[0] - 2.0 * EULER_GAMMA + 1.0) * term
        for k in range(1, _SERIES_TERMS):
            term = term * (-q) / (k * (k + 1))
            acc += (_H[k] + _H[k + 1] - 2.0 * EULER_GAMMA) * term
        out[small] = -acc / np.pi
    big = ~small
    if np.any(big):
        out[big] = y1_regular_smooth(x[big]) / x[big]
    return out


bessel_y_regular = y_regular
