"""Regularized Fourier extension on [-1, 1] with period 4.

A function on [-1, 1] is approximated by sum_p b_p exp(i p pi t / 2),
|p| <= P, via a truncated-SVD least-squares fit on Chebyshev nodes.
Coefficient arrays are laid out with index p + P, so the last axis of
any batch has length 2P + 1.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

HALF_PERIOD = 2.0


@dataclass(frozen=True)
class FourierCoeffs:
    p_max: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape[-1] != 2 * self.p_max + 1:
            raise ValueError(f"expected {2 * self.p_max + 1} coefficients, got {c.shape[-1]}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, p_max):
        return cls(p_max, np.zeros(2 * p_max + 1, dtype=complex))

    @classmethod
    def from_dict(cls, p_max, entries):
        """Build from a {p: b_p} mapping."""
        c = np.zeros(2 * p_max + 1, dtype=complex)
        for p, v in entries.items():
            c[p + p_max] = v
        return cls(p_max, c)

    @property
    def orders(self):
        return np.arange(-self.p_max, self.p_max + 1)

    def __getitem__(self, p):
        return self.coeffs[..., p + self.p_max]

    def __call__(self, t):
        return series_value(self.coeffs, t)

    def __add__(self, other):
        return FourierCoeffs(self.p_max, self.coeffs + other.coeffs)

    def scale(self, a):
        return FourierCoeffs(self.p_max, a * self.coeffs)

    def derivative(self):
        return FourierCoeffs(self.p_max, self.coeffs * (0.5j * np.pi * self.orders))

    def to_json(self):
        return [[float(v.real), float(v.imag)] for v in self.coeffs]


def series_value(coeffs, t):
    """Evaluate sum_p b_p e^{i p pi t/2}; coeffs (..., 2P+1), t any shape -> (..., *t.shape)."""
    coeffs = np.asarray(coeffs)
    P = (coeffs.shape[-1] - 1) // 2
    t = np.asarray(t, dtype=float)
    E = np.exp(0.5j * np.pi * np.multiply.outer(np.arange(-P, P + 1), t))
    return np.tensordot(coeffs, E, axes=(-1, 0))


def chebyshev_nodes(m):
    j = np.arange(m)
    return -np.cos((2 * j + 1) * np.pi / (2 * m))


@dataclass(frozen=True, eq=False)
class ExtensionOperator:
    """Factorized least-squares map from node samples to Fourier coefficients."""

    p_max: int
    nodes: np.ndarray
    left: np.ndarray  # U^H restricted to the kept singular vectors, (rank, m)
    right: np.ndarray  # V / sigma, (2P+1, rank)
    eps_reg: float
    rank: int
    condition: float
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_nodes(self):
        return self.nodes.size

    @property
    def orders(self):
        return np.arange(-self.p_max, self.p_max + 1)

    def apply(self, samples):
        """Coefficient array for samples of shape (..., n_nodes)."""
        samples = np.asarray(samples)
        if samples.shape[-1] != self.nodes.size:
            raise ValueError(f"expected {self.nodes.size} samples, got {samples.shape[-1]}")
        # keeping the factors apart avoids the cancellation of an explicit pseudo-inverse
        return (samples @ self.left.T) @ self.right.T

    @property
    def t_coeffs(self):
        """Extension of the identity t -> t, computed once."""
        if "t" not in self._cache:
            self._cache["t"] = self.apply(self.nodes.astype(complex))
        return self._cache["t"]


@lru_cache(maxsize=32)
def build_extension_operator(P, oversampling=2.0, eps_reg=1e-14):
    if P < 1:
        raise ValueError("P must be at least 1")
    if oversampling < 2:
        raise ValueError("oversampling must be >= 2")
    m = int(np.ceil(oversampling * (2 * P + 1)))
    t = chebyshev_nodes(m)
    A = np.exp(0.5j * np.pi * np.outer(t, np.arange(-P, P + 1)))
    U, sig, Vh = np.linalg.svd(A, full_matrices=False)
    keep = sig > eps_reg * sig[0]
    rank = int(keep.sum())
    left = np.ascontiguousarray(U[:, keep].conj().T)
    right = np.ascontiguousarray(Vh[keep].conj().T / sig[keep])
    for arr in (t, left, right):
        arr.setflags(write=False)
    return ExtensionOperator(p_max=P, nodes=t, left=left, right=right, eps_reg=eps_reg, rank=rank,
                             condition=float(sig[0] / sig[keep][-1]))


def extend(op, samples):
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 1:
        raise ValueError("extend takes a 1-D sample vector; use op.apply for batches")
    return FourierCoeffs(op.p_max, op.apply(samples))


def antiderivative_array(a, op):
    """Batched antiderivative: b_p = 2 a_p/(i p pi) plus a_0 times the extension of t."""
    a = np.asarray(a, dtype=complex)
    P = op.p_max
    p = np.arange(-P, P + 1)
    fac = np.zeros(2 * P + 1, dtype=complex)
    nz = p != 0
    fac[nz] = 2.0 / (1j * np.pi * p[nz])
    b = a * fac
    return b + a[..., P : P + 1] * op.t_coeffs


def antiderivative(c, op):
    if c.p_max != op.p_max:
        raise ValueError("coefficient and operator orders differ")
    return FourierCoeffs(c.p_max, antiderivative_array(c.coeffs, op))


def conjugate_array(b):
    """b~_p = conj(b_{-p}), so the series value is conjugated for real t."""
    return np.conj(np.asarray(b)[..., ::-1])


def conjugate_series(c):
    return FourierCoeffs(c.p_max, conjugate_array(c.coeffs))


def multiply_by_polynomial_array(b, poly, op):
    """Re-extend t -> poly(t) * value(b, t) from samples at the operator nodes."""
    vals = series_value(b, op.nodes)
    w = np.polynomial.polynomial.polyval(op.nodes, np.asarray(poly, dtype=float))
    return op.apply(vals * w)


def multiply_by_polynomial(c, poly, op):
    return FourierCoeffs(c.p_max, multiply_by_polynomial_array(c.coeffs, poly, op))


@lru_cache(maxsize=16)
def monomial_table(P, degree, oversampling=2.0, eps_reg=1e-14):
    """Fourier extensions of t**j for j = 0..degree, rows indexed by j."""
    op = build_extension_operator(P, oversampling, eps_reg)
    V = np.vander(op.nodes, degree + 1, increasing=True).T.astype(complex)
    out = op.apply(V)
    out.setflags(write=False)
    return out
