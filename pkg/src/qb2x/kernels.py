"""Parametrized Helmholtz single- and double-layer kernels and their log split.

With r(w, t) = |w - z(t)| both kernels are written as K1 ln(r^2) + K2 with
K1, K2 analytic in t. The double-layer K2 additionally contains the Laplace
double-layer kernel -N/(2 pi r^2), N = (x - t) s'(t) - (y - s(t)), which is
smooth in t only for targets away from the curve; it is exposed separately
so callers can treat it with Cauchy integrals.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import special

from .boundary import BoundarySegment
from .specfun import j1_over_x, y0_regular, y1_regular_smooth_over_x

SINGLE = "single"
DOUBLE = "double"


class SingularEvaluationError(ValueError):
    """Full kernel requested at r = 0."""


@dataclass(frozen=True)
class DensitySpec:
    """Real density psi(t) on [-1, 1].

    kinds: ``constant``, ``cosine`` (cos(f t)), ``polynomial`` (ascending
    coefficients) and ``sum`` (of ``terms``).
    """

    kind: str = "constant"
    f: float = 0.0
    coeffs: tuple = ()
    terms: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant", "cosine", "polynomial", "sum"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "polynomial" and not self.coeffs:
            raise ValueError("polynomial density needs coefficients")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def constant(cls, value=1.0):
        return cls("constant", scale=float(value))

    @classmethod
    def cosine(cls, f):
        return cls("cosine", f=float(f))

    @classmethod
    def polynomial(cls, coeffs):
        return cls("polynomial", coeffs=tuple(coeffs))

    @classmethod
    def from_config(cls, cfg):
        kind = cfg.get("kind")
        if kind in ("const", "constant"):
            return cls.constant(cfg.get("value", 1.0))
        if kind in ("cos", "cosine"):
            return cls.cosine(cfg["f"])
        if kind in ("poly", "polynomial"):
            return cls.polynomial(cfg["coeffs"])
        if kind == "zero":
            return cls.constant(0.0)
        raise ValueError(f"unknown density kind {kind!r}")

    def to_config(self):
        if self.kind == "constant":
            return {"kind": "const", "value": self.scale}
        if self.kind == "cosine":
            return {"kind": "cosine", "f": self.f}
        if self.kind == "polynomial":
            return {"kind": "poly", "coeffs": list(self.coeffs)}
        raise ValueError("sum densities have no config form")

    def __add__(self, other):
        return DensitySpec("sum", terms=(self, other))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            out = np.full(t.shape, self.scale)
        elif self.kind == "cosine":
            out = self.scale * np.cos(self.f * t)
        elif self.kind == "polynomial":
            out = self.scale * npoly.polyval(t, np.array(self.coeffs))
        else:
            out = sum(term(t) for term in self.terms) * self.scale
        return out if out.ndim else float(out)

    @property
    def is_zero(self):
        if self.scale == 0.0:
            return True
        if self.kind == "polynomial":
            return not any(self.coeffs)
        if self.kind == "sum":
            return all(term.is_zero for term in self.terms)
        return False


@dataclass(frozen=True)
class LayerProblem:
    boundary: BoundarySegment = field(default_factory=BoundarySegment.flat)
    k: float = 1.0
    layer: str = SINGLE
    density: DensitySpec = field(default_factory=DensitySpec)

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("wave number must be positive")
        if self.layer not in (SINGLE, DOUBLE):
            raise ValueError(f"layer must be 'single' or 'double', got {self.layer!r}")
        if 2 * self.k > 20:
            warnings.warn(f"k={self.k} is beyond the low-to-mild near-field regime", stacklevel=2)

    @property
    def is_double(self):
        return self.layer == DOUBLE


def _geometry(seg, w, t):
    w = np.asarray(w, dtype=complex)
    t = np.asarray(t, dtype=float)
    s = seg.s(t)
    sp = seg.ds(t)
    dx = w.real - t
    dy = w.imag - s
    r2 = dx * dx + dy * dy
    return dx, dy, r2, sp


def density_eval(problem, t):
    return problem.density(t)


def kernel_full(problem, w, t):
    """M(w, t) for the single layer or L(w, t) for the double layer."""
    seg, k = problem.boundary, problem.k
    dx, dy, r2, sp = _geometry(seg, w, t)
    if np.any(r2 == 0):
        raise SingularEvaluationError("kernel evaluated with the target on the source point")
    r = np.sqrt(r2)
    if problem.is_double:
        num = dx * sp - dy
        out = -0.25j * k * (num / r) * special.hankel1(1, k * r)
    else:
        out = 0.25j * special.hankel1(0, k * r) * np.hypot(1.0, sp)
    return out if np.ndim(out) else complex(out)


def kernel_log_coefficient(problem, w, t):
    """K1 = M1 or L1, the coefficient of ln(r^2)."""
    seg, k = problem.boundary, problem.k
    dx, dy, r2, sp = _geometry(seg, w, t)
    kr = k * np.sqrt(r2)
    if problem.is_double:
        return (k * k / (4 * np.pi)) * (dx * sp - dy) * j1_over_x(kr)
    return -special.j0(kr) * np.hypot(1.0, sp) / (4 * np.pi)


def kernel_split_parts(problem, w, t):
    """(K1, K2 smooth, laplace) with K2 = K2 smooth + laplace.

    ``laplace`` is zero for the single layer and -N/(2 pi r^2) for the double
    layer; at r = 0 it takes the on-curve limit s''/(4 pi (1 + s'^2)).
    """
    seg, k = problem.boundary, problem.k
    dx, dy, r2, sp = _geometry(seg, w, t)
    kr = k * np.sqrt(r2)
    lnk2 = np.log(0.5 * k)
    if problem.is_double:
        num = dx * sp - dy
        j1x = j1_over_x(kr)
        k1 = (k * k / (4 * np.pi)) * num * j1x
        k2 = (0.25 * k * k) * num * (((2 / np.pi) * lnk2 - 1j) * j1x + y1_regular_smooth_over_x(kr))
        with np.errstate(divide="ignore", invalid="ignore"):
            lap = -num / (2 * np.pi * r2)
        zero = r2 == 0
        if np.any(zero):
            spp = npoly.polyval(t, npoly.polyder(seg.coeffs, 2)) if seg.degree >= 2 else 0.0
            lim = np.broadcast_to(spp / (4 * np.pi * (1 + sp * sp)), np.shape(lap))
            lap = np.where(zero, lim, lap)
        return k1, k2.astype(complex), lap
    speed = np.hypot(1.0, sp)
    j0 = special.j0(kr)
    k1 = -j0 * speed / (4 * np.pi)
    k2 = speed * ((0.25j - lnk2 / (2 * np.pi)) * j0 - 0.25 * y0_regular(kr))
    return k1, k2, np.zeros_like(k1)


def kernel_split(problem, w, t):
    """(K1, K2) such that the full kernel equals K1 ln(r^2) + K2."""
    k1, k2, lap = kernel_split_parts(problem, w, t)
    out = (k1, k2 + lap)
    if np.ndim(k1) == 0:
        return complex(out[0]), complex(out[1])
    return out


def rho_samples(problem, w, nodes):
    """K1(w, t_j) psi(t_j) at the extension nodes; w may be an array (rows)."""
    w = np.asarray(w, dtype=complex)
    nodes = np.asarray(nodes, dtype=float)
    k1 = kernel_log_coefficient(problem, w[..., None], nodes)
    return (k1 * problem.density(nodes)).astype(complex)
