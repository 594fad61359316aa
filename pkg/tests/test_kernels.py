import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qb2x.boundary import BoundarySegment
from qb2x.kernels import (DensitySpec, LayerProblem, SingularEvaluationError, density_eval,
                          kernel_full, kernel_split, kernel_split_parts, rho_samples)
from qb2x.oracle import reference_many

from conftest import cval

FLAT = LayerProblem()
FLAT_D = LayerProblem(layer="double")
MILD = BoundarySegment((0, 0, 1, 0.1, -2))


def test_full_kernel_examples(oracle_values):
    kv = oracle_values["kernels"]
    m = kernel_full(FLAT, 1j, 0.0)
    assert abs(m - (-0.0220642411 + 0.1912994217j)) < 1e-10
    assert abs(m - cval(kv["M(i,0)"])) < 1e-16
    l = kernel_full(FLAT_D, 1j, 0.0)
    assert abs(l - (0.1953032053 + 0.1100126464j)) < 1e-10
    assert abs(l - cval(kv["L(i,0)"])) < 1e-16
    with pytest.raises(SingularEvaluationError):
        kernel_full(LayerProblem(boundary=MILD), complex(MILD.z(0.3)), 0.3)


def test_split_at_unit_distance(oracle_values):
    kv = oracle_values["kernels"]
    m1, m2 = kernel_split(FLAT, 1j, 0.0)
    # -J0(1)/(4 pi); the commonly quoted -0.0608901756 is off in the 6th digit
    assert m1 == pytest.approx(kv["M1(i,0)"], rel=1e-15)
    assert abs(m2 - kernel_full(FLAT, 1j, 0.0)) < 1e-16


def test_m2_limit(oracle_values):
    lim = cval(oracle_values["kernels"]["M2 limit k=1"])
    for d in (1e-6, 1e-8):
        _, m2 = kernel_split(FLAT, 1j * d, 0.0)
        assert abs(m2 - lim) < 1e-10
    _, m2 = kernel_split(FLAT, 0.0, 0.0)
    assert abs(m2 - lim) < 1e-15


def test_l1_vanishes_on_curve():
    prob = LayerProblem(boundary=MILD, layer="double")
    t0 = 0.4
    for d in (1e-4, 1e-6, 1e-8):
        w = complex(MILD.z(t0)) + 1j * d
        l1, _ = kernel_split(prob, w, t0)
        assert abs(l1) <= d
    l1, _ = kernel_split(prob, complex(MILD.z(t0)), t0)
    assert l1 == 0


def test_density_examples():
    assert density_eval(LayerProblem(density=DensitySpec.cosine(20)), 0.0) == 1.0
    assert density_eval(LayerProblem(density=DensitySpec.polynomial([0.75, 0.5, 0.5])), 1.0) == 1.75
    assert density_eval(FLAT, 0.42) == 1.0
    nodes = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(rho_samples(FLAT, 0.3j, nodes), kernel_split(FLAT, 0.3j, nodes)[0])


def test_density_config_round_trip():
    for cfg in ({"kind": "cosine", "f": 20.0}, {"kind": "poly", "coeffs": [0.75, 0.5, 0.5]},
                {"kind": "const", "value": 1.0}):
        assert DensitySpec.from_config(cfg).to_config() == cfg
    with pytest.raises(ValueError):
        DensitySpec.from_config({"kind": "gauss"})


def test_high_k_warning():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        LayerProblem(k=10.0)
        assert not rec
        LayerProblem(k=12.0)
        assert rec


@pytest.mark.parametrize("layer", ["single", "double"])
@given(t=st.floats(-1, 1), log_r=st.floats(-6, np.log10(3)), ang=st.floats(0, 2 * np.pi),
       k=st.floats(0.5, 10))
def test_split_consistency(layer, t, log_r, ang, k):
    prob = LayerProblem(boundary=MILD, layer=layer, k=k)
    z = complex(MILD.z(t))
    r = 10.0 ** log_r
    w = z + r * np.exp(1j * ang)
    full = kernel_full(prob, w, t)
    k1, k2 = kernel_split(prob, w, t)
    rr = abs(w - z)
    assert abs(full - (k1 * np.log(rr * rr) + k2)) <= 1e-13 * (1 + abs(full))


@pytest.mark.parametrize("layer", ["single", "double"])
def test_k2_smooth_near_curve(layer):
    prob = LayerProblem(boundary=MILD, layer=layer)
    t0 = 0.2
    h = 1e-3
    ts = t0 + h * np.arange(-2, 3)
    second = []
    for d in (1e-2, 1e-4, 1e-6, 1e-8):
        w = complex(MILD.z(t0)) + 1j * d
        k2 = kernel_split_parts(prob, w, ts)[1]
        second.append(np.abs(np.diff(k2, 2)).max() / h ** 2)
    assert max(second) < 10 * second[0] + 1.0


def _laplacian_residual(prob, ws, h=1e-3):
    offs = np.array([0, h, -h, 1j * h, -1j * h])
    pts = (ws[:, None] + offs[None, :]).ravel()
    u = reference_many(prob, pts, tol=1e-15).values.reshape(ws.size, 5)
    lap = (u[:, 1:].sum(axis=1) - 4 * u[:, 0]) / h ** 2
    return np.abs(lap + prob.k ** 2 * u[:, 0])


@pytest.mark.parametrize("layer", ["single", "double"])
def test_oracle_pde_residual(layer, rng):
    prob = LayerProblem(boundary=MILD, layer=layer, density=DensitySpec.cosine(3))
    ws = []
    while len(ws) < 10:
        w = complex(*rng.uniform(-1, 1, 2))
        if MILD.distance(w) >= 0.2:
            ws.append(w)
    assert _laplacian_residual(prob, np.array(ws)).max() <= 1e-4
