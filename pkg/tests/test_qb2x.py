import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from qb2x.boundary import BoundarySegment, find_roots
from qb2x.experiments import contour_oracle
from qb2x.fourext import FourierCoeffs
from qb2x.kernels import DensitySpec, LayerProblem
from qb2x.oracle import reference_eval, reference_many, reference_on_boundary_single
from qb2x.qb2x import (AmbiguousSideError, InvalidClusterError, build_context, build_flat_arc_table,
                       build_tail_table, canonical_integral, cluster_symmetric_h,
                       complete_homogeneous, evaluate, evaluate_many, naive_cluster_residue,
                       stable_cluster_residue, suggest_order, table_cache_key)

from conftest import cval

PARABOLA = BoundarySegment((0, 0, 1))
MILD = BoundarySegment((0, 0, 1, 0.1, -2))
EXTREME = BoundarySegment((0, 0, 2, 0, 5))


def residue_contour_gap(seg, w, P):
    """Largest |plane-wave part - small-circle integrals| over single orders p."""
    ctx = build_context(LayerProblem(boundary=seg), P=P, N=2)
    rs = find_roots(seg, w)
    allr = np.concatenate([rs.upper, rs.lower])
    sep = min([abs(a - b) for i, a in enumerate(allr) for b in allr[i + 1:]] + [1.0])
    rad = 1e-2 * sep
    th = 2 * np.pi * np.arange(64) / 64
    worst = 0.0
    for p in range(-P, P + 1):
        _, pw = canonical_integral(ctx, FourierCoeffs.from_dict(P, {p: 1.0}), w)
        tot = 0j
        for r in (rs.upper if p >= 0 else rs.lower):
            z = r + rad * np.exp(1j * th)
            dz = 1j * (z - r) * 2 * np.pi / 64
            tot += np.sum(np.exp(0.5j * np.pi * p * z) / (w - z - 1j * seg.s(z)) * dz)
        worst = max(worst, abs(pw - (tot if p >= 0 else -tot)))
    return worst


def random_instance(rng):
    while True:
        deg = int(rng.integers(2, 6))
        seg = BoundarySegment((0, 0, *rng.uniform(-2, 2, deg - 1)))
        w = complex(*rng.uniform(-1 / 3, 1 / 3, 2))
        if not seg.is_flat and seg.distance(w) > 1e-2:
            return seg, w


# ---------------------------------------------------------------- tables


def test_tail_table_against_mpmath(oracle_values):
    for case in oracle_values["tail"]:
        seg = BoundarySegment(tuple(case["s"]))
        P = max(3, abs(case["p"]))
        T = build_tail_table(seg, cval(case["c"]), P, 3)
        got = T[case["p"] + P, case["n"]]
        assert abs(got - cval(case["value"])) <= 1e-13


def test_tail_table_parabola_p0_exact():
    # int dz/(z + i z^2) over both tails = -i pi/2
    T = build_tail_table(PARABOLA, 0.0, 0, 0)
    assert abs(T[0, 0] - (-0.5j * np.pi)) < 1e-14


def test_tail_table_decay_extreme():
    T = build_tail_table(EXTREME, 0.0, 4, 14)
    a = np.abs(T[4])
    assert np.all(a[3:] < a[2:-1])
    T = build_tail_table(EXTREME, 0.0, 100, 12)
    scaled = np.abs(T[:, 11]).max() * (np.sqrt(2) / 3) ** 11
    assert scaled <= 10 * (1 / 15) ** 11


def test_tail_table_envelope_all_curves():
    # two tails may cancel for some n, so only the geometric envelope is asserted
    for seg in (PARABOLA, MILD, EXTREME):
        a = np.abs(build_tail_table(seg, 0.0, 2, 24)[2])
        assert np.all(np.isfinite(a))
        assert a[16:].max() < 1e-2 * a[:4].max()


def test_tail_table_rejects_flat():
    with pytest.raises(ValueError):
        build_tail_table(BoundarySegment.flat(), 0.0, 2, 2)


def test_flat_arc_table():
    up, lo = build_flat_arc_table(0.0, 5, 6)
    assert abs(up[5, 0] - 1j * np.pi) < 1e-14
    assert abs(up[5, 1] - 2.0) < 1e-14
    # conj of the upper arc at p equals the lower arc at -p for real c
    np.testing.assert_allclose(np.conj(up), lo[::-1], atol=1e-14)
    up, lo = build_flat_arc_table(0.1, 4, 3)
    np.testing.assert_allclose(np.conj(up), lo[::-1], atol=1e-14)


def test_cache_key_stable():
    a = table_cache_key(EXTREME, 0j, 100, 12, 1e-14)
    assert a == table_cache_key(BoundarySegment((0, 0, 2, 0, 5)), 0j, 100, 12, 1e-14)
    assert a != table_cache_key(EXTREME, 0j, 100, 13, 1e-14)


# ---------------------------------------------------------------- canonical integral


def test_flat_canonical_against_quadrature(oracle_values):
    cv = oracle_values["canonical"]
    ctx = build_context(LayerProblem(), P=20, N=36)
    taylor, pw = canonical_integral(ctx, FourierCoeffs.from_dict(20, {-1: 1.0}), cval(cv["flat_bm1_w"]))
    assert abs(taylor + pw - cval(cv["flat_bm1"])) <= 1e-12
    # the root w is in the upper half plane, so p < 0 collects no residue
    assert pw == 0


def test_flat_on_segment_is_ambiguous():
    ctx = build_context(LayerProblem(), P=4, N=8)
    with pytest.raises(AmbiguousSideError):
        canonical_integral(ctx, FourierCoeffs.from_dict(4, {0: 1.0}), 0.0)


def test_curved_canonical_against_quadrature(oracle_values):
    cv = oracle_values["canonical"]
    ctx = build_context(LayerProblem(boundary=PARABOLA), P=20, N=36)
    taylor, pw = canonical_integral(ctx, FourierCoeffs.from_dict(20, {0: 1.0}), cval(cv["curved_t2_w"]))
    assert abs(taylor + pw - cval(cv["curved_t2"])) <= 1e-12


def test_residue_matches_small_circles(rng):
    worst = max(residue_contour_gap(*random_instance(rng), P=6) for _ in range(20))
    assert worst <= 1e-12


# ---------------------------------------------------------------- cluster residues


def test_symmetric_pair_h():
    h = complete_homogeneous([0.3, -0.3], 8)
    expect = [0.3 ** j if j % 2 == 0 else 0.0 for j in range(8)]
    np.testing.assert_allclose(h, expect, atol=1e-17)


def test_h_from_polynomial_matches_roots(rng):
    r = np.array([0.2 + 0.5j + 1e-3, 0.2 + 0.5j - 1e-3 + 2e-4j, -1.5 - 1j])
    lead = 0.7j
    poly = lead * np.poly(r)[::-1]
    h1 = complete_homogeneous(r[:2] - r[:2].mean(), 10)
    h2 = cluster_symmetric_h(poly, r[:2].mean(), r[2:], 2, 10)
    np.testing.assert_allclose(h2, h1, atol=1e-14)


def test_clustered_cubic_stable_value():
    from qb2x.experiments import demo_inputs
    lead, r1, r2, r3 = demo_inputs()
    ref = 0.67571272714158517293 - 0.07931328249252365183j
    val = stable_cluster_residue([r1, r2], [r3], lead, 1, M=3)
    assert abs(val - ref) <= 1e-15 * abs(ref)


def test_invalid_partition():
    with pytest.raises(InvalidClusterError):
        stable_cluster_residue([0.1j, 0.1j + 1e-5], [0.1j + 2e-5], 1.0, 1, cluster_tol=1e-3)
    with pytest.raises(ValueError):
        stable_cluster_residue([0.1j, 0.2j, 0.3j], [], 1.0, 1, M=1)


@given(st.floats(-6, -2), st.floats(0, 2 * np.pi), st.integers(-8, 8), st.integers(0, 2 ** 31))
def test_cluster_consistency(log_h, ang, p, seed):
    r = np.random.default_rng(seed)
    rc = complex(*r.uniform(-0.5, 0.5, 2))
    h = 10.0 ** log_h * np.exp(1j * ang)
    cluster = [rc + h / 2, rc - h / 2]
    others = [rc + 1.5 * np.exp(1j * r.uniform(0, 2 * np.pi))]
    lead = complex(*r.uniform(0.5, 2, 2))
    st_val = stable_cluster_residue(cluster, others, lead, p)
    nv = naive_cluster_residue(cluster, others, lead, p)
    scale = abs(np.exp(0.5j * np.pi * p * rc) / lead)
    assert abs(st_val - nv) <= max(1e-12, 100 * np.finfo(float).eps / abs(h)) * max(scale, 1.0)


@pytest.mark.parametrize("log_h", [-8, -9, -10])
def test_cluster_tiny_separation(log_h):
    h = 10.0 ** log_h
    cluster, others, lead = [0.2 + 0.5j - h, 0.2 + 0.5j + h], [-1.5 - 1j], 1.3j
    with mpmath.workdps(40):
        ref = complex(contour_oracle(lead, cluster, others, p=3))
    st_err = abs(stable_cluster_residue(cluster, others, lead, 3) - ref)
    nv_err = abs(naive_cluster_residue(cluster, others, lead, 3) - ref)
    assert st_err <= 1e-12
    assert nv_err > 1e-12


# ---------------------------------------------------------------- evaluation


def test_evaluate_parts_and_linearity():
    d1, d2 = DensitySpec.cosine(5), DensitySpec.polynomial([0.1, -1.0, 0.5])
    ctxs = [build_context(LayerProblem(boundary=MILD, density=d), P=60, N=30) for d in (d1, d2, d1 + d2)]
    ws = np.array([0.1 + 0.2j, -0.25 - 0.3j, 0.3 + 0.3j])
    v = [evaluate_many(c, ws).values() for c in ctxs]
    np.testing.assert_allclose(v[2], v[0] + v[1], rtol=1e-13, atol=1e-15)
    e = evaluate(ctxs[0], ws[0])
    assert e.value == pytest.approx(e.boundary_term + e.smooth_part + e.taylor_part + e.planewave_part)
    assert len(e.roots_used) == MILD.degree


def test_double_root_target_uses_stable_path():
    prob = LayerProblem(boundary=PARABOLA)
    ctx = build_context(prob, P=50, N=36)
    offs = np.concatenate([[0.0], np.logspace(-12, -1, 12)])
    ws = 0.25j + offs
    b = evaluate_many(ctx, ws)
    assert b.stable_path_used[0]
    err = np.abs(b.values() - reference_many(prob, ws).values)
    assert err.max() <= 1e-13


def test_flat_curved_consistency():
    eps = 1e-3
    curved = LayerProblem(boundary=BoundarySegment((0, 0, eps)))
    a = evaluate_many(build_context(curved, P=50, N=36), [0.3j, -0.31j, 0.1 + 0.32j]).values()
    b = evaluate_many(build_context(LayerProblem(), P=50, N=36), [0.3j, -0.31j, 0.1 + 0.32j]).values()
    assert np.abs(a - b).max() <= 10 * eps * np.abs(b).max()


@pytest.mark.parametrize("layer", ["single", "double"])
def test_pde_residual_of_qb2x(layer, rng):
    prob = LayerProblem(boundary=MILD, layer=layer, density=DensitySpec.cosine(3))
    ctx = build_context(prob, P=100, N=36)
    h = 1e-3
    ws = []
    while len(ws) < 8:
        w = complex(*rng.uniform(-0.3, 0.3, 2))
        if MILD.distance(w) >= 0.2:
            ws.append(w)
    offs = np.array([0, h, -h, 1j * h, -1j * h])
    u = evaluate_many(ctx, (np.array(ws)[:, None] + offs).ravel()).values().reshape(-1, 5)
    lap = (u[:, 1:].sum(axis=1) - 4 * u[:, 0]) / h ** 2
    assert np.abs(lap + u[:, 0]).max() <= 1e-4


@pytest.mark.parametrize("seg", [BoundarySegment.flat(), MILD, EXTREME], ids=["flat", "mild", "extreme"])
def test_on_boundary_single_layer(seg):
    prob = LayerProblem(boundary=seg)
    ctx = build_context(prob, P=100, N=36 if seg.degree < 4 else 12)
    ts = np.linspace(-0.3, 0.3, 5)
    ws = seg.z(ts)
    up = evaluate_many(ctx, ws, "upper_limit").values()
    lo = evaluate_many(ctx, ws, "lower_limit").values()
    ref = np.array([reference_on_boundary_single(prob, t).value for t in ts])
    assert np.abs(up - ref).max() <= 1e-9
    assert np.abs(lo - ref).max() <= 1e-9
    with pytest.raises(AmbiguousSideError):
        evaluate(ctx, ws[2])


def test_on_boundary_double_layer_jump():
    prob = LayerProblem(boundary=MILD, layer="double", density=DensitySpec.cosine(2))
    ctx = build_context(prob, P=100, N=36)
    ts = np.array([-0.2, 0.0, 0.25])
    ws = MILD.z(ts)
    up = evaluate_many(ctx, ws, "upper_limit").values()
    lo = evaluate_many(ctx, ws, "lower_limit").values()
    np.testing.assert_allclose(up - lo, np.cos(2 * ts), atol=1e-9)
    # each side is the limit of off-curve oracle values
    nrm = (-MILD.ds(ts) + 1j) / np.hypot(1, MILD.ds(ts))
    for side, sgn in ((up, 1), (lo, -1)):
        u4 = reference_many(prob, ws + sgn * 1e-4 * nrm).values
        u5 = reference_many(prob, ws + sgn * 1e-5 * nrm).values
        np.testing.assert_allclose(side, (10 * u5 - u4) / 9, atol=1e-8)


def test_digit_table_helper():
    assert [suggest_order(d) for d in (3, 6, 9, 12)] == [9, 18, 27, 36]
    assert suggest_order(12, 1 / 15) == 10
    with pytest.raises(ValueError):
        suggest_order(3, 1.5)


def test_context_validation():
    with pytest.raises(ValueError):
        build_context(LayerProblem(), P=4, N=4, c=2.0)
    with pytest.raises(ValueError):
        build_context(LayerProblem(), P=4, N=4, table=np.zeros((3, 3)))
