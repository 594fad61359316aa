"""Error grids, convergence sweeps and the clustered-root stability demo."""
import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import mpmath
import numpy as np

from .oracle import reference_many, reference_on_boundary_single
from .qb2x import (build_context, build_flat_arc_table, build_tail_table, combined_flat_table,
                   evaluate_many, naive_cluster_residue, stable_cluster_residue, table_cache_key)
from .qbx import build_qbx, eval_qbx

CSV_COLUMNS = ("x", "y", "re_val", "im_val", "re_ref", "im_ref", "abs_err", "log10_err")


@dataclass
class ErrorGrid:
    points: np.ndarray  # complex targets, row order
    values: np.ndarray
    reference: np.ndarray
    method: str
    meta: dict

    @property
    def abs_err(self):
        return np.abs(self.values - self.reference)

    @property
    def log10_err(self):
        with np.errstate(divide="ignore"):
            return np.log10(self.abs_err)

    @property
    def linf(self):
        return float(self.abs_err.max()) if self.points.size else 0.0

    @property
    def argmax(self):
        return complex(self.points[int(np.argmax(self.abs_err))]) if self.points.size else None

    def summary(self):
        linf = self.linf
        am = self.argmax
        return {"method": self.method, "n_points": int(self.points.size), "linf_err": linf,
                "log10_linf_err": math.log10(linf) if linf > 0 else None,
                "argmax": None if am is None else [am.real, am.imag], **self.meta}

    def to_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for w, v, r, e, le in zip(self.points, self.values, self.reference, self.abs_err, self.log10_err):
            wr.writerow([f"{x:.17e}" for x in (w.real, w.imag, v.real, v.imag, r.real, r.imag, e)]
                        + ["-inf" if np.isneginf(le) else f"{le:.17e}"])
        return buf.getvalue()


def grid_points(box, nx, ny):
    """Row-major lattice (y outer, x inner) over the box, including its edges."""
    x0, x1, y0, y1 = box
    xs = np.linspace(x0, x1, nx) if nx > 1 else np.array([0.5 * (x0 + x1)])
    ys = np.linspace(y0, y1, ny) if ny > 1 else np.array([0.5 * (y0 + y1)])
    X, Y = np.meshgrid(xs, ys)
    return (X + 1j * Y).ravel()


def select_targets(seg, points, exclude):
    d = np.atleast_1d(seg.distance(points))
    return points[d > exclude], d


def thread_count():
    try:
        return max(1, int(os.environ.get("QB2X_THREADS", "1")))
    except ValueError:
        return 1


def _parallel_chunks(fn, ws, chunk=256):
    """Apply fn to consecutive chunks and concatenate in order."""
    pieces = [ws[i : i + chunk] for i in range(0, ws.size, chunk)]
    n = thread_count()
    if n == 1 or len(pieces) < 2:
        out = [fn(p) for p in pieces]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            out = list(ex.map(fn, pieces))
    return out


def method_values(cfg, ws, N=None, side=None, ctx=None):
    """Values of the configured method at targets ``ws``."""
    prob = cfg.problem
    side = side or "auto"
    if cfg.method == "oracle":
        return reference_values(cfg, ws)
    if cfg.method == "qbx":
        e = build_qbx(prob, cfg.qbx_center, cfg.N, cfg.qbx_quad_order)
        return eval_qbx(e, ws, N)
    if ctx is None:
        ctx = context_for(cfg)
    parts = _parallel_chunks(lambda c: evaluate_many(ctx, c, side).values(N), ws)
    return np.concatenate(parts) if parts else np.zeros(0, complex)


def table_path(cfg, N):
    c = cfg.center
    if c is None:
        x0, x1, y0, y1 = cfg.box
        c = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    key = table_cache_key(cfg.problem.boundary, c, cfg.P, N, 1e-14)
    return os.path.join(cfg.cache_dir, f"tail-{key}.npz"), c


def load_or_build_table(cfg, N=None):
    """Tail (or flat arc) table from the cache directory, computing it if absent."""
    N = cfg.N if N is None else N
    path, c = table_path(cfg, N)
    if os.path.exists(path):
        with np.load(path) as data:
            return data["table"]
    seg = cfg.problem.boundary
    table = combined_flat_table(*build_flat_arc_table(c, cfg.P, N)) if seg.is_flat \
        else build_tail_table(seg, c, cfg.P, N)
    os.makedirs(cfg.cache_dir, exist_ok=True)
    np.savez(path, table=table)
    return table


def context_for(cfg, N=None):
    table = load_or_build_table(cfg, N) if cfg.cache_dir else None
    return build_context(cfg.problem, P=cfg.P, N=cfg.N if N is None else N, c=cfg.center, box=cfg.box,
                         oversampling=cfg.oversampling, eps_reg=cfg.eps_reg, table=table)


def reference_values(cfg, ws):
    """Oracle values; on-curve single-layer targets use the boundary oracle."""
    prob = cfg.problem
    ws = np.asarray(ws, dtype=complex)
    out = np.empty(ws.size, dtype=complex)
    d = np.atleast_1d(prob.boundary.distance(ws))
    near = d < 1e-8
    if np.any(~near):
        res = reference_many(prob, ws[~near], cfg.oracle_tol)
        if not res.converged.all():
            raise ArithmeticError("oracle did not converge at "
                                  f"{ws[~near][~res.converged][0]}")
        out[~near] = res.values
    for i in np.nonzero(near)[0]:
        t0 = prob.boundary.closest_parameter(ws[i])
        out[i] = reference_on_boundary_single(prob, t0, cfg.oracle_tol).value
    return out


def run_error_grid(cfg):
    """Evaluate the configured method and the oracle on the grid."""
    pts = grid_points(cfg.box, cfg.nx, cfg.ny)
    seg = cfg.problem.boundary
    if cfg.side is None:
        ws, _ = select_targets(seg, pts, cfg.exclude)
    else:
        # on-curve double-layer points have no reference and are dropped
        d = np.atleast_1d(seg.distance(pts))
        ws = pts[~(cfg.problem.is_double & (d < 1e-8))]
    ref = reference_values(cfg, ws)
    vals = ref.copy() if cfg.method == "oracle" else method_values(cfg, ws, side=cfg.side)
    meta = {"P": cfg.P, "N": cfg.N, "k": cfg.problem.k, "layer": cfg.problem.layer,
            "nx": cfg.nx, "ny": cfg.ny, "exclude": cfg.exclude}
    if cfg.method == "qbx":
        meta["qbx_orders"] = f"-{cfg.N}..{cfg.N}"
    return ErrorGrid(ws, vals, ref, cfg.method, meta)


def parse_n_list(spec):
    """'4:4:36' -> [4, 8, ..., 36]; '9,18' -> [9, 18]."""
    spec = str(spec).strip()
    if ":" in spec:
        parts = [int(v) for v in spec.split(":")]
        if len(parts) != 3 or parts[1] <= 0:
            raise ValueError("range must be start:step:stop with step > 0")
        return list(range(parts[0], parts[2] + 1, parts[1]))
    return [int(v) for v in spec.split(",") if v]


def run_convergence(cfg, n_list, methods=("qb2x", "qbx"), ws=None, reference=None):
    """L-infinity error per N for each method on a fixed grid.

    QB2X partial sums reuse one context built at max(n_list); QBX truncates
    one expansion built at max(n_list).
    """
    n_list = sorted(int(n) for n in n_list)
    nmax = n_list[-1]
    if ws is None:
        ws, _ = select_targets(cfg.problem.boundary, grid_points(cfg.box, cfg.nx, cfg.ny), cfg.exclude)
    ref = reference_values(cfg, ws) if reference is None else reference
    rows = {n: {"N": n} for n in n_list}
    for m in methods:
        if m == "qb2x":
            ctx = context_for(cfg, nmax)
            batches = _parallel_chunks(lambda c: evaluate_many(ctx, c), ws)
            for n in n_list:
                v = np.concatenate([b.values(n) for b in batches])
                rows[n]["qb2x"] = float(np.abs(v - ref).max())
        elif m == "qbx":
            e = build_qbx(cfg.problem, cfg.qbx_center, nmax, cfg.qbx_quad_order)
            for n in n_list:
                rows[n]["qbx"] = float(np.abs(eval_qbx(e, ws, n) - ref).max())
        else:
            raise ValueError(f"unknown method {m!r}")
    return [rows[n] for n in n_list]


def convergence_csv(rows, methods):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["N"] + [f"linf_{m}" for m in methods])
    for r in rows:
        wr.writerow([r["N"]] + [f"{r[m]:.17e}" for m in methods])
    return buf.getvalue()


def fit_rate(ns, errs, floor=1e-14):
    """Geometric rate per unit N from a log-linear fit over points above ``floor``."""
    ns = np.asarray(ns, dtype=float)
    errs = np.asarray(errs, dtype=float)
    keep = errs > floor
    if keep.sum() < 2:
        raise ValueError("need two points above the floor to fit a rate")
    slope = np.polyfit(ns[keep], np.log10(errs[keep]), 1)[0]
    return 10.0 ** slope


def boundary_line(cfg, n_points=10):
    """QB2X with both side flags at curve points, against the on-boundary oracle."""
    prob = cfg.problem
    seg = prob.boundary
    x0, x1 = cfg.box[:2]
    ts = np.linspace(x0, x1, n_points + 2)[1:-1]
    ws = seg.z(ts)
    ctx = context_for(cfg)
    up = evaluate_many(ctx, ws, "upper_limit").values()
    lo = evaluate_many(ctx, ws, "lower_limit").values()
    ref = None
    if not prob.is_double:
        ref = np.array([reference_on_boundary_single(prob, t, cfg.oracle_tol).value for t in ts])
    return ts, up, lo, ref


# ---------------------------------------------------------------- stability demo

# clustered cubic: e^{i pi z/2} / (c0 (z - r1)(z - r2)(z - r3)), p = 1
DEMO_S3 = "-4e19/(-8.7e19 + pi^2)"


def _demo_inputs_mp():
    pi = mpmath.pi
    s3 = -(mpmath.mpf("4e19") / (mpmath.mpf("-8.7e19") + pi ** 2))
    h = pi * mpmath.mpf(10) ** -10
    r1 = mpmath.mpf(1) / 5 - h + mpmath.mpc(0, 0.5)
    r2 = mpmath.mpf(1) / 5 + h + mpmath.mpc(0, 0.5)
    r3 = (mpmath.mpf("-7.9e19") + pi ** 2) / mpmath.mpf("4e19") - 1j
    return mpmath.mpc(0, 1) * s3, r1, r2, r3


def demo_inputs():
    """(c0, r1, r2, r3) rounded to double precision."""
    with mpmath.workdps(40):
        return tuple(complex(v) for v in _demo_inputs_mp())


def contour_oracle(lead, cluster, others, p=1, radius=0.5, n=128, dps=40):
    """Residue sum of e^{i p pi z/2}/(lead prod(z - r)) over ``cluster`` by an
    extended-precision trapezoid rule on a circle about the cluster centroid."""
    with mpmath.workdps(dps):
        cl = [mpmath.mpc(r) for r in cluster]
        allr = cl + [mpmath.mpc(r) for r in others]
        rc = sum(cl) / len(cl)
        tot = mpmath.mpc(0)
        for j in range(n):
            z = rc + radius * mpmath.expjpi(mpmath.mpf(2 * j) / n)
            den = mpmath.mpc(lead)
            for r in allr:
                den *= z - r
            tot += mpmath.exp(1j * p * mpmath.pi * z / 2) * (z - rc) / den
        return tot / n


def stability_demo(M=3, p=1):
    """Naive and stable residue sums for the clustered cubic, against the oracle."""
    lead, r1, r2, r3 = demo_inputs()
    naive = complex(naive_cluster_residue([r1, r2], [r3], lead, p))
    stable = complex(stable_cluster_residue([r1, r2], [r3], lead, p, M=M))
    with mpmath.workdps(40):
        lm, m1, m2, m3 = _demo_inputs_mp()
        exact = contour_oracle(lm, [m1, m2], [m3], p)
        ref = complex(exact)
        scale = abs(exact)
        naive_err = float(abs(mpmath.mpc(naive) - exact))
        stable_err = float(abs(mpmath.mpc(stable) - exact))
        ref_str = mpmath.nstr(exact, 20)
    # well separated control: spread the pair to distance 0.5
    rs1, rs2 = r1 - 0.25, r2 + 0.25
    sep_naive = complex(naive_cluster_residue([rs1, rs2], [r3], lead, p))
    sep_stable = complex(stable_cluster_residue([rs1, rs2], [r3], lead, p))
    return {"naive": naive, "stable": stable, "reference": ref, "reference_str": ref_str,
            "naive_abs_err": naive_err, "stable_abs_err": stable_err,
            "stable_rel_err": stable_err / float(scale), "M": M, "p": p,
            "separated_diff": abs(sep_naive - sep_stable)}
