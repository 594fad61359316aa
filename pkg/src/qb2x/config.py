"""Experiment configuration: JSON parsing, validation and presets."""
import copy
import json
from dataclasses import dataclass, field

from .boundary import BoundarySegment
from .kernels import DensitySpec, LayerProblem

METHODS = ("qb2x", "qbx", "oracle")
SIDES = (None, "upper_limit", "lower_limit")


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


DEFAULTS = {
    "problem": {
        "boundary": {"s_coeffs": [0.0, 0.0]},
        "density": {"kind": "const"},
        "k": 1.0,
        "layer": "single",
    },
    "method": "qb2x",
    "P": 50,
    "N": 36,
    "center": None,
    "qbx": {"center": [0.0, -1 / 3], "quad_order": None},
    "grid": {"nx": 41, "ny": 41, "box": [-1 / 3, 1 / 3, -1 / 3, 1 / 3], "exclude": 1e-3},
    "side": None,
    "fourier": {"oversampling": 2.0, "eps_reg": 1e-14},
    "oracle": {"tol": 1e-14},
    "output": {"csv": None, "summary": None, "svg": None},
    "cache_dir": None,
    "seed": 0,
}

PRESETS = {
    "flat-const": {"problem": {"density": {"kind": "const"}}, "P": 50},
    "flat-cos20": {"problem": {"density": {"kind": "cosine", "f": 20}}, "P": 50},
    "flat-poly": {"problem": {"density": {"kind": "poly", "coeffs": [0.75, 0.5, 0.5]}}, "P": 50},
    "curved-mild": {"problem": {"boundary": {"s_coeffs": [0, 0, 1, 0.1, -2]}}, "P": 100},
    "curved-extreme": {"problem": {"boundary": {"s_coeffs": [0, 0, 2, 0, 5]}}, "P": 100, "N": 12},
    "curved-extreme-k10": {"problem": {"boundary": {"s_coeffs": [0, 0, 2, 0, 5]}, "k": 10.0},
                           "P": 300, "N": 12},
}


def _merge(base, over):
    out = copy.deepcopy(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    problem: LayerProblem
    method: str = "qb2x"
    P: int = 50
    N: int = 36
    center: complex = None
    qbx_center: complex = -1j / 3
    qbx_quad_order: int = None
    nx: int = 41
    ny: int = 41
    box: tuple = (-1 / 3, 1 / 3, -1 / 3, 1 / 3)
    exclude: float = 1e-3
    side: str = None
    oversampling: float = 2.0
    eps_reg: float = 1e-14
    oracle_tol: float = 1e-14
    csv: str = None
    summary: str = None
    svg: str = None
    cache_dir: str = None
    seed: int = 0
    raw: dict = field(default_factory=dict, repr=False, compare=False)


def _num(d, key, kind=float, lo=None, strict=False):
    try:
        v = kind(d[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: expected {kind.__name__}") from exc
    if lo is not None and (v <= lo if strict else v < lo):
        raise ConfigError(f"{key}: must be {'>' if strict else '>='} {lo}, got {v}")
    return v


def _complex(v, key):
    if v is None:
        return None
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{key}: expected [x, y]")


def parse_config(data):
    """Validate a config mapping (user values over DEFAULTS) into an ExperimentConfig."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - set(DEFAULTS) - {"preset"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    base = DEFAULTS
    if "preset" in data:
        if data["preset"] not in PRESETS:
            raise ConfigError(f"unknown preset {data['preset']!r}")
        base = _merge(DEFAULTS, PRESETS[data["preset"]])
    cfg = _merge(base, {k: v for k, v in data.items() if k != "preset"})
    pr = cfg["problem"]
    try:
        seg = BoundarySegment.from_config(pr["boundary"])
        dens = DensitySpec.from_config(pr["density"])
        prob = LayerProblem(boundary=seg, k=_num(pr, "k", lo=0, strict=True),
                            layer=pr["layer"], density=dens)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"problem: {exc}") from exc
    if cfg["method"] not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    if cfg["side"] not in SIDES:
        raise ConfigError(f"side must be one of {SIDES}")
    g = cfg["grid"]
    box = g["box"]
    if not (isinstance(box, (list, tuple)) and len(box) == 4 and box[0] < box[1] and box[2] < box[3]):
        raise ConfigError("grid.box must be [xmin, xmax, ymin, ymax] with min < max")
    q = cfg["qbx"]
    fo = cfg["fourier"]
    out = cfg["output"]
    return ExperimentConfig(
        problem=prob, method=cfg["method"], P=_num(cfg, "P", int, 1), N=_num(cfg, "N", int, 0),
        center=_complex(cfg["center"], "center"), qbx_center=_complex(q["center"], "qbx.center"),
        qbx_quad_order=None if q["quad_order"] is None else _num(q, "quad_order", int, 1),
        nx=_num(g, "nx", int, 1), ny=_num(g, "ny", int, 1), box=tuple(float(b) for b in box),
        exclude=_num(g, "exclude", float, 0), side=cfg["side"],
        oversampling=_num(fo, "oversampling", float, 2), eps_reg=_num(fo, "eps_reg", float, 0, True),
        oracle_tol=_num(cfg["oracle"], "tol", float, 0, True),
        csv=out["csv"], summary=out["summary"], svg=out["svg"], cache_dir=cfg["cache_dir"],
        seed=_num(cfg, "seed", int), raw=cfg)


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return parse_config(data)
