import json
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qb2x.config import parse_config
from qb2x.experiments import grid_points, reference_values, select_targets

settings.register_profile("qb2x", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qb2x")

HERE = os.path.dirname(__file__)
_REPORT = []


@pytest.fixture(scope="session")
def oracle_values():
    with open(os.path.join(HERE, "oracle_values.json")) as fh:
        return json.load(fh)


def cval(pair):
    return complex(pair[0], pair[1])


class GridCache:
    """Oracle values on the default 41x41 grid, computed once per configuration."""

    def __init__(self):
        self._store = {}

    def get(self, data):
        key = json.dumps(data, sort_keys=True)
        if key not in self._store:
            cfg = parse_config(data)
            pts = grid_points(cfg.box, cfg.nx, cfg.ny)
            ws, _ = select_targets(cfg.problem.boundary, pts, cfg.exclude)
            self._store[key] = (cfg, ws, reference_values(cfg, ws))
        return self._store[key]


@pytest.fixture(scope="session")
def grids():
    return GridCache()


@pytest.fixture(scope="session")
def report():
    """Collects one PASS/FAIL line per acceptance criterion."""
    def add(tag, ok, detail):
        line = f"{tag} {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        _REPORT.append(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
