"""Fixtures that produce real run outputs through the attrep CLI.

plotkit consumes the simulator only through its external interfaces:
scenario YAML in, CSV files out.  Nothing here imports attrep.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest
import yaml

DESK_RATES_MIXED = {
    "chain": {
        "mu": {"kind": "uniform", "lo": 0.1, "hi": 0.5},
        "theta": {"kind": "mu_anchored", "base": 1.1},
    },
    "other": {
        "mu": {"kind": "uniform", "lo": 0.0, "hi": 0.5},
        "theta": {"kind": "mu_anchored", "base": 1.0},
    },
}

DESK_RATES_ATTRACTION = {
    "chain": {
        "mu": {"kind": "uniform", "lo": 0.1, "hi": 0.5},
        "theta": {"kind": "point", "value": 1.0},
    },
    "other": {
        "mu": {"kind": "uniform", "lo": 0.0, "hi": 0.5},
        "theta": {"kind": "point", "value": 1.0},
    },
}


def _generate(tmp_dir: Path, name: str, scenario: dict) -> Path:
    scenario_path = tmp_dir / f"{name}.yaml"
    scenario_path.write_text(yaml.safe_dump(scenario))
    out = tmp_dir / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "attrep", "run", "--scenario", str(scenario_path), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="session")
def thm1_desk_out(tmp_path_factory) -> Path:
    """Desk-scale mixed-sign run: n=20, m=3, horizon 5000."""
    scenario = {
        "name": "thm1-desk",
        "n": 20,
        "m": 3,
        "horizon": 5000,
        "seed": 1,
        "graph": {"kind": "er_chain", "p": 0.05},
        "matcher": "chain_forced",
        "rates": DESK_RATES_MIXED,
        "init": {"kind": "uniform01"},
    }
    return _generate(tmp_path_factory.mktemp("thm1_desk"), "thm1-desk", scenario)


@pytest.fixture(scope="session")
def thm2_desk_out(tmp_path_factory) -> Path:
    """Desk-scale pure-attraction run with heavy-tailed initial opinions."""
    scenario = {
        "name": "thm2-desk",
        "n": 20,
        "m": 3,
        "horizon": 2000,
        "seed": 1,
        "graph": {"kind": "er_chain", "p": 0.05},
        "matcher": "uniform",
        "rates": DESK_RATES_ATTRACTION,
        "init": {"kind": "cauchy", "loc": 0.0, "scale": 1.0},
    }
    return _generate(tmp_path_factory.mktemp("thm2_desk"), "thm2-desk", scenario)
