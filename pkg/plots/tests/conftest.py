import json
import subprocess
import sys
from pathlib import Path

import pytest

CONFIG_DIR = Path(__file__).resolve().parents[2] / "demos" / "configs"


def run_experiment(config_path: Path, out_dir: Path) -> Path:
    """Run a cesaro-lab config through its CLI; returns the CSV path."""
    proc = subprocess.run(
        [sys.executable, "-m", "cesarolab.cli", "run", str(config_path), "--out-dir", str(out_dir)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    basename = json.loads(config_path.read_text())["output"]["basename"]
    return out_dir / f"{basename}.csv"


@pytest.fixture(scope="session")
def acceptance_csvs(tmp_path_factory):
    """CSV outputs of the acceptance-scale configs, built once per session."""
    out = tmp_path_factory.mktemp("acceptance_runs")
    names = [
        "a1_counterexample",
        "a2_l1_counterexample",
        "a3_l1_power_law",
        "a4_expbound",
        "a8_bayes_risk",
        "a8_mar_mean",
    ]
    return {name: run_experiment(CONFIG_DIR / f"{name}.json", out) for name in names}


@pytest.fixture(scope="session")
def quick_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("quick_run")
    return run_experiment(CONFIG_DIR / "counterexample_quick.json", out)
