import subprocess
import sys

import pytest


def run_omsteer(*args: str) -> None:
    """Invoke the sweep tool through its public CLI."""
    proc = subprocess.run([sys.executable, "-m", "omsteer", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("csv")


@pytest.fixture(scope="session")
def fig3b_csv(csv_dir):
    path = csv_dir / "fig3b.csv"
    run_omsteer("preset", "fig3b", "--set", "sweep.axes.0.count=41",
                "--out", str(path))
    return path


@pytest.fixture(scope="session")
def fig3a_csv(csv_dir):
    path = csv_dir / "fig3a.csv"
    run_omsteer("preset", "fig3a", "--set", "sweep.axes.1.count=41",
                "--out", str(path))
    return path


@pytest.fixture(scope="session")
def fig2a_csv(csv_dir):
    path = csv_dir / "fig2a.csv"
    run_omsteer("preset", "fig2a", "--set", "sweep.axes.0.count=21",
                "--set", "sweep.axes.1.count=21", "--jobs", "2",
                "--out", str(path))
    return path


@pytest.fixture(scope="session")
def fig5b_csv(csv_dir):
    path = csv_dir / "fig5b.csv"
    run_omsteer("preset", "fig5b", "--set", "sweep.axes.0.count=21",
                "--set", "sweep.axes.1.count=21", "--jobs", "2",
                "--out", str(path))
    return path
