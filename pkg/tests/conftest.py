import os
import subprocess
import sys

import numpy as np
import pytest

from maxgame import GameConfig


def run_cli(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "maxgame", *map(str, args)],
        capture_output=True,
        text=True,
        env=full_env,
        cwd=cwd,
    )


@pytest.fixture
def cli():
    return run_cli


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_configs(count, seed, n_max=30, mu_lo=0.01, mu_hi=0.99):
    """Reproducible (n, mu) pairs spread across both regimes."""
    gen = np.random.default_rng(seed)
    ns = gen.integers(2, n_max + 1, size=count)
    mus = gen.uniform(mu_lo, mu_hi, size=count)
    return [GameConfig(int(n), float(mu)) for n, mu in zip(ns, mus)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
