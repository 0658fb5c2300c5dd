import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxgame import (
    AtomOne,
    Continuous,
    DomainError,
    GameConfig,
    Regime,
    cdf,
    discretize,
    quantile,
    solve,
    solve_atom,
    sweep,
)
from maxgame.solver import SWEEP_HEADER, _phi, sweep_csv

from conftest import random_configs
from oracles import atom_weight_mp, support_bound_mp

GOLDEN = (3 - math.sqrt(5)) / 2  # nonzero root of a^2 - 3a + 1


@pytest.mark.parametrize(
    "n, mu, expected",
    [
        (4, 0.25, 0.0),
        (2, 0.75, 2 / 3),
        (3, 0.5, GOLDEN),
    ],
)
def test_solve_atom_examples(n, mu, expected):
    assert solve_atom(GameConfig(n, mu)) == pytest.approx(expected, abs=1e-12)


def test_solve_atom_matches_independent_bisection():
    for cfg in random_configs(60, seed=1):
        ref = float(atom_weight_mp(cfg.n, cfg.mu))
        assert solve_atom(cfg) == pytest.approx(ref, abs=1e-12)


def test_phi_residual_small_at_root():
    for cfg in random_configs(60, seed=2, mu_lo=0.2):
        a = solve_atom(cfg)
        if a > 0:
            assert abs(_phi(1 - a, cfg.n, cfg.mu)) <= 1e-14


def test_phi_limit_near_one():
    assert _phi(1.0 - 1e-15, 4, 0.5) == pytest.approx(0.25 - 0.5)


@pytest.mark.parametrize(
    "n, mu, regime, a, s",
    [
        (2, 0.3, Regime.INTERIOR, 0.0, 0.6),
        (2, 0.75, Regime.ATOM, 2 / 3, 0.5),
        (3, 1 / 3, Regime.INTERIOR, 0.0, 1.0),
    ],
)
def test_solve_examples(n, mu, regime, a, s):
    eq = solve(GameConfig(n, mu))
    assert eq.regime is regime
    assert eq.a == pytest.approx(a, abs=1e-12)
    assert eq.s == pytest.approx(s, abs=1e-12)
    assert eq.exponent == pytest.approx(1 / (n - 1))


def test_just_above_boundary_is_atom_regime():
    eq = solve(GameConfig(4, 0.25 + 1e-9))
    assert eq.regime is Regime.ATOM
    assert 0 < eq.a < 1e-7
    assert eq.s < 1


@pytest.mark.parametrize("cfg", random_configs(200, seed=3))
def test_equilibrium_invariants(cfg):
    eq = solve(cfg)
    n, mu, a, s = cfg.n, cfg.mu, eq.a, eq.s
    assert (eq.regime is Regime.INTERIOR) == (n * mu <= 1)
    if eq.regime is Regime.INTERIOR:
        assert a == 0 and s == pytest.approx(n * mu, abs=1e-15)
    else:
        assert 0 < a <= mu and 0 < s < 1
        assert abs(a - mu * (1 - (1 - a) ** n)) <= 1e-12
        assert abs(s - n * (mu - a) / (1 - a)) <= 1e-10
        assert abs(s - float(support_bound_mp(n, mu, atom_weight_mp(n, mu)))) <= 1e-10
    assert abs(a + (1 - a) * s / n - mu) <= 1e-12


def test_fixed_point_inequality_flips_below_solution():
    for cfg in random_configs(40, seed=4, mu_lo=0.5):
        a = solve_atom(cfg)
        if a == 0 or a < 1e-5 or cfg.mu - a < 1e-5:
            continue
        lower = a - 1e-6
        upper = a + 1e-6
        assert lower < cfg.mu * (1 - (1 - lower) ** cfg.n)
        assert upper > cfg.mu * (1 - (1 - upper) ** cfg.n)


@pytest.mark.parametrize(
    "n, mu, x, expected",
    [
        (2, 0.3, 0.3, 0.5),
        (2, 0.75, 1.0, 1.0),
        (3, 1 / 3, 0.25, 0.5),
    ],
)
def test_cdf_examples(n, mu, x, expected):
    assert cdf(solve(GameConfig(n, mu)), x) == pytest.approx(expected, abs=1e-12)


def test_cdf_endpoints_and_plateau():
    eq = solve(GameConfig(2, 0.75))
    assert cdf(eq, 0.0) == 0.0
    assert cdf(eq, 0.8) == pytest.approx(1 / 3)
    assert cdf(eq, 1.0) == 1.0


@pytest.mark.parametrize("x", [-0.01, 1.01, math.nan])
def test_cdf_domain(x):
    with pytest.raises(DomainError):
        cdf(solve(GameConfig(2, 0.5)), x)


@settings(max_examples=200)
@given(
    st.integers(2, 80),
    st.floats(0.01, 0.99),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
)
def test_cdf_monotone(n, mu, x1, x2):
    eq = solve(GameConfig(n, mu))
    lo, hi = sorted((x1, x2))
    assert cdf(eq, lo) <= cdf(eq, hi)


@pytest.mark.parametrize(
    "n, mu, u, expected",
    [
        (2, 0.3, 0.5, Continuous(0.3)),
        (2, 0.75, 0.9, AtomOne),
        (5, 0.6, 0.0, Continuous(0.0)),
    ],
)
def test_quantile_examples(n, mu, u, expected):
    got = quantile(solve(GameConfig(n, mu)), u)
    assert got.atom == expected.atom
    assert got.x == pytest.approx(expected.x, abs=1e-15)


@settings(max_examples=200)
@given(st.integers(2, 60), st.floats(0.01, 0.99), st.floats(0.0, 1.0, exclude_max=True))
def test_quantile_round_trip(n, mu, u):
    eq = solve(GameConfig(n, mu))
    r = quantile(eq, u)
    if u < 1 - eq.a:
        assert not r.atom
        # for large n, s * v**(n-1) can fall below the normal float range
        if u == 0.0 or r.x >= sys.float_info.min:
            assert abs(cdf(eq, r.x) - u) <= 1e-10
    else:
        assert r is AtomOne


@pytest.mark.parametrize("u", [-0.1, 1.0])
def test_quantile_domain(u):
    with pytest.raises(DomainError):
        quantile(solve(GameConfig(2, 0.5)), u)


def test_sweep_small():
    rows = sweep(0.5, 2, 3)
    assert [(r.n, r.regime) for r in rows] == [(2, Regime.INTERIOR), (3, Regime.ATOM)]
    assert rows[0].a == 0 and rows[0].s == 1
    assert rows[1].a == pytest.approx(GOLDEN, abs=1e-12)
    assert rows[1].s == pytest.approx(0.5729490168751577, abs=1e-12)
    assert rows[1].s == pytest.approx(1.5 * (1 - GOLDEN) ** 2, abs=1e-12)


def test_sweep_large_n_approaches_mu():
    (row,) = sweep(0.5, 20, 20)
    assert abs(row.a - 0.5) <= 1e-5
    assert row.a == pytest.approx(float(atom_weight_mp(20, 0.5)), abs=1e-14)


def test_sweep_interior_throughout():
    rows = sweep(0.1, 2, 5)
    assert all(r.regime is Regime.INTERIOR and r.a == 0 for r in rows)
    assert [r.s for r in rows] == pytest.approx([0.2, 0.3, 0.4, 0.5])


@pytest.mark.parametrize("mu", [0.3, 0.5, 0.7, 0.95])
def test_sweep_monotone_in_atom_regime(mu):
    # once mu - a drops below ~1e-12 consecutive a values round to equal doubles
    rows = [r for r in sweep(mu, 2, 40) if r.regime is Regime.ATOM and mu - r.a > 1e-12]
    assert len(rows) >= 2
    assert all(b.a > a.a for a, b in zip(rows, rows[1:]))
    assert all(b.s < a.s for a, b in zip(rows, rows[1:]))


def test_sweep_rejects_bad_range():
    with pytest.raises(DomainError):
        sweep(0.5, 5, 2)


def test_sweep_csv_format():
    text = sweep_csv(sweep(0.5, 2, 3))
    lines = text.splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER) == "n,mu,a,s,regime"
    assert lines[1] == "2,0.5,0,1,Interior"
    n, mu, a, s, regime = lines[2].split(",")
    assert float(a) == solve(GameConfig(3, 0.5)).a  # 17 digits round-trip
    assert regime == "Atom"


def test_scaling_between_interior_means():
    gen = np.random.default_rng(5)
    for _ in range(100):
        n = int(gen.integers(2, 20))
        mu, mu2 = gen.uniform(1e-3, 1 / n, size=2)
        eq, eq2 = solve(GameConfig(n, mu)), solve(GameConfig(n, mu2))
        xs = np.linspace(0, n * mu, 17)
        assert np.allclose(cdf(eq, xs), cdf(eq2, np.minimum(xs * mu2 / mu, 1.0)), atol=1e-12, rtol=0)


@pytest.mark.parametrize("n, mu", [(2, 0.3), (2, 0.75), (3, 0.5), (12, 0.9), (80, 0.6)])
def test_discretize_keeps_mean(n, mu):
    eq = solve(GameConfig(n, mu))
    d = discretize(eq, 2000)
    assert d.mean() == pytest.approx(mu, abs=1e-12)
    assert d.atom_weight == pytest.approx(eq.a, abs=0)


def test_large_n_log_domain():
    eq = solve(GameConfig(200, 0.3))
    assert eq.regime is Regime.ATOM
    xs = np.linspace(0, 1, 101)
    vals = cdf(eq, xs)
    assert np.all(np.diff(vals) >= 0) and vals[0] == 0.0 and vals[-1] == 1.0


def test_strategy_dict_round_trip():
    eq = solve(GameConfig(7, 0.41))
    from maxgame import EquilibriumStrategy

    assert EquilibriumStrategy.from_dict(eq.to_dict()) == eq


def test_quantile_underflow_stays_continuous():
    eq = solve(GameConfig(46, 0.5))
    r = quantile(eq, 5.960464477539063e-08)
    assert not r.atom and r.x == 0.0
