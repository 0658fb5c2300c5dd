"""Closed-form symmetric equilibrium and its atom fixed point.

For ``mu <= 1/n`` every player draws from ``F(x) = (x / (n mu))**(1/(n-1))``
on ``[0, n mu]``. Above that threshold each player also puts weight ``a`` on
1, where ``a = mu * (1 - (1 - a)**n)``, and the continuous part is
``(1 - a) * (x / s)**(1/(n-1))`` on ``[0, s]`` with ``s = n mu (1 - a)**(n-1)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from maxgame.types import (
    ATOM,
    AtomOne,
    Continuous,
    ConvergenceFailure,
    DiscreteDistribution,
    DomainError,
    GameConfig,
    Realization,
    merge_points,
    validate_config,
)

BISECT_EPS = 1e-16
BISECT_MAX_ITER = 200
PHI_TOL = 1e-14
LIMIT_THRESHOLD = 1e-13
BOUNDARY_SLACK = 1e-15
LOG_DOMAIN_N = 50

SWEEP_HEADER = ("n", "mu", "a", "s", "regime")


class Regime(str, enum.Enum):
    INTERIOR = "Interior"
    ATOM = "Atom"

    def __str__(self) -> str:
        return self.value


def _power(base, exponent: float, n: int):
    """``base**exponent`` with 0**p = 0; log-domain for large n."""
    base = np.asarray(base, dtype=float)
    if n > LOG_DOMAIN_N:
        with np.errstate(divide="ignore"):
            out = np.exp(exponent * np.log(base))
    else:
        out = np.power(base, exponent)
    return np.where(base == 0.0, 0.0, out)


def _survival_power(a: float, k: int) -> float:
    """(1 - a)**k, accurate for small a."""
    if a == 0.0:
        return 1.0
    if a == 1.0:
        return 0.0 if k > 0 else 1.0
    return math.exp(k * math.log1p(-a))


@dataclass(frozen=True)
class EquilibriumStrategy:
    """Power-law continuous part on ``[0, s]`` plus weight ``a`` at 1.

    ``solve`` returns the equilibrium member of this family. Other members
    can be built with :meth:`candidate` for testing the oracle.
    """

    config: GameConfig
    regime: Regime
    a: float
    s: float

    def __post_init__(self):
        if not (0.0 <= self.a < 1.0):
            raise DomainError(f"atom weight must lie in [0, 1), got {self.a!r}")
        if not (0.0 < self.s <= 1.0):
            raise DomainError(f"support bound must lie in (0, 1], got {self.s!r}")

    @classmethod
    def candidate(cls, cfg: GameConfig, a: float) -> "EquilibriumStrategy":
        """Member of the family with atom ``a`` and the mean-preserving bound."""
        s = cfg.n * (cfg.mu - a) / (1.0 - a)
        regime = Regime.ATOM if a > 0.0 else Regime.INTERIOR
        return cls(cfg, regime, a, s)

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def mu(self) -> float:
        return self.config.mu

    @property
    def exponent(self) -> float:
        return 1.0 / (self.config.n - 1)

    def mean(self) -> float:
        return self.a + (1.0 - self.a) * self.s / self.config.n

    def cdf(self, x):
        return cdf(self, x)

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Inverse-CDF draws for uniforms in [0, 1); atoms encode as ATOM."""
        u = np.asarray(u, dtype=float)
        cont = 1.0 - self.a
        x = self.s * _power(u / cont, self.n - 1.0, self.n)
        return np.where(u < cont, np.minimum(x, np.nextafter(1.0, 0.0)), ATOM)

    def to_dict(self) -> dict:
        return {
            "n": self.config.n,
            "mu": self.config.mu,
            "regime": str(self.regime),
            "a": self.a,
            "s": self.s,
            "exponent": self.exponent,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EquilibriumStrategy":
        cfg = validate_config(data["n"], data["mu"])
        return cls(cfg, Regime(data["regime"]), float(data["a"]), float(data["s"]))


def _phi(b: float, n: int, mu: float) -> float:
    """(1 - b) / (1 - b**n) - mu, decreasing in b on [0, 1]."""
    if abs(1.0 - b) < LIMIT_THRESHOLD:
        return 1.0 / n - mu
    denom = -math.expm1(n * math.log(b)) if b > 0.0 else 1.0
    return (1.0 - b) / denom - mu


def is_interior(cfg: GameConfig) -> bool:
    return cfg.n * cfg.mu <= 1.0 + BOUNDARY_SLACK


def solve_atom(cfg: GameConfig) -> float:
    """Weight on 1 in the symmetric equilibrium.

    Bisects ``phi(b) = (1 - b)/(1 - b**n) - mu`` over ``b = 1 - a``; the
    root is unique because ``phi`` is strictly decreasing.
    """
    if is_interior(cfg):
        return 0.0
    n, mu = cfg.n, cfg.mu
    lo, hi = BISECT_EPS, 1.0 - BISECT_EPS
    f_lo = _phi(lo, n, mu)
    if f_lo <= 0.0 or _phi(hi, n, mu) >= 0.0:
        raise ConvergenceFailure(f"no sign change for n={n}, mu={mu}")
    best_b, best_f = lo, f_lo
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = _phi(mid, n, mu)
        if abs(f_mid) < abs(best_f):
            best_b, best_f = mid, f_mid
        if f_mid == 0.0 or (abs(f_mid) <= PHI_TOL and hi - lo <= 4 * math.ulp(mid)):
            break
        if mid <= lo or mid >= hi:
            break
        if f_mid > 0.0:
            lo = mid
        else:
            hi = mid
    if abs(best_f) > PHI_TOL:
        raise ConvergenceFailure(f"|phi| = {abs(best_f):.3e} after bisection (n={n}, mu={mu})")
    return 1.0 - best_b


def solve(cfg: GameConfig) -> EquilibriumStrategy:
    if is_interior(cfg):
        return EquilibriumStrategy(cfg, Regime.INTERIOR, 0.0, min(cfg.n * cfg.mu, 1.0))
    a = solve_atom(cfg)
    s = cfg.n * cfg.mu * _survival_power(a, cfg.n - 1)
    return EquilibriumStrategy(cfg, Regime.ATOM, a, s)


def cdf(eq: EquilibriumStrategy, x):
    """P(X <= x). Scalars in, float out; arrays in, array out."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise DomainError("cdf is defined on [0, 1]")
    body = (1.0 - eq.a) * _power(np.minimum(arr, eq.s) / eq.s, eq.exponent, eq.n)
    out = np.where(arr >= 1.0, 1.0, body)
    return float(out) if out.ndim == 0 else out


def quantile(eq: EquilibriumStrategy, u: float) -> Realization:
    if not (0.0 <= u < 1.0):
        raise DomainError("quantile needs u in [0, 1)")
    value = float(eq.sample(np.array([u]))[0])
    return AtomOne if value == ATOM else Continuous(value)


def sweep(mu: float, n_min: int, n_max: int) -> list[EquilibriumStrategy]:
    """Equilibria for n = n_min..n_max at fixed mu."""
    if not (2 <= n_min <= n_max):
        raise DomainError(f"need 2 <= n_min <= n_max, got {n_min}..{n_max}")
    return [solve(validate_config(n, mu)) for n in range(n_min, n_max + 1)]


def sweep_csv(rows: list[EquilibriumStrategy]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for eq in rows:
        writer.writerow(
            [eq.n, format(eq.mu, ".17g"), format(eq.a, ".17g"), format(eq.s, ".17g"), eq.regime]
        )
    return buf.getvalue()


def power_law_cells(
    weight: float, t: float, s: float, exponent: float, m: int
) -> tuple[np.ndarray, np.ndarray]:
    """Equal-mass cells of ``weight * ((x - t)/(s - t))**exponent`` on [t, s].

    Each cell is represented by its conditional mean, so the discretized
    law keeps the exact first moment.
    """
    j = np.arange(m + 1, dtype=float)
    frac = j / m                       # F / weight at cell edges
    u = np.power(frac, 1.0 / exponent)  # (x - t)/(s - t) at cell edges
    k = exponent
    first = (s - t) * k / (k + 1.0) * np.diff(frac * u)
    ps = np.full(m, weight / m)
    xs = t + first / np.diff(frac)
    return xs, ps


def discretize(eq: EquilibriumStrategy, m: int = 10_000) -> DiscreteDistribution:
    """m-cell mean-preserving discretization; the atom at 1 stays exact."""
    xs, ps = power_law_cells(1.0 - eq.a, 0.0, eq.s, eq.exponent, m)
    if eq.a > 0.0:
        xs = np.append(xs, 1.0)
        ps = np.append(ps, eq.a)
    xs, ps = merge_points(xs, ps)
    return DiscreteDistribution.from_arrays(xs, ps)
