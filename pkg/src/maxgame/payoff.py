"""Win probability of a single realization against n - 1 fixed opponents.

A deviation's expected payoff is the win curve integrated against it, so
everything the oracle and the tests need reduces to evaluating ``w(x)``.

Tie convention: the multi-way tie term is written either as
``sum_i C(n-1, i) / (n - i) * b**i * a**(n-1-i)`` (``i`` opponents strictly
below the deviator at the top) or as ``sum_j C(n-1, j) / (j + 1) * p**j * q**(n-1-j)``
(``j`` opponents tying). The first reading is ``tie_split_sum``, the second
is used for discrete opponents; the brute-force tests check both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from maxgame.solver import EquilibriumStrategy, _survival_power
from maxgame.types import DiscreteDistribution, DomainError


def tie_split_closed(a: float, n: int) -> float:
    """Win probability of a draw at 1 when each opponent sits at 1 w.p. ``a``.

    Equals ``(1 - (1 - a)**n) / (n a)``.
    """
    if not (0.0 < a <= 1.0):
        raise DomainError(f"need 0 < a <= 1, got {a!r}")
    if n < 2:
        raise DomainError(f"need n >= 2, got {n!r}")
    if a == 1.0:
        return 1.0 / n
    return -math.expm1(n * math.log1p(-a)) / (n * a)


def tie_split_sum(a: float, n: int) -> float:
    if not (0.0 < a <= 1.0):
        raise DomainError(f"need 0 < a <= 1, got {a!r}")
    if n < 2:
        raise DomainError(f"need n >= 2, got {n!r}")
    b = 1.0 - a
    return math.fsum(
        math.comb(n - 1, i) / (n - i) * b**i * a ** (n - 1 - i) for i in range(n)
    )


class WinCurve:
    """``w(x)`` for x in [0, 1]; x = 1 means the atom at 1."""

    n: int
    w_atom: float

    def __call__(self, x):
        raise NotImplementedError

    def breakpoints(self) -> list[float]:
        """Points the sampling grid must contain exactly."""
        return [0.0, 1.0]

    def atoms(self) -> list[float]:
        """Opponent atom locations in [0, 1)."""
        return []

    def lipschitz(self) -> float:
        """Slope bound of w on its continuous pieces."""
        return 0.0

    def grid(self, m: int, extra=()) -> np.ndarray:
        xs = np.linspace(0.0, 1.0, m)
        return np.unique(np.concatenate((xs, self.breakpoints(), np.asarray(extra, float))))

    def sample(self, m: int, extra=()) -> tuple[np.ndarray, np.ndarray]:
        xs = self.grid(m, extra)
        return xs, self(xs)


@dataclass(frozen=True)
class EquilibriumWinCurve(WinCurve):
    eq: EquilibriumStrategy

    @property
    def n(self) -> int:
        return self.eq.n

    @property
    def plateau(self) -> float:
        """(1 - a)**(n - 1): chance all opponents land in the continuous part."""
        return _survival_power(self.eq.a, self.eq.n - 1)

    @property
    def w_atom(self) -> float:
        return tie_split_closed(self.eq.a, self.eq.n) if self.eq.a > 0.0 else 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        eq = self.eq
        # max of n-1 opponents has CDF plateau * x / s on [0, s]
        body = self.plateau * np.minimum(x, eq.s) / eq.s
        out = np.where(x >= 1.0, self.w_atom, body)
        return float(out) if out.ndim == 0 else out

    def breakpoints(self) -> list[float]:
        return [0.0, self.eq.mu, self.eq.s, 1.0]

    def lipschitz(self) -> float:
        return self.plateau / self.eq.s


@dataclass(frozen=True)
class DiscreteWinCurve(WinCurve):
    profile: DiscreteDistribution
    n: int

    @property
    def w_atom(self) -> float:
        return float(self(1.0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        q = self.profile.mass_below(x)
        p = self.profile.mass_at(x)
        k = self.n - 1
        out = np.zeros_like(q)
        for j in range(k + 1):
            # j opponents tie at x, the rest are strictly below
            out = out + math.comb(k, j) / (j + 1) * p**j * q ** (k - j)
        return float(out) if out.ndim == 0 else out

    def breakpoints(self) -> list[float]:
        return [0.0, 1.0, *self.profile.xs]

    def atoms(self) -> list[float]:
        return [x for x in self.profile.xs if x < 1.0]


def win_curve_vs_equilibrium(eq: EquilibriumStrategy) -> EquilibriumWinCurve:
    return EquilibriumWinCurve(eq)


def win_curve_vs_discrete(profile: DiscreteDistribution, n: int) -> DiscreteWinCurve:
    if n < 2:
        raise DomainError(f"need n >= 2, got {n!r}")
    return DiscreteWinCurve(profile, int(n))


def deviation_payoff(dev: DiscreteDistribution, curve: WinCurve) -> float:
    """Expected win probability of ``dev`` against the opponents behind ``curve``."""
    w = curve(np.asarray(dev.xs))
    return math.fsum(np.asarray(dev.ps) * np.atleast_1d(w))


def indifference_line(x, cfg_n: int, mu: float):
    """x / (n mu), the payoff line every equilibrium deviation stays under."""
    return np.asarray(x, dtype=float) / (cfg_n * mu)
