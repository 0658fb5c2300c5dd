"""Value types shared by every module: game configs, realizations, discrete laws."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PROB_SUM_TOL = 1e-12
MEAN_TOL = 1e-9

# Vectorized encoding of the tagged atom at 1. Every continuous draw lies in
# [0, 1), so +inf sorts above all of them and two atoms compare equal exactly.
ATOM = math.inf


class MaxGameError(Exception):
    """Base class for errors raised by this package."""


class NOutOfRange(MaxGameError, ValueError):
    pass


class MuOutOfRange(MaxGameError, ValueError):
    pass


class DomainError(MaxGameError, ValueError):
    pass


class DistributionError(MaxGameError, ValueError):
    pass


class ConvergenceFailure(MaxGameError, ArithmeticError):
    pass


class InsufficientPoints(MaxGameError, ValueError):
    pass


class NoDeviationFound(MaxGameError):
    """The oracle found nothing beating the candidate by more than the slack."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class GameConfig:
    n: int
    mu: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise NOutOfRange(f"need an integer n >= 2, got {self.n!r}")
        if not (0.0 < self.mu < 1.0):
            raise MuOutOfRange(f"need 0 < mu < 1, got {self.mu!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def value(self) -> float:
        """Per-player payoff of any symmetric profile, 1/n."""
        return 1.0 / self.n


def validate_config(n: int, mu: float) -> GameConfig:
    return GameConfig(n, mu)


@dataclass(frozen=True, order=True)
class Realization:
    """One draw: either the point mass at 1 or a continuous value in [0, 1).

    Ordering compares ``(atom, x)`` so an atom beats every continuous value
    and two atoms are equal. Build instances with :func:`Continuous` or use
    :data:`AtomOne`.
    """

    atom: bool
    x: float

    def __post_init__(self):
        if self.atom:
            if self.x != 1.0:
                raise DomainError("the atom realization sits at x = 1")
        elif not (0.0 <= self.x < 1.0):
            raise DomainError(f"continuous realization must lie in [0, 1), got {self.x!r}")

    @property
    def value(self) -> float:
        return self.x

    def encode(self) -> float:
        return ATOM if self.atom else self.x

    def __repr__(self) -> str:
        return "AtomOne" if self.atom else f"Continuous({self.x!r})"


AtomOne = Realization(True, 1.0)


def Continuous(x: float) -> Realization:
    return Realization(False, float(x))


def decode(value: float) -> Realization:
    return AtomOne if value == ATOM else Continuous(value)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported law on [0, 1].

    ``xs`` strictly increasing, every ``ps`` entry positive, total mass 1
    within ``PROB_SUM_TOL``. A point at x = 1 is the atom at 1.
    """

    xs: tuple[float, ...]
    ps: tuple[float, ...]
    _xa: np.ndarray = field(init=False, repr=False, compare=False)
    _pa: np.ndarray = field(init=False, repr=False, compare=False)
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        ps = tuple(float(p) for p in self.ps)
        if not xs or len(xs) != len(ps):
            raise DistributionError("need matching, non-empty support and probability lists")
        xa = np.asarray(xs)
        pa = np.asarray(ps)
        if not np.all(np.isfinite(xa)) or xa[0] < 0.0 or xa[-1] > 1.0:
            raise DistributionError("support points must lie in [0, 1]")
        if np.any(np.diff(xa) <= 0.0):
            raise DistributionError("support points must be strictly increasing")
        if not np.all(pa > 0.0) or np.any(pa > 1.0):
            raise DistributionError("probabilities must lie in (0, 1]")
        total = math.fsum(ps)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)
        object.__setattr__(self, "_xa", xa)
        object.__setattr__(self, "_pa", pa)
        object.__setattr__(self, "_cum", np.cumsum(pa))

    @classmethod
    def from_points(
        cls, points: Iterable[Sequence[float]], mean: float | None = None
    ) -> "DiscreteDistribution":
        pts = [(float(x), float(p)) for x, p in points]
        d = cls(tuple(x for x, _ in pts), tuple(p for _, p in pts))
        if mean is not None and abs(d.mean() - mean) > MEAN_TOL:
            raise DistributionError(f"mean {d.mean()!r} does not match requested {mean!r}")
        return d

    @classmethod
    def from_arrays(cls, xs, ps, mean: float | None = None) -> "DiscreteDistribution":
        return cls.from_points(zip(np.asarray(xs).tolist(), np.asarray(ps).tolist()), mean)

    @classmethod
    def from_json(cls, text: str, mean: float | None = None) -> "DiscreteDistribution":
        try:
            data = json.loads(text)
            points = data["points"]
        except (ValueError, KeyError, TypeError) as exc:
            raise DistributionError(f"malformed distribution JSON: {exc}") from exc
        if not isinstance(points, list) or not all(
            isinstance(pt, list) and len(pt) == 2 for pt in points
        ):
            raise DistributionError('expected {"points": [[x, p], ...]}')
        return cls.from_points(points, mean)

    def to_dict(self) -> dict:
        return {"points": [[x, p] for x, p in zip(self.xs, self.ps)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ps))

    def __len__(self) -> int:
        return len(self.xs)

    def mean(self) -> float:
        return math.fsum(x * p for x, p in zip(self.xs, self.ps))

    @property
    def atom_weight(self) -> float:
        """Mass at x = 1, zero when 1 is not a support point."""
        return self.ps[-1] if self.xs[-1] == 1.0 else 0.0

    def mass_below(self, x):
        """P(X < x), vectorized."""
        idx = np.searchsorted(self._xa, x, side="left")
        cum = np.concatenate(([0.0], self._cum))
        return np.minimum(cum[idx], 1.0)

    def mass_at(self, x):
        """P(X = x), vectorized; nonzero only on support points."""
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self._xa, x, side="left"), 0, len(self._xa) - 1)
        return np.where(self._xa[idx] == x, self._pa[idx], 0.0)

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Inverse-CDF draws from uniforms ``u``; the point at 1 encodes as ATOM."""
        idx = np.searchsorted(self._cum, u, side="right")
        idx = np.minimum(idx, len(self.xs) - 1)
        out = self._xa[idx]
        return np.where(out == 1.0, ATOM, out)


def discrete_mean(d: DiscreteDistribution) -> float:
    return d.mean()


def merge_points(xs: np.ndarray, ps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort, combine duplicate support points and drop empty ones."""
    order = np.argsort(xs, kind="stable")
    xs, ps = np.asarray(xs)[order], np.asarray(ps)[order]
    uniq, inv = np.unique(xs, return_inverse=True)
    merged = np.zeros(len(uniq))
    np.add.at(merged, inv, ps)
    keep = merged > 0.0
    return uniq[keep], merged[keep]
