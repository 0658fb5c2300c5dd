"""Grid best-response oracle.

Payoff is linear in the deviation, so the best mean-``mu`` response to a
win curve ``w`` is the least concave majorant of ``w`` evaluated at ``mu``,
attained by at most two support points. Sampling ``w`` on a grid and taking
the upper hull gives that value up to grid resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from maxgame.payoff import (
    WinCurve,
    deviation_payoff,
    win_curve_vs_discrete,
    win_curve_vs_equilibrium,
)
from maxgame.solver import EquilibriumStrategy, discretize, power_law_cells, solve
from maxgame.types import (
    MEAN_TOL,
    DiscreteDistribution,
    DistributionError,
    DomainError,
    GameConfig,
    InsufficientPoints,
    NoDeviationFound,
    merge_points,
)

DEFAULT_GRID = 10_000
DEFAULT_SLACK = 1e-3
MIN_GRID = 100
CANDIDATE_CELLS = 10_000
EQ5_TOL = 1e-9


@dataclass(frozen=True)
class EnvelopePoint:
    x: float
    w: float


@dataclass(frozen=True)
class BestResponseReport:
    value: float
    deviation: DiscreteDistribution
    grid_size: int
    margin: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "margin": self.margin,
            "grid_size": self.grid_size,
            "deviation": self.deviation.to_dict(),
        }


def concave_envelope(samples) -> list[EnvelopePoint]:
    """Vertices of the least concave majorant of sorted ``(x, w)`` samples.

    Monotone-chain upper hull; collinear interior points are dropped and
    for repeated x only the highest w survives.
    """
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise InsufficientPoints("need at least two (x, w) samples")
    xs, ws = pts[:, 0], pts[:, 1]
    if np.any(np.diff(xs) < 0.0):
        raise DomainError("samples must be sorted by x")
    hull: list[int] = []
    for i in range(len(xs)):
        if hull and xs[hull[-1]] == xs[i]:
            if ws[i] <= ws[hull[-1]]:
                continue
            hull.pop()
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 unless it lies strictly above the chord i0 -> i
            cross = (xs[i1] - xs[i0]) * (ws[i] - ws[i0]) - (ws[i1] - ws[i0]) * (xs[i] - xs[i0])
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    if len(hull) < 2 and len(np.unique(xs)) < 2:
        raise InsufficientPoints("need samples at two distinct x values")
    return [EnvelopePoint(float(xs[i]), float(ws[i])) for i in hull]


def envelope_at(vertices: list[EnvelopePoint], x: float) -> tuple[float, EnvelopePoint, EnvelopePoint]:
    """Envelope value at ``x`` and the bracketing vertices."""
    vx = np.array([v.x for v in vertices])
    if not (vx[0] <= x <= vx[-1]):
        raise DomainError(f"{x!r} outside envelope range [{vx[0]}, {vx[-1]}]")
    j = int(np.searchsorted(vx, x, side="left"))
    if vx[j] == x:
        return vertices[j].w, vertices[j], vertices[j]
    left, right = vertices[j - 1], vertices[j]
    lam = (x - left.x) / (right.x - left.x)
    return left.w + lam * (right.w - left.w), left, right


def _two_point(left: EnvelopePoint, right: EnvelopePoint, mu: float) -> DiscreteDistribution:
    if left.x == right.x:
        return DiscreteDistribution((left.x,), (1.0,))
    p_right = (mu - left.x) / (right.x - left.x)
    p_left = 1.0 - p_right
    pts = [(pt.x, p) for pt, p in ((left, p_left), (right, p_right)) if p > 0.0]
    if len(pts) == 2:
        # renormalize exactly so the mass sums to one bit-for-bit
        pts[1] = (pts[1][0], 1.0 - pts[0][1])
    else:
        pts = [(pts[0][0], 1.0)]
    return DiscreteDistribution.from_points(pts)


def best_response(curve: WinCurve, mu: float, m: int = DEFAULT_GRID) -> BestResponseReport:
    """Best mean-``mu`` deviation against ``curve`` on an ``m``-point grid.

    The grid always holds 0, mu, 1, the curve's breakpoints, and points
    ``h = 1/(10 m)`` to either side of each opponent atom, since profitable
    deviations against atoms sit just above them.
    """
    if m < MIN_GRID:
        raise DomainError(f"grid size must be at least {MIN_GRID}, got {m}")
    h = 1.0 / (10.0 * m)
    atoms = np.asarray(curve.atoms(), dtype=float)
    extra = np.concatenate(([mu], atoms - h, atoms + h))
    extra = extra[(extra >= 0.0) & (extra < 1.0)]
    xs, ws = curve.sample(m, extra)
    hull = concave_envelope(np.column_stack((xs, ws)))
    _, left, right = envelope_at(hull, mu)
    dev = _two_point(left, right, mu)
    value = deviation_payoff(dev, curve)
    return BestResponseReport(value, dev, m, value - 1.0 / curve.n)


def verify_equilibrium(
    cfg: GameConfig,
    m: int = DEFAULT_GRID,
    slack: float = DEFAULT_SLACK,
    strategy: EquilibriumStrategy | None = None,
) -> tuple[bool, BestResponseReport]:
    """Check that no mean-``mu`` deviation gains more than ``slack``.

    ``strategy`` defaults to the solved equilibrium; pass another member of
    the family to see the oracle reject it.
    """
    eq = solve(cfg) if strategy is None else strategy
    report = best_response(win_curve_vs_equilibrium(eq), cfg.mu, m)
    return report.margin <= slack, report


def grid_error_bound(eq: EquilibriumStrategy, m: int) -> float:
    """A priori bound on how far the grid value can sit from the supremum."""
    return win_curve_vs_equilibrium(eq).lipschitz() / (m - 1)


@dataclass(frozen=True)
class ShiftedCandidate:
    """Power-law profile on ``[t, s]`` with weight ``a`` at 1 and ``t > 0``."""

    config: GameConfig
    t: float
    a: float
    s: float

    def to_distribution(self, cells: int = CANDIDATE_CELLS) -> DiscreteDistribution:
        xs, ps = power_law_cells(1.0 - self.a, self.t, self.s, 1.0 / (self.config.n - 1), cells)
        if self.a > 0.0:
            xs, ps = np.append(xs, 1.0), np.append(ps, self.a)
        xs, ps = merge_points(xs, ps)
        return DiscreteDistribution.from_arrays(xs, ps)


def shifted_atom(n: int, mu: float, t: float, s: float) -> float:
    """Atom weight making a ``[t, s]`` power-law profile have mean ``mu``."""
    spread = s + (n - 1) * t
    return (n * mu - spread) / (n - spread)


def shifted_candidate(
    cfg: GameConfig, t: float, a: float | None = None, s: float | None = None
) -> ShiftedCandidate:
    """Build a shifted-support candidate, filling in ``a`` and ``s`` from ``t``.

    With only ``t`` given, the candidate is atomless with
    ``s = n mu - (n - 1) t`` when that fits in [0, 1]; otherwise ``s = 1``
    and the atom absorbs the remaining mean. A supplied ``(a, s)`` pair must
    satisfy the mean relation.
    """
    n, mu = cfg.n, cfg.mu
    if not (0.0 < t < 1.0):
        raise DomainError(f"shift t must lie in (0, 1), got {t!r}")
    if a is None and s is None:
        s = n * mu - (n - 1) * t
        if s > 1.0:
            s = 1.0
        a = max(shifted_atom(n, mu, t, s), 0.0)
    elif a is None or s is None:
        if s is None:
            # solve the mean relation for s given a
            s = n * (mu - a) / (1.0 - a) - (n - 1) * t
        else:
            a = shifted_atom(n, mu, t, s)
    elif abs(a - shifted_atom(n, mu, t, s)) > EQ5_TOL:
        raise DomainError(
            f"(t, a, s) = ({t}, {a}, {s}) violates the mean relation; "
            f"expected a = {shifted_atom(n, mu, t, s)!r}"
        )
    if not (t < s <= 1.0):
        raise DomainError(f"need t < s <= 1, got t={t!r}, s={s!r}")
    if not (0.0 <= a < mu):
        raise DomainError(f"atom weight must lie in [0, mu), got {a!r}")
    return ShiftedCandidate(cfg, t, a, s)


def interior_atom_profile(
    cfg: GameConfig, at: float | None = None, weight: float = 0.2, cells: int = CANDIDATE_CELLS
) -> DiscreteDistribution:
    """The equilibrium with mass ``weight`` moved onto a single point in (0, 1).

    Mixing with a point mass at ``mu`` (the default location) keeps the
    mean; any other ``at`` is balanced by solving for the mixture weight on
    the equilibrium part, so only ``at = mu`` is exact for every weight.
    """
    at = cfg.mu if at is None else at
    if not (0.0 < at < 1.0):
        raise DomainError("interior atom must lie in (0, 1)")
    if at != cfg.mu:
        raise DomainError("only at = mu keeps the mean for an arbitrary weight")
    if not (0.0 < weight < 1.0):
        raise DomainError("atom weight must lie in (0, 1)")
    base = discretize(solve(cfg), cells)
    xs = np.append(np.asarray(base.xs), at)
    ps = np.append(np.asarray(base.ps) * (1.0 - weight), weight)
    xs, ps = merge_points(xs, ps)
    return DiscreteDistribution.from_arrays(xs, ps)


Profile = Union[DiscreteDistribution, ShiftedCandidate]


def refute_profile(
    profile: Profile, cfg: GameConfig, m: int = DEFAULT_GRID, slack: float = DEFAULT_SLACK
) -> BestResponseReport:
    """Find a deviation beating a symmetric ``profile`` by more than ``slack``.

    Raises NoDeviationFound when the best deviation gains at most ``slack``
    (what a fine discretization of the true equilibrium should produce).
    """
    if isinstance(profile, ShiftedCandidate):
        profile = profile.to_distribution()
    if abs(profile.mean() - cfg.mu) > MEAN_TOL:
        raise DistributionError(f"profile mean {profile.mean()!r} != mu = {cfg.mu!r}")
    report = best_response(win_curve_vs_discrete(profile, cfg.n), cfg.mu, m)
    # recheck the reported number against the exact payoff
    exact = deviation_payoff(report.deviation, win_curve_vs_discrete(profile, cfg.n))
    if not math.isclose(exact, report.value, rel_tol=0.0, abs_tol=1e-12):
        raise ArithmeticError("oracle value disagrees with exact deviation payoff")
    if report.margin <= slack:
        raise NoDeviationFound(
            f"best deviation gains {report.margin:.3e} <= slack {slack:g}", report
        )
    return report
