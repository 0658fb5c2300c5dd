"""Seeded tournament simulation with fair tie-breaking.

Every player owns a counter-based Philox stream keyed by ``(seed, key)``
and consumes exactly one uniform per trial; the tie-break stream does the
same. A block of trials starting at trial ``i`` jumps its streams straight
to counter ``i``, so the draws do not depend on how trials are split into
blocks or on how many threads run them.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Protocol, Sequence

import numpy as np

from maxgame.solver import EquilibriumStrategy, solve
from maxgame.types import (
    ATOM,
    MEAN_TOL,
    DiscreteDistribution,
    DistributionError,
    DomainError,
    GameConfig,
)

BLOCK = 1 << 16  # multiple of 4: Philox emits four 64-bit words per counter step
THREADS_ENV = "MAXGAME_THREADS"
TIE_STREAM = 0
PLAYER_STREAM = 1


class Samplable(Protocol):
    def sample(self, u: np.ndarray) -> np.ndarray: ...


def _uniforms(seed: int, spawn_key: tuple[int, ...], start: int, size: int) -> np.ndarray:
    bitgen = np.random.Philox(np.random.SeedSequence(seed, spawn_key=spawn_key))
    bitgen.advance(start // 4)
    return np.random.Generator(bitgen).random(size)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError:
        requested = 0
    if requested <= 0:
        return os.cpu_count() or 1
    return requested


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    seed: int
    wins: list[int]
    tie_events: int
    tie_size_counts: list[int]  # index k: trials whose maximum was shared by k players
    atom_draws: list[int]
    empirical_means: list[float]
    win_freq: list[float]
    ci_radius: list[float]

    @property
    def n(self) -> int:
        return len(self.wins)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["player", "wins", "win_freq", "ci_radius", "atom_draws", "empirical_mean"])
        for i in range(self.n):
            writer.writerow(
                [
                    i,
                    self.wins[i],
                    format(self.win_freq[i], ".17g"),
                    format(self.ci_radius[i], ".17g"),
                    self.atom_draws[i],
                    format(self.empirical_means[i], ".17g"),
                ]
            )
        return buf.getvalue()


@dataclass
class _BlockStats:
    wins: np.ndarray
    tie_sizes: np.ndarray
    atoms: np.ndarray
    value_sums: np.ndarray


def _run_block(strategies, keys, seed, start, size) -> _BlockStats:
    n = len(strategies)
    vals = np.empty((size, n))
    for j, (strat, key) in enumerate(zip(strategies, keys)):
        vals[:, j] = strat.sample(_uniforms(seed, (PLAYER_STREAM, key), start, size))
    u_tie = _uniforms(seed, (TIE_STREAM,), start, size)

    best = vals.max(axis=1)
    tied = vals == best[:, None]
    k = tied.sum(axis=1)
    # one uniform picks among the k tied players, ranked by stream key
    pick = np.minimum((u_tie * k).astype(np.int64), k - 1)
    order = np.argsort(keys, kind="stable")
    tied_by_key = tied[:, order]
    rank = np.cumsum(tied_by_key, axis=1)
    hit = tied_by_key & (rank == (pick + 1)[:, None])
    winner = order[np.argmax(hit, axis=1)]

    atoms = vals == ATOM
    return _BlockStats(
        wins=np.bincount(winner, minlength=n),
        tie_sizes=np.bincount(k, minlength=n + 1),
        atoms=atoms.sum(axis=0),
        value_sums=np.where(atoms, 1.0, vals).sum(axis=0),
    )


def run_tournament(
    strategies: Sequence[Samplable],
    trials: int,
    seed: int,
    keys: Sequence[int] | None = None,
    threads: int | None = None,
) -> SimulationReport:
    """Play ``trials`` independent rounds; highest draw wins, ties split evenly.

    ``keys`` name each player's random stream (default: position). Passing a
    permutation of strategies together with the same permutation of keys
    permutes the per-player results exactly.
    """
    n = len(strategies)
    if n < 2:
        raise DomainError("a tournament needs at least two players")
    if trials < 1:
        raise DomainError("trials must be positive")
    keys = list(range(n)) if keys is None else [int(k) for k in keys]
    if len(keys) != n or len(set(keys)) != n or min(keys) < 0:
        raise DomainError("stream keys must be distinct non-negative integers, one per player")

    starts = range(0, trials, BLOCK)
    jobs = [(s, min(BLOCK, trials - s)) for s in starts]
    workers = min(threads or worker_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda job: _run_block(strategies, keys, seed, *job), jobs))
    else:
        blocks = [_run_block(strategies, keys, seed, *job) for job in jobs]

    wins = np.zeros(n, dtype=np.int64)
    tie_sizes = np.zeros(n + 1, dtype=np.int64)
    atoms = np.zeros(n, dtype=np.int64)
    value_sums = np.zeros(n)
    for blk in blocks:  # fixed merge order keeps float sums reproducible
        wins += blk.wins
        tie_sizes += blk.tie_sizes
        atoms += blk.atoms
        value_sums += blk.value_sums

    freq = wins / trials
    return SimulationReport(
        trials=int(trials),
        seed=int(seed),
        wins=[int(w) for w in wins],
        tie_events=int(tie_sizes[2:].sum()),
        tie_size_counts=[int(c) for c in tie_sizes],
        atom_draws=[int(c) for c in atoms],
        empirical_means=[float(v) for v in value_sums / trials],
        win_freq=[float(f) for f in freq],
        ci_radius=[float(3.0 * math.sqrt(f * (1.0 - f) / trials)) for f in freq],
    )


def sample_values(strategy: Samplable, trials: int, seed: int, key: int = 0) -> np.ndarray:
    """Raw draws of one player's stream, atoms mapped back to 1.0."""
    draws = np.concatenate(
        [
            strategy.sample(_uniforms(seed, (PLAYER_STREAM, key), s, min(BLOCK, trials - s)))
            for s in range(0, trials, BLOCK)
        ]
    )
    return np.where(draws == ATOM, 1.0, draws)


def empirical_mean_check(eq: EquilibriumStrategy, trials: int, seed: int) -> float:
    if trials < 10_000:
        raise DomainError("use at least 10^4 trials")
    return math.fsum(sample_values(eq, trials, seed)) / trials


def empirical_deviation_payoff(
    dev: DiscreteDistribution, cfg: GameConfig, trials: int, seed: int
) -> float:
    """Win frequency of ``dev`` (player 0) against n - 1 equilibrium players."""
    if abs(dev.mean() - cfg.mu) > MEAN_TOL:
        raise DistributionError(f"deviation mean {dev.mean()!r} != mu = {cfg.mu!r}")
    eq = solve(cfg)
    report = run_tournament([dev] + [eq] * (cfg.n - 1), trials, seed)
    return report.win_freq[0]
