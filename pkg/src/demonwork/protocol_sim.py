"""Seeded Monte Carlo simulation of the two-demon extraction protocol.

The shared ensemble is split into groups of two pairs. Per group, each
party draws a basis uniformly from its configured list; one pair is scored
with Alice measuring first (estimating H(B|A)), the other with roles
exchanged (estimating H(A|B)). Work per basis pair is estimated as
2 - H(B|A) - H(A|B) with plug-in (maximum likelihood) entropies.

Randomness: one Philox stream per group index (Philox(key=seed).jumped(g)),
so chunked/parallel execution is bit-identical to the serial run. Per
group the draw order is fixed: Alice basis, Bob basis, outcome 1, outcome 2.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import BlochDirection, ConfigurationError, TwoQubitState
from .workext import JointDistribution, entropy_bundle, joint_distribution, xi


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    alice_bases: tuple
    bob_bases: tuple
    groups: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "alice_bases", tuple(self.alice_bases))
        object.__setattr__(self, "bob_bases", tuple(self.bob_bases))
        if not self.alice_bases or not self.bob_bases:
            raise ConfigurationError("both basis lists must be nonempty")
        if self.groups < 1:
            raise ConfigurationError("need at least one group")


@dataclass(frozen=True, eq=False)
class PairStats:
    """Counts and work estimate for one (alice basis, bob basis) pair.

    counts_a_to_b holds [alice outcome, bob outcome] tallies from the pairs
    where Alice measured first; counts_b_to_a from the exchanged-role pairs.
    """

    sample_count: int
    counts_a_to_b: np.ndarray
    counts_b_to_a: np.ndarray
    work_estimate: float


@dataclass(frozen=True, eq=False)
class SimResult:
    groups: int
    seed: int
    pairs: dict

    def to_dict(self) -> dict:
        pairs = {
            f"{i},{j}": {
                "sample_count": stats.sample_count,
                "counts_a_to_b": stats.counts_a_to_b.tolist(),
                "counts_b_to_a": stats.counts_b_to_a.tolist(),
                "work_estimate": stats.work_estimate,
            }
            for (i, j), stats in sorted(self.pairs.items())
        }
        return {"groups": self.groups, "seed": self.seed, "pairs": pairs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _simulate_chunk(start, stop, seed, cumulatives, na, nb):
    counts_ab = np.zeros((na, nb, 2, 2), dtype=np.int64)
    counts_ba = np.zeros((na, nb, 2, 2), dtype=np.int64)
    base = np.random.Philox(key=seed)
    for g in range(start, stop):
        rng = np.random.Generator(base.jumped(g))
        i = int(rng.integers(na))
        j = int(rng.integers(nb))
        cum = cumulatives[i][j]
        o1 = int(np.searchsorted(cum, rng.random(), side="right"))
        o2 = int(np.searchsorted(cum, rng.random(), side="right"))
        counts_ab[i, j, o1 >> 1, o1 & 1] += 1
        counts_ba[i, j, o2 >> 1, o2 & 1] += 1
    return counts_ab, counts_ba


def simulate(rho: TwoQubitState, cfg: ProtocolConfig, workers: int = 1) -> SimResult:
    """Run the grouped protocol; identical (rho, cfg, seed) gives identical output.

    workers > 1 splits the group range into contiguous chunks executed on a
    thread pool; per-group streams make the aggregate independent of the
    partition.
    """
    na, nb = len(cfg.alice_bases), len(cfg.bob_bases)
    cumulatives = [
        [
            np.concatenate(
                [
                    np.cumsum(joint_distribution(rho, a, b).p.ravel())[:3],
                    [1.0],
                ]
            )
            for b in cfg.bob_bases
        ]
        for a in cfg.alice_bases
    ]
    workers = max(1, int(workers))
    bounds = np.linspace(0, cfg.groups, workers + 1).astype(int)
    jobs = [(int(bounds[k]), int(bounds[k + 1])) for k in range(workers) if bounds[k] < bounds[k + 1]]
    if len(jobs) <= 1:
        results = [_simulate_chunk(0, cfg.groups, cfg.seed, cumulatives, na, nb)]
    else:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(
                pool.map(lambda se: _simulate_chunk(*se, cfg.seed, cumulatives, na, nb), jobs)
            )
    counts_ab = sum(r[0] for r in results)
    counts_ba = sum(r[1] for r in results)

    pairs = {}
    for i in range(na):
        for j in range(nb):
            total = int(counts_ab[i, j].sum())
            if total == 0:
                continue  # pair never drawn: absent, not zero
            d_ab = JointDistribution(counts_ab[i, j] / total)
            d_ba = JointDistribution(counts_ba[i, j] / total)
            estimate = 2.0 - entropy_bundle(d_ab).h_b_given_a - entropy_bundle(d_ba).h_a_given_b
            pairs[(i, j)] = PairStats(
                sample_count=total,
                counts_a_to_b=counts_ab[i, j].copy(),
                counts_b_to_a=counts_ba[i, j].copy(),
                work_estimate=estimate,
            )
    return SimResult(groups=cfg.groups, seed=cfg.seed, pairs=pairs)


def convergence_curve(
    rho: TwoQubitState,
    n_a: BlochDirection,
    n_b: BlochDirection,
    schedule: Sequence[int],
    seed: int,
) -> list[tuple[int, float]]:
    """|work estimate - analytic xi| for a single basis pair over growing ensembles."""
    if list(schedule) != sorted(set(int(g) for g in schedule)):
        raise ConfigurationError("schedule must be strictly increasing")
    target = xi(rho, n_a, n_b)
    curve = []
    for groups in schedule:
        cfg = ProtocolConfig(alice_bases=(n_a,), bob_bases=(n_b,), groups=int(groups), seed=seed)
        res = simulate(rho, cfg)
        curve.append((int(groups), abs(res.pairs[(0, 0)].work_estimate - target)))
    return curve
