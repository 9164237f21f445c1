"""Seeded Monte-Carlo estimation of the message error rate (MER).

One trial builds a fresh network and runs the schedule

1. store ``M`` distinct random messages,
2. delete ``floor(deletion_rate * M)`` of them, chosen uniformly,
3. store ``floor(addition_rate * M)`` fresh messages distinct from the retained ones,
4. query every retained message with ``round(ce * c)`` clusters erased and
   count the queries that do not decode to exactly the original message.

Trial ``k`` of an experiment draws all of its randomness from
``np.random.SeedSequence(master_seed, spawn_key=(k,))``, in the fixed order
messages, deletions, additions, erasures.  None of those draws depend on the
architecture, ``w_max`` or the iteration cap, so specs that differ only in
those fields see identical networks and queries (paired comparisons).
Trials are computed in vectorized chunks; chunking and thread count never
change any per-trial result.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from mvscn.codec import erase_batch, messages_to_activation
from mvscn.core import NetworkConfig
from mvscn.decoding import Arch, decode_arrays
from mvscn.learning import clique_pairs, messages_for_density

DEFAULT_MIN_QUERIES = 100_000
AXES = ("density", "deletion_rate", "addition_rate", "w_max", "iterations")


@dataclass(frozen=True)
class ExperimentSpec:
    """Parameters of one MER measurement.

    Exactly one of ``M`` and ``density_target`` is normally given; when both
    are set ``M`` wins and ``density_target`` is only echoed in the output.
    ``trials=None`` picks enough trials for ``DEFAULT_MIN_QUERIES`` queries.
    """

    config: NetworkConfig
    arch: Arch = Arch.II
    M: int | None = None
    density_target: float | None = None
    ce: float = 0.5
    deletion_rate: float = 0.0
    addition_rate: float = 0.0
    iterations: int = 4
    trials: int | None = None
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "arch", Arch.parse(self.arch))
        if self.M is None and self.density_target is None:
            raise ValueError("either M or density_target is required")
        if self.M is not None and self.M < 0:
            raise ValueError(f"M must be >= 0, got {self.M}")
        if self.density_target is not None and not 0 <= self.density_target < 1:
            raise ValueError(f"density_target must be in [0, 1), got {self.density_target}")
        if not 0 <= self.ce <= 1:
            raise ValueError(f"ce must be in [0, 1], got {self.ce}")
        if not 0 <= self.deletion_rate <= 1:
            raise ValueError(f"deletion_rate must be in [0, 1], got {self.deletion_rate}")
        if self.addition_rate < 0:
            raise ValueError(f"addition_rate must be >= 0, got {self.addition_rate}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.trials is not None and self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.M_resolved - self.n_deleted + self.n_added > self.config.l ** self.config.c:
            raise ValueError("schedule needs more distinct messages than the network can represent")

    @property
    def M_resolved(self) -> int:
        if self.M is not None:
            return self.M
        return messages_for_density(self.density_target, self.config.l)

    @property
    def n_deleted(self) -> int:
        return math.floor(self.deletion_rate * self.M_resolved)

    @property
    def n_added(self) -> int:
        return math.floor(self.addition_rate * self.M_resolved)

    @property
    def queries_per_trial(self) -> int:
        return self.M_resolved - self.n_deleted + self.n_added

    def n_trials(self, min_queries: int = DEFAULT_MIN_QUERIES) -> int:
        if self.trials is not None:
            return self.trials
        q = self.queries_per_trial
        return max(1, math.ceil(min_queries / q)) if q else 1


@dataclass
class TrialStats:
    trial_index: int
    seed: int  # first 64-bit word of the trial's SeedSequence state
    queries: int
    errors: int
    density_after: float

    @property
    def mer(self) -> float:
        return self.errors / self.queries if self.queries else math.nan


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list[TrialStats] = field(repr=False)

    @property
    def queries(self) -> int:
        return sum(r.queries for r in self.rows)

    @property
    def errors(self) -> int:
        return sum(r.errors for r in self.rows)

    @property
    def mer(self) -> float:
        q = self.queries
        return self.errors / q if q else math.nan

    @property
    def stderr(self) -> float:
        """Standard error of the pooled MER (ratio estimator over trials)."""
        t = len(self.rows)
        q = self.queries
        if t < 2 or q == 0:
            return 0.0 if q else math.nan
        mer = self.errors / q
        resid = np.array([r.errors - mer * r.queries for r in self.rows], dtype=np.float64)
        qbar = q / t
        return float(math.sqrt(float(resid @ resid) / (t * (t - 1))) / qbar)

    @property
    def density_measured_mean(self) -> float:
        return float(np.mean([r.density_after for r in self.rows]))


def trial_seed_sequence(master_seed: int, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(trial_index,))


def generate_messages(count: int, config: NetworkConfig, rng: np.random.Generator,
                      exclude: Iterable[tuple] = ()) -> np.ndarray:
    """``count`` pairwise-distinct uniform messages as an ``(count, c)`` array.

    Messages in ``exclude`` are never produced.
    """
    taken = set(exclude)
    space = config.l ** config.c
    if count < 0:
        raise ValueError("count must be >= 0")
    if count > space - len(taken):
        raise ValueError(f"cannot draw {count} distinct messages from a space of {space - len(taken)}")
    out: list[tuple] = []
    while len(out) < count:
        batch = rng.integers(0, config.l, size=(count - len(out), config.c))
        for row in map(tuple, batch.tolist()):
            if row not in taken:
                taken.add(row)
                out.append(row)
    return np.array(out, dtype=np.int64).reshape(count, config.c)


@dataclass
class _Draw:
    seed: int
    stored: np.ndarray
    deleted: np.ndarray
    added: np.ndarray
    retained: np.ndarray
    queries: np.ndarray  # locally decoded activations, (Q, c, l)


def _draw_trial(spec: ExperimentSpec, trial_index: int) -> _Draw:
    cfg = spec.config
    ss = trial_seed_sequence(spec.master_seed, trial_index)
    rng = np.random.default_rng(ss)
    M = spec.M_resolved
    stored = generate_messages(M, cfg, rng)
    del_idx = np.sort(rng.choice(M, size=spec.n_deleted, replace=False)) if spec.n_deleted else np.zeros(0, int)
    keep = np.ones(M, dtype=bool)
    keep[del_idx] = False
    survivors = stored[keep]
    added = generate_messages(spec.n_added, cfg, rng, exclude=map(tuple, survivors.tolist()))
    retained = np.concatenate([survivors, added])
    queries = erase_batch(retained, spec.ce, rng, cfg)
    return _Draw(int(ss.generate_state(1, np.uint64)[0]), stored, stored[del_idx], added, retained, queries)


def _chunk_weights(draws: Sequence[_Draw], cfg: NetworkConfig) -> np.ndarray:
    n = cfg.n
    t = len(draws)

    def counts(key):
        parts = []
        for k, d in enumerate(draws):
            a, b = clique_pairs(getattr(d, key), cfg)
            parts.append(k * n * n + a * n + b)
        flat = np.concatenate(parts) if parts else np.zeros(0, np.int64)
        return np.bincount(flat, minlength=t * n * n).reshape(t, n, n)

    w = np.minimum(counts("stored"), cfg.w_max)
    if any(len(d.deleted) for d in draws):
        w = np.maximum(w - counts("deleted"), 0)
    if any(len(d.added) for d in draws):
        w = np.minimum(w + counts("added"), cfg.w_max)
    return w.astype(np.uint8)


def _run_chunk(spec: ExperimentSpec, indices: Sequence[int]) -> list[TrialStats]:
    cfg = spec.config
    draws = [_draw_trial(spec, k) for k in indices]
    weights = _chunk_weights(draws, cfg)
    used = np.count_nonzero(weights.reshape(len(draws), -1), axis=1) // 2
    q = spec.queries_per_trial
    if q:
        acts = np.stack([d.queries for d in draws])
        final, _, _ = decode_arrays(weights, acts, spec.arch, cfg, spec.iterations)
        target = messages_to_activation(np.stack([d.retained for d in draws]), cfg)
        errors = (~(final == target).all(axis=(-2, -1))).sum(axis=1)
    else:
        errors = np.zeros(len(draws), dtype=np.int64)
    return [
        TrialStats(k, d.seed, q, int(e), int(u) / cfg.pair_count)
        for k, d, e, u in zip(indices, draws, errors, used)
    ]


def _chunk_size(spec: ExperimentSpec) -> int:
    per_trial = max(1, spec.queries_per_trial) * spec.config.n * spec.config.c
    return int(max(1, min(256, 2_000_000 // per_trial)))


def run_trial(spec: ExperimentSpec, trial_index: int) -> TrialStats:
    return _run_chunk(spec, [trial_index])[0]


def run_experiment(spec: ExperimentSpec, threads: int = 1, min_queries: int = DEFAULT_MIN_QUERIES,
                   progress: Callable[[int, int], None] | None = None) -> ExperimentResult:
    """Run all trials of ``spec`` and pool their tallies."""
    total = spec.n_trials(min_queries)
    size = _chunk_size(spec)
    chunks = [list(range(s, min(s + size, total))) for s in range(0, total, size)]
    rows: list[TrialStats] = []
    if threads <= 1:
        for ch in chunks:
            rows.extend(_run_chunk(spec, ch))
            if progress:
                progress(len(rows), total)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(lambda ch: _run_chunk(spec, ch), chunks):
                rows.extend(part)
                if progress:
                    progress(len(rows), total)
    return ExperimentResult(spec, rows)


def with_axis(spec: ExperimentSpec, axis: str, value) -> ExperimentSpec:
    """Copy of ``spec`` with one sweep axis set to ``value``."""
    if axis == "density":
        return replace(spec, density_target=float(value), M=None)
    if axis == "deletion_rate":
        return replace(spec, deletion_rate=float(value))
    if axis == "addition_rate":
        return replace(spec, addition_rate=float(value))
    if axis == "w_max":
        if int(value) != value:
            raise ValueError(f"w_max must be an integer, got {value}")
        return replace(spec, config=replace(spec.config, w_max=int(value)))
    if axis == "iterations":
        if int(value) != value:
            raise ValueError(f"iterations must be an integer, got {value}")
        return replace(spec, iterations=int(value))
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {', '.join(AXES)}")


def sweep(base_spec: ExperimentSpec, axis: str, values: Sequence, threads: int = 1,
          min_queries: int = DEFAULT_MIN_QUERIES) -> list[ExperimentResult]:
    specs = [with_axis(base_spec, axis, v) for v in values]  # validate everything before running
    return [run_experiment(s, threads=threads, min_queries=min_queries) for s in specs]


def equal_memory_binary_spec(spec: ExperimentSpec) -> ExperimentSpec:
    """Binary-weight spec using about the same memory bits as ``spec``.

    A b-bit weight table over l nodes per cluster matches a 1-bit table over
    ``round(l * sqrt(b))`` nodes.  The message count is carried over, so the
    larger network runs at a lower density.
    """
    b = spec.config.bits_per_weight
    if b < 2:
        raise ValueError("spec already uses binary weights")
    l2 = int(math.floor(spec.config.l * math.sqrt(b) + 0.5))
    cfg = replace(spec.config, l=l2, w_max=1)
    return replace(spec, config=cfg, M=spec.M_resolved)
