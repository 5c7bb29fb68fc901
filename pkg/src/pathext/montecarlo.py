"""Random oriented graphs, the pi2 lower-tail experiment and its Chernoff/union bound."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import numpy as np

from .core import CapacityError, Tournament, bits
from .extend import is_path_extendable
from .construct import random_tournament
from .rng import generator, uniforms

MC_CAP = 2000


@dataclass(frozen=True)
class OrientedGraph:
    """Loop-free digraph with at most one arc per pair (rows are n-bit ints)."""

    n: int
    out_rows: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        raw = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in self.out_rows), dtype=np.uint8)
        a = np.unpackbits(raw.reshape(self.n, nbytes), axis=1, bitorder="little")[:, : self.n]
        return a.astype(np.float32)

    def arc_count(self) -> int:
        return sum(r.bit_count() for r in self.out_rows)

    def is_valid(self) -> bool:
        for u, row in enumerate(self.out_rows):
            if row >> u & 1 or row >> self.n:
                return False
            for v in bits(row):
                if self.out_rows[v] >> u & 1:
                    return False
        return True

    def to_tournament(self) -> Tournament:
        return Tournament(self.n, self.out_rows)


def random_oriented(n: int, p: float, seed: int, trial: int | None = None) -> OrientedGraph:
    """Each pair independently: i -> j with prob. p, j -> i with prob. p, no arc otherwise."""
    if not 0 < p <= 0.5:
        raise ValueError(f"arc probability must lie in (0, 1/2], got {p}")
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > MC_CAP:
        raise CapacityError(f"oriented graphs are limited to {MC_CAP} vertices")
    bg = generator(seed) if trial is None else generator(seed, trial)
    u = uniforms(bg, n * (n - 1) // 2)
    i, j = np.triu_indices(n, 1)  # row-major, i.e. lexicographic pair order
    a = np.zeros((n, n), dtype=bool)
    a[i, j] = u < p
    a[j, i] = (u >= p) & (u < 2 * p)
    return OrientedGraph(n, _rows_from_matrix(a))


def _rows_from_matrix(a: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(a, axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


def oriented_pi2(g: OrientedGraph) -> int:
    """Minimum over ordered pairs u != v of the number of 2-paths u -> w -> v."""
    a = g.matrix()
    m = np.rint(a @ a).astype(np.int64)
    np.fill_diagonal(m, np.iinfo(np.int64).max)
    return int(m.min())


def chernoff_g(x: float) -> float:
    """e^{-x} / (1-x)^{1-x}, evaluated as exp(-x - (1-x) log(1-x))."""
    if not 0 <= x < 1:
        raise ValueError(f"g is defined on [0, 1), got {x}")
    return math.exp(-x - (1 - x) * math.log1p(-x))


def tail_bound(n: int, p: float, epsilon: float) -> float:
    """Union bound n(n-1) g(eps)^{(n-2)p^2} on Pr[pi2 < (p^2 - eps) n]."""
    return n * (n - 1) * chernoff_g(epsilon) ** ((n - 2) * p * p)


@dataclass(frozen=True)
class TailExperiment:
    n: int
    p: float
    epsilon: float
    trials: int
    seed: int
    observed_failures: int | None = None
    bound: float | None = None
    pi2_values: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not 0 < self.p <= 0.5:
            raise ValueError("p must lie in (0, 1/2]")
        if not 0 < self.epsilon < self.p * self.p:
            raise ValueError("epsilon must lie in (0, p^2)")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.n > MC_CAP:
            raise CapacityError(f"n={self.n} is beyond the pi2 computation limit of {MC_CAP}")

    @property
    def threshold(self) -> float:
        return (self.p * self.p - self.epsilon) * self.n

    @property
    def observed_fraction(self) -> float | None:
        if self.observed_failures is None:
            return None
        return self.observed_failures / self.trials

    def noise_slack(self) -> float:
        return 4 * math.sqrt(self.bound / self.trials) if self.bound is not None else 0.0

    def rows(self) -> list[tuple[int, int, float, bool]]:
        thr = self.threshold
        return [(i, v, thr, v < thr) for i, v in enumerate(self.pi2_values)]


def _trial_pi2(args) -> int:
    n, p, seed, trial = args
    return oriented_pi2(random_oriented(n, p, seed, trial))


def pi2_tail_experiment(spec: TailExperiment, jobs: int = 1) -> TailExperiment:
    """Sample ``trials`` graphs (trial i keyed by (seed, i)) and count pi2 below threshold."""
    tasks = [(spec.n, spec.p, spec.seed, i) for i in range(spec.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_trial_pi2, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        values = [_trial_pi2(t) for t in tasks]
    thr = spec.threshold
    fails = sum(1 for v in values if v < thr)
    return replace(
        spec,
        observed_failures=fails,
        bound=tail_bound(spec.n, spec.p, spec.epsilon),
        pi2_values=tuple(values),
    )


def extendable_fraction(n: int, samples: int, seed: int) -> float:
    """Share of ``random_tournament(n, seed + i)``, i < samples, that are path extendable."""
    hits = sum(is_path_extendable(random_tournament(n, seed + i)).extendable for i in range(samples))
    return hits / samples
