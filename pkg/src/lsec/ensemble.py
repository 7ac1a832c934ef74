"""Generation of diverse spectral base clusterings.

``m / q`` landmark sets are selected; for each set one K-nearest-landmark
search at the largest K feeds ``q`` affinities (one per K value), and each
affinity is partitioned with a randomly drawn cluster count. Base
clustering ``(i, j)`` comes from landmark set ``i`` and ``K_list[j]``; the
ensemble lists them set-major.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _backend
from ._seeding import rng as make_rng
from ._seeding import seed_sequence
from .errors import ParamError
from .knn import build_affinity_batch
from .landmarks import select_landmarks
from .spectral import spectral_partition

log = logging.getLogger(__name__)

# stream keys below the user seed
LANDMARK_STREAM = 0
BASE_STREAM = 1
CONSENSUS_STREAM = 2


@dataclass
class EnsembleParams:
    """Ensemble settings.

    ``K_list`` may hold more than ``q`` values; the ``q`` largest are used.
    """

    m: int = 20
    q: int = 4
    K_list: tuple = (2, 3, 4, 5)
    p: int = 1000
    alpha: int = 50
    c_min: int = 20
    c_max: int = 60
    seed: int = 0
    K_prime: int | None = None

    def __post_init__(self):
        self.K_list = tuple(int(k) for k in self.K_list)

    @property
    def ks(self) -> tuple:
        return self.K_list[-self.q:]

    @property
    def num_sets(self) -> int:
        return self.m // self.q

    def validate(self, n=None):
        if self.m < 1 or self.q < 1 or self.m % self.q:
            raise ParamError(f"q={self.q} must divide m={self.m}")
        if len(self.K_list) < self.q:
            raise ParamError(f"need at least q={self.q} K values, got {self.K_list}")
        ks = self.ks
        if ks[0] < 1 or any(a >= b for a, b in zip(ks, ks[1:])):
            raise ParamError(f"K values must be positive and strictly ascending, got {ks}")
        if ks[-1] > self.p:
            raise ParamError(f"largest K={ks[-1]} exceeds p={self.p}")
        if self.alpha < 1:
            raise ParamError("alpha must be >= 1")
        if not 2 <= self.c_min <= self.c_max:
            raise ParamError(f"need 2 <= c_min <= c_max, got [{self.c_min}, {self.c_max}]")
        if self.seed < 0:
            raise ParamError("seed must be non-negative")
        if n is not None and self.p > n:
            raise ParamError(f"p={self.p} exceeds the number of points n={n}")
        return self

    def to_dict(self):
        d = asdict(self)
        d["K_list"] = list(self.K_list)
        return d


@dataclass
class BaseClustering:
    labels: np.ndarray
    drawn_c: int
    landmark_set: int
    K: int

    @property
    def c(self) -> int:
        return int(self.labels.max()) + 1


@dataclass
class Ensemble:
    base: list
    params: EnsembleParams
    stats: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.base)

    def labels(self):
        return [b.labels for b in self.base]


def cluster_count_from_tau(tau, c_min, c_max) -> int:
    if c_min > c_max:
        raise ParamError(f"c_min={c_min} exceeds c_max={c_max}")
    return int(math.floor(tau * (c_max - c_min))) + c_min


def draw_cluster_count(c_min, c_max, rng) -> int:
    """Cluster count ``floor(tau (c_max - c_min)) + c_min`` with ``tau ~ U[0, 1)``."""
    return cluster_count_from_tau(rng.random(), c_min, c_max)


def compact_labels(labels):
    """Relabel to ``0..k-1`` in order of first label value, dropping unused ids."""
    _, inverse = np.unique(labels, return_inverse=True)
    return inverse.astype(np.int64).ravel()


def _map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def generate_ensemble(X, params: EnsembleParams, workers=None) -> Ensemble:
    """Build ``params.m`` base clusterings.

    Every random choice is drawn from a stream keyed by its position, so the
    result is identical for any ``workers`` count.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    params.validate(n=X.shape[0])
    workers = _backend.get_num_threads() if workers is None else max(1, int(workers))
    seed = params.seed
    ks = params.ks
    stats = {"landmark_selections": 0, "knn_calls": 0}

    def landmarks_for(i):
        return select_landmarks(X, params.p, params.alpha,
                                seed_sequence(seed, LANDMARK_STREAM, i))

    sets = _map(landmarks_for, list(range(params.num_sets)), workers)
    stats["landmark_selections"] = len(sets)
    affinities = build_affinity_batch(X, sets, ks, params.K_prime, stats=stats)

    def partition(job):
        idx, aff = job
        i, K = aff.source
        j = ks.index(K)
        drawn = draw_cluster_count(params.c_min, params.c_max,
                                   make_rng(seed, BASE_STREAM, i, j, 0))
        surviving = int((aff.matrix.getnnz(axis=0) > 0).sum())
        c = drawn
        if c > surviving:
            log.info("base clustering %d: c=%d clamped to %d surviving landmarks",
                     idx, drawn, surviving)
            c = surviving
        labels = spectral_partition(aff, max(c, 2), seed=seed_sequence(seed, BASE_STREAM, i, j, 1),
                                    use_light=True)
        return BaseClustering(compact_labels(labels), drawn, i, K)

    base = _map(partition, list(enumerate(affinities)), workers)
    return Ensemble(base, params, stats)


def dump_ensemble(ensemble: Ensemble, directory) -> None:
    """Write ``base_XXX.labels`` files plus ``manifest.txt`` (``key=value`` lines)."""
    from .io import save_labels

    os.makedirs(directory, exist_ok=True)
    lines = [f"{k}={v if not isinstance(v, (list, tuple)) else ','.join(map(str, v))}"
             for k, v in ensemble.params.to_dict().items()]
    lines.append(f"num_base={ensemble.m}")
    for idx, b in enumerate(ensemble.base):
        name = f"base_{idx:03d}.labels"
        save_labels(b.labels, os.path.join(directory, name))
        lines.append(f"base_{idx:03d}=file:{name} landmark_set:{b.landmark_set} K:{b.K} "
                     f"drawn_c:{b.drawn_c} c:{b.c}")
    with open(os.path.join(directory, "manifest.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
