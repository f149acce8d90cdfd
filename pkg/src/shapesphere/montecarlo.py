"""Monte Carlo under the uniform (area) measure on the shape sphere.

Samples are drawn in cluster-1 shape coordinates: ``cos(theta)`` uniform on
[-1, 1] and ``phi`` uniform on [0, 2 pi). Predicates see the maximal angle
through reconstruct-and-measure, never through the cot law.

Reproducibility: the ``n`` draws are cut into fixed chunks of ``chunk_size``;
chunk ``i`` gets its own Philox stream seeded by
``SeedSequence(seed, spawn_key=(i,))``. Each chunk reports an integer hit
count, so the total is independent of how many threads ran the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .anglelaw import angles_array
from .shapemap import ShapeCoords

SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class McConfig:
    n: int = 1_000_000
    seed: int = 0
    chunk_size: int = 2**16
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not (0 <= self.seed <= SEED_MAX):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be positive, got {self.chunk_size}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    n: int
    predicate: str
    seed: int
    hits: int = 0


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """The RNG stream for one chunk."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def sample_uniform_shapes(rng: np.random.Generator, n: int):
    """``(theta, phi)`` arrays of ``n`` uniform shapes (cluster-1 frame).

    One call to ``rng.random((n, 2))``: column 0 drives ``cos(theta)``,
    column 1 drives ``phi``.
    """
    u = rng.random((n, 2))
    theta = np.arccos(1.0 - 2.0 * u[:, 0])
    phi = 2.0 * math.pi * u[:, 1]
    return theta, phi


def sample_uniform_shape(rng: np.random.Generator) -> ShapeCoords:
    theta, phi = sample_uniform_shapes(rng, 1)
    phi = float(phi[0])
    if phi > math.pi:
        phi -= 2.0 * math.pi
    return ShapeCoords(float(theta[0]), phi, 1)


# ---------------------------------------------------------------------------
# predicates


@dataclass(frozen=True)
class Predicate:
    """Vectorised shape predicate: ``angles`` is the ``(m, 3)`` array of planar angles at A, B, C."""

    name: str
    test: Callable[[np.ndarray], np.ndarray]

    def __call__(self, theta, phi) -> np.ndarray:
        return np.asarray(self.test(angles_array(theta, phi, 1)), dtype=bool)


def obtuse() -> Predicate:
    return Predicate("obtuse", lambda a: a.max(axis=-1) > math.pi / 2)


def alpha_obtuse(alpha: float) -> Predicate:
    """``alpha_max >= alpha``; the boundary has measure zero, so ``>`` would estimate the same thing."""
    return Predicate(f"alpha_obtuse({alpha!r})", lambda a: a.max(axis=-1) >= alpha)


def fermat_obtuse() -> Predicate:
    return Predicate("fermat_obtuse", lambda a: a.max(axis=-1) >= 2.0 * math.pi / 3.0)


def right_band(eps: float) -> Predicate:
    return Predicate(f"right_band({eps!r})", lambda a: np.abs(a.max(axis=-1) - math.pi / 2) < eps)


def cluster_obtuse(k: int) -> Predicate:
    if k not in (1, 2, 3):
        raise ValueError(f"cluster must be 1, 2 or 3, got {k!r}")
    return Predicate(f"cluster_{k}_obtuse", lambda a: a[..., k - 1] > math.pi / 2)


def from_shape_predicate(name: str, fn: Callable[[ShapeCoords], bool]) -> Predicate:
    """Wrap a scalar ``ShapeCoords -> bool`` predicate (slow; for ad hoc checks)."""

    class _Scalar(Predicate):
        def __call__(self, theta, phi):
            phi = np.where(phi > math.pi, phi - 2.0 * math.pi, phi)
            return np.array([bool(fn(ShapeCoords(float(t), float(p), 1))) for t, p in zip(theta, phi)])

    return _Scalar(name, lambda a: None)


def builtin_predicates() -> dict[str, Callable[..., Predicate]]:
    return {
        "obtuse": obtuse,
        "alpha_obtuse": alpha_obtuse,
        "fermat_obtuse": fermat_obtuse,
        "right_band": right_band,
        "cluster_k_obtuse": cluster_obtuse,
    }


# ---------------------------------------------------------------------------
# estimation


def _chunks(cfg: McConfig):
    full, rest = divmod(cfg.n, cfg.chunk_size)
    sizes = [cfg.chunk_size] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _count(predicate, seed, chunk, size) -> int:
    theta, phi = sample_uniform_shapes(chunk_generator(seed, chunk), size)
    return int(np.count_nonzero(predicate(theta, phi)))


def estimate(predicate: Predicate, cfg: McConfig | None = None) -> McEstimate:
    cfg = cfg or McConfig()
    jobs = _chunks(cfg)
    if cfg.workers == 1:
        counts = [_count(predicate, cfg.seed, i, m) for i, m in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            counts = list(pool.map(lambda job: _count(predicate, cfg.seed, *job), jobs))
    hits = sum(counts)
    p = hits / cfg.n
    return McEstimate(p, math.sqrt(p * (1.0 - p) / cfg.n), cfg.n, predicate.name, cfg.seed, hits)
