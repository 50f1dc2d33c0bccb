"""
Classical standard map on the unit torus.

    p' = p + K/(2 pi) sin(2 pi q)   (mod 1)
    q' = q + p'                     (mod 1)

Random initial conditions are drawn in fixed-size chunks, each from its own
stream seeded by ``(seed, chunk_index)``; results therefore do not depend on
how chunks are distributed across workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError

CHUNK = 4096
K_CRITICAL = 0.971635406  # last rotational KAM curve; informational only


class PhasePoint(NamedTuple):
    q: float
    p: float


@dataclass(frozen=True)
class Hole:
    """Axis-aligned absorbing rectangle ``[q0, q1) x [p0, p1)``."""

    q0: float = 0.0
    q1: float = 0.1
    p0: float = 0.0
    p1: float = 0.1

    def __post_init__(self):
        if not (0 <= self.q0 < self.q1 <= 1 and 0 <= self.p0 < self.p1 <= 1):
            raise InvalidArgumentError(f"hole {self} must have positive area inside the unit square")

    def contains(self, q, p):
        return (q >= self.q0) & (q < self.q1) & (p >= self.p0) & (p < self.p1)

    def as_tuple(self):
        return (self.q0, self.q1, self.p0, self.p1)


@dataclass(frozen=True)
class RegularAreaEstimate:
    K: float
    n_total: int
    n_remaining: int
    steps: int
    hole: Hole

    @property
    def area(self):
        return self.n_remaining / self.n_total


def step_arrays(q, p, K):
    """Vectorized forward step; returns new ``(q, p)`` arrays."""
    p = np.mod(p + K / (2 * np.pi) * np.sin(2 * np.pi * q), 1.0)
    q = np.mod(q + p, 1.0)
    return q, p


def inverse_step_arrays(q, p, K):
    q = np.mod(q - p, 1.0)
    p = np.mod(p - K / (2 * np.pi) * np.sin(2 * np.pi * q), 1.0)
    return q, p


def step(point: PhasePoint, K) -> PhasePoint:
    q, p = step_arrays(point.q, point.p, K)
    return PhasePoint(float(q), float(p))


def inverse_step(point: PhasePoint, K) -> PhasePoint:
    q, p = inverse_step_arrays(point.q, point.p, K)
    return PhasePoint(float(q), float(p))


def trajectory(start, K, n):
    if n < 1:
        raise InvalidArgumentError("trajectory length must be >= 1")
    pts = [PhasePoint(*start)]
    for _ in range(n):
        pts.append(step(pts[-1], K))
    return pts


def chunk_points(seed, chunk, size):
    """Uniform initial conditions for one chunk, independent of all other chunks."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(chunk)]))
    pts = rng.random((size, 2))
    return pts[:, 0], pts[:, 1]


def _chunks(n_total):
    return [(i, min(CHUNK, n_total - i * CHUNK)) for i in range((n_total + CHUNK - 1) // CHUNK)]


def phase_portrait(K, n_ic, n_steps, seed=0):
    """
    Orbits of ``n_ic`` random initial conditions.

    Returns
    -------
    q, p : ndarray
        Visited points, ``n_ic * (n_steps + 1)`` of each, grouped by orbit.
    ids : ndarray
        Orbit index of each point.
    """
    if n_ic < 1 or n_steps < 1:
        raise InvalidArgumentError("n_ic and n_steps must be positive")
    qs, ps = [], []
    for ci, size in _chunks(n_ic):
        q, p = chunk_points(seed, ci, size)
        hist_q = np.empty((n_steps + 1, size))
        hist_p = np.empty((n_steps + 1, size))
        hist_q[0], hist_p[0] = q, p
        for t in range(1, n_steps + 1):
            q, p = step_arrays(q, p, K)
            hist_q[t], hist_p[t] = q, p
        qs.append(hist_q.T.ravel())
        ps.append(hist_p.T.ravel())
    ids = np.repeat(np.arange(n_ic), n_steps + 1)
    return np.concatenate(qs), np.concatenate(ps), ids


def _survivors(K, q, p, steps, hole):
    # Points inside the hole at t=0 are absorbed immediately.
    keep = ~hole.contains(q, p)
    q, p = q[keep], p[keep]
    for _ in range(steps):
        if q.size == 0:
            break
        q, p = step_arrays(q, p, K)
        keep = ~hole.contains(q, p)
        if not keep.all():
            q, p = q[keep], p[keep]
    return q.size


def estimate_regular_area(K, n_total=100_000, steps=10_000, hole=None, seed=0, workers=1):
    """
    Fraction of random initial conditions that never fall into an absorbing hole.

    With the hole placed in the chaotic sea, chaotic orbits are eventually
    absorbed and the surviving fraction estimates the area of the regular
    islands.
    """
    hole = hole or Hole()
    if not isinstance(hole, Hole):
        hole = Hole(*hole)
    if n_total < 1 or steps < 1:
        raise InvalidArgumentError("n_total and steps must be positive")

    def run(chunk):
        ci, size = chunk
        q, p = chunk_points(seed, ci, size)
        return _survivors(K, q, p, steps, hole)

    chunks = _chunks(n_total)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, chunks))
    else:
        counts = [run(c) for c in chunks]
    return RegularAreaEstimate(float(K), int(n_total), int(sum(counts)), int(steps), hole)


def survival_curve(K, n_total, steps, hole=None, seed=0):
    """Surviving count after each of ``0..steps`` iterations (for diagnostics)."""
    hole = hole or Hole()
    out = np.zeros(steps + 1, dtype=int)
    for ci, size in _chunks(n_total):
        q, p = chunk_points(seed, ci, size)
        keep = ~hole.contains(q, p)
        q, p = q[keep], p[keep]
        out[0] += q.size
        for t in range(1, steps + 1):
            q, p = step_arrays(q, p, K)
            keep = ~hole.contains(q, p)
            q, p = q[keep], p[keep]
            out[t] += q.size
    return out
