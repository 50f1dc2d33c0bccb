"""
Coarse-grained Perron-Frobenius operators of the standard map.

Three discretizations are provided:

* ``momentum-position``: the delta kernel on an ``N x N`` phase-space grid
  with each delta replaced by a narrow periodic Gaussian of width parameter
  ``s``. The kernel factors into a kick (smoothed in ``p``) followed by a
  drift (smoothed in ``q``); both factors are column-normalized, which makes
  the composed operator column-stochastic and never requires forming the
  ``N^2 x N^2`` matrix.
* ``fourier``: the kernel in the Fourier basis ``(k, m)`` with Bessel
  couplings and Gaussian damping of the ``q`` mode ``m``.
* ``ulam``: cell-to-cell transition frequencies from sampled trajectories.

Grid state ``(a, b)`` (``q`` index ``a``, ``p`` index ``b``) is flattened as
``a * N + b``; Fourier mode ``(k, m)`` as ``(k + k_max) * (2 k_max + 1) + (m + k_max)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import jv

from .errors import DegenerateKernelError, InvalidArgumentError, NoResonanceError
from .linalg import EigenRequest, Spectrum, eig_full, eig_leading

METHODS = ("momentum-position", "fourier", "ulam")
DENSE_LIMIT = 1500


@dataclass
class PFOperator:
    """A finite approximation of the transfer operator, dense or matrix-free."""

    method: str
    K: float
    noise: float
    basis: dict
    dim: int
    apply: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    dense: Optional[np.ndarray] = field(default=None, repr=False)
    seed: Optional[int] = None

    def matvec(self, v):
        return self.apply(v)

    @property
    def matrix(self):
        """Dense matrix; materialized column by column for matrix-free operators."""
        if self.dense is None:
            self.dense = self.apply(np.eye(self.dim))
        return self.dense

    def metadata(self):
        return {"method": self.method, "K": self.K, "noise": self.noise,
                "basis": dict(self.basis), "seed": self.seed, "dim": self.dim}


def periodic_gaussian(x, s, terms=3):
    """``sum_j exp(-(x - j)^2 / s) / (pi s)`` for ``j = -terms..terms``."""
    d = x - np.round(x)
    out = np.zeros_like(d, dtype=float)
    for j in range(-terms, terms + 1):
        out += np.exp(-((d - j) ** 2) / s)
    return out / (np.pi * s)


def _normalize_columns(kernel, axis):
    sums = kernel.sum(axis=axis, keepdims=True)
    if not np.all(sums > 0) or not np.all(np.isfinite(sums)):
        raise DegenerateKernelError(
            "smoothing weights underflow for this (N, s); increase s or the grid size"
        )
    return kernel / sums


def momentum_position_factors(K, N, s):
    """
    Column-stochastic kick and drift factors.

    Returns
    -------
    kick : ndarray, shape (N, N, N)
        ``kick[a, b', b]`` weight of ``p_b -> p_b'`` at fixed ``q_a``.
    drift : ndarray, shape (N, N, N)
        ``drift[b', a', a]`` weight of ``q_a -> q_a'`` at fixed new ``p_b'``.
    """
    x = np.arange(N) / N
    shift = K / (2 * np.pi) * np.sin(2 * np.pi * x)
    kick = periodic_gaussian(x[None, :, None] - x[None, None, :] - shift[:, None, None], s)
    drift = periodic_gaussian(x[None, :, None] - x[None, None, :] - x[:, None, None], s)
    return _normalize_columns(kick, 1), _normalize_columns(drift, 1)


def build_momentum_position(K, N=90, s=0.001):
    """Gaussian-smoothed delta kernel on the ``N x N`` uniform (q, p) grid."""
    if int(N) != N or N < 2:
        raise InvalidArgumentError(f"grid size N must be >= 2, got {N}")
    if not s > 0:
        raise InvalidArgumentError(f"smoothing parameter s must be > 0, got {s}")
    N = int(N)
    kick, drift = momentum_position_factors(K, N, s)

    def apply(v):
        v = np.asarray(v)
        vec = v.ndim == 1
        r = v.reshape(N, N, -1)                     # [a, b, col]
        w = np.matmul(kick, r)                      # [a, b', col]
        u = np.matmul(drift, w.transpose(1, 0, 2))  # [b', a', col]
        out = u.transpose(1, 0, 2).reshape(N * N, -1)
        return out[:, 0] if vec else out

    return PFOperator("momentum-position", float(K), float(s), {"N": N}, N * N, apply)


def fourier_cutoff(truncation):
    """Map a per-axis mode count to the cutoff of the square window ``|k|, |m| <= k_max``."""
    if truncation < 2:
        raise InvalidArgumentError("truncation must be >= 2")
    return int(truncation) // 2


def build_fourier(K, k_max=15, sigma=0.2):
    """
    Transfer operator in the Fourier basis,

        (k, m | L | k', m') = J_{m - m'}(k' K) exp(-sigma^2 m^2 / 2) delta_{k - k', m},

    truncated to ``|k|, |m| <= k_max``.
    """
    if int(k_max) != k_max or k_max < 1:
        raise InvalidArgumentError(f"k_max must be a positive integer, got {k_max}")
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be >= 0, got {sigma}")
    k_max = int(k_max)
    modes = np.arange(-k_max, k_max + 1)
    L = modes.size
    k, m = np.meshgrid(modes, modes, indexing="ij")     # row labels
    kp = k - m                                          # selection rule
    valid = np.abs(kp) <= k_max
    order = m[:, :, None] - modes[None, None, :]       # m - m'
    coupling = jv(order, (kp * K)[:, :, None]) * np.exp(-0.5 * sigma**2 * m**2)[:, :, None]

    mat = np.zeros((L, L, L, L))
    rows_k, rows_m = np.nonzero(valid)
    mat[rows_k, rows_m, kp[rows_k, rows_m] + k_max, :] = coupling[rows_k, rows_m, :]
    mat = mat.reshape(L * L, L * L)
    return PFOperator("fourier", float(K), float(sigma),
                      {"k_max": k_max, "modes_per_axis": L}, L * L,
                      lambda v: mat @ v, dense=mat)


def build_ulam(K, M=30, n_per_cell=100, noise_std=0.0, seed=0, start="random"):
    """
    Ulam transition matrix ``S_ij = N_ij / N_c`` on ``M x M`` cells.

    Parameters
    ----------
    start : {"random", "center"}
        Start points uniformly inside each cell, or all at the cell center.
    noise_std : float
        Standard deviation of Gaussian noise added to the position after the
        map step.
    """
    if int(M) != M or M < 2:
        raise InvalidArgumentError(f"cell count M must be >= 2, got {M}")
    if n_per_cell < 1:
        raise InvalidArgumentError("n_per_cell must be >= 1")
    if noise_std < 0:
        raise InvalidArgumentError("noise_std must be >= 0")
    if start not in ("random", "center"):
        raise InvalidArgumentError(f"unknown start scheme {start!r}")
    M, n = int(M), int(n_per_cell)
    rng = np.random.default_rng(seed)
    a, b = np.divmod(np.arange(M * M), M)
    if start == "random":
        q = (a[:, None] + rng.random((M * M, n))) / M
        p = (b[:, None] + rng.random((M * M, n))) / M
    else:
        q = np.repeat(((a + 0.5) / M)[:, None], n, axis=1)
        p = np.repeat(((b + 0.5) / M)[:, None], n, axis=1)
    p = np.mod(p + K / (2 * np.pi) * np.sin(2 * np.pi * q), 1.0)
    q = q + p
    if noise_std > 0:
        q = q + noise_std * rng.standard_normal(q.shape)
    q = np.mod(q, 1.0)
    dest = (np.floor(q * M).astype(int) % M) * M + (np.floor(p * M).astype(int) % M)
    src = np.repeat(np.arange(M * M)[:, None], n, axis=1)
    counts = np.bincount((dest * (M * M) + src).ravel(), minlength=(M * M) ** 2)
    mat = counts.reshape(M * M, M * M) / n
    return PFOperator("ulam", float(K), float(noise_std),
                      {"M": M, "n_per_cell": n, "start": start}, M * M,
                      lambda v: mat @ v, dense=mat, seed=seed)


def spectrum(op: PFOperator, count=None, tolerance=1e-10, dense_limit=DENSE_LIMIT):
    """
    Eigenvalues of ``op``: all of them densely when small, else the leading ``count``.
    """
    if count is None and op.dim <= dense_limit:
        return eig_full(op.matrix, metadata=op.metadata())
    count = count or 8
    req = EigenRequest(matvec=op.matvec, dim=op.dim, count=count, tolerance=tolerance,
                       seed=op.seed or 0)
    spec = eig_leading(req)
    spec.metadata.update(op.metadata())
    return spec


def leading_resonance(spec: Spectrum, unit_tol=1e-6):
    """
    Largest-modulus eigenvalue strictly inside ``|lambda| < 1 - unit_tol``.

    Ties go to the larger real part, then to the non-negative imaginary part.
    """
    if not 0 < unit_tol < 1:
        raise InvalidArgumentError("unit_tol must lie in (0, 1)")
    ev = spec.eigenvalues  # already in tie-break order
    if ev.size == 0:
        raise InvalidArgumentError("empty spectrum")
    inside = np.abs(ev) < 1 - unit_tol
    if not inside.any():
        raise NoResonanceError(
            f"all {ev.size} eigenvalues lie within {unit_tol} of the unit circle"
        )
    return complex(ev[np.argmax(inside)])


def resonance(op: PFOperator, unit_tol=1e-6, count=8, dense_limit=DENSE_LIMIT):
    """Leading resonance of ``op``, widening the iterative search if needed."""
    if op.dim <= dense_limit:
        return leading_resonance(spectrum(op), unit_tol)
    while True:
        spec = spectrum(op, count=count, dense_limit=dense_limit)
        try:
            return leading_resonance(spec, unit_tol)
        except NoResonanceError:
            if 2 * count >= op.dim:
                raise
            count *= 2
