"""
Dense and iterative linear algebra used by the quantum and classical pipelines.

The dense eigensolver is a thin wrapper over LAPACK ``geev`` (balancing,
Hessenberg reduction, shifted QR). The iterative solver is a block subspace
iteration with Rayleigh-Ritz extraction for transfer operators too large to
diagonalize densely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgumentError, NumericFailure, ResourceLimitError

DENSE_CAP = 4000


def dft_apply(matrix, direction="forward"):
    """
    Apply the unitary discrete Fourier transform along the first axis.

    The forward kernel is ``exp(-2j*pi*q*p/D)/sqrt(D)`` (position to
    momentum); ``"inverse"`` applies its adjoint.
    """
    a = np.asarray(matrix)
    if a.ndim not in (1, 2):
        raise InvalidArgumentError(f"dft_apply expects a vector or matrix, got {a.shape}")
    if direction == "forward":
        return np.fft.fft(a, axis=0, norm="ortho")
    if direction == "inverse":
        return np.fft.ifft(a, axis=0, norm="ortho")
    raise InvalidArgumentError(f"unknown DFT direction {direction!r}")


def sort_by_modulus(values):
    """Order eigenvalues by descending modulus, then real part, then imaginary part."""
    v = np.asarray(values, dtype=complex)
    # lexsort keys: last one is primary. Round the modulus so that conjugate
    # pairs compare equal and fall through to the tie-breaks.
    mod = np.round(np.abs(v), 12)
    order = np.lexsort((-v.imag, -np.round(v.real, 12), -mod))
    return order


@dataclass
class Spectrum:
    """Eigenvalues sorted by descending modulus, plus provenance metadata."""

    eigenvalues: np.ndarray
    metadata: dict = field(default_factory=dict)
    eigenvectors: Optional[np.ndarray] = None

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=complex)
        order = sort_by_modulus(ev)
        self.eigenvalues = ev[order]
        if self.eigenvectors is not None:
            self.eigenvectors = np.asarray(self.eigenvectors)[:, order]

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def moduli(self):
        return np.abs(self.eigenvalues)


def eig_full(matrix, vectors=False, cap=DENSE_CAP, metadata=None):
    """
    All eigenvalues of a general (non-Hermitian) square matrix.

    Parameters
    ----------
    matrix : array_like
        Square real or complex matrix.
    vectors : bool
        Also return right eigenvectors (used for residual checks only).
    cap : int
        Largest dimension accepted for dense reduction.

    Raises
    ------
    ResourceLimitError
        Dimension above ``cap``.
    NumericFailure
        The QR iteration did not converge.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"eig_full expects a square matrix, got {a.shape}")
    if a.shape[0] > cap:
        raise ResourceLimitError(
            f"dimension {a.shape[0]} exceeds dense eigensolver cap {cap}; use eig_leading"
        )
    try:
        if vectors:
            w, v = np.linalg.eig(a)
        else:
            w, v = np.linalg.eigvals(a), None
    except np.linalg.LinAlgError as exc:
        # geev reports the index of the first unconverged eigenvalue, not an
        # iteration count; 30*n sweeps is its internal limit.
        raise NumericFailure(f"dense eigensolver failed: {exc}", iterations=30 * a.shape[0]) from exc
    return Spectrum(w, dict(metadata or {}, solver="dense"), v)


def eigen_residuals(matrix, spectrum):
    """Relative residuals ``|M v - lambda v| / |v|`` for each eigenpair."""
    if spectrum.eigenvectors is None:
        raise InvalidArgumentError("spectrum carries no eigenvectors")
    v = spectrum.eigenvectors
    r = np.asarray(matrix) @ v - v * spectrum.eigenvalues[None, :]
    return np.linalg.norm(r, axis=0) / np.linalg.norm(v, axis=0)


@dataclass
class EigenRequest:
    """
    Parameters for a leading-eigenvalue computation.

    Either ``matrix`` or ``matvec`` (acting on an ``(n, b)`` block) must be
    given; ``dim`` is required with ``matvec``.
    """

    matrix: Optional[np.ndarray] = None
    matvec: Optional[Callable[[np.ndarray], np.ndarray]] = None
    dim: Optional[int] = None
    count: int = 4
    mode: str = "iterative-leading"
    tolerance: float = 1e-10
    max_iterations: int = 5000
    block: Optional[int] = None
    seed: int = 0
    real: bool = True

    def __post_init__(self):
        if self.matrix is None and self.matvec is None:
            raise InvalidArgumentError("EigenRequest needs a matrix or a matvec")
        if self.dim is None:
            if self.matrix is None:
                raise InvalidArgumentError("dim is required when only matvec is given")
            self.dim = np.asarray(self.matrix).shape[0]
        if self.mode not in ("dense-full", "iterative-leading"):
            raise InvalidArgumentError(f"unknown eigen mode {self.mode!r}")
        if self.mode == "dense-full" and self.matrix is None:
            raise InvalidArgumentError("dense-full mode requires an explicit matrix")
        if self.count < 1:
            raise InvalidArgumentError("count must be positive")
        if not self.tolerance > 0:
            raise InvalidArgumentError("tolerance must be positive")
        if self.max_iterations < 1:
            raise InvalidArgumentError("max_iterations must be positive")
        if self.mode == "iterative-leading" and self.count >= self.dim:
            raise InvalidArgumentError("iterative mode requires count < dimension")

    def apply(self, block):
        if self.matvec is not None:
            return self.matvec(block)
        return self.matrix @ block


def _ritz(Q, Z):
    h = Q.conj().T @ Z
    theta, y = np.linalg.eig(h)
    order = sort_by_modulus(theta)
    theta, y = theta[order], y[:, order]
    res = np.linalg.norm(Z @ y - (Q @ y) * theta[None, :], axis=0) / np.linalg.norm(y, axis=0)
    return theta, y, res


def eig_leading(request: EigenRequest) -> Spectrum:
    """
    Largest-modulus eigenvalues by block subspace iteration.

    The block is orthonormalized every step and Ritz values are extracted
    from the projected matrix ``Q^H A Q``. Convergence is declared when the
    residual of each of the leading ``count`` Ritz pairs is below
    ``tolerance`` relative to the dominant Ritz value. If the last wanted
    value has its complex conjugate just outside the wanted set, the pair is
    returned whole.
    """
    if request.mode == "dense-full":
        full = eig_full(request.matrix)
        return Spectrum(full.eigenvalues[: request.count], dict(full.metadata))

    n, k = request.dim, request.count
    p = request.block or min(n, max(2 * k + 2, k + 10))
    p = max(p, k + 1)
    rng = np.random.default_rng(request.seed)
    dtype = float if request.real else complex
    Q = rng.standard_normal((n, p))
    if not request.real:
        Q = Q + 1j * rng.standard_normal((n, p))
    Q, _ = np.linalg.qr(Q.astype(dtype))

    best = np.inf
    stalled = 0
    for it in range(1, request.max_iterations + 1):
        Z = request.apply(Q)
        theta, y, res = _ritz(Q, Z)
        scale = max(abs(theta[0]), np.finfo(float).tiny)
        want = k
        if want < p and abs(theta[want - 1].imag) > 0 and np.isclose(
            theta[want], np.conj(theta[want - 1]), rtol=1e-6, atol=1e-12
        ):
            want += 1
        worst = float(np.max(res[:want]) / scale)
        if worst <= request.tolerance:
            return Spectrum(
                theta[:want],
                {"solver": "subspace-iteration", "iterations": it, "block": p, "residual": worst},
            )
        if worst < best * (1 - 4 * np.finfo(float).eps):
            best, stalled = worst, 0
        else:
            stalled += 1
            if stalled >= 50:
                raise NumericFailure(
                    f"subspace iteration stagnated at residual {worst:.3e}", iterations=it
                )
        Q, _ = np.linalg.qr(Z)
    raise NumericFailure(
        f"subspace iteration did not converge in {request.max_iterations} iterations "
        f"(residual {worst:.3e})",
        iterations=request.max_iterations,
    )
