"""
Quantum standard map on the D-dimensional torus and its OTOCs.

Operators are dense ``D x D`` complex arrays in the position basis
``|q>, q = 0..D-1``. The correlators are averages over the maximally mixed
state, ``<A> = Tr(A)/D``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import InvalidArgumentError, InvalidDimensionError, ResourceLimitError
from .linalg import dft_apply

D_CAP = 2000
GRIDS = ("positive", "symmetric")
SERIES_COLUMNS = ("t", "re_o1", "im_o1", "abs_o1", "o2", "c")

# Counts correlator evolutions in this process; warm-cache sweeps must leave
# it unchanged.
_evolution_total = 0


def evolution_count():
    return _evolution_total


@dataclass(frozen=True)
class MapParams:
    """Kick strength ``K`` and Hilbert dimension ``D`` of one quantum map."""

    K: float
    D: int

    def __post_init__(self):
        if not float(self.K) >= 0:
            raise InvalidArgumentError(f"K must be >= 0, got {self.K}")
        _check_dim(self.D)

    @property
    def hbar_eff(self):
        return 1.0 / (2 * np.pi * self.D)


def _check_dim(D):
    if int(D) != D or D < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {D}")


def schwinger_shift_v(D):
    """Cyclic shift ``V_S = sum_q |q+1><q|``."""
    _check_dim(D)
    return np.roll(np.eye(D, dtype=complex), 1, axis=0)


def schwinger_clock_u(D):
    """Clock ``U_S = sum_q exp(2 pi i q/D) |q><q|``."""
    _check_dim(D)
    return np.diag(np.exp(2j * np.pi * np.arange(D) / D))


def position_operator(D):
    u = schwinger_clock_u(D)
    return (u - u.conj().T) / 2j


def momentum_operator(D):
    v = schwinger_shift_v(D)
    return (v - v.conj().T) / 2j


def momentum_indices(D, grid="positive"):
    """Momentum labels ``j`` used in the kinetic phase ``exp(-i pi j^2 / D)``."""
    if grid == "positive":
        return np.arange(D)
    if grid == "symmetric":
        j = np.arange(D)
        return np.where(j >= (D + 1) // 2, j - D, j)
    raise InvalidArgumentError(f"unknown momentum grid {grid!r}; expected one of {GRIDS}")


def kinetic_phases(D, grid="positive"):
    j = momentum_indices(D, grid).astype(float)
    return np.exp(-1j * np.pi * j**2 / D)


def potential_phases(params: MapParams):
    q = np.arange(params.D)
    return np.exp(-1j * params.K * params.D * np.cos(2 * np.pi * q / params.D) / (2 * np.pi))


def floquet_unitary(params: MapParams, grid="positive"):
    """
    One period of the kicked evolution, ``U = F^+ diag(kinetic) F diag(potential)``.

    ``F`` is the unitary DFT from position to momentum. Bloch phases are zero.
    """
    kick = np.diag(potential_phases(params))
    free = kinetic_phases(params.D, grid)[:, None] * dft_apply(kick, "forward")
    return dft_apply(free, "inverse")


def heisenberg_steps(op, U, hermitian=False) -> Iterator[np.ndarray]:
    """
    Yield ``op(t) = (U^+)^t op U^t`` for ``t = 0, 1, 2, ...``.

    Each step is one conjugation of the previous iterate. With
    ``hermitian=True`` the iterate is re-symmetrized after every step.
    """
    op = np.asarray(op)
    U = np.asarray(U)
    if op.shape != U.shape or op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise InvalidDimensionError(f"operator {op.shape} and propagator {U.shape} mismatch")
    Ud = U.conj().T
    cur = op
    while True:
        yield cur
        cur = Ud @ cur @ U
        if hermitian:
            cur = 0.5 * (cur + cur.conj().T)


def heisenberg_evolve(op, U, t, hermitian=False):
    if int(t) != t or t < 0:
        raise InvalidArgumentError(f"t must be a non-negative integer, got {t}")
    for i, cur in enumerate(heisenberg_steps(op, U, hermitian)):
        if i == t:
            return cur


@dataclass
class CorrelatorSeries:
    """``O1``, ``O2`` and ``C`` at integer times ``0..t_max``."""

    times: np.ndarray
    o1: np.ndarray
    o2: np.ndarray
    c: np.ndarray
    params: MapParams
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    @property
    def abs_o1(self):
        return np.abs(self.o1)

    def check_invariants(self, rel=1e-8, atol=1e-10):
        """Raise AssertionError if a structural identity fails."""
        n = len(self.times)
        assert len(self.o1) == len(self.o2) == len(self.c) == n
        assert self.times[0] == 0 and np.all(np.diff(self.times) > 0)
        assert np.all(np.abs(self.o1.imag) <= atol * np.maximum(np.abs(self.o1), 1.0))
        assert np.all(self.c >= -atol)
        ref = -2 * (self.o1.real - self.o2)
        assert np.allclose(self.c, ref, rtol=rel, atol=atol)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(f"# otoclab correlator series v1 K={self.params.K!r} D={self.params.D}\n")
            w = csv.writer(fh)
            w.writerow(SERIES_COLUMNS)
            for t, o1, o2, c in zip(self.times, self.o1, self.o2, self.c):
                w.writerow([int(t), repr(float(o1.real)), repr(float(o1.imag)),
                            repr(float(abs(o1))), repr(float(o2)), repr(float(c))])

    @classmethod
    def from_csv(cls, path, K=None, D=None):
        """Read a series written by :meth:`to_csv`."""
        header_k, header_d = K, D
        rows = []
        with open(path, newline="") as fh:
            for line in fh:
                if line.startswith("#"):
                    for tok in line[1:].split():
                        if tok.startswith("K=") and header_k is None:
                            header_k = float(tok[2:])
                        elif tok.startswith("D=") and header_d is None:
                            header_d = int(tok[2:])
                    continue
                rows.append(line)
        reader = csv.DictReader(rows)
        t, o1, o2, c = [], [], [], []
        for r in reader:
            t.append(int(r["t"]))
            o1.append(complex(float(r["re_o1"]), float(r["im_o1"])))
            o2.append(float(r["o2"]))
            c.append(float(r["c"]))
        if header_k is None or header_d is None:
            raise InvalidArgumentError(f"{path}: missing K/D in header")
        return cls(np.array(t), np.array(o1), np.array(o2), np.array(c),
                   MapParams(header_k, header_d))


def _traces_diagonal(W, v):
    # Tr(W V W V) and Tr(W W V V) for V = diag(v), in O(D^2).
    wv = W * v[None, :]
    o1 = np.sum(wv * wv.T)
    o2 = np.sum(W * W.T * (v**2)[:, None])
    return o1, o2


def _traces_dense(W, V, VV):
    wv = W @ V
    o1 = np.sum(wv * wv.T)
    o2 = np.sum((W @ W) * VV.T)
    return o1, o2


def compute_correlators(params: MapParams, t_max, grid="positive", evolve="P",
                        resymmetrize=True, d_cap=D_CAP) -> CorrelatorSeries:
    """
    OTOC components for the pair ``(W, V) = (P, X)`` (or ``(X, P)``).

    ``O1(t) = Tr(W(t) V W(t) V)/D``, ``O2(t) = Tr(W(t)^2 V^2)/D`` and
    ``C(t) = -2 (O1 - O2)``, for ``t = 0..t_max``.

    Parameters
    ----------
    params : MapParams
    t_max : int
        Last time step (inclusive).
    grid : {"positive", "symmetric"}
        Momentum index convention of the kinetic phase.
    evolve : {"P", "X"}
        Which operator is evolved in the Heisenberg picture.
    resymmetrize : bool
        Project the evolved operator back onto Hermitian matrices each step.
    d_cap : int
        Refuse dimensions above this value.
    """
    if int(t_max) != t_max or t_max < 1:
        raise InvalidArgumentError(f"t_max must be a positive integer, got {t_max}")
    if params.D > d_cap:
        raise ResourceLimitError(f"D={params.D} exceeds the configured cap {d_cap}")
    if evolve not in ("P", "X"):
        raise InvalidArgumentError(f"evolve must be 'P' or 'X', got {evolve!r}")
    D = params.D
    U = floquet_unitary(params, grid)
    x = np.sin(2 * np.pi * np.arange(D) / D)
    P = momentum_operator(D)
    if evolve == "P":
        W0 = P
        traces = lambda W: _traces_diagonal(W, x)
    else:
        W0 = np.diag(x).astype(complex)
        PP = P @ P
        traces = lambda W: _traces_dense(W, P, PP)

    o1 = np.empty(t_max + 1, dtype=complex)
    o2 = np.empty(t_max + 1)
    for t, W in zip(range(t_max + 1), heisenberg_steps(W0, U, hermitian=resymmetrize)):
        a, b = traces(W)
        o1[t] = a / D
        o2[t] = b.real / D
    global _evolution_total
    _evolution_total += 1
    c = -2 * (o1.real - o2)
    return CorrelatorSeries(
        np.arange(t_max + 1), o1, o2, c, params,
        meta={"grid": grid, "evolve": evolve, "resymmetrize": resymmetrize},
    )


def commutator_otoc(W, V):
    """``C = Tr([W,V]^+ [W,V]) / D`` evaluated from the commutator itself."""
    comm = W @ V - V @ W
    return float(np.real(np.sum(comm.conj() * comm))) / W.shape[0]
