"""
Literal reference implementations used to cross-check the package.

Everything here is built element by element from the defining formulas,
sharing no code with ``otoclab``.
"""

import cmath
import math

import numpy as np


def literal_operators(D):
    """Position and momentum operators from the clock and shift matrices."""
    Uc = np.zeros((D, D), complex)
    Vs = np.zeros((D, D), complex)
    for q in range(D):
        Uc[q, q] = cmath.exp(2j * math.pi * q / D)
        Vs[(q + 1) % D, q] = 1.0
    X = (Uc - Uc.conj().T) / 2j
    P = (Vs - Vs.conj().T) / 2j
    return X, P


def literal_floquet(K, D, symmetric=False):
    """Kick then free rotation, with the unitary DFT written out as a double loop."""
    F = np.zeros((D, D), complex)
    for p in range(D):
        for q in range(D):
            F[p, q] = cmath.exp(-2j * math.pi * p * q / D) / math.sqrt(D)
    kin = np.zeros((D, D), complex)
    pot = np.zeros((D, D), complex)
    for j in range(D):
        jj = j - D if (symmetric and j >= (D + 1) // 2) else j
        kin[j, j] = cmath.exp(-1j * math.pi * jj * jj / D)
        pot[j, j] = cmath.exp(-1j * K * D * math.cos(2 * math.pi * j / D) / (2 * math.pi))
    return F.conj().T @ kin @ F @ pot


def literal_o1(K, D, t_max, evolve="P"):
    """``Tr(W(t) V W(t) V)/D`` with ``U^t`` formed by repeated multiplication."""
    X, P = literal_operators(D)
    W, V = (P, X) if evolve == "P" else (X, P)
    U = literal_floquet(K, D)
    out = []
    Ut = np.eye(D, dtype=complex)
    for t in range(t_max + 1):
        if t:
            Ut = Ut @ U
        Wt = Ut.conj().T @ W @ Ut
        out.append(np.trace(Wt @ V @ Wt @ V) / D)
    return np.array(out)


def brute_area_fraction(K, n_points, steps, hole=(0.0, 0.1, 0.0, 0.1), seed=7):
    """Fraction of random starts that never enter ``hole``, one point at a time."""
    rng = np.random.default_rng(seed)
    q0, q1, p0, p1 = hole
    stay = 0
    for _ in range(n_points):
        q, p = rng.random(2)
        for _ in range(steps):
            p = (p + K / (2 * math.pi) * math.sin(2 * math.pi * q)) % 1.0
            q = (q + p) % 1.0
            if q0 <= q < q1 and p0 <= p < p1:
                break
        else:
            stay += 1
    return stay / n_points


def long_orbit_area(K, n_points, steps=100_000, hole=(0.0, 0.1, 0.0, 0.1), seed=11):
    """Vectorized long-orbit classification: regular = never enters ``hole`` in ``steps``."""
    rng = np.random.default_rng(seed)
    q, p = rng.random(n_points), rng.random(n_points)
    q0, q1, p0, p1 = hole
    c = K / (2 * math.pi)
    for _ in range(steps):
        p = np.mod(p + c * np.sin(2 * math.pi * q), 1.0)
        q = np.mod(q + p, 1.0)
        out = (q >= q0) & (q < q1) & (p >= p0) & (p < p1)
        if out.any():
            q, p = q[~out], p[~out]
        if q.size == 0:
            break
    return q.size / n_points
