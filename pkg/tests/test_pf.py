import math

import numpy as np
import pytest

from otoclab import pf
from otoclab.errors import DegenerateKernelError, InvalidArgumentError, NoResonanceError
from otoclab.linalg import Spectrum

# J_n(x) to double precision from mpmath at 30 digits
BESSEL_FIXTURES = [
    (0, 0.0, 1.0),
    (1, 6.6, -0.12498016516056368),
    (-3, 6.6, 0.06405991844278731),
    (5, 17.0, -0.18704411942315585),
    (-12, 33.0, -0.14245719416162342),
    (20, 99.0, 0.07763240401855474),
    (2, 255.0, 0.04844911634650961),
    (-30, 255.0, 0.0029542706471873256),
    (0, 148.5, -0.0653614533704888),
    (7, 1.0, 1.5023258174368083e-06),
]


def literal_momentum_position(K, N, s):
    """Full kernel, one entry at a time, each Gaussian factor normalized over its target index."""
    def g(x):
        d = x - round(x)
        return sum(math.exp(-((d - j) ** 2) / s) for j in range(-3, 4)) / (math.pi * s)

    grid = [i / N for i in range(N)]
    kick = np.zeros((N, N, N))
    drift = np.zeros((N, N, N))
    for a, q in enumerate(grid):
        for b, p in enumerate(grid):
            for b2, p2 in enumerate(grid):
                kick[a, b2, b] = g(p2 - p - K / (2 * math.pi) * math.sin(2 * math.pi * q))
            for a2, q2 in enumerate(grid):
                drift[b, a2, a] = g(q2 - q - p)
    kick /= kick.sum(axis=1, keepdims=True)
    drift /= drift.sum(axis=1, keepdims=True)
    M = np.zeros((N * N, N * N))
    for a in range(N):
        for b in range(N):
            for a2 in range(N):
                for b2 in range(N):
                    M[a2 * N + b2, a * N + b] = kick[a, b2, b] * drift[b2, a2, a]
    return M


# momentum-position


def test_momentum_position_matches_literal_kernel():
    op = pf.build_momentum_position(3.0, 6, 0.01)
    assert np.allclose(op.matrix, literal_momentum_position(3.0, 6, 0.01), atol=1e-13)


@pytest.mark.parametrize("K", [0.0, 6.6, 17.0])
def test_momentum_position_stochastic(K):
    M = pf.build_momentum_position(K, 12, 0.001).matrix
    assert np.all(M >= 0)
    assert np.allclose(M.sum(axis=0), 1, atol=1e-12)
    assert np.allclose(M @ np.ones(144), 1, atol=1e-12)  # uniform density is invariant
    ev = pf.spectrum(pf.build_momentum_position(K, 12, 0.001)).eigenvalues
    assert abs(ev[0] - 1) < 1e-8


def test_momentum_position_free_rotation_is_permutation():
    N = 8
    M = pf.build_momentum_position(0.0, N, 1e-4).matrix
    P = np.zeros_like(M)
    for a in range(N):
        for b in range(N):
            P[((a + b) % N) * N + b, a * N + b] = 1
    assert np.allclose(M, P, atol=1e-10)


def test_momentum_position_degenerate_smoothing():
    with pytest.raises(DegenerateKernelError):
        pf.build_momentum_position(6.6, 4, 1e-6)


@pytest.mark.parametrize("kw", [dict(N=1), dict(s=0.0), dict(s=-1.0)])
def test_momentum_position_argument_errors(kw):
    with pytest.raises(InvalidArgumentError):
        pf.build_momentum_position(1.0, **kw)


def test_momentum_position_ordering():
    a = abs(pf.resonance(pf.build_momentum_position(6.6)))
    b = abs(pf.resonance(pf.build_momentum_position(17.0)))
    assert a > b + 0.02


def test_periodic_gaussian_is_periodic():
    x = np.linspace(-2, 2, 41)
    assert np.allclose(pf.periodic_gaussian(x, 0.01), pf.periodic_gaussian(x + 3, 0.01))


# Fourier


@pytest.mark.parametrize("n,x,ref", BESSEL_FIXTURES)
def test_bessel_against_high_precision(n, x, ref):
    from scipy.special import jv
    assert abs(jv(n, x) - ref) <= 1e-12


@pytest.mark.parametrize("K,sigma", [(6.6, 0.2), (17.0, 0.0), (0.0, 0.3)])
def test_fourier_zero_mode_fixed(K, sigma):
    op = pf.build_fourier(K, 5, sigma)
    idx = 5 * 11 + 5
    row, col = op.dense[idx], op.dense[:, idx]
    assert row[idx] == 1.0
    assert np.count_nonzero(col) == 1


def _labels(k_max):
    modes = np.arange(-k_max, k_max + 1)
    k, m = np.meshgrid(modes, modes, indexing="ij")
    return k.ravel(), m.ravel()


def test_fourier_selection_rule():
    M = pf.build_fourier(6.6, 6, 0.2).dense
    k, m = _labels(6)
    allowed = (k[:, None] - k[None, :]) == m[:, None]
    assert np.all(M[~allowed] == 0)


def test_fourier_entries_match_formula():
    from scipy.special import jv
    K, sigma, k_max = 6.6, 0.2, 4
    M = pf.build_fourier(K, k_max, sigma).dense
    k, m = _labels(k_max)
    for r in range(len(k)):
        for c in range(len(k)):
            want = 0.0
            if k[r] - k[c] == m[r]:
                want = jv(m[r] - m[c], k[c] * K) * math.exp(-sigma**2 * m[r] ** 2 / 2)
            assert M[r, c] == pytest.approx(want, abs=1e-15)


def test_fourier_free_rotation_structure():
    M = pf.build_fourier(0.0, 4, 0.0).dense
    k, m = _labels(4)
    nz = np.nonzero(M)
    assert np.all(m[nz[0]] == m[nz[1]])
    assert np.all(k[nz[0]] - k[nz[1]] == m[nz[0]])
    assert np.all(M[nz] == 1.0)


def test_fourier_ordering():
    a = abs(pf.resonance(pf.build_fourier(6.6, 15, 0.2)))
    b = abs(pf.resonance(pf.build_fourier(17.0, 15, 0.2)))
    assert a > b + 0.02


@pytest.mark.parametrize("K", [6.6, 17.0])
def test_fourier_converges_in_truncation(K):
    lam = [abs(pf.resonance(pf.build_fourier(K, pf.fourier_cutoff(T), 0.2))) for T in range(22, 31)]
    assert np.ptp(lam) < 0.01


@pytest.mark.parametrize("K", [6.6, 10.0, 17.0])
def test_fourier_noise_monotonicity(K):
    lam = [abs(pf.resonance(pf.build_fourier(K, 15, s))) for s in (0.0, 0.1, 0.2, 0.3)]
    assert np.all(np.diff(lam) <= 1e-12)


def test_fourier_cutoff_mapping():
    assert pf.fourier_cutoff(30) == 15
    assert pf.build_fourier(1.0, pf.fourier_cutoff(30)).dim == 961
    with pytest.raises(InvalidArgumentError):
        pf.fourier_cutoff(1)


# Ulam


@pytest.mark.parametrize("K,noise", [(0.0, 0.0), (6.6, 0.0), (17.0, 1 / (60 * np.pi)), (3.0, 0.05)])
def test_ulam_columns_sum_to_one(K, noise):
    S = pf.build_ulam(K, 12, 37, noise, seed=1).dense
    assert np.all(S >= 0)
    assert np.max(np.abs(S.sum(axis=0) - 1)) <= 1e-12


def test_ulam_center_start_is_permutation():
    S = pf.build_ulam(0.0, 10, 5, 0.0, start="center").dense
    assert np.all(np.count_nonzero(S, axis=0) == 1)
    assert np.all(S.max(axis=0) == 1.0)


def test_ulam_k17_resonance_inside_unit_disc():
    op = pf.build_ulam(17.0, 30, 100, 1 / (2 * np.pi * 30), seed=0)
    lam = pf.resonance(op)
    assert abs(lam) < 1


def test_ulam_deterministic():
    a = pf.build_ulam(6.6, 8, 20, 0.01, seed=5).dense
    b = pf.build_ulam(6.6, 8, 20, 0.01, seed=5).dense
    c = pf.build_ulam(6.6, 8, 20, 0.01, seed=6).dense
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("kw", [dict(M=1), dict(n_per_cell=0), dict(noise_std=-1),
                                dict(start="corner")])
def test_ulam_argument_errors(kw):
    with pytest.raises(InvalidArgumentError):
        pf.build_ulam(1.0, **kw)


# spectra


def test_leading_resonance_examples():
    assert pf.leading_resonance(Spectrum([1.0, 0.8, 0.5]), 0.01) == 0.8
    with pytest.raises(NoResonanceError):
        pf.leading_resonance(Spectrum([1.0, 0.999]), 0.01)
    pair = Spectrum([1.0, 0.7 - 0.1j, 0.7 + 0.1j, 0.2])
    assert pf.leading_resonance(pair, 0.01) == 0.7 + 0.1j


def test_leading_resonance_bad_tolerance():
    with pytest.raises(InvalidArgumentError):
        pf.leading_resonance(Spectrum([1.0, 0.5]), 0.0)


@pytest.mark.parametrize("op", [
    pf.build_momentum_position(6.6, 14, 0.001),
    pf.build_fourier(6.6, 7, 0.2),
    pf.build_ulam(6.6, 14, 30, 0.01),
], ids=["momentum-position", "fourier", "ulam"])
def test_spectral_radius_and_conjugate_pairs(op):
    ev = pf.spectrum(op).eigenvalues
    assert abs(ev[0]) <= 1 + 1e-6
    assert abs(ev[0] - 1) < 1e-8
    # spectrum of a real matrix is closed under conjugation
    ev_sorted = np.sort_complex(ev)
    conj_sorted = np.sort_complex(ev.conj())
    assert np.max(np.abs(ev_sorted - conj_sorted)) < 1e-8


@pytest.mark.parametrize("K", [7.0, 10.0, 17.0])
def test_cross_method_agreement(K):
    a = abs(pf.resonance(pf.build_fourier(K, 15, 0.2)))
    b = abs(pf.resonance(pf.build_momentum_position(K, 90, 0.001)))
    assert abs(a - b) <= 0.05


def test_iterative_and_dense_agree_on_momentum_position():
    op = pf.build_momentum_position(10.0, 20, 0.001)
    dense = pf.spectrum(op).eigenvalues[:4]
    it = pf.spectrum(op, count=4).eigenvalues[:4]
    assert np.allclose(np.abs(it), np.abs(dense), atol=1e-8)


def test_operator_metadata():
    meta = pf.build_ulam(6.6, 5, 3, 0.1, seed=9).metadata()
    assert meta["method"] == "ulam" and meta["basis"]["M"] == 5 and meta["seed"] == 9
