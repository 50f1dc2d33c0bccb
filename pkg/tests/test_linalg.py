import numpy as np
import pytest
from hypothesis import given, strategies as st

from otoclab import linalg
from otoclab.errors import InvalidArgumentError, NumericFailure, ResourceLimitError
from otoclab.linalg import EigenRequest, eig_full, eig_leading, eigen_residuals


def test_dft_of_delta_is_flat():
    e0 = np.zeros((4, 1), complex)
    e0[0] = 1
    assert np.allclose(linalg.dft_apply(e0), 0.5)


def test_dft_of_flat_is_delta():
    out = linalg.dft_apply(np.full((4, 1), 0.5 + 0j))
    assert np.allclose(out[:, 0], [1, 0, 0, 0])


def test_dft_inverse_roundtrip(rng):
    a = rng.standard_normal((16, 3)) + 1j * rng.standard_normal((16, 3))
    back = linalg.dft_apply(linalg.dft_apply(a), "inverse")
    assert np.allclose(back, a, atol=1e-13)


@given(st.integers(2, 40))
def test_dft_preserves_norm(n):
    a = np.random.default_rng(n).standard_normal((n, 2)).astype(complex)
    assert np.allclose(np.linalg.norm(linalg.dft_apply(a), axis=0), np.linalg.norm(a, axis=0))


def test_dft_bad_direction():
    with pytest.raises(InvalidArgumentError):
        linalg.dft_apply(np.eye(2), "sideways")


def test_sort_by_modulus_tiebreak():
    vals = np.array([0.5, -1.0, 1.0, 1j, -1j, 0.2])
    out = vals[linalg.sort_by_modulus(vals)]
    assert out[0] == 1.0
    # among modulus-1 values: larger real part first, then non-negative imaginary part
    assert list(out[1:4]) == [1j, -1j, -1.0]
    assert list(out[4:]) == [0.5, 0.2]


def test_eig_full_companion_cube_roots():
    # companion matrix of z^3 - 1
    C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], float)
    ev = eig_full(C).eigenvalues
    ref = np.exp(2j * np.pi * np.arange(3) / 3)
    assert np.allclose(np.sort_complex(ev), np.sort_complex(ref), atol=1e-12)
    assert ev[0] == pytest.approx(1.0)


def test_eig_full_column_stochastic_has_unit_eigenvalue(rng):
    A = rng.random((50, 50))
    A /= A.sum(axis=0)
    spec = eig_full(A)
    assert abs(spec.eigenvalues[0] - 1) < 1e-12
    assert np.all(spec.moduli <= 1 + 1e-12)
    assert spec.metadata["solver"] == "dense"


def test_eig_full_similarity_invariance(rng):
    A = rng.standard_normal((20, 20))
    Q, _ = np.linalg.qr(rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20)))
    a = eig_full(A).eigenvalues
    b = eig_full(Q.conj().T @ A @ Q).eigenvalues
    assert np.allclose(a, b, atol=1e-10)


def test_eig_full_residuals(rng):
    A = rng.standard_normal((30, 30))
    spec = eig_full(A, vectors=True)
    assert eigen_residuals(A, spec).max() < 1e-12


def test_eig_full_cap():
    with pytest.raises(ResourceLimitError):
        eig_full(np.eye(5), cap=4)


def test_eig_full_non_square():
    with pytest.raises(InvalidArgumentError):
        eig_full(np.ones((2, 3)))


def test_eig_full_lapack_failure(monkeypatch):
    def boom(*a, **k):
        raise np.linalg.LinAlgError("no convergence")
    monkeypatch.setattr(np.linalg, "eigvals", boom)
    with pytest.raises(NumericFailure) as info:
        eig_full(np.eye(3))
    assert info.value.iterations is not None


def test_eig_leading_diagonal():
    d = np.linspace(1, 0.01, 200)
    spec = eig_leading(EigenRequest(matrix=np.diag(d), count=4))
    assert np.allclose(spec.eigenvalues[:4], d[:4], atol=1e-9)
    assert spec.metadata["solver"] == "subspace-iteration"


def test_eig_leading_matrix_free_matches_matrix(rng):
    A = np.diag(np.linspace(1, 0.1, 100)) + 0.01 * rng.standard_normal((100, 100))
    a = eig_leading(EigenRequest(matrix=A, count=3)).eigenvalues[:3]
    b = eig_leading(EigenRequest(matvec=lambda v: A @ v, dim=100, count=3)).eigenvalues[:3]
    assert np.allclose(a, b, atol=1e-8)


def test_eig_leading_conjugate_pair():
    th = 0.7
    R = 0.9 * np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    A = np.zeros((40, 40))
    A[0, 0] = 1.0
    A[1:3, 1:3] = R
    A[3:, 3:] = np.diag(np.linspace(0.5, 0.01, 37))
    ev = eig_leading(EigenRequest(matrix=A, count=2)).eigenvalues
    assert ev[0] == pytest.approx(1.0)
    assert ev[1] == pytest.approx(0.9 * np.exp(1j * th), abs=1e-9)
    assert ev[2] == pytest.approx(0.9 * np.exp(-1j * th), abs=1e-9)


def test_eig_leading_against_dense_ulam():
    from otoclab import pf
    A = pf.build_ulam(17.0, 30, 100, 1 / (60 * np.pi), seed=3).dense
    dense = np.sort(np.abs(eig_full(A).eigenvalues))[::-1][:3]
    it = np.sort(eig_leading(EigenRequest(matrix=A, count=3)).moduli)[::-1][:3]
    assert np.allclose(it, dense, atol=1e-6)


def test_eig_leading_max_iterations():
    # equal-modulus opposite-sign eigenvalues never separate
    A = np.diag(np.r_[1.0, -1.0, 0.999, -0.999, np.linspace(0.5, 0.1, 36)])
    with pytest.raises(NumericFailure) as info:
        eig_leading(EigenRequest(matrix=A, count=3, block=4, max_iterations=5, tolerance=1e-15))
    assert info.value.iterations is not None


@pytest.mark.parametrize("kw", [dict(count=0), dict(tolerance=0), dict(max_iterations=0)])
def test_eig_request_validation(kw):
    with pytest.raises(InvalidArgumentError):
        EigenRequest(matrix=np.eye(10), **kw)


def test_eig_request_needs_operator():
    with pytest.raises(InvalidArgumentError):
        EigenRequest(count=2)
