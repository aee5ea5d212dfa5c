import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from cfineq import symker
from cfineq.errors import DimensionMismatch, DomainError, NotPositiveDefinite
from cfineq.suites import random_spd


def fro(X):
    return np.linalg.norm(X, "fro")


def test_identity_and_diagonal():
    eig = symker.jacobi_eigh(np.eye(4))
    np.testing.assert_array_equal(eig.eigenvalues, np.ones(4))
    np.testing.assert_allclose(eig.basis @ eig.basis.T, np.eye(4), atol=1e-15)
    eig = symker.jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(eig.eigenvalues, [1.0, 2.0, 3.0])


def test_two_by_two():
    eig = symker.jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(eig.eigenvalues, [1.0, 3.0], rtol=1e-15)


def test_matches_lapack(rng):
    for n in (1, 2, 3, 5, 8, 13, 32):
        g = rng.standard_normal((n, n))
        S = (g + g.T) / 2
        eig = symker.jacobi_eigh(S)
        np.testing.assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(S),
                                   atol=1e-13 * max(1.0, fro(S)))
        assert fro(eig.reconstruct() - S) <= 1e-12 * fro(S)
        assert fro(eig.basis.T @ eig.basis - np.eye(n)) <= 1e-12 * n


def test_stacked_input(rng):
    g = rng.standard_normal((7, 5, 5))
    S = symker.sym(g)
    eig = symker.jacobi_eigh(S)
    assert eig.eigenvalues.shape == (7, 5) and eig.basis.shape == (7, 5, 5)
    for i in range(7):
        np.testing.assert_allclose(eig.eigenvalues[i], np.linalg.eigvalsh(S[i]), atol=1e-13)
    np.testing.assert_allclose(symker.eigvalsh(S), eig.eigenvalues, atol=1e-13)


def test_rejects_asymmetric_and_nonsquare():
    with pytest.raises((ValueError, DimensionMismatch)):
        symker.jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises((ValueError, DimensionMismatch)):
        symker.jacobi_eigh(np.ones((2, 3)))


def test_rejects_complex_hermitian():
    with pytest.raises(DomainError):
        symker.jacobi_eigh(np.array([[1.0, 1j], [-1j, 2.0]]))


def test_spd_power_examples(rng):
    S = random_spd(rng, 1, 5)[0]
    assert fro(symker.spd_power(S, 1.0) - S) <= 1e-12 * fro(S)
    root = symker.spd_power(S, 0.5)
    assert fro(root @ root - S) <= 1e-11 * fro(S)
    np.testing.assert_allclose(symker.spd_power(np.diag([4.0, 9.0]), -1.0),
                               np.diag([0.25, 1 / 9]), rtol=1e-15)
    with pytest.raises(NotPositiveDefinite):
        symker.spd_power(np.diag([1.0, -1.0]), 0.5)
    with pytest.raises(NotPositiveDefinite):
        symker.spd_inv(np.zeros((2, 2)))


def test_geometric_mean_examples(rng):
    A, B = random_spd(rng, 2, 4)
    np.testing.assert_array_equal(symker.geometric_mean(A, B, 0.0), A)
    np.testing.assert_array_equal(symker.geometric_mean(A, B, 1.0), B)
    assert fro(symker.geometric_mean(A, A, 0.3) - A) <= 1e-12 * fro(A)
    G = symker.geometric_mean(np.diag([1.0, 4.0]), np.diag([9.0, 1.0]), 0.5)
    np.testing.assert_allclose(G, np.diag([3.0, 2.0]), atol=1e-14)


def test_geometric_mean_symmetry(rng):
    A, B = random_spd(rng, 2, 4)
    G1 = symker.geometric_mean(A, B, 0.3)
    G2 = symker.geometric_mean(B, A, 0.7)
    assert fro(G1 - G2) <= 1e-11 * fro(G1)
    # the midpoint solves the Riccati equation G A^-1 G = B
    G = symker.geometric_mean(A, B, 0.5)
    assert fro(G @ np.linalg.inv(A) @ G - B) <= 1e-10 * fro(B)


def test_harmonic_mean_examples(rng):
    A = random_spd(rng, 1, 3)[0]
    assert fro(symker.harmonic_mean(A, A, 0.4) - A) <= 1e-12 * fro(A)
    np.testing.assert_allclose(symker.harmonic_mean(A, 2 * A, 0.0), A, rtol=1e-12)
    np.testing.assert_allclose(symker.harmonic_mean([[1.0]], [[4.0]], 0.5), [[1.6]], rtol=1e-15)


def test_loewner_examples(rng):
    A = random_spd(rng, 1, 3)[0]
    assert symker.loewner_cmp(A, A).relation == symker.EQUAL
    assert symker.loewner_cmp(np.eye(2), np.diag([2.0, 3.0])).relation == symker.LEQ
    assert symker.loewner_cmp(np.diag([2.0, 3.0]), np.eye(2)).relation == symker.GEQ
    v = symker.loewner_cmp(np.diag([1.0, 3.0]), np.diag([2.0, 1.0]))
    assert v.relation == symker.INCOMPARABLE and not v.leq and not v.geq
    assert v.min_eig_B_minus_A == pytest.approx(-2.0)


def test_loewner_stacked(rng):
    A = random_spd(rng, 4, 3)
    B = A + random_spd(rng, 4, 3)
    v = symker.loewner_cmp(A, B)
    assert list(v.relation) == [symker.LEQ] * 4
    with pytest.raises((ValueError, DimensionMismatch)):
        symker.loewner_cmp(np.eye(2), np.eye(3))


sym_matrices = st.integers(min_value=1, max_value=10).flatmap(
    lambda n: hnp.arrays(np.float64, (n, n),
                         elements=st.floats(min_value=-1e3, max_value=1e3, width=64)))


@given(sym_matrices)
def test_jacobi_invariants(M):
    S = (M + M.T) / 2
    eig = symker.jacobi_eigh(S)
    n = S.shape[0]
    scale = max(fro(S), 1e-300)
    assert fro(eig.reconstruct() - S) <= 1e-12 * scale + 1e-300
    assert fro(eig.basis.T @ eig.basis - np.eye(n)) <= 1e-12 * n
    assert np.all(np.diff(eig.eigenvalues) >= 0)
    assert abs(eig.eigenvalues.sum() - np.trace(S)) <= 1e-12 * max(1.0, np.abs(S).sum())
