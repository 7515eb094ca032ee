"""Tests for the matrix algebra, Hamiltonian and eigenproblem."""

import numpy as np
import pytest
from spacelike_dirac import BASIS, DomainError, ThreeVector, hamiltonian, verify_algebra
from spacelike_dirac.spinor_algebra import (
    GAMMA5,
    anticommutator,
    characteristic_value,
    eigen_solve,
    exact_propagators,
    helicity_basis,
    helicity_operator,
    mode_hamiltonians,
    spin_rotation,
)


def _random_momentum(rng, m_s):
    direction = ThreeVector.from_array(rng.standard_normal(3)).unit_vector()
    return direction.scaled(m_s * rng.uniform(1.01, 1000.0))


def test_algebra_identities_hold_exactly():
    """Test that every identity of the basis holds with zero deviation."""
    report = verify_algebra(BASIS)
    assert report.all_passed
    assert report.failures() == []
    assert all(c.max_deviation == 0.0 for c in report.checks)
    assert "beta_s = beta*gamma5" in {c.name for c in report.checks}


def test_negative_control_fails():
    """Test that beta in place of beta_s breaks the algebra."""
    report = verify_algebra(BASIS.with_beta_s(BASIS.beta))
    assert not report.all_passed
    failed = {c.name for c in report.failures()}
    assert "beta_s^2 = -I" in failed
    assert "beta_s^dagger = -beta_s" in failed


def test_basis_entries_are_exact():
    """Test that basis matrices hold only 0, +-1 and +-i and are read-only."""
    allowed = {0, 1, -1, 1j, -1j}
    for m in (*BASIS.alphas, BASIS.beta, BASIS.beta_s, BASIS.gamma5):
        assert set(m.flatten().tolist()) <= allowed
        assert not m.flags.writeable


def test_hamiltonian_square_and_pseudo_hermiticity(rng):
    """Test H^2 = (p^2 - m_s^2) I and gamma5 H^dagger gamma5 = H."""
    for _ in range(1000):
        m_s = rng.uniform(0.1, 10.0)
        p = _random_momentum(rng, m_s)
        sign = int(rng.choice([1, -1]))
        H = hamiltonian(p, m_s, sign)
        scale = p.dot(p)
        square = H.matrix @ H.matrix
        assert np.max(np.abs(square - (p.dot(p) - m_s ** 2) * np.eye(4))) <= 1e-13 * scale
        assert H.pseudo_hermiticity_defect() <= 1e-13 * max(1.0, p.norm())


def test_hermiticity_defect_is_twice_the_mass():
    """Test that H is not Hermitian: ||H - H^dagger|| = 2 m_s."""
    H = hamiltonian(ThreeVector(0.3, -0.2, 5.0), 1.7)
    assert H.hermiticity_defect() == pytest.approx(3.4)
    assert H.pseudo_hermiticity_defect() == 0.0


def test_hamiltonian_rejects_bad_input():
    """Test parameter validation."""
    with pytest.raises(DomainError):
        hamiltonian(ThreeVector(0, 0, 1), 0.0)
    with pytest.raises(DomainError):
        hamiltonian(ThreeVector(0, 0, 1), 1.0, momentum_sign=2)


def test_closed_form_eigenpairs(rng):
    """Test residuals and real spectrum of the closed-form eigenpairs."""
    for _ in range(100):
        m_s = rng.uniform(0.1, 10.0)
        p = _random_momentum(rng, m_s)
        for sign in (1, -1):
            H = hamiltonian(p, m_s, sign)
            pairs = eigen_solve(H)
            energy = np.sqrt(p.dot(p) - m_s ** 2)
            assert len(pairs) == 4
            assert sorted(pair.eigenvalue.real for pair in pairs) == pytest.approx(
                [-energy, -energy, energy, energy], rel=1e-12)
            for pair in pairs:
                assert pair.eigenvalue.imag == 0.0
                assert H.residual(pair.eigenvalue, pair.eigenvector.components) <= 1e-12 * H.norm() * max(
                    1.0, pair.eigenvector.norm())


def test_evanescent_quartet():
    """Test the conjugate-imaginary eigenvalues below threshold."""
    H = hamiltonian(ThreeVector(0.0, 0.0, 0.6), 1.0)
    pairs = eigen_solve(H)
    values = sorted(pair.eigenvalue.imag for pair in pairs)
    assert values == pytest.approx([-0.8, -0.8, 0.8, 0.8])
    assert all(pair.eigenvalue.real == 0.0 for pair in pairs)
    for pair in pairs:
        assert H.residual(pair.eigenvalue, pair.eigenvector.components) <= 1e-12 * H.norm()


def test_threshold_kernel():
    """Test that H is defective at |p| = m_s and returns a two-vector kernel."""
    H = hamiltonian(ThreeVector(0.0, 0.0, 2.0), 2.0)
    pairs = eigen_solve(H)
    assert len(pairs) == 2
    for pair in pairs:
        assert pair.eigenvalue == 0
        assert np.allclose(H.matrix @ pair.eigenvector.components, 0.0, atol=1e-14)
    assert np.allclose(H.matrix @ H.matrix, 0.0)


def test_numeric_solver_agrees_with_closed_form(rng):
    """Test the numpy solver against the closed form on 1D momenta."""
    for _ in range(20):
        m_s = rng.uniform(0.5, 2.0)
        p = ThreeVector(0.0, 0.0, m_s * rng.uniform(1.1, 20.0))
        H = hamiltonian(p, m_s)
        closed = eigen_solve(H, method="closed")
        numeric = eigen_solve(H, method="numeric")
        for pair in numeric:
            assert H.residual(pair.eigenvalue, pair.eigenvector.components) <= 1e-12 * H.norm()
        for c in closed:
            v = c.eigenvector.normalized().components
            span = np.column_stack([n.eigenvector.components for n in numeric
                                    if abs(n.eigenvalue - c.eigenvalue) <= 1e-9 * H.norm()])
            coeffs = np.linalg.lstsq(span, v, rcond=None)[0]
            assert np.linalg.norm(span @ coeffs - v) <= 1e-10

    with pytest.raises(DomainError):
        eigen_solve(hamiltonian(ThreeVector(0, 0, 2), 1.0), method="qr")


def test_spectrum_independent_of_momentum_sign(rng):
    """Test that both equations share one spectrum."""
    for _ in range(50):
        m_s = rng.uniform(0.1, 10.0)
        p = _random_momentum(rng, m_s)
        plus = sorted(np.linalg.eigvals(hamiltonian(p, m_s, 1).matrix).real)
        minus = sorted(np.linalg.eigvals(hamiltonian(p, m_s, -1).matrix).real)
        assert plus == pytest.approx(minus, rel=1e-12, abs=1e-12 * p.norm())


def test_characteristic_value_vanishes_on_spectrum():
    """Test det(H - E I) = 0 at E = +-sqrt(p^2 - m_s^2)."""
    H = hamiltonian(ThreeVector(0.0, 0.0, 5.0), 3.0)
    assert abs(characteristic_value(H, 4.0)) <= 1e-10
    assert abs(characteristic_value(H, -4.0)) <= 1e-10
    assert abs(characteristic_value(H, 1.0)) > 1.0


def test_characteristic_polynomial(rng):
    """Test det(H - lam I) = (lam^2 - p^2 + m_s^2)^2 at sample lam for random H."""
    for _ in range(50):
        m_s = rng.uniform(0.1, 10.0)
        p = _random_momentum(rng, m_s)
        H = hamiltonian(p, m_s, int(rng.choice([1, -1])))
        lams = rng.standard_normal(5) * p.norm() + 1j * rng.standard_normal(5) * m_s
        for lam in lams:
            expected = (lam * lam - p.dot(p) + m_s * m_s) ** 2
            scale = (abs(lam) ** 2 + p.dot(p) + m_s * m_s) ** 2
            assert abs(characteristic_value(H, lam) - expected) <= 1e-10 * scale


def test_swapped_alphas_still_pass():
    """Test that relabelling alpha1 and alpha2 keeps every identity."""
    swapped = BASIS.with_alphas(BASIS.alpha2, BASIS.alpha1, BASIS.alpha3)
    report = verify_algebra(swapped)
    assert report.all_passed
    assert all(c.max_deviation == 0.0 for c in report.checks)


def test_anticommutator_with_identity(rng):
    """Test {I, A} = 2A."""
    for _ in range(20):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        np.testing.assert_array_equal(anticommutator(BASIS.identity, A), 2.0 * A)


def test_helicity_frames(rng):
    """Test helicity spinors and the rotation taking z to n."""
    for _ in range(20):
        n = ThreeVector.from_array(rng.standard_normal(3)).unit_vector()
        h_up, h_down = helicity_basis(n)
        op = helicity_operator(n)[:2, :2]
        assert np.allclose(op @ h_up, h_up, atol=1e-14)
        assert np.allclose(op @ h_down, -h_down, atol=1e-14)

        S = spin_rotation(n)
        assert np.allclose(S.conj().T @ S, np.eye(4), atol=1e-14)
        assert np.allclose(S.conj().T @ helicity_operator(n) @ S, helicity_operator(ThreeVector(0, 0, 1)),
                           atol=1e-13)
        assert np.allclose(GAMMA5 @ S, S @ GAMMA5)


def test_exact_propagators_match_matrix_exponential():
    """Test cos/sin and cosh/sinh forms of exp(-i H dt)."""
    k = np.array([0.0, 0.5, 1.0, 3.0, -7.0])
    m_s, dt = 1.0, 0.3
    H = mode_hamiltonians(k, m_s)
    U = exact_propagators(k * k - m_s ** 2, H, dt)
    for i in range(k.size):
        values, vectors = np.linalg.eig(H[i])
        if abs(abs(k[i]) - m_s) < 1e-12:
            expected = np.eye(4) - 1j * dt * H[i]
        else:
            expected = vectors @ np.diag(np.exp(-1j * values * dt)) @ np.linalg.inv(vectors)
        assert np.allclose(U[i], expected, atol=1e-12)
