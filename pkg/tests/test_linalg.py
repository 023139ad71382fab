import numpy as np
import pytest

from ftpulse.linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    NonHermitianError,
    expm_hermitian_prop,
    gate_error_metrics,
    kron_embed,
    reduced_density_matrix,
    single_qubit_bloch,
)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def random_unitary(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


class TestExpmHermitianProp:
    def test_dt_zero_is_identity(self):
        H = random_hermitian(8, 1)
        assert np.allclose(expm_hermitian_prop(H, 0.0), np.eye(8), atol=1e-12)

    def test_diagonal_generator(self):
        U = expm_hermitian_prop(PAULI_Z, np.pi / 2)
        want = np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)])
        assert np.abs(U - want).max() < 1e-12

    def test_unitary_and_inverse(self):
        # oracle: independent eigendecomposition reassembled by hand
        H = random_hermitian(8, 2)
        dt = 0.7
        U = expm_hermitian_prop(H, dt)
        assert np.abs(U.conj().T @ U - np.eye(8)).max() < 1e-10
        w, v = np.linalg.eigh(H)
        inv = v @ np.diag(np.exp(1j * dt * w)) @ v.conj().T
        assert np.abs(U @ inv - np.eye(8)).max() < 1e-10

    def test_forward_backward_cancel(self):
        H = random_hermitian(16, 3)
        U = expm_hermitian_prop(H, 0.31)
        V = expm_hermitian_prop(H, 0.0)  # identity
        # composition property exp(a)exp(b) = exp(a+b)
        a, b = 0.31, 0.22
        Uab = expm_hermitian_prop(H, a) @ expm_hermitian_prop(H, b)
        assert np.abs(Uab - expm_hermitian_prop(H, a + b)).max() < 1e-10
        assert np.abs(V - np.eye(16)).max() < 1e-12
        assert np.abs(U @ U.conj().T - np.eye(16)).max() < 1e-10

    def test_rejects_non_hermitian(self):
        H = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NonHermitianError):
            expm_hermitian_prop(H, 0.1)

    def test_rejects_negative_duration(self):
        with pytest.raises(ValueError):
            expm_hermitian_prop(PAULI_X, -0.1)


class TestKronEmbed:
    def test_slot_two_of_five(self):
        got = kron_embed(PAULI_Z, 2, 5)
        want = np.kron(
            np.kron(np.eye(2), PAULI_Z), np.eye(8)
        )
        assert np.array_equal(got, want)

    def test_single_qubit_passthrough(self):
        assert np.array_equal(kron_embed(PAULI_X, 1, 1), PAULI_X)

    def test_embedded_pauli_algebra(self):
        op = kron_embed(PAULI_X, 3, 3)
        assert abs(np.trace(op)) == 0
        assert np.abs(op - op.conj().T).max() == 0
        assert np.abs(op @ op - np.eye(8)).max() == 0

    def test_out_of_range_position(self):
        with pytest.raises(ValueError):
            kron_embed(PAULI_X, 0, 3)
        with pytest.raises(ValueError):
            kron_embed(PAULI_X, 4, 3)


class TestBloch:
    def test_basis_state_north_pole(self):
        state = np.zeros(32, dtype=complex)
        state[0] = 1.0
        assert np.allclose(single_qubit_bloch(state, 3), (0, 0, 1))

    def test_bell_state_maximally_mixed(self):
        # oracle: 2x2 partial trace by hand gives I/2 for either qubit
        bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        assert np.allclose(single_qubit_bloch(bell, 1), (0, 0, 0), atol=1e-12)
        rho = reduced_density_matrix(bell, 2)
        assert np.abs(rho - np.eye(2) / 2).max() < 1e-12

    def test_product_state_unit_norm(self):
        alpha, beta = 0.6, 0.8j
        q = np.array([alpha, beta])
        state = q
        for _ in range(4):
            state = np.kron(state, q)
        for n in range(1, 6):
            assert abs(np.linalg.norm(single_qubit_bloch(state, n)) - 1) < 1e-10

    def test_bloch_norm_bounded_random(self):
        rng = np.random.default_rng(5)
        state = rng.normal(size=16) + 1j * rng.normal(size=16)
        state /= np.linalg.norm(state)
        for n in range(1, 5):
            assert np.linalg.norm(single_qubit_bloch(state, n)) <= 1 + 1e-10


class TestGateErrorMetrics:
    def test_identical_gates_zero(self):
        W = random_unitary(8, 7)
        m = gate_error_metrics(W, W)
        assert m["op_norm"] < 1e-12
        assert m["hs_norm"] < 1e-12
        assert m["max_elem"] < 1e-12

    def test_identity_vs_pauli_x(self):
        m = gate_error_metrics(np.eye(2, dtype=complex), PAULI_X)
        assert abs(m["hs_norm"] - 2.0) < 1e-12
        # I - X has eigenvalues {0, 2}, so the largest singular value is 2
        assert abs(m["op_norm"] - 2.0) < 1e-12
        assert abs(m["max_elem"] - 1.0) < 1e-12

    @pytest.mark.parametrize("N", [2, 8, 32])
    def test_norm_identity(self, N):
        for seed in range(5):
            W = random_unitary(N, 10 + seed)
            U = random_unitary(N, 100 + seed)
            hs = gate_error_metrics(W, U)["hs_norm"]
            F = np.trace(W.conj().T @ U).real / N
            assert abs(hs**2 - 2 * N * (1 - F)) < 1e-9
