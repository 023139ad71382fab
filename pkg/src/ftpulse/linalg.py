"""Dense complex linear algebra primitives shared by all other modules.

Everything here operates on small (<= 32 x 32) dense complex matrices, so
exact Hermitian eigendecompositions are used throughout instead of
series/Pade approximations.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class NonHermitianError(ValueError):
    """Raised when a generator that must be Hermitian is not."""


def hermiticity_defect(H: np.ndarray) -> float:
    """Max elementwise |H - H^dag|."""
    H = np.asarray(H)
    return float(np.abs(H - H.conj().T).max())


def require_hermitian(H: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    defect = hermiticity_defect(H)
    if defect > tol:
        raise NonHermitianError(
            f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e}); "
            "this indicates a model-construction bug"
        )
    return H


def expm_hermitian_prop(H: np.ndarray, dt: float) -> np.ndarray:
    """Unitary propagator exp(-i*dt*H) of a Hermitian generator H.

    Computed by eigendecomposition, which is exact (to roundoff) and stable
    for the small operators used here.
    """
    H = require_hermitian(H)
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * dt * w)) @ v.conj().T


def kron_embed(op: np.ndarray, position: int, num_qubits: int) -> np.ndarray:
    """Embed a 2x2 operator at a 1-based qubit position of an n-qubit register.

    Qubit 1 is the leftmost tensor factor (most significant bit of the
    computational-basis index).
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"op must be 2x2, got shape {op.shape}")
    if not 1 <= position <= num_qubits:
        raise ValueError(
            f"position {position} out of range for {num_qubits} qubits"
        )
    out = np.eye(2 ** (position - 1), dtype=complex)
    out = np.kron(out, op)
    out = np.kron(out, np.eye(2 ** (num_qubits - position), dtype=complex))
    return out


def num_qubits_of(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def reduced_density_matrix(state: np.ndarray, qubit: int) -> np.ndarray:
    """2x2 reduced density operator of one qubit (1-based) of a pure state."""
    state = np.asarray(state, dtype=complex).ravel()
    n = num_qubits_of(state.size)
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    # reshape to (left, 2, right) and trace out the environment
    left = 2 ** (qubit - 1)
    right = 2 ** (n - qubit)
    psi = state.reshape(left, 2, right)
    return np.einsum("iak,ibk->ab", psi, psi.conj())


def single_qubit_bloch(state: np.ndarray, qubit: int) -> tuple[float, float, float]:
    """Bloch vector (x, y, z) of one qubit of a multi-qubit pure state.

    Convention: z = +1 for |0>.
    """
    rho = reduced_density_matrix(state, qubit)
    x = np.real(np.trace(PAULI_X @ rho))
    y = np.real(np.trace(PAULI_Y @ rho))
    z = np.real(np.trace(PAULI_Z @ rho))
    return (float(x), float(y), float(z))


def gate_error_metrics(W: np.ndarray, U: np.ndarray) -> dict[str, float]:
    """Distance measures between two same-dimension operators.

    op_norm   largest singular value of W - U
    hs_norm   Hilbert-Schmidt (Frobenius) norm sqrt(Tr[(W-U)^dag (W-U)])
    max_elem  max elementwise |W_mn - U_mn|
    """
    W = np.asarray(W, dtype=complex)
    U = np.asarray(U, dtype=complex)
    if W.shape != U.shape:
        raise ValueError(f"shape mismatch {W.shape} vs {U.shape}")
    D = W - U
    # largest singular value from the Hermitian eigenproblem of D^dag D
    evals = np.linalg.eigvalsh(D.conj().T @ D)
    op_norm = float(np.sqrt(max(evals.max(), 0.0)))
    hs_norm = float(np.sqrt(np.real(np.trace(D.conj().T @ D))))
    max_elem = float(np.abs(D).max())
    return {"op_norm": op_norm, "hs_norm": hs_norm, "max_elem": max_elem}
