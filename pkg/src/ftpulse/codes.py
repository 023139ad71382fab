"""Stabilizer code definitions and the fault-tolerant logical gate
constructor.

A CodeSpec pins down an encoding by its two code words plus an orthonormal
family of correctable-error operators.  The displaced code words
{E|0_L>, E|1_L>} then form an orthonormal basis of the full register space,
and a logical 2x2 gate lifts to a full-register unitary acting blockwise on
the error sectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .linalg import PAULI_X, PAULI_Y, PAULI_Z, kron_embed

_CODEWORD_TOL = 1e-10
_GRAM_TOL = 1e-9


@dataclass(frozen=True)
class CodeSpec:
    """An encoding: code words plus correctable-error basis.

    error_basis has 2^n / 2 operators, the first being the identity, such
    that the displaced code words are an orthonormal basis of the whole
    2^n-dimensional space.
    """

    num_qubits: int
    codeword_0: np.ndarray
    codeword_1: np.ndarray
    error_basis: list[np.ndarray] = field(repr=False)

    def __post_init__(self):
        dim = 2**self.num_qubits
        if self.codeword_0.shape != (dim,) or self.codeword_1.shape != (dim,):
            raise ValueError("code word dimension mismatch")
        if len(self.error_basis) != dim // 2:
            raise ValueError(
                f"expected {dim // 2} error operators, got {len(self.error_basis)}"
            )
        overlap = abs(self.codeword_0.conj() @ self.codeword_1)
        norm0 = abs(self.codeword_0.conj() @ self.codeword_0 - 1.0)
        norm1 = abs(self.codeword_1.conj() @ self.codeword_1 - 1.0)
        if max(overlap, norm0, norm1) > _CODEWORD_TOL:
            raise ValueError("code words are not orthonormal")
        gram_defect = np.abs(
            self.displaced_basis().conj() @ self.displaced_basis().T - np.eye(dim)
        ).max()
        if gram_defect > _GRAM_TOL:
            raise ValueError(
                f"displaced code words are not orthonormal (defect {gram_defect:.2e})"
            )

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def displaced_basis(self) -> np.ndarray:
        """Rows: E|0_L>, E|1_L> for every error operator E."""
        rows = []
        for E in self.error_basis:
            rows.append(E @ self.codeword_0)
            rows.append(E @ self.codeword_1)
        return np.array(rows)


@dataclass(frozen=True)
class TargetGate:
    """Full-register unitary implementing a logical single-qubit gate."""

    gate_name: str
    matrix: np.ndarray
    code: CodeSpec

    def to_json(self) -> str:
        """Dimension plus row-major entries as [re, im] pairs."""
        entries = [
            [float(z.real), float(z.imag)] for z in self.matrix.ravel()
        ]
        return json.dumps(
            {
                "gate_name": self.gate_name,
                "dimension": self.matrix.shape[0],
                "entries": entries,
            }
        )


# The 16-term five-qubit code words.  Signs are those of the stabilizer
# group generated by the cyclic shifts of XZZXI (the published listing of
# this code occasionally carries a sign typo on the |00101> / |11010>
# terms; the signs below are the ones that make the displaced code words
# exactly orthonormal).
_FIVE_QUBIT_PLUS = (
    "00000", "10010", "01001", "10100", "01010", "00101",
)
_FIVE_QUBIT_MINUS = (
    "11011", "00110", "11000", "11101", "00011",
    "11110", "01111", "10001", "01100", "10111",
)


def _basis_state(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def _transversal_x(n: int) -> np.ndarray:
    return reduce(np.kron, [PAULI_X] * n)


def five_qubit_code() -> CodeSpec:
    """The [[5,1,3]] code correcting any single-qubit Pauli error.

    Error basis: identity plus X_n, Y_n, Z_n for n = 1..5 (16 operators),
    whose displaced code words span the 32-dim space orthonormally.
    """
    c0 = np.zeros(32, dtype=complex)
    for bits in _FIVE_QUBIT_PLUS:
        c0 += _basis_state(bits)
    for bits in _FIVE_QUBIT_MINUS:
        c0 -= _basis_state(bits)
    c0 /= 4.0
    c1 = _transversal_x(5) @ c0
    errors = [np.eye(32, dtype=complex)]
    for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
        for n in range(1, 6):
            errors.append(kron_embed(pauli, n, 5))
    return CodeSpec(5, c0, c1, errors)


def bitflip3_code() -> CodeSpec:
    """Three-qubit bit-flip code: |0_L> = |000>, |1_L> = |111>."""
    c0 = _basis_state("000")
    c1 = _basis_state("111")
    errors = [np.eye(8, dtype=complex)]
    for n in range(1, 4):
        errors.append(kron_embed(PAULI_X, n, 3))
    return CodeSpec(3, c0, c1, errors)


def logical_gate(code: CodeSpec, g: np.ndarray, name: str = "") -> TargetGate:
    """Lift a 2x2 unitary to the fault-tolerant full-register gate.

    The gate acts as g on each error sector span{E|0_L>, E|1_L>} and
    therefore never increases the number of correctable errors.  The
    logical frame inside each sector is fixed by the transversal logical X
    (X on every physical qubit), which makes logical_gate(code, X) coincide
    exactly with the transversal implementation.
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise ValueError(f"logical gate must be 2x2, got {g.shape}")
    if np.abs(g.conj().T @ g - np.eye(2)).max() > 1e-9:
        raise ValueError("logical gate must be unitary")
    xl = _transversal_x(code.num_qubits)
    W = np.zeros((code.dim, code.dim), dtype=complex)
    for E in code.error_basis:
        v0 = E @ code.codeword_0
        v1 = xl @ v0
        frame = (v0, v1)
        for a in range(2):
            for b in range(2):
                W += g[a, b] * np.outer(frame[a], frame[b].conj())
    defect = np.abs(W.conj().T @ W - np.eye(code.dim)).max()
    if defect > 1e-9:
        raise ValueError(
            f"constructed gate is not unitary (defect {defect:.2e}); "
            "the code's displaced code words are not orthonormal"
        )
    return TargetGate(name, W, code)


def logical_bloch(state: np.ndarray, code: CodeSpec) -> tuple[float, float, float]:
    """Projection of a register state onto the logical Bloch sphere.

    s_x = 2 Re[<0_L|psi><psi|1_L>], s_y = -2 Im[<0_L|psi><psi|1_L>],
    s_z = |<1_L|psi>|^2 - |<0_L|psi>|^2 (so |0_L> sits at the south pole).
    """
    state = np.asarray(state, dtype=complex).ravel()
    if state.size != code.dim:
        raise ValueError(f"state dim {state.size} != code dim {code.dim}")
    a0 = code.codeword_0.conj() @ state
    a1 = code.codeword_1.conj() @ state
    cross = a0 * np.conj(a1)
    return (
        float(2.0 * cross.real),
        float(-2.0 * cross.imag),
        float(abs(a1) ** 2 - abs(a0) ** 2),
    )
