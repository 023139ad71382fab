"""Single-qubit rotation algebra, the elementary gate set, and geometric
decompositions into rotation sequences.

Rotation convention: R_n(a) = exp(+i*(a/2) n.sigma), i.e.
cos(a/2) I + i sin(a/2) n.sigma.  All sequence identities hold up to a
global phase, which is why comparisons use the phase-invariant fidelity.

A sequence [A, B, C] denotes the operator product A @ B @ C, so C acts
first in time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

GATE_NAMES = ("I", "X", "Y", "Z", "S", "T", "Had")

AXIS_X = (1.0, 0.0, 0.0)
AXIS_Y = (0.0, 1.0, 0.0)
AXIS_Z = (0.0, 0.0, 1.0)
AXIS_XZ = (1.0 / np.sqrt(2.0), 0.0, 1.0 / np.sqrt(2.0))

_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class RotationStep:
    """One rotation R_axis(angle) of a pulse sequence."""

    axis: tuple[float, float, float]
    angle: float


def rotation(axis, angle: float) -> np.ndarray:
    """2x2 unitary exp(i*(angle/2) * axis.sigma) for a unit-norm axis."""
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > _AXIS_TOL:
        raise ValueError(f"rotation axis must be unit norm, got {axis}")
    gen = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    return np.cos(angle / 2) * PAULI_I + 1j * np.sin(angle / 2) * gen


def standard_gate(name: str) -> np.ndarray:
    """Conventional matrix of an elementary gate.

    X, Y, Z are the Pauli matrices; S, T, Had are defined through rotation():
    S = R_z(pi/2), T = R_z(pi/4), Had = R_n(pi) with n = (1,0,1)/sqrt(2).
    """
    if name == "I":
        return PAULI_I.copy()
    if name == "X":
        return PAULI_X.copy()
    if name == "Y":
        return PAULI_Y.copy()
    if name == "Z":
        return PAULI_Z.copy()
    if name == "S":
        return rotation(AXIS_Z, np.pi / 2)
    if name == "T":
        return rotation(AXIS_Z, np.pi / 4)
    if name == "Had":
        return rotation(AXIS_XZ, np.pi)
    raise ValueError(f"unknown gate name {name!r}; expected one of {GATE_NAMES}")


def euler_sequence(name: str) -> list[RotationStep]:
    """Euler decomposition of an elementary gate into x/y-axis rotations.

    The product of the returned steps (rightmost applied first) equals
    standard_gate(name) up to a global phase.  Total pulse length in units
    of a pi rotation is euler_pulse_length(name).
    """
    pi = np.pi
    table = {
        "X": [(AXIS_X, pi)],
        "Y": [(AXIS_Y, pi)],
        "Z": [(AXIS_X, pi), (AXIS_Y, pi)],
        "I": [(AXIS_X, 2 * pi)],
        "S": [(AXIS_X, 3 * pi / 2), (AXIS_Y, pi / 2), (AXIS_X, pi / 2)],
        "T": [(AXIS_X, 3 * pi / 2), (AXIS_Y, pi / 4), (AXIS_X, pi / 2)],
        "Had": [(AXIS_Y, pi / 2), (AXIS_X, pi)],
    }
    if name not in table:
        raise ValueError(f"unknown gate name {name!r}; expected one of {GATE_NAMES}")
    return [RotationStep(axis, angle) for axis, angle in table[name]]


def euler_pulse_length(name: str) -> float:
    """Total Euler pulse length, in units of a pi rotation."""
    return sum(step.angle for step in euler_sequence(name)) / np.pi


def local_sequence(name: str) -> list[RotationStep]:
    """Decomposition into rotations about x and n = (1,0,1)/sqrt(2) only.

    These are the sequences realizable with a fixed transverse drive plus a
    switchable detuning of equal magnitude.  Product equals
    standard_gate(name) up to a global phase.
    """
    pi = np.pi
    table = {
        "X": [(AXIS_X, pi)],
        "Y": [(AXIS_X, pi), (AXIS_XZ, pi), (AXIS_X, pi), (AXIS_XZ, pi)],
        "Z": [(AXIS_XZ, pi), (AXIS_X, pi), (AXIS_XZ, pi)],
        "I": [(AXIS_X, 2 * pi)],
        "S": [(AXIS_XZ, pi), (AXIS_X, pi / 2), (AXIS_XZ, pi)],
        "T": [(AXIS_XZ, pi), (AXIS_X, pi / 4), (AXIS_XZ, pi)],
        "Had": [(AXIS_XZ, pi)],
    }
    if name not in table:
        raise ValueError(f"unknown gate name {name!r}; expected one of {GATE_NAMES}")
    return [RotationStep(axis, angle) for axis, angle in table[name]]


def local_step_duration(step: RotationStep) -> float:
    """Duration of one local-control rotation, in units of pi/(2*Omega).

    With drive H = Omega*sx + u*sz the rotation rate is 2*sqrt(Omega^2+u^2),
    so an angle a about x takes a/pi units and an angle a about the tilted
    axis (u = Omega) takes a/(pi*sqrt(2)) units.
    """
    tilted = abs(step.axis[2]) > 1e-14
    units = step.angle / np.pi
    return units / np.sqrt(2.0) if tilted else units


def local_pulse_length(name: str) -> float:
    """Total local-control gate duration, in units of pi/(2*Omega)."""
    return sum(local_step_duration(s) for s in local_sequence(name))


def sequence_product(steps: list[RotationStep]) -> np.ndarray:
    """Operator product of a rotation sequence (rightmost step acts first)."""
    out = PAULI_I.copy()
    for step in steps:
        out = out @ rotation(step.axis, step.angle)
    return out


def composite_ry_check(u: float, Omega: float) -> np.ndarray:
    """Four-rotation composite equal to R_y(4*phi) up to a global phase.

    phi is fixed by cos(phi) = Omega/sqrt(Omega^2+u^2) and
    sin(phi) = u/sqrt(Omega^2+u^2).  The product used is
    R_n(pi) R_x(pi) R_n(pi) R_x(pi) with n = cos(phi) x + sin(phi) z; in
    the exp(+i..) rotation convention this ordering (rather than its
    reverse) yields the +4*phi rotation.
    """
    norm = np.hypot(Omega, u)
    if norm == 0.0:
        raise ValueError("Omega and u cannot both be zero; phi is undefined")
    cphi = Omega / norm
    sphi = u / norm
    n = (cphi, 0.0, sphi)
    rx = rotation(AXIS_X, np.pi)
    rn = rotation(n, np.pi)
    return rn @ rx @ rn @ rx


def phase_invariant_fidelity_2x2(A: np.ndarray, B: np.ndarray) -> float:
    """|Tr(A^dag B)| / 2 for 2x2 operators (local convenience)."""
    return float(abs(np.trace(A.conj().T @ B)) / 2.0)
