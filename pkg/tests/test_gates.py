import numpy as np
import pytest

from ftpulse.gates import (
    AXIS_X,
    AXIS_XZ,
    AXIS_Y,
    AXIS_Z,
    GATE_NAMES,
    composite_ry_check,
    euler_pulse_length,
    euler_sequence,
    local_pulse_length,
    local_sequence,
    phase_invariant_fidelity_2x2,
    rotation,
    sequence_product,
    standard_gate,
)


class TestRotation:
    def test_x_pi_is_pauli_x_up_to_phase(self):
        got = rotation(AXIS_X, np.pi)
        assert phase_invariant_fidelity_2x2(standard_gate("X"), got) > 1 - 1e-12

    def test_full_turn_is_minus_identity(self):
        got = rotation(AXIS_Z, 2 * np.pi)
        assert np.abs(got + np.eye(2)).max() < 1e-12

    def test_composition_adds_angles(self):
        a, b = 0.4, 1.1
        lhs = rotation(AXIS_Y, a) @ rotation(AXIS_Y, b)
        assert np.abs(lhs - rotation(AXIS_Y, a + b)).max() < 1e-12

    def test_rejects_non_unit_axis(self):
        with pytest.raises(ValueError):
            rotation((1.0, 1.0, 0.0), np.pi)

    def test_unitary(self):
        U = rotation(AXIS_XZ, 0.77)
        assert np.abs(U.conj().T @ U - np.eye(2)).max() < 1e-12


class TestStandardGates:
    def test_s_squared_is_z(self):
        S = standard_gate("S")
        assert phase_invariant_fidelity_2x2(standard_gate("Z"), S @ S) > 1 - 1e-12

    def test_t_squared_is_s(self):
        T = standard_gate("T")
        assert phase_invariant_fidelity_2x2(standard_gate("S"), T @ T) > 1 - 1e-12

    def test_had_swaps_x_and_z(self):
        H = standard_gate("Had")
        assert (
            phase_invariant_fidelity_2x2(
                standard_gate("Z"), H @ standard_gate("X") @ H.conj().T
            )
            > 1 - 1e-12
        )

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            standard_gate("CNOT")


class TestEulerSequences:
    @pytest.mark.parametrize("name", GATE_NAMES)
    def test_product_matches_gate(self, name):
        got = sequence_product(euler_sequence(name))
        assert phase_invariant_fidelity_2x2(standard_gate(name), got) >= 1 - 1e-10

    def test_pulse_lengths(self):
        # total rotation angle per gate, in units of a pi pulse
        want = {
            "X": 1.0, "Y": 1.0, "Z": 2.0, "I": 2.0,
            "S": 2.50, "T": 2.25, "Had": 1.50,
        }
        for name, length in want.items():
            assert abs(euler_pulse_length(name) - length) < 1e-12

    def test_axes_restricted_to_x_and_y(self):
        for name in GATE_NAMES:
            for step in euler_sequence(name):
                assert step.axis in (AXIS_X, AXIS_Y)


class TestLocalSequences:
    @pytest.mark.parametrize("name", GATE_NAMES)
    def test_product_matches_gate(self, name):
        got = sequence_product(local_sequence(name))
        assert phase_invariant_fidelity_2x2(standard_gate(name), got) >= 1 - 1e-10

    def test_durations(self):
        # gate durations in units of pi/(2 Omega)
        s2 = np.sqrt(2)
        want = {
            "X": 1.0, "Y": 2 + s2, "Z": 1 + s2, "I": 2.0,
            "S": 0.5 + s2, "T": 0.25 + s2, "Had": 1 / s2,
        }
        for name, length in want.items():
            assert abs(local_pulse_length(name) - length) < 1e-12

    def test_axes_restricted_to_x_and_tilted(self):
        for name in GATE_NAMES:
            for step in local_sequence(name):
                assert step.axis in (AXIS_X, AXIS_XZ)


class TestCompositeRy:
    @pytest.mark.parametrize("seed", range(4))
    def test_equals_ry_of_four_phi(self, seed):
        rng = np.random.default_rng(seed)
        for phi in rng.uniform(0.02, 1.5, size=5):
            Omega = 1.0
            u = Omega * np.tan(phi)
            got = composite_ry_check(u, Omega)
            want = rotation(AXIS_Y, 4 * phi)
            assert phase_invariant_fidelity_2x2(want, got) >= 1 - 1e-10

    def test_rejects_undefined_angle(self):
        with pytest.raises(ValueError):
            composite_ry_check(0.0, 0.0)
