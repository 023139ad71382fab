import json

import numpy as np
import pytest

from ftpulse.gates import AXIS_X, rotation
from ftpulse.linalg import PAULI_X, PAULI_Z
from ftpulse.models import HamiltonianModel, build_global_optimal
from ftpulse.optimize import (
    NOT_CONVERGED,
    OptimizerConfig,
    grape_iteration,
    gradient_field,
    iteration_sweep_experiment,
    sequential_sweep,
    synthesize,
)
from ftpulse.propagate import PiecewisePulse, fidelity_strict, propagate


def random_two_qubit_model(seed=0):
    rng = np.random.default_rng(seed)

    def herm():
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        return (A + A.conj().T) / 2

    return HamiltonianModel(
        num_qubits=2,
        drift=herm(),
        controls=[herm(), herm()],
        labels=["u_1", "u_2"],
    )


def toy_qubit_model():
    return HamiltonianModel(
        num_qubits=1,
        drift=PAULI_Z.copy(),
        controls=[PAULI_X.copy()],
        labels=["u_1"],
    )


class TestConfigValidation:
    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            OptimizerConfig(epsilon0=0.0)

    def test_rejects_bad_backtrack_factor(self):
        with pytest.raises(ValueError):
            OptimizerConfig(backtrack_factor=1.0)

    def test_rejects_bad_target(self):
        with pytest.raises(ValueError):
            OptimizerConfig(target_fidelity=0.0)


class TestSequentialSweep:
    def test_monotone_over_sweeps(self):
        model = random_two_qubit_model(5)
        rng = np.random.default_rng(5)
        pulse = PiecewisePulse.uniform(2.0, rng.uniform(-0.1, 0.1, (2, 12)))
        W = np.linalg.eigh(model.drift)[1]  # arbitrary unitary target
        config = OptimizerConfig()
        fids = []
        for _ in range(25):
            f, _ = sequential_sweep(model, W, pulse, config)
            fids.append(f)
        diffs = np.diff(np.array(fids))
        assert diffs.min() >= -1e-12

    def test_toy_qubit_reaches_target(self):
        # single qubit, drift sz, control sx, target R_x(pi) = i*sx.  The
        # bare Pauli X is out of reach for the strict measure: propagators
        # stay in SU(2), where Re Tr[X^dag U] vanishes identically, so the
        # determinant-compatible representative i*sx is the meaningful goal.
        model = toy_qubit_model()
        target = rotation(AXIS_X, np.pi)
        rng = np.random.default_rng(0)
        pulse = PiecewisePulse.uniform(np.pi, rng.uniform(-0.1, 0.1, (1, 20)))
        config = OptimizerConfig()
        f = 0.0
        for _ in range(200):
            f, _ = sequential_sweep(model, target, pulse, config)
            if f >= 0.9999:
                break
        assert f >= 0.9999

    def test_zero_amplitude_bound_freezes_pulse(self):
        model = random_two_qubit_model(1)
        pulse = PiecewisePulse.uniform(1.0, np.zeros((2, 8)))
        before = pulse.amplitudes.copy()
        W = np.eye(4, dtype=complex)
        config = OptimizerConfig(amplitude_bound=0.0)
        sequential_sweep(model, W, pulse, config)
        assert np.array_equal(pulse.amplitudes, before)

    def test_amplitude_bound_respected(self):
        model = random_two_qubit_model(2)
        rng = np.random.default_rng(2)
        C = 0.3
        pulse = PiecewisePulse.uniform(2.0, rng.uniform(-C, C, (2, 10)))
        W = np.linalg.eigh(model.controls[0])[1]
        config = OptimizerConfig(amplitude_bound=C)
        for _ in range(10):
            sequential_sweep(model, W, pulse, config)
        assert np.abs(pulse.amplitudes).max() <= C + 1e-12

    def test_stationary_point_unchanged(self):
        # target equal to the current propagator: zero update everywhere
        model = random_two_qubit_model(3)
        rng = np.random.default_rng(3)
        pulse = PiecewisePulse.uniform(1.0, rng.uniform(-0.5, 0.5, (2, 6)))
        W, _ = propagate(model, pulse)
        f0 = fidelity_strict(W, W)
        f, _ = sequential_sweep(model, W, pulse.copy(), OptimizerConfig())
        assert abs(f - f0) < 1e-12

    def test_reverse_sweep_also_monotone(self):
        model = random_two_qubit_model(7)
        rng = np.random.default_rng(7)
        pulse = PiecewisePulse.uniform(2.0, rng.uniform(-0.1, 0.1, (2, 12)))
        W = np.linalg.eigh(model.drift)[1]
        config = OptimizerConfig()
        fids = []
        for i in range(20):
            f, _ = sequential_sweep(
                model, W, pulse, config, reverse=bool(i % 2)
            )
            fids.append(f)
        assert np.diff(np.array(fids)).min() >= -1e-12


class TestGradient:
    def test_matches_central_differences(self):
        # raw Im-trace field vs central finite differences of the strict
        # fidelity, on a fine grid where the first-order expression is exact
        # to the stated tolerance
        rng = np.random.default_rng(11)

        def herm():
            A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            H = (A + A.conj().T) / 2
            # spectral norm 1/2: keeps the first-order direction within
            # the finite-difference tolerance at dt = 1e-3
            return H / (2 * np.linalg.norm(H, 2))

        model = HamiltonianModel(
            num_qubits=2,
            drift=herm(),
            controls=[herm(), herm()],
            labels=["u_1", "u_2"],
        )
        K, dt = 10, 1e-3
        pulse = PiecewisePulse(
            np.full(K, dt), rng.uniform(-1.0, 1.0, (2, K))
        )
        W = np.linalg.eigh(model.drift + model.controls[0])[1]
        g = gradient_field(model, W, pulse)
        N = model.dim
        h = 1e-6
        for m in range(2):
            for k in range(K):
                up = pulse.copy()
                up.amplitudes[m, k] += h
                dn = pulse.copy()
                dn.amplitudes[m, k] -= h
                Uu, _ = propagate(model, up)
                Ud, _ = propagate(model, dn)
                fd = (fidelity_strict(W, Uu) - fidelity_strict(W, Ud)) / (2 * h)
                # dF/du_mk = (dt/N) * g_mk to first order in dt
                assert abs(fd - dt * g[m, k] / N) <= 1e-3 * max(abs(fd), 1e-12)

    def test_stationary_pulse_zero_field(self):
        model = random_two_qubit_model(12)
        rng = np.random.default_rng(12)
        pulse = PiecewisePulse.uniform(1.0, rng.uniform(-0.5, 0.5, (2, 6)))
        W, _ = propagate(model, pulse)
        g = gradient_field(model, W, pulse)
        assert np.abs(g).max() < 1e-10


class TestGrape:
    def test_improves_non_stationary_pulse(self):
        model = random_two_qubit_model(21)
        rng = np.random.default_rng(21)
        pulse = PiecewisePulse.uniform(2.0, rng.uniform(-0.1, 0.1, (2, 12)))
        W = np.linalg.eigh(model.drift)[1]
        U0, _ = propagate(model, pulse)
        f0 = fidelity_strict(W, U0)
        f1, _ = grape_iteration(model, W, pulse, OptimizerConfig())
        assert f1 >= f0

    def test_monotone_over_iterations(self):
        model = random_two_qubit_model(22)
        rng = np.random.default_rng(22)
        pulse = PiecewisePulse.uniform(2.0, rng.uniform(-0.1, 0.1, (2, 12)))
        W = np.linalg.eigh(model.drift)[1]
        config = OptimizerConfig(adapt_epsilon=True)
        fids, eps = [], None
        for _ in range(40):
            f, eps = grape_iteration(model, W, pulse, config, eps)
            fids.append(f)
        assert np.diff(np.array(fids)).min() >= -1e-12


class TestSynthesize:
    def test_toy_qubit_record(self):
        model = toy_qubit_model()
        rec = synthesize(model, rotation(AXIS_X, np.pi), np.pi, 20, OptimizerConfig())
        assert rec.converged
        assert rec.final_fidelity >= 0.9999
        assert np.diff(rec.fidelity_history).min() >= -1e-12
        assert rec.iterations == len(rec.fidelity_history)
        # norm identity ties the metrics to the fidelity
        hs = rec.metrics["hs_norm"]
        assert abs(hs**2 - 2 * 2 * (1 - rec.final_fidelity)) < 1e-9

    def test_deterministic_given_seed(self):
        model = random_two_qubit_model(31)
        W = np.linalg.eigh(model.drift)[1]
        cfg = OptimizerConfig(rng_seed=4, max_sweeps=5)
        a = synthesize(model, W, 1.0, 8, cfg)
        b = synthesize(model, W, 1.0, 8, cfg)
        assert np.array_equal(a.pulse.amplitudes, b.pulse.amplitudes)
        assert np.array_equal(a.fidelity_history, b.fidelity_history)

    def test_budget_exhaustion_flagged(self):
        model = random_two_qubit_model(32)
        W = np.linalg.eigh(model.drift)[1]
        rec = synthesize(model, W, 1.0, 8, OptimizerConfig(max_sweeps=1))
        assert rec.iterations == 1
        assert not rec.converged or rec.final_fidelity >= 0.9999

    def test_unknown_algorithm_rejected(self):
        model = toy_qubit_model()
        with pytest.raises(ValueError):
            synthesize(
                model, rotation(AXIS_X, np.pi), 1.0, 4, algorithm="newton"
            )

    def test_json_serialization(self):
        model = toy_qubit_model()
        rec = synthesize(
            model, rotation(AXIS_X, np.pi), np.pi, 10, OptimizerConfig(max_sweeps=3)
        )
        payload = json.loads(rec.to_json())
        assert payload["algorithm"] == "sequential"
        assert len(payload["fidelity_history"]) == rec.iterations
        assert payload["parameters"]["K"] == 10

    def test_grape_algorithm_runs(self):
        model = toy_qubit_model()
        rec = synthesize(
            model,
            rotation(AXIS_X, np.pi),
            np.pi,
            20,
            OptimizerConfig(max_iterations=300, adapt_epsilon=True),
            algorithm="grape",
        )
        assert rec.algorithm == "grape"
        assert rec.final_fidelity > 0.9


class TestIterationSweep:
    def test_empty_values_empty_table(self):
        rows = iteration_sweep_experiment("J", [])
        assert rows == []

    def test_rejects_unknown_vary(self):
        with pytest.raises(ValueError):
            iteration_sweep_experiment("t_F", [1.0])

    def test_not_converged_sentinel(self):
        # starved budget: every seed must report the sentinel
        cfg = OptimizerConfig(max_sweeps=1)
        rows = iteration_sweep_experiment(
            "J", [1.0], seeds=(0,), config=cfg
        )
        assert rows[0]["median_iterations"] == NOT_CONVERGED
        assert rows[0]["per_seed"] == [NOT_CONVERGED]

    def test_csv_export(self, tmp_path):
        cfg = OptimizerConfig(max_sweeps=1)
        path = tmp_path / "sweep.csv"
        iteration_sweep_experiment(
            "delta_omega", [2.0], seeds=(0,), config=cfg, csv_path=path
        )
        lines = path.read_text().splitlines()
        assert lines[0].startswith("vary,value,J,delta_omega")
        assert len(lines) == 2
