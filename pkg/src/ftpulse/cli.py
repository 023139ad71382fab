"""Command-line driver: config-file experiment runs, reproduction recipes
for the reference tables/sweeps, and a built-in identity check suite.

Commands:
    ftpulse run <config>                 execute one experiment
    ftpulse reproduce <table-id> [--out DIR] [--setting local|global]
    ftpulse verify                       run the internal identity suite

Config files are flat key=value text: one key per line, ``#`` comments,
comma-separated lists.  Unknown keys are rejected with the line number.
Exit codes: 0 success, 2 validation error, 3 non-convergence (with
require_convergence=true) or failed verification.

The default output root is ``./runs``, overridable with the FTPULSE_OUT
environment variable or the output_dir config key.  Each run writes into a
fresh directory; an existing directory of the same name is an error, so a
finished run is never silently overwritten.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import fields as dataclass_fields

import numpy as np

from . import __version__
from .codes import bitflip3_code, five_qubit_code, logical_gate
from .gates import (
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
from .linalg import gate_error_metrics
from .models import (
    DEFAULT_OMEGAS,
    DEFAULT_RABI,
    build_global_optimal,
    build_local_optimal,
    local_geometric_schedule,
)
from .optimize import (
    NOT_CONVERGED,
    OptimizerConfig,
    iteration_sweep_experiment,
    synthesize,
)
from .propagate import (
    PiecewisePulse,
    fidelity_phase_invariant,
    fidelity_strict,
    propagate,
    simulate_gaussian_baseline,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3


class ConfigError(Exception):
    pass


def _parse_bool(s: str) -> bool:
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_float_list(s: str):
    return tuple(float(x) for x in s.split(","))


def _parse_int_list(s: str):
    return tuple(int(x) for x in s.split(","))


# key -> (parser, default); None default means "optional / mode-dependent"
_CONFIG_SCHEMA = {
    "mode": (str, None),
    "code": (str, "five_qubit"),
    "gate": (str, "X"),
    "model": (str, None),  # global | local
    "omegas": (_parse_float_list, DEFAULT_OMEGAS),
    "J": (float, 0.0),
    "Omega": (float, DEFAULT_RABI),
    "q": (float, 0.01),
    "t_F": (float, None),
    "K": (int, None),
    "steps_per_period": (int, 200),
    "drive_gain": (float, 2.0),
    "algorithm": (str, "sequential"),
    "epsilon0": (float, 1.0),
    "backtrack_factor": (float, 0.5),
    "max_backtracks": (int, 30),
    "target_fidelity": (float, 0.9999),
    "max_sweeps": (int, 5000),
    "max_iterations": (int, 20000),
    "amplitude_bound": (float, None),
    "seed": (int, 0),
    "seeds": (_parse_int_list, (0, 1, 2)),
    "initial_guess_scale": (float, 0.1),
    "adapt_epsilon": (_parse_bool, False),
    "alternate_sweeps": (_parse_bool, False),
    "vary": (str, "J"),
    "values": (_parse_float_list, None),
    "delta_omega": (float, 2.0),
    "omega_center": (float, 10.0),
    "output_dir": (str, None),
    "run_name": (str, None),
    "require_convergence": (_parse_bool, False),
}

_MODES = ("synthesize", "baseline-global", "baseline-local", "sweep", "verify")


def parse_config(path) -> dict:
    """Flat key=value file -> resolved config dict (defaults filled in)."""
    resolved = {k: d for k, (_, d) in _CONFIG_SCHEMA.items()}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        parser = _CONFIG_SCHEMA[key][0]
        try:
            resolved[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}")
    if resolved["mode"] not in _MODES:
        raise ConfigError(
            f"{path}: mode must be one of {_MODES}, got {resolved['mode']!r}"
        )
    if resolved["gate"] not in GATE_NAMES:
        raise ConfigError(
            f"{path}: gate must be one of {GATE_NAMES}, got {resolved['gate']!r}"
        )
    if resolved["code"] not in ("five_qubit", "bitflip3"):
        raise ConfigError(f"{path}: code must be five_qubit or bitflip3")
    return resolved


def _output_root(config=None) -> str:
    if config and config.get("output_dir"):
        return config["output_dir"]
    return os.environ.get("FTPULSE_OUT", "runs")


def _make_run_dir(config, default_name: str) -> str:
    root = _output_root(config)
    name = config.get("run_name") or default_name
    path = os.path.join(root, name)
    os.makedirs(root, exist_ok=True)
    try:
        os.mkdir(path)
    except FileExistsError:
        raise ConfigError(
            f"run directory {path} already exists; runs never overwrite "
            "(pick a new run_name)"
        )
    return path


def _write_manifest(run_dir, config):
    manifest = {
        "version": __version__,
        "config": {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in config.items()
        },
    }
    with open(os.path.join(run_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)


def _optimizer_config(config) -> OptimizerConfig:
    return OptimizerConfig(
        epsilon0=config["epsilon0"],
        backtrack_factor=config["backtrack_factor"],
        max_backtracks=config["max_backtracks"],
        target_fidelity=config["target_fidelity"],
        max_sweeps=config["max_sweeps"],
        max_iterations=config["max_iterations"],
        amplitude_bound=config["amplitude_bound"],
        rng_seed=config["seed"],
        initial_guess_scale=config["initial_guess_scale"],
        adapt_epsilon=config["adapt_epsilon"],
        alternate_sweeps=config["alternate_sweeps"],
    )


def _build_for_synthesis(config):
    code = five_qubit_code() if config["code"] == "five_qubit" else bitflip3_code()
    n = code.num_qubits
    model_kind = config["model"] or (
        "local" if config["code"] == "five_qubit" else "global"
    )
    if model_kind == "global":
        omegas = config["omegas"]
        if len(omegas) != n:
            raise ConfigError(
                f"omegas has {len(omegas)} entries but the code has {n} qubits"
            )
        model = build_global_optimal(omegas, config["J"])
    elif model_kind == "local":
        model = build_local_optimal(config["Omega"], config["J"], n)
    else:
        raise ConfigError(f"model must be global or local, got {model_kind!r}")
    target = logical_gate(code, standard_gate(config["gate"]), config["gate"])
    return code, model, target


def _run_synthesize(config) -> int:
    for key in ("t_F", "K"):
        if config[key] is None:
            raise ConfigError(f"mode=synthesize requires {key}")
    code, model, target = _build_for_synthesis(config)
    run_dir = _make_run_dir(
        config, f"synthesize-{config['code']}-{config['gate']}-seed{config['seed']}"
    )
    _write_manifest(run_dir, config)
    record = synthesize(
        model, target, config["t_F"], config["K"],
        _optimizer_config(config), config["algorithm"],
    )
    record.pulse.to_csv(os.path.join(run_dir, "pulse.csv"))
    _, traj = propagate(
        model, record.pulse, initial_state=code.codeword_0,
        record_trajectory=True,
    )
    traj.to_csv(os.path.join(run_dir, "trajectory.csv"), code=code)
    with open(os.path.join(run_dir, "metrics.json"), "w") as fh:
        fh.write(record.to_json())
    print(
        f"{run_dir}: {config['gate']} fidelity {record.final_fidelity:.6f} "
        f"after {record.iterations} iterations "
        f"({'converged' if record.converged else 'NOT converged'})"
    )
    if config["require_convergence"] and not record.converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _run_baseline_global(config) -> int:
    t_F = config["t_F"] if config["t_F"] is not None else 440.0
    run_dir = _make_run_dir(config, f"baseline-global-J{config['J']}")
    _write_manifest(run_dir, config)
    result = simulate_gaussian_baseline(
        omegas=config["omegas"], J=config["J"], q=config["q"], t_F=t_F,
        steps_per_period=config["steps_per_period"],
        drive_gain=config["drive_gain"],
    )
    # logical Bloch columns only make sense on the full five-qubit register
    code = five_qubit_code() if len(config["omegas"]) == 5 else None
    result["trajectory"].to_csv(
        os.path.join(run_dir, "trajectory.csv"), code=code
    )
    _write_json(
        os.path.join(run_dir, "metrics.json"),
        {
            "max_phase_invariant_fidelity": result["max_fidelity"],
            "t_at_max": result["t_at_max"],
            "num_steps": result["num_steps"],
            "dt": result["dt"],
        },
    )
    with open(os.path.join(run_dir, "fidelity.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "phase_invariant_fidelity"])
        for t, f in zip(result["times"], result["fidelity_history"]):
            writer.writerow([repr(float(t)), repr(float(f))])
    print(
        f"{run_dir}: max |F| = {result['max_fidelity']:.4f} "
        f"at t = {result['t_at_max']:.2f} (J={config['J']})"
    )
    return EXIT_OK


def _transversal_schedule_pulse(gate: str, Omega: float, n: int):
    durations, amps = local_geometric_schedule(gate, Omega)
    return PiecewisePulse(durations, np.tile(amps, (n, 1)))


def _run_baseline_local(config) -> int:
    code = five_qubit_code() if config["code"] == "five_qubit" else bitflip3_code()
    run_dir = _make_run_dir(
        config, f"baseline-local-{config['gate']}-J{config['J']}"
    )
    _write_manifest(run_dir, config)
    model = build_local_optimal(config["Omega"], config["J"], code.num_qubits)
    pulse = _transversal_schedule_pulse(
        config["gate"], config["Omega"], code.num_qubits
    )
    # The schedule acts identically on every qubit, so the natural target
    # is the transversal product (it equals the logical gate for X).
    target = np.ones(1)
    for _ in range(code.num_qubits):
        target = np.kron(target, standard_gate(config["gate"]))
    U, traj = propagate(
        model, pulse, initial_state=code.codeword_0, record_trajectory=True
    )
    pulse.to_csv(os.path.join(run_dir, "pulse.csv"))
    traj.to_csv(os.path.join(run_dir, "trajectory.csv"), code=code)
    metrics = gate_error_metrics(target, U)
    metrics["phase_invariant_fidelity"] = fidelity_phase_invariant(target, U)
    metrics["strict_fidelity"] = fidelity_strict(target, U)
    _write_json(os.path.join(run_dir, "metrics.json"), metrics)
    print(
        f"{run_dir}: {config['gate']} |F| = "
        f"{metrics['phase_invariant_fidelity']:.6f} (J={config['J']})"
    )
    return EXIT_OK


def _run_sweep(config) -> int:
    if config["values"] is None:
        raise ConfigError("mode=sweep requires values=v1,v2,...")
    run_dir = _make_run_dir(config, f"sweep-{config['vary']}")
    _write_manifest(run_dir, config)
    rows = iteration_sweep_experiment(
        config["vary"], config["values"], gate=config["gate"],
        J=config["J"] if config["J"] else 2.0,
        delta_omega=config["delta_omega"],
        omega_center=config["omega_center"],
        t_F=config["t_F"] if config["t_F"] is not None else 10.0,
        K=config["K"] if config["K"] is not None else 80,
        seeds=config["seeds"], config=_optimizer_config(config),
        csv_path=os.path.join(run_dir, "sweep.csv"),
    )
    for r in rows:
        print(
            f"{config['vary']}={r['value']}: median iterations "
            f"{r['median_iterations']} (per seed {r['per_seed']})"
        )
    return EXIT_OK


def _verify_checks():
    """Yield (name, passed) for the built-in identity suite."""
    for name in GATE_NAMES:
        g = standard_gate(name)
        fid = phase_invariant_fidelity_2x2(g, sequence_product(euler_sequence(name)))
        yield f"euler product {name}", fid >= 1 - 1e-10
        fid = phase_invariant_fidelity_2x2(g, sequence_product(local_sequence(name)))
        yield f"local product {name}", fid >= 1 - 1e-10
    rng = np.random.default_rng(7)
    for phi in rng.uniform(0.05, 1.5, size=5):
        Omega = 1.0
        u = Omega * np.tan(phi)
        got = composite_ry_check(u, Omega)
        want = rotation((0.0, 1.0, 0.0), 4 * phi)
        yield (
            f"composite R_y phi={phi:.3f}",
            phase_invariant_fidelity_2x2(want, got) >= 1 - 1e-10,
        )
    for code, label in ((five_qubit_code(), "five-qubit"), (bitflip3_code(), "bit-flip")):
        B = code.displaced_basis()
        defect = np.abs(B.conj() @ B.T - np.eye(code.dim)).max()
        yield f"{label} displaced Gram identity", defect < 1e-9
    W = logical_gate(five_qubit_code(), standard_gate("X"), "X").matrix
    X5 = np.ones(1)
    for _ in range(5):
        X5 = np.kron(X5, standard_gate("X"))
    yield "logical X transversal", np.abs(W - X5).max() < 1e-9
    for N in (2, 8, 32):
        A = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        Q1, _ = np.linalg.qr(A)
        A = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
        Q2, _ = np.linalg.qr(A)
        hs = gate_error_metrics(Q1, Q2)["hs_norm"]
        F = fidelity_strict(Q1, Q2)
        yield (
            f"norm identity N={N}",
            abs(hs**2 - 2 * N * (1 - F)) < 1e-9,
        )


def _run_verify() -> int:
    passed = failed = 0
    for name, ok in _verify_checks():
        if ok:
            passed += 1
        else:
            failed += 1
            print(f"FAIL {name}")
    print(f"PASS {passed}/{passed + failed}")
    return EXIT_OK if failed == 0 else EXIT_NOT_CONVERGED


def cmd_run(args) -> int:
    config = parse_config(args.config)
    mode = config["mode"]
    if mode == "synthesize":
        return _run_synthesize(config)
    if mode == "baseline-global":
        return _run_baseline_global(config)
    if mode == "baseline-local":
        return _run_baseline_local(config)
    if mode == "sweep":
        return _run_sweep(config)
    return _run_verify()


def _reproduce_table1(out_dir) -> int:
    path = os.path.join(out_dir, "table1.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gate", "pulse_length_pi_units", "product_fidelity"])
        for name in GATE_NAMES:
            fid = phase_invariant_fidelity_2x2(
                standard_gate(name), sequence_product(euler_sequence(name))
            )
            writer.writerow([name, f"{euler_pulse_length(name):.2f}", repr(fid)])
    print(path)
    return EXIT_OK


def _reproduce_table2(out_dir) -> int:
    path = os.path.join(out_dir, "table2.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["gate", "duration_pi_over_2Omega_units", "product_fidelity"]
        )
        for name in GATE_NAMES:
            fid = phase_invariant_fidelity_2x2(
                standard_gate(name), sequence_product(local_sequence(name))
            )
            writer.writerow(
                [name, repr(float(local_pulse_length(name))), repr(float(fid))]
            )
    print(path)
    return EXIT_OK


def _reproduce_table3(out_dir, setting: str) -> int:
    """Per-gate error measures from converged synthesis runs.

    setting=local runs the five-qubit local-control synthesis on demand
    (minutes per gate).  setting=global is a multi-hour computation and is
    only collated from prior runs: point output_dir at a directory holding
    record JSONs named table3-global-<gate>.json (written by mode=synthesize
    with run_name=table3-global-<gate>).
    """
    path = os.path.join(out_dir, f"table3-{setting}.csv")
    rows = []
    if setting == "local":
        code = five_qubit_code()
        model = build_local_optimal(10.0, 1.0, 5)
        for name in GATE_NAMES:
            target = logical_gate(code, standard_gate(name), name)
            rec = synthesize(model, target, 30.0, 300, OptimizerConfig())
            if not rec.converged:
                print(
                    f"{name}: did not converge within the sweep budget",
                    file=sys.stderr,
                )
                return EXIT_NOT_CONVERGED
            rows.append((name, rec.final_fidelity, rec.metrics))
    else:
        for name in GATE_NAMES:
            src = os.path.join(out_dir, f"table3-global-{name}.json")
            if not os.path.exists(src):
                print(
                    f"missing {src}; produce it with a mode=synthesize run "
                    f"(code=five_qubit model=global J=1 t_F=125 K=1250 "
                    f"gate={name} run_name=table3-global-{name}), then rerun",
                    file=sys.stderr,
                )
                return EXIT_NOT_CONVERGED
            with open(src) as fh:
                rec = json.load(fh)
            rows.append((name, rec["final_fidelity"], rec["metrics"]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gate", "fidelity", "op_norm", "hs_norm", "max_elem"])
        for name, fid, metrics in rows:
            writer.writerow(
                [name, repr(fid), repr(metrics["op_norm"]),
                 repr(metrics["hs_norm"]), repr(metrics["max_elem"])]
            )
    print(path)
    return EXIT_OK


def _reproduce_fig9(out_dir) -> int:
    j_csv = os.path.join(out_dir, "fig9-J-sweep.csv")
    dw_csv = os.path.join(out_dir, "fig9-delta-omega-sweep.csv")
    iteration_sweep_experiment(
        "J", (0.5, 1.0, 2.0, 4.0), delta_omega=2.0, csv_path=j_csv
    )
    iteration_sweep_experiment(
        "delta_omega", (0.25, 0.5, 1.0, 2.0, 4.0), J=2.0, csv_path=dw_csv
    )
    print(j_csv)
    print(dw_csv)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    out_dir = args.out or _output_root()
    os.makedirs(out_dir, exist_ok=True)
    if args.table == "table1":
        return _reproduce_table1(out_dir)
    if args.table == "table2":
        return _reproduce_table2(out_dir)
    if args.table == "table3":
        return _reproduce_table3(out_dir, args.setting)
    return _reproduce_fig9(out_dir)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ftpulse",
        description="Pulse synthesis for fault-tolerant logical gates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute an experiment config file")
    p_run.add_argument("config")
    p_rep = sub.add_parser("reproduce", help="emit a reference table/sweep")
    p_rep.add_argument(
        "table", choices=("table1", "table2", "table3", "fig9")
    )
    p_rep.add_argument("--out", default=None, help="output directory")
    p_rep.add_argument(
        "--setting", choices=("local", "global"), default="local",
        help="which synthesis setting table3 reports",
    )
    sub.add_parser("verify", help="run the built-in identity suite")
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "reproduce":
            return cmd_reproduce(args)
        return _run_verify()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
