"""How coupling strength and frequency spacing affect convergence speed.

Repeats the three-qubit synthesis of demo 02 while varying one model
parameter, and reports the median number of sweeps needed to reach the
target over a few random initial pulses.  Stronger coupling J helps
(the drift entangles faster, so fewer sweeps are needed); the frequency
spacing delta_omega has a sweet spot, with both closely spaced and very
widely spaced qubits converging more slowly.

This runs dozens of full syntheses, so expect tens of minutes.  Trim
the grids below for a quicker look.

Run:  python3 demos/03_iteration_trends.py
"""

from ftpulse.optimize import NOT_CONVERGED, iteration_sweep_experiment


def show(rows):
    for r in rows:
        med = r["median_iterations"]
        med = "did not converge" if med == NOT_CONVERGED else f"{med:.0f}"
        print(f"  J={r['J']:<4}  delta_omega={r['delta_omega']:<5}"
              f"  median sweeps: {med}   per seed: {r['per_seed']}")


print("Varying coupling J at delta_omega=2:")
show(iteration_sweep_experiment("J", [0.5, 1.0, 2.0, 4.0], seeds=(0, 1, 2),
                                csv_path="demo03_vary_J.csv"))

print("Varying frequency spacing delta_omega at J=2:")
show(iteration_sweep_experiment("delta_omega", [0.25, 0.5, 1.0, 2.0, 4.0],
                                J=2.0, seeds=(0, 1, 2),
                                csv_path="demo03_vary_dw.csv"))

print("CSV written to demo03_vary_J.csv and demo03_vary_dw.csv")
