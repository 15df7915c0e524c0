"""Wrong-outcome probability of one suppressed search run versus Pauli error rate."""

import argparse

import numpy as np

from qattractor.dynamics import build_transition_table, find_attractors, transient_horizon
from qattractor.library import load_bundled
from qattractor.search import build_search_circuit, plan_suppression
from qattractor.simulator import NoiseConfig, StateVector, noisy_distribution
from qattractor.synthesis import RegisterLayout


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--network", default="fixture4")
    ap.add_argument("--rates", type=float, nargs="+", default=[0.0, 1e-4, 3e-4, 1e-3, 3e-3])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--trajectories", type=int, default=50)
    args = ap.parse_args()

    spec = load_bundled(args.network)
    table = build_transition_table(spec)
    atts = find_attractors(table)
    T = max(1, transient_horizon(table))
    known = set(atts[0].cycle_states)
    plan = plan_suppression(atts[0].basin_size, table.size)
    circ = build_search_circuit(spec, known, plan, T, table)
    initial = StateVector.basis(circ.num_qubits, 0)
    measured = RegisterLayout(T, spec.n).register(T)
    wrong = np.ones(table.size, bool)
    wrong[[s for a in atts[1:] for s in a.cycle_states]] = False

    print(f"{args.network}: {circ.num_qubits} qubits, {len(circ)} gates, J={plan.J}")
    print("p,mean_wrong,std_wrong")
    for p in args.rates:
        vals = [noisy_distribution(circ, initial, NoiseConfig.depolarizing(p, s),
                                   args.trajectories, measured)[wrong].sum()
                for s in range(args.seeds)]
        print(f"{p:g},{np.mean(vals):.6f},{np.std(vals):.6f}")


if __name__ == "__main__":
    main()
