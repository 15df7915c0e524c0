"""Classical analysis and simulated quantum search on the bundled 5-gene cortical network."""

import argparse
import json

from qattractor.dynamics import build_transition_table, find_attractors, to_display, transient_horizon
from qattractor.library import load_bundled
from qattractor.search import SearchConfig, run_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shots", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--backend", choices=["effective", "circuit"], default="effective")
    ap.add_argument("--out", help="write the full search report as JSON")
    args = ap.parse_args()

    spec = load_bundled("giacomantonio")
    table = build_transition_table(spec)
    print("genes:", " ".join(spec.genes))
    print("transient horizon:", transient_horizon(table))
    for a in find_attractors(table):
        print(f"  attractor {to_display(a.cycle_states[0], spec.n)}  basin={a.basin_size}  "
              f"max transient={a.max_transient}")

    report = run_search(spec, SearchConfig(shots=args.shots, seed=args.seed, backend=args.backend), table)
    for run in report.runs:
        top = sorted(run.histogram.counts.items(), key=lambda kv: -kv[1])[:3]
        print(f"run {run.index}: M={run.M} J={run.plan.J} phi={run.plan.phi:+.5f} "
              f"candidate={run.candidate} ({run.reason}) top={top}")
    print("quantum runs:", report.quantum_runs)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)


if __name__ == "__main__":
    main()
