"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 I/O error, 3 capacity exceeded,
4 oracle mismatch, 5 non-convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bnet import parse_network
from .dynamics import ENCODING, build_transition_table, find_attractors, stg_edges, to_display, transient_horizon
from .errors import BnetError, CapacityExceeded, NonConvergence
from .search import SearchConfig, run_search
from .simulator import NoiseConfig

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_CAPACITY, EXIT_MISMATCH, EXIT_NONCONVERGENCE = range(6)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _noise_arg(text: str) -> dict:
    out = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip().replace("_", "")
        if key not in ("px", "py", "pz") or not value:
            raise argparse.ArgumentTypeError(f"expected p_x=..,p_y=..,p_z=.., got {item!r}")
        out["p_" + key[1]] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qattractor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="parse and validate a BoolNet file")
    v.add_argument("path")

    c = sub.add_parser("classical", help="exhaustive attractor analysis")
    c.add_argument("path")
    c.add_argument("--out", help="report path (default: stdout)")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--stg", help="also write the transition graph as an edge list")

    s = sub.add_parser("search", help="simulated quantum attractor search")
    s.add_argument("path")
    s.add_argument("--shots", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--steps", "-T", type=int, dest="T", help="evolution steps (default: transient horizon)")
    s.add_argument("--counting", choices=("classical", "quantum"), default="classical")
    s.add_argument("--precision", type=int, help="counting qubits for --counting quantum (default n+3)")
    s.add_argument("--backend", choices=("auto", "effective", "circuit"), default="auto")
    s.add_argument("--noise", type=_noise_arg, help="Pauli error rates, e.g. p_x=1e-3,p_z=1e-4")
    s.add_argument("--noise-seed", type=int, help="trajectory seed (default: --seed)")
    s.add_argument("--trajectories", type=int, default=100)
    s.add_argument("--retries", type=int, default=3, help="rejected measurements tolerated in a row")
    s.add_argument("--phi-sign", type=int, choices=(-1, 1), default=-1)
    s.add_argument("--out", help="report path (default: stdout)")
    s.add_argument("--hist-dir", help="directory for per-run histograms (default: next to --out)")
    s.add_argument("--format", choices=("json", "csv"), default="json", help="histogram file format")
    s.add_argument("--no-verify", action="store_true", help="skip the exhaustive oracle self-check")
    return p


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_validate(args) -> int:
    spec = parse_network(_read(args.path))
    print(f"n={spec.n}")
    print("genes: " + ", ".join(spec.genes))
    return EXIT_OK


def classical_report(spec, table) -> dict:
    return {
        "genes": list(spec.genes),
        "encoding": ENCODING,
        "n": spec.n,
        "transient_horizon": transient_horizon(table),
        "attractors": [
            {
                "cycle": [to_display(x, spec.n) for x in a.cycle_states],
                "basin_size": a.basin_size,
                "max_transient": a.max_transient,
            }
            for a in find_attractors(table)
        ],
    }


def cmd_classical(args) -> int:
    spec = parse_network(_read(args.path))
    table = build_transition_table(spec)
    report = classical_report(spec, table)
    if args.format == "json":
        text = _dumps(report)
    else:
        rows = ["cycle,basin_size,max_transient"]
        rows += [f"{'->'.join(a['cycle'])},{a['basin_size']},{a['max_transient']}" for a in report["attractors"]]
        text = "\n".join(rows) + "\n"
    _write(args.out, text)
    if args.stg:
        _write(args.stg, stg_edges(table))
    return EXIT_OK


def cmd_search(args) -> int:
    spec = parse_network(_read(args.path))
    noise = None
    if args.noise:
        seed = args.noise_seed if args.noise_seed is not None else args.seed
        noise = NoiseConfig(seed=seed, **args.noise)
    config = SearchConfig(
        shots=args.shots, seed=args.seed, T=args.T, counting=args.counting,
        precision=args.precision, backend=args.backend, noise=noise,
        trajectories=args.trajectories, max_retries=args.retries, phi_sign=args.phi_sign,
    )
    table = build_transition_table(spec)
    try:
        report = run_search(spec, config, table)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in exc.log:
            print(line, file=sys.stderr)
        return EXIT_NONCONVERGENCE

    data = report.to_dict()
    status = EXIT_OK
    if not args.no_verify:
        expected = {frozenset(a.cycle_states) for a in find_attractors(table)}
        matches = expected == report.attractor_sets()
        data["oracle_check"] = {"expected_attractors": len(expected), "matches": matches}
        if not matches:
            status = EXIT_MISMATCH
    _write(args.out, _dumps(data))

    hist_dir = args.hist_dir or (str(Path(args.out).parent) if args.out else None)
    if hist_dir is not None:
        stem = Path(args.out).stem if args.out else "search"
        Path(hist_dir).mkdir(parents=True, exist_ok=True)
        for rec in report.runs:
            body = rec.histogram.to_json() + "\n" if args.format == "json" else rec.histogram.to_csv()
            (Path(hist_dir) / f"{stem}.run{rec.index}.{args.format}").write_text(body, encoding="utf-8")
    if status == EXIT_MISMATCH:
        print("error: discovered attractors differ from the exhaustive oracle", file=sys.stderr)
    return status


COMMANDS = {"validate": cmd_validate, "classical": cmd_classical, "search": cmd_search}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BnetError as exc:
        print(f"{getattr(args, 'path', '')}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
