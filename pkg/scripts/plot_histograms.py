"""Bar chart of every run histogram in a search report (needs matplotlib)."""

import argparse
import json

import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("report", help="JSON written by `qattractor search --out`")
    ap.add_argument("--out", default="histograms.png")
    args = ap.parse_args()

    with open(args.report) as fh:
        runs = json.load(fh)["runs"]
    fig, axes = plt.subplots(len(runs), 1, figsize=(8, 2.5 * len(runs)), squeeze=False)
    for ax, run in zip(axes[:, 0], runs):
        counts = run["histogram"]["counts"]
        ax.bar(list(counts), list(counts.values()))
        ax.set_title(f"run {run['run']}: candidate {run['candidate']} ({run['reason']})")
        ax.set_ylabel("shots")
        ax.tick_params(axis="x", rotation=90)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)


if __name__ == "__main__":
    main()
