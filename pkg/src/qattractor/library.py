"""Bundled example networks and a seeded random network generator."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .bnet import And, BoolExpr, Const, NetworkSpec, Not, Or, Var, parse_network, to_text


def bundled_names() -> list[str]:
    files = resources.files("qattractor") / "networks"
    return sorted(p.name[: -len(".bnet")] for p in files.iterdir() if p.name.endswith(".bnet"))


def bundled_text(name: str) -> str:
    return (resources.files("qattractor") / "networks" / f"{name}.bnet").read_text(encoding="utf-8")


def load_bundled(name: str) -> NetworkSpec:
    return parse_network(bundled_text(name))


def random_expr(rng: np.random.Generator, genes, depth: int, p_const: float = 0.05) -> BoolExpr:
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < p_const:
            return Const(int(rng.integers(2)))
        leaf = Var(genes[int(rng.integers(len(genes)))])
        return Not(leaf) if rng.random() < 0.4 else leaf
    kind = rng.integers(3)
    if kind == 0:
        return Not(random_expr(rng, genes, depth - 1, p_const))
    left = random_expr(rng, genes, depth - 1, p_const)
    right = random_expr(rng, genes, depth - 1, p_const)
    return And(left, right) if kind == 1 else Or(left, right)


def random_network(seed, n: int, depth: int = 3) -> NetworkSpec:
    """Random ``n``-gene network, round-tripped through the text format."""
    rng = np.random.default_rng(seed)
    genes = [f"g{i}" for i in range(n)]
    lines = ["targets, factors"]
    for g in genes:
        lines.append(f"{g}, {to_text(random_expr(rng, genes, depth))}")
    return parse_network("\n".join(lines) + "\n")
