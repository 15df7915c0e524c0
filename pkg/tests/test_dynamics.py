
import pytest

from qattractor.bnet import parse_network, parse_rule, to_text
from qattractor.dynamics import (
    basin_of, build_transition_table, eval_expr, find_attractors, from_display,
    stg_edges, to_display, transient_horizon, unfold_cycle,
)
from qattractor.errors import NotOnAttractor
from qattractor.library import random_network


def python_eval(text, env):
    """Second evaluator: translate the rule into Python syntax."""
    src = text.replace("&", " and ").replace("|", " or ").replace("!", " not ")
    return int(bool(eval(src, {}, env)))


def naive_attractors(succ):
    """Per-state orbit walk: run 2^n steps, then unfold."""
    size = len(succ)
    found = {}
    for x in range(size):
        y = x
        for _ in range(size):
            y = succ[y]
        cyc = [y]
        z = succ[y]
        while z != y:
            cyc.append(z)
            z = succ[z]
        key = min(cyc)
        found.setdefault(key, [set(cyc), 0])[1] += 1
    return {k: (frozenset(v[0]), v[1]) for k, v in found.items()}


def hitting_time(succ, x, cycle_states):
    t = 0
    while x not in cycle_states:
        x = succ[x]
        t += 1
    return t


def test_display_encoding():
    assert to_display(5, 4) == "0101"
    assert from_display("0101") == 5


def test_eval_examples():
    spec = parse_network("A, B\nB, A\n")
    assert eval_expr(parse_rule("!A"), 0b10, spec) == 0
    assert eval_expr(parse_rule("A & (B | 0)"), 0b10, spec) == 0
    assert eval_expr(parse_rule("A & (B | 0)"), 0b11, spec) == 1


@pytest.mark.parametrize("seed", range(30))
def test_eval_matches_python_evaluator(seed):
    spec = random_network(seed, 1 + seed % 4, depth=4)
    for rule in spec.rules:
        text = to_text(rule)
        for x in range(1 << spec.n):
            env = {g: bool((x >> (spec.n - 1 - i)) & 1) for i, g in enumerate(spec.genes)}
            assert eval_expr(rule, x, spec) == python_eval(text, env)


def test_transition_tables_small(identity, toggle):
    assert identity[1].succ.tolist() == [0, 1]
    assert toggle[1].succ.tolist() == [1, 0]


@pytest.mark.parametrize("seed", range(20))
def test_table_is_synchronous_update(seed):
    spec = random_network(seed, 4)
    table = build_transition_table(spec)
    for x in range(16):
        y = table[x]
        for i, rule in enumerate(spec.rules):
            assert (y >> (3 - i)) & 1 == eval_expr(rule, x, spec)


def test_attractor_examples(identity, toggle):
    atts = find_attractors(identity[1])
    assert [(a.cycle_states, a.basin_size) for a in atts] == [((0,), 1), ((1,), 1)]
    (cyc,) = find_attractors(toggle[1])
    assert cyc.cycle_states == (0, 1) and cyc.basin_size == 2 and not cyc.is_static


def test_giacomantonio_basins(giaco):
    spec, table = giaco
    atts = find_attractors(table)
    assert sorted(a.basin_size for a in atts) == [4, 28]
    assert all(a.is_static for a in atts)
    small = min(atts, key=lambda a: a.basin_size)
    large = max(atts, key=lambda a: a.basin_size)
    assert to_display(small.cycle_states[0], 5) == "10101"
    assert len(basin_of(table, small)) == 4
    assert basin_of(table, small) == set(range(32)) - basin_of(table, large)


def test_basin_of_small(identity, toggle):
    a0 = find_attractors(identity[1])[0]
    assert basin_of(identity[1], a0) == {0}
    assert basin_of(toggle[1], find_attractors(toggle[1])[0]) == {0, 1}


@pytest.mark.parametrize("seed", range(200))
def test_basins_partition_state_space(seed):
    spec = random_network(seed, 1 + seed % 6)
    table = build_transition_table(spec)
    atts = find_attractors(table)
    seen = set()
    for a in atts:
        b = basin_of(table, a)
        assert len(b) == a.basin_size
        assert not (b & seen)
        seen |= b
        cyc = a.cycle_states
        assert len(set(cyc)) == len(cyc)
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            assert table[u] == v
    assert seen == set(range(table.size))


@pytest.mark.parametrize("seed", range(60))
def test_matches_naive_detector(seed):
    spec = random_network(seed + 1000, 1 + seed % 5)
    table = build_transition_table(spec)
    succ = table.succ.tolist()
    naive = naive_attractors(succ)
    atts = find_attractors(table)
    assert [a.cycle_states[0] for a in atts] == sorted(naive)
    for a in atts:
        states, size = naive[a.cycle_states[0]]
        assert frozenset(a.cycle_states) == states and a.basin_size == size
    # transient horizon equals the brute-force maximum first hitting time
    on_cycle = set().union(*(set(a.cycle_states) for a in atts))
    assert transient_horizon(table) == max(hitting_time(succ, x, on_cycle) for x in range(len(succ)))
    for a in atts:
        members = basin_of(table, a)
        assert a.max_transient == max(hitting_time(succ, x, set(a.cycle_states)) for x in members)


def test_horizon_examples(identity):
    assert transient_horizon(identity[1]) == 0
    copy = build_transition_table(parse_network("A, B\nB, B\n"))
    assert transient_horizon(copy) == 1


@pytest.mark.parametrize("seed", range(30))
def test_convergence_is_idempotent(seed):
    table = build_transition_table(random_network(seed, 5))
    T = transient_horizon(table)
    atts = find_attractors(table)
    period = {s: a.period for a in atts for s in a.cycle_states}
    at_T = table.power(T)
    for x in range(table.size):
        y = int(at_T[x])
        assert table.step(y, period[y]) == y


def test_unfold_cycle(identity, toggle):
    assert unfold_cycle(identity[1], 1) == [1]
    assert unfold_cycle(toggle[1], 0) == [0, 1]
    assert unfold_cycle(toggle[1], 1) == [1, 0]


def test_unfold_rejects_transient_states():
    for seed in range(100):
        table = build_transition_table(random_network(seed, 4))
        if transient_horizon(table) > 0:
            break
    on_cycle = {s for a in find_attractors(table) for s in a.cycle_states}
    transient = next(x for x in range(table.size) if x not in on_cycle)
    with pytest.raises(NotOnAttractor):
        unfold_cycle(table, transient)


def test_stg_export(toggle):
    assert stg_edges(toggle[1]) == "0 1\n1 0\n"
    assert stg_edges(toggle[1], display=True) == "0 1\n1 0\n"
    spec = parse_network("A, B\nB, A\n")
    lines = stg_edges(build_transition_table(spec), display=True).splitlines()
    assert lines == ["00 00", "01 10", "10 01", "11 11"]
