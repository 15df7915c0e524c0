"""Basin-suppression attractor search.

Each run prepares the uniform superposition minus the basins of all
attractors found so far (an exact-deletion Grover variant), evolves it ``T``
steps and measures the last register. A measured state is accepted only after
a classical check that it lies on a not-yet-known attractor cycle.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .bnet import NetworkSpec
from .circuit import MCPhase, Circuit, conditional_phase_shifter, hadamard_layer, inverse, multi_phase_on_set
from .dynamics import (
    ENCODING,
    AttractorInfo,
    TransitionTable,
    attractor_of,
    build_transition_table,
    to_display,
    transient_horizon,
    unfold_cycle,
)
from .errors import AllStatesMarked, NonConvergence, NotClosedUnderTransition, NotOnAttractor
from .simulator import (
    MeasurementHistogram,
    NoiseConfig,
    StateVector,
    run,
    run_noisy_shots,
    sample_distribution,
)
from .synthesis import RegisterLayout, synthesize_evolution

# snaps float noise at exact boundaries such as M/N = 3/4
_EDGE = 1e-12


@dataclass(frozen=True)
class SuppressionPlan:
    M: int
    N: int
    beta: float
    J: int
    phi: float

    def to_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "beta": self.beta, "J": self.J, "phi": self.phi}


def plan_suppression(M: int, N: int, phi_sign: int = -1) -> SuppressionPlan:
    """Iteration count and phase that delete ``M`` of ``N`` uniform amplitudes exactly.

    beta = asin(sqrt(M/N)), J = ceil(beta / (pi - 2 beta)) and
    phi = sign * 2 asin(sin(pi / (4J + 2)) / cos(beta)). Both signs delete
    exactly (the operators are conjugates of each other); -1 is the default.
    """
    if N < 1 or N & (N - 1):
        raise ValueError(f"N={N} is not a power of two")
    if not 0 <= M <= N:
        raise ValueError(f"M={M} outside [0, {N}]")
    if M == N:
        raise AllStatesMarked("every state is marked; nothing would survive suppression")
    if phi_sign not in (1, -1):
        raise ValueError("phi_sign must be +1 or -1")
    if M == 0:
        return SuppressionPlan(0, N, 0.0, 0, 0.0)
    beta = math.asin(math.sqrt(M / N))
    J = max(1, math.ceil(beta / (math.pi - 2 * beta) - _EDGE))
    ratio = math.sin(math.pi / (4 * J + 2)) / math.sqrt((N - M) / N)
    if ratio > 1 - _EDGE:
        ratio = 1.0
    return SuppressionPlan(M, N, beta, J, phi_sign * 2 * math.asin(ratio))


# -- circuit construction ----------------------------------------------------

def check_closed(table: TransitionTable, states: Iterable[int]) -> set[int]:
    """Require ``states`` to be a union of whole attractor cycles."""
    states = set(int(s) for s in states)
    for s in states:
        if table[s] not in states:
            raise NotClosedUnderTransition(f"successor of {s} is outside the marked set")
        try:
            unfold_cycle(table, s)
        except NotOnAttractor as exc:
            raise NotClosedUnderTransition(str(exc)) from exc
    return states


def build_basin_phase_oracle(spec: NetworkSpec, attractor_states, T: int, phi: float,
                             table: TransitionTable | None = None) -> Circuit:
    """e^{-i phi} on first-register states whose T-step image lies in ``attractor_states``."""
    table = table or build_transition_table(spec)
    states = check_closed(table, attractor_states)
    layout = RegisterLayout(T, spec.n)
    if not states:
        return Circuit(layout.num_qubits)
    evolve = synthesize_evolution(spec, T)
    mark = multi_phase_on_set(spec.n, states, -phi).remap(layout.index_qubits(T), layout.num_qubits)
    return evolve + mark + inverse(evolve)


def build_zero_phase(n: int, phi: float) -> Circuit:
    return conditional_phase_shifter(n, 0, phi)


def build_suppression_circuit(spec: NetworkSpec, known_attractor_states, plan: SuppressionPlan,
                              T: int, table: TransitionTable | None = None) -> Circuit:
    """State preparation from |0...0>: Hadamards, then J rounds of oracle and diffusion."""
    layout = RegisterLayout(T, spec.n)
    q = layout.num_qubits
    reg0 = layout.index_qubits(0)
    hadamards = hadamard_layer(reg0, q)
    circ = hadamards
    if plan.J == 0:
        return circ
    oracle = build_basin_phase_oracle(spec, known_attractor_states, T, plan.phi, table)
    zero = build_zero_phase(spec.n, plan.phi).remap(reg0, q)
    for _ in range(plan.J):
        circ = circ + oracle + hadamards + zero + hadamards
    return circ


def build_search_circuit(spec, known_attractor_states, plan, T, table=None) -> Circuit:
    """Suppression followed by a fresh T-step evolution; measure register T."""
    return build_suppression_circuit(spec, known_attractor_states, plan, T, table) + synthesize_evolution(spec, T)


def register_amplitudes(state: StateVector, layout: RegisterLayout, r: int = 0) -> np.ndarray:
    """Amplitudes of register ``r`` indexed by state index; other registers must be |0>."""
    out = np.zeros(1 << layout.n, dtype=complex)
    own = sum(1 << q for q in layout.register(r))
    for g, a in state.items():
        if abs(a) < 1e-15:
            continue
        if g & ~own:
            raise ValueError("ancilla registers are not clean")
        out[layout.extract(r, g)] = a
    return out


# -- effective backend -------------------------------------------------------

def marked_mask(table: TransitionTable, states, T: int) -> np.ndarray:
    states = np.fromiter(sorted(set(int(s) for s in states)), dtype=np.int64)
    return np.isin(table.power(T), states)


def apply_effective_suppression(table: TransitionTable, known_attractor_states,
                                plan: SuppressionPlan, T: int | None = None) -> np.ndarray:
    """Register-0 amplitudes after suppression, computed on 2^n amplitudes directly.

    Same operator algebra and global-phase convention as the circuit: marked
    states pick up e^{-i phi}, and the Hadamard/zero-phase/Hadamard sandwich
    is the rank-one update a + (e^{i phi} - 1) mean(a).
    """
    if T is None:
        T = transient_horizon(table)
    N = table.size
    amps = np.full(N, 1 / math.sqrt(N), dtype=complex)
    if plan.J == 0:
        return amps
    oracle = np.where(marked_mask(table, known_attractor_states, T), np.exp(-1j * plan.phi), 1.0)
    kick = np.exp(1j * plan.phi) - 1
    for _ in range(plan.J):
        amps *= oracle
        amps += kick * amps.mean()
    return amps


def outcome_distribution(table: TransitionTable, amplitudes: np.ndarray, T: int) -> np.ndarray:
    """Distribution of register T after evolving register-0 ``amplitudes``."""
    return np.bincount(table.power(T), weights=np.abs(amplitudes) ** 2, minlength=table.size)


# -- quantum counting --------------------------------------------------------

def grover_iterate(table: TransitionTable, known_attractor_states, T: int) -> np.ndarray:
    """Matrix of (2|s><s| - I) O with O = -1 on marked states."""
    N = table.size
    sign = np.where(marked_mask(table, known_attractor_states, T), -1.0, 1.0)
    diffusion = np.full((N, N), 2.0 / N) - np.eye(N)
    return diffusion * sign[None, :]


def counting_distribution(table: TransitionTable, known_attractor_states, T: int, t: int) -> np.ndarray:
    """Exact phase-estimation outcome distribution over y in [0, 2^t)."""
    G = grover_iterate(table, known_attractor_states, T)
    N = table.size
    vec = np.full(N, 1 / math.sqrt(N))
    stack = np.empty((1 << t, N))
    for y in range(1 << t):
        stack[y] = vec
        vec = G @ vec
    amps = np.fft.fft(stack, axis=0) / (1 << t)
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    return probs / probs.sum()


def _controlled(gates, control: int):
    # only phase gates need the extra control; X/H come in cancelling pairs
    out = []
    for g in gates:
        if isinstance(g, MCPhase):
            out.append(MCPhase(g.controls + ((control, True),), g.target, g.phi))
        else:
            out.append(g)
    return out


def build_counting_circuit(spec: NetworkSpec, known_attractor_states, T: int, t: int,
                           table: TransitionTable | None = None) -> tuple[Circuit, list[int]]:
    """Phase estimation of the Grover iterate.

    Returns the circuit and the counting qubits in readout order (top bit first).
    """
    layout = RegisterLayout(T, spec.n)
    base = layout.num_qubits
    q = base + t
    counters = [base + k for k in range(t)]
    reg0 = layout.index_qubits(0)
    table = table or build_transition_table(spec)
    oracle = build_basin_phase_oracle(spec, known_attractor_states, T, math.pi, table).gates
    zero = build_zero_phase(spec.n, math.pi).remap(reg0, q).gates
    hadamards = hadamard_layer(reg0, q).gates
    gates = list(hadamard_layer(counters, q).gates) + list(hadamards)
    for k, c in enumerate(counters):
        step = (_controlled(oracle, c) + list(hadamards) + _controlled(zero, c)
                + list(hadamards) + [MCPhase((), c, math.pi)])
        gates += step * (1 << k)
    # inverse Fourier transform; counter t-1-m ends up holding bit m of y
    for m in range(t):
        tgt = counters[t - 1 - m]
        for l in range(m):
            gates.append(MCPhase([(counters[t - 1 - l], True)], tgt, -2 * math.pi / (1 << (m - l + 1))))
        gates.append(hadamard_layer([tgt], q).gates[0])
    return Circuit(q, gates), counters


def counting_distribution_circuit(spec, known_attractor_states, T: int, t: int, table=None) -> np.ndarray:
    circ, readout = build_counting_circuit(spec, known_attractor_states, T, t, table)
    final = run(circ, StateVector.basis(circ.num_qubits, 0, sparse=True), backend="sparse")
    return final.marginal(readout)


def estimate_from_outcome(y: int, t: int, N: int) -> int:
    return int(round(N * math.sin(math.pi * y / (1 << t)) ** 2))


def quantum_count(spec: NetworkSpec, known_attractor_states, T: int, t: int, seed=None,
                  backend: str = "effective", table: TransitionTable | None = None) -> int:
    """One phase-estimation shot, converted to an estimate of the marked count."""
    if t < 1:
        raise ValueError("need at least one counting qubit")
    table = table or build_transition_table(spec)
    if backend == "circuit":
        probs = counting_distribution_circuit(spec, known_attractor_states, T, t, table)
    else:
        probs = counting_distribution(table, known_attractor_states, T, t)
    y = int(np.random.default_rng(seed).choice(len(probs), p=probs / probs.sum()))
    return estimate_from_outcome(y, t, table.size)


# -- driver ------------------------------------------------------------------

@dataclass
class SearchConfig:
    shots: int = 10000
    seed: int = 0
    T: int | None = None
    counting: str = "classical"  # or "quantum"
    precision: int | None = None  # counting qubits; default n + 3
    backend: str = "auto"  # "effective", "circuit"; auto = effective unless noisy
    noise: NoiseConfig | None = None
    trajectories: int = 100
    max_retries: int = 3
    phi_sign: int = -1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if self.counting not in ("classical", "quantum"):
            raise ValueError(f"unknown counting mode {self.counting!r}")
        if self.backend not in ("auto", "effective", "circuit"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.precision is not None and self.precision < 1:
            raise ValueError("precision must be at least 1")
        if self.T is not None and self.T < 1:
            raise ValueError("T must be at least 1")
        if self.trajectories < 1 or self.max_retries < 0:
            raise ValueError("trajectories must be positive and max_retries non-negative")
        if self.noise is not None and self.backend == "effective":
            raise ValueError("noise needs the circuit backend")

    def resolved_backend(self) -> str:
        if self.backend == "auto":
            return "circuit" if self.noise is not None else "effective"
        return self.backend


@dataclass
class RunRecord:
    index: int
    M: int
    plan: SuppressionPlan
    histogram: MeasurementHistogram
    candidate: str
    accepted: bool
    reason: str
    distribution: dict[str, float] | None = None

    def to_dict(self) -> dict:
        out = {
            "run": self.index,
            "plan": self.plan.to_dict(),
            "candidate": self.candidate,
            "accepted": self.accepted,
            "reason": self.reason,
            "histogram": self.histogram.to_dict(),
        }
        if self.distribution is not None:
            out["distribution"] = self.distribution
        return out


@dataclass
class SearchReport:
    genes: tuple[str, ...]
    T: int
    attractors: list[AttractorInfo] = field(default_factory=list)
    found_in_run: list[int] = field(default_factory=list)
    runs: list[RunRecord] = field(default_factory=list)
    verification_log: list[str] = field(default_factory=list)

    @property
    def quantum_runs(self) -> int:
        return len(self.runs)

    def attractor_sets(self) -> set[frozenset[int]]:
        return {frozenset(a.cycle_states) for a in self.attractors}

    def to_dict(self) -> dict:
        n = len(self.genes)
        return {
            "genes": list(self.genes),
            "encoding": ENCODING,
            "T": self.T,
            "quantum_runs": self.quantum_runs,
            "attractors": [
                {
                    "cycle": [to_display(x, n) for x in a.cycle_states],
                    "basin_size": a.basin_size,
                    "max_transient": a.max_transient,
                    "found_in_run": r,
                }
                for a, r in zip(self.attractors, self.found_in_run)
            ],
            "runs": [r.to_dict() for r in self.runs],
            "verification_log": list(self.verification_log),
        }


def _stream(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *path]))


def _as_distribution(probs: np.ndarray, n: int) -> dict[str, float]:
    return {to_display(x, n): float(p) for x, p in enumerate(probs.tolist()) if p > 1e-12}


def run_search(spec: NetworkSpec, config: SearchConfig | None = None,
               table: TransitionTable | None = None) -> SearchReport:
    config = config or SearchConfig()
    table = table or build_transition_table(spec)
    n, N = spec.n, table.size
    horizon = transient_horizon(table)
    T = config.T if config.T is not None else max(1, horizon)
    if T < horizon:
        warnings.warn(f"T={T} is below the transient horizon {horizon}; suppression is approximate")
    backend = config.resolved_backend()
    t = config.precision or n + 3
    layout = RegisterLayout(T, n)

    report = SearchReport(spec.genes, T)
    known: list[AttractorInfo] = []
    known_states: set[int] = set()
    failures = 0
    while True:
        run_index = len(report.runs)
        if config.counting == "classical":
            M = sum(a.basin_size for a in known)
        else:
            M = quantum_count(spec, known_states, T, t, _stream(config.seed, run_index, 1),
                              table=table)
            M = min(max(M, 0), N)
        if M >= N:
            break
        plan = plan_suppression(M, N, config.phi_sign)
        hist_rng = _stream(config.seed, run_index, 0)
        distribution = None
        if backend == "effective":
            amps = apply_effective_suppression(table, known_states, plan, T)
            probs = outcome_distribution(table, amps, T)
            hist = sample_distribution(probs, n, config.shots, hist_rng)
            distribution = _as_distribution(probs, n)
        else:
            circ = build_search_circuit(spec, known_states, plan, T, table)
            initial = StateVector.basis(circ.num_qubits, 0, sparse=True)
            measured = layout.register(T)
            if config.noise is None or config.noise.is_noiseless:
                probs = run(circ, initial).marginal(measured)
                hist = sample_distribution(probs, n, config.shots, hist_rng)
                distribution = _as_distribution(probs, n)
            else:
                run_seed = int(np.random.SeedSequence([config.noise.seed, run_index]).generate_state(1)[0])
                noise = replace(config.noise, seed=run_seed)
                hist = run_noisy_shots(circ, initial, noise, config.trajectories, measured, config.shots)

        candidate = hist.mode()
        x = int(candidate, 2)
        try:
            cycle = unfold_cycle(table, x)
            accepted = not known_states.intersection(cycle)
            reason = "new attractor" if accepted else "attractor already known"
        except NotOnAttractor:
            accepted, reason = False, "transient state"
        report.runs.append(RunRecord(run_index, M, plan, hist, candidate, accepted, reason, distribution))
        report.verification_log.append(f"run {run_index}: {candidate} {'accepted' if accepted else 'rejected'} ({reason})")
        if accepted:
            att = attractor_of(table, x)
            known.append(att)
            known_states.update(att.cycle_states)
            report.attractors.append(att)
            report.found_in_run.append(run_index)
            failures = 0
        else:
            failures += 1
            if failures > config.max_retries:
                err = NonConvergence(
                    f"verification rejected {failures} consecutive measurements", report.verification_log)
                err.report = report
                raise err
    return report
