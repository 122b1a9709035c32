"""End-to-end runs of the four oracle algorithms with time-labelled traces.

Time labels follow the block diagram used throughout: ``t0`` preparation,
``t1`` first transform on X, ``t2`` function evaluation, ``t3`` after the
intermediate measurement (the t2 state itself when that measurement is
skipped), ``t4`` after the final transform.  The Deutsch and Grover runs stop
at ``t3``, their pre-measurement state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Iterable, Sequence

import numpy as np

from . import oracles as orc
from .errors import (
    FamilyMismatch,
    Inconclusive,
    InsufficientConstraints,
    UnsupportedInstance,
)
from .gates import dft, hadamard, inversion_about_mean, oracle_apply, phase_mask
from .measure import MeasurementRecord, measure_collapse
from .oracles import OracleFunction, QueryLedger
from .statecore import PureState, RegisterLayout, prepare


def as_rng(rng) -> tuple[np.random.Generator, int | None]:
    """Accept a Generator, an int seed or None; return (generator, seed-or-None)."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    if rng is None:
        return np.random.default_rng(), None
    return np.random.default_rng(int(rng)), int(rng)


def _amps_json(state: PureState) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


@dataclass(eq=False)
class RunTrace:
    algorithm: str
    seed: int | None
    layout: RegisterLayout
    states: list[tuple[str, PureState]] = field(default_factory=list)
    measurements: list[MeasurementRecord] = field(default_factory=list)
    oracle_invocations: int = 0
    result: Any = None

    def state(self, label: str) -> PureState:
        for lab, s in self.states:
            if lab == label:
                return s
        raise KeyError(label)

    @property
    def labels(self) -> list[str]:
        return [lab for lab, _ in self.states]

    def _record(self, label: str, state: PureState) -> PureState:
        self.states.append((label, state))
        return state

    def _measure(self, state: PureState, register: str, rng) -> PureState:
        rec = measure_collapse(state, register, rng)
        self.measurements.append(rec)
        return rec.post_state

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "layout": [[name, width] for name, width in self.layout.registers],
            "states": [{"label": lab, "amplitudes": _amps_json(s)} for lab, s in self.states],
            "measurements": [m.to_dict() for m in self.measurements],
            "oracle_invocations": self.oracle_invocations,
            "result": self.result,
        }

    def to_json(self) -> str:
        # repr-based float output round-trips float64 exactly
        return json.dumps(self.to_dict(), separators=(",", ":"))


# -- Simon ------------------------------------------------------------------


def simon_run(
    oracle: OracleFunction,
    intermediate: bool = True,
    rng=None,
    keep_states: bool = True,
) -> RunTrace:
    """One pass of the simplified Simon circuit; ``trace.result`` is z-bar."""
    if oracle.family != orc.XOR_PERIODIC:
        raise FamilyMismatch(f"simon_run needs an xor_periodic oracle, got {oracle.family}")
    gen, seed = as_rng(rng)
    layout = RegisterLayout.of(X=oracle.in_bits, F=oracle.out_bits)
    trace = RunTrace("simon", seed, layout)
    record = trace._record if keep_states else (lambda label, s: s)
    before = oracle.quantum_invocations

    s = record("t0", prepare(layout, {"X": 0, "F": 0}))
    s = record("t1", hadamard(s, "X"))
    s = record("t2", oracle_apply(s, oracle, "X", "F"))
    if intermediate:
        s = trace._measure(s, "F", gen)
    s = record("t3", s)
    s = record("t4", hadamard(s, "X"))
    trace._measure(s, "X", gen)

    trace.oracle_invocations = oracle.quantum_invocations - before
    trace.result = trace.measurements[-1].outcome
    return trace


def gf2_reduce(basis: dict[int, int], v: int) -> int:
    """Reduce ``v`` against a pivot-keyed echelon basis {leading bit: row}."""
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            return v
        v ^= basis[lead]
    return 0


def gf2_insert(basis: dict[int, int], v: int) -> bool:
    """Add ``v`` to the basis if independent; returns whether the rank grew."""
    v = gf2_reduce(basis, v)
    if not v:
        return False
    basis[v.bit_length() - 1] = v
    return True


def gf2_nullspace(rows: Iterable[int], n: int) -> list[int]:
    """Basis of {x in GF(2)^n : row . x = 0 for every row}, as integers."""
    basis: dict[int, int] = {}
    for row in rows:
        gf2_insert(basis, row)
    # reduced row echelon: clear each pivot bit from every other row
    for p in sorted(basis):
        for q in basis:
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= basis[p]
    free = [c for c in range(n) if c not in basis]
    out = []
    for c in free:
        x = 1 << c
        for p, row in basis.items():
            if (row >> c) & 1:
                x |= 1 << p
        out.append(x)
    return out


def simon_solve_r(
    oracle: OracleFunction,
    rng=None,
    max_runs: int = 1000,
    intermediate: bool = True,
    ledger: QueryLedger | None = None,
) -> int:
    """Repeat :func:`simon_run` until the constraints r.z = 0 pin down r."""
    if oracle.family != orc.XOR_PERIODIC:
        raise FamilyMismatch(f"simon_solve_r needs an xor_periodic oracle, got {oracle.family}")
    gen, _ = as_rng(rng)
    n = oracle.in_bits
    basis: dict[int, int] = {}
    runs = 0
    while len(basis) < n - 1:
        if runs >= max_runs:
            raise InsufficientConstraints(
                f"rank {len(basis)} < {n - 1} after {runs} runs (max_runs={max_runs})"
            )
        trace = simon_run(oracle, intermediate, gen, keep_states=False)
        runs += 1
        if ledger is not None:
            widths = [oracle.out_bits, n] if intermediate else [n]
            ledger.add_run(trace.oracle_invocations, widths)
        gf2_insert(basis, trace.result)
    (r,) = gf2_nullspace(basis.values(), n)
    return r


# -- Shor (exact-divisor period finding) ------------------------------------


def shor_period_run(a: int, L: int, n: int, rng=None, intermediate: bool = True) -> RunTrace:
    """Period-finding pass for f(x) = a^x mod L; ``trace.result`` is z-bar.

    Only instances whose period divides N = 2^n are accepted.
    """
    r = orc.multiplicative_order(a, L)
    N = 1 << n
    if N % r:
        raise UnsupportedInstance(f"period {r} of {a} mod {L} does not divide N={N}")
    oracle = orc.make_modexp(a, L, n)
    gen, seed = as_rng(rng)
    layout = RegisterLayout.of(X=n, F=oracle.out_bits)
    trace = RunTrace("shor", seed, layout)

    s = trace._record("t0", prepare(layout, {"X": 0, "F": 0}))
    s = trace._record("t1", hadamard(s, "X"))
    s = trace._record("t2", oracle_apply(s, oracle, "X", "F"))
    if intermediate:
        s = trace._measure(s, "F", gen)
    s = trace._record("t3", s)
    s = trace._record("t4", dft(s, "X"))
    trace._measure(s, "X", gen)

    trace.oracle_invocations = oracle.quantum_invocations
    trace.result = trace.measurements[-1].outcome
    return trace


def shor_extract_period(samples: Sequence[int], N: int) -> int:
    """r = N / gcd(N, samples...).  May return a divisor of the true period
    when the samples share an extra common factor."""
    g = 0
    for z in samples:
        g = gcd(g, int(z))
    if g == 0:
        raise Inconclusive("all samples are zero")
    return N // gcd(N, g)


# -- Deutsch ----------------------------------------------------------------


def deutsch_standard_run(k, rng=None) -> RunTrace:
    """Single-query Deutsch circuit; ``trace.result`` is the X outcome (1 iff balanced)."""
    oracle = orc.deutsch_oracle(k)
    gen, seed = as_rng(rng)
    layout = RegisterLayout.of(X=1, F=1)
    trace = RunTrace("deutsch", seed, layout)

    s = hadamard(prepare(layout, {"X": 0, "F": 1}), "F")
    s = trace._record("t0", s)
    s = trace._record("t1", hadamard(s, "X"))
    s = trace._record("t2", oracle_apply(s, oracle, "X", "F"))
    s = trace._record("t3", hadamard(s, "X"))
    trace._measure(s, "X", gen)

    trace.oracle_invocations = oracle.quantum_invocations
    trace.result = trace.measurements[-1].outcome
    return trace


def random_phases(gen: np.random.Generator, count: int = 3) -> list[float]:
    return [0.0] + gen.uniform(0.0, 2.0 * np.pi, size=count).tolist()


def deutsch_extended_run(rng=None, phases: Sequence[float] | None = None) -> RunTrace:
    """Deutsch with the oracle mode held in register K.

    ``phases`` are the relative K phases (0, d1, d2, d3); fresh uniform draws
    when omitted.  ``trace.result`` is ``{"k": label, "x": outcome}``.
    """
    gen, seed = as_rng(rng)
    phases = random_phases(gen) if phases is None else list(phases)
    oracle = orc.deutsch_extended_oracle()
    layout = RegisterLayout.of(K=2, X=1, F=1)
    trace = RunTrace("deutsch_extended", seed, layout)

    s = prepare(layout, {"K": 0, "X": 0, "F": 1})
    s = phase_mask(hadamard(hadamard(s, "K"), "F"), "K", phases)
    s = trace._record("t0", s)
    s = trace._record("t1", hadamard(s, "X"))
    s = trace._record("t2", oracle_apply(s, oracle, ["K", "X"], "F"))
    s = trace._record("t3", hadamard(s, "X"))
    s = trace._measure(s, "K", gen)
    trace._measure(s, "X", gen)

    trace.oracle_invocations = oracle.quantum_invocations
    k_out, x_out = trace.measurements[0].outcome, trace.measurements[1].outcome
    trace.result = {"k": orc.deutsch_label(k_out), "x": x_out, "phases": phases}
    return trace


# -- Grover, n = 2 ----------------------------------------------------------


def grover_run(k: int | None, extended: bool = False, rng=None, n: int = 2,
               phases: Sequence[float] | None = None) -> RunTrace:
    """One Grover iteration at n = 2 (phase oracle on F in |->, then
    inversion about the mean).

    Standard: ``trace.result`` is the X outcome.  Extended: the target label
    sits in register K (``k`` is ignored) and ``trace.result`` is
    ``{"k": k-bar, "x": x-bar}``.
    """
    if n != 2:
        raise UnsupportedInstance(f"only n=2 is supported, got n={n}")
    gen, seed = as_rng(rng)
    if not extended:
        oracle = orc.grover_oracle(k, n)
        layout = RegisterLayout.of(X=n, F=1)
        trace = RunTrace("grover", seed, layout)
        s = hadamard(prepare(layout, {"X": 0, "F": 1}), "F")
        s = trace._record("t0", s)
        s = trace._record("t1", hadamard(s, "X"))
        s = trace._record("t2", oracle_apply(s, oracle, "X", "F"))
        s = trace._record("t3", inversion_about_mean(s, "X"))
        trace._measure(s, "X", gen)
        trace.oracle_invocations = oracle.quantum_invocations
        trace.result = trace.measurements[-1].outcome
        return trace

    phases = random_phases(gen, (1 << n) - 1) if phases is None else list(phases)
    oracle = orc.grover_extended_oracle(n)
    layout = RegisterLayout.of(K=n, X=n, F=1)
    trace = RunTrace("grover_extended", seed, layout)
    s = prepare(layout, {"K": 0, "X": 0, "F": 1})
    s = phase_mask(hadamard(hadamard(s, "K"), "F"), "K", phases)
    s = trace._record("t0", s)
    s = trace._record("t1", hadamard(s, "X"))
    s = trace._record("t2", oracle_apply(s, oracle, ["K", "X"], "F"))
    s = trace._record("t3", inversion_about_mean(s, "X"))
    s = trace._measure(s, "K", gen)
    trace._measure(s, "X", gen)
    trace.oracle_invocations = oracle.quantum_invocations
    trace.result = {"k": trace.measurements[0].outcome, "x": trace.measurements[1].outcome,
                    "phases": phases}
    return trace


# -- query ledger report ----------------------------------------------------


def speedup_report(
    n_range: Iterable[int],
    seeds: int | Sequence[int],
    intermediate: bool = True,
    max_runs: int | None = None,
) -> list[dict]:
    """Classical collision-search queries vs Simon quantum invocations per n.

    ``classical_worst`` uses the adversarial period r = 2^(n-1); the averages
    run over one random xor-periodic oracle (random r, random values) per seed,
    and the quantum side solves that same oracle with :func:`simon_solve_r`.
    """
    seed_list = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    rows = []
    for n in n_range:
        worst_oracle = orc.make_xor_periodic(n, 1 << (n - 1), np.random.default_rng([n, 0]))
        _, _, classical_worst = orc.classical_collision_search(worst_oracle)
        classical = []
        ledger = QueryLedger()
        for seed in seed_list:
            gen = np.random.default_rng([n, seed])
            r = int(gen.integers(1, 1 << n))
            oracle = orc.make_xor_periodic(n, r, gen)
            classical.append(orc.classical_collision_search(oracle)[2])
            found = simon_solve_r(oracle, gen, max_runs or 64 * n, intermediate, ledger)
            if found != r:
                raise AssertionError(f"simon_solve_r returned {found}, hidden r={r}")
        count = len(seed_list)
        quantum = ledger.quantum_invocations / count
        rows.append({
            "n": n,
            "classical_worst": classical_worst,
            "classical_avg": sum(classical) / count,
            "quantum_invocations": quantum,
            "quantum_runs": ledger.quantum_runs / count,
            "measurement_units": ledger.measurement_cost_units / count,
            "ratio": classical_worst / quantum,
            "seeds": count,
        })
    return rows
