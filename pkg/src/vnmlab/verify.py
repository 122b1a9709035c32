"""Property suite behind ``vnmlab verify``.

Each check returns ``(passed, detail)``.  Sample counts are scaled down with
``quick=True``; all randomness is seeded so results are reproducible.
"""

from __future__ import annotations

import io
from typing import Callable, Iterator

import numpy as np

from . import algorithms as alg
from . import oracles as orc
from .gates import Gate, dft, hadamard, inverse_dft, oracle_apply, phase_mask
from .measure import (
    backdate_check,
    born_distribution,
    deferred_tv_distance,
    measure_collapse,
    premeasure_von_neumann,
    projective_solve,
)
from .statecore import (
    PureState,
    RegisterLayout,
    amplitude,
    fidelity_up_to_phase,
    inner,
    prepare,
    random_state,
    reduced_density,
    state_from_terms,
)

TIGHT = 1e-12

CHECKS: list[tuple[str, Callable[[bool], tuple[bool, str]]]] = []


def check(name: str):
    def deco(fn):
        CHECKS.append((name, fn))
        return fn

    return deco


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng([20261014, tag])


def random_xor_oracle(n: int, gen: np.random.Generator) -> orc.OracleFunction:
    return orc.make_xor_periodic(n, int(gen.integers(1, 1 << n)), gen)


# -- statecore --------------------------------------------------------------


@check("statecore.index_bijection")
def _index_bijection(quick):
    layout = RegisterLayout.of(X=2, F=1, K=2)
    for idx in range(layout.dim):
        a = layout.assignment(idx)
        s = prepare(layout, a)
        if amplitude(s, a) != 1 or np.count_nonzero(s.amplitudes) != 1 or layout.index(a) != idx:
            return False, f"round trip failed at index {idx}"
    return True, f"{layout.dim} labels"


@check("statecore.partial_trace_product_pure")
def _pt_pure(quick):
    gen = _rng(1)
    worst = 0.0
    for _ in range(10 if quick else 50):
        a = random_state(RegisterLayout.of(X=2), gen)
        b = random_state(RegisterLayout.of(F=2), gen)
        prod = np.kron(a.amplitudes, b.amplitudes)
        s = PureState(RegisterLayout.of(X=2, F=2), prod)
        top = max(reduced_density(s, ["X"]).eigenvalues())
        worst = max(worst, abs(top - 1))
    return worst < 1e-9, f"max |lambda_max - 1| = {worst:.2e}"


@check("statecore.fidelity_symmetric_phase_invariant")
def _fid(quick):
    gen = _rng(2)
    layout = RegisterLayout.of(X=3)
    worst = 0.0
    for _ in range(20 if quick else 200):
        a, b = random_state(layout, gen), random_state(layout, gen)
        ph = np.exp(1j * gen.uniform(0, 2 * np.pi))
        b2 = PureState(layout, b.amplitudes * ph)
        f = fidelity_up_to_phase(a, b)
        worst = max(worst, abs(f - fidelity_up_to_phase(b, a)), abs(f - fidelity_up_to_phase(a, b2)))
    return worst < TIGHT, f"max deviation {worst:.2e}"


# -- gates --------------------------------------------------------------------


@check("gates.norm_and_involutions")
def _gate_norms(quick):
    gen = _rng(3)
    layout = RegisterLayout.of(X=3, F=3)
    worst = 0.0
    for _ in range(10 if quick else 100):
        s = random_state(layout, gen)
        o = random_xor_oracle(3, gen)
        phases = gen.uniform(0, 2 * np.pi, size=8)
        for out in (hadamard(s, "X"), dft(s, "X"), oracle_apply(s, o, "X", "F"), phase_mask(s, "F", phases)):
            worst = max(worst, abs(out.norm() - 1))
        worst = max(worst, 1 - fidelity_up_to_phase(hadamard(hadamard(s, "X"), "X"), s))
        worst = max(worst, 1 - fidelity_up_to_phase(inverse_dft(dft(s, "X"), "X"), s))
        worst = max(worst, 1 - fidelity_up_to_phase(oracle_apply(oracle_apply(s, o, "X", "F"), o, "X", "F"), s))
    return worst < TIGHT, f"max deviation {worst:.2e}"


@check("gates.disjoint_commute")
def _commute(quick):
    gen = _rng(4)
    layout = RegisterLayout.of(X=3, F=3, K=2)
    worst = 0.0
    for _ in range(10 if quick else 100):
        s = random_state(layout, gen)
        o = random_xor_oracle(3, gen)
        ab = hadamard(oracle_apply(s, o, "X", "F"), "K")
        ba = oracle_apply(hadamard(s, "K"), o, "X", "F")
        worst = max(worst, np.max(np.abs(ab.amplitudes - ba.amplitudes)))
    return worst < TIGHT, f"max amplitude difference {worst:.2e}"


@check("gates.dft_unitary")
def _dft_unitary(quick):
    worst = 0.0
    for n in range(1, 9):
        layout = RegisterLayout.of(X=n)
        cols = [dft(prepare(layout, {"X": x}), "X").amplitudes for x in range(1 << n)]
        m = np.stack(cols, axis=1)
        worst = max(worst, np.max(np.abs(m @ m.conj().T - np.eye(1 << n))))
    return worst < TIGHT, f"max |U U^dag - I| = {worst:.2e}"


@check("gates.two_bit_pipeline")
def _pipeline(quick):
    layout = RegisterLayout.of(X=2, F=2)
    s = oracle_apply(hadamard(prepare(layout, {"X": 0, "F": 0}), "X"), orc.two_bit_oracle(), "X", "F")
    ref = state_from_terms(layout, {(0, 0): 1, (1, 1): 1, (2, 0): 1, (3, 1): 1})
    f = fidelity_up_to_phase(s, ref)
    return f >= 1 - TIGHT, f"fidelity {f!r}"


# -- measure ----------------------------------------------------------------


@check("measure.born_sums_and_collapse_equivalence")
def _born(quick):
    gen = _rng(5)
    layout = RegisterLayout.of(X=2, F=3)
    worst_sum = worst_fid = 0.0
    for _ in range(100 if quick else 1000):
        s = random_state(layout, gen)
        reg = "X" if gen.random() < 0.5 else "F"
        worst_sum = max(worst_sum, abs(sum(born_distribution(s, reg).values()) - 1))
        rec = measure_collapse(s, reg, gen)
        worst_fid = max(worst_fid, 1 - fidelity_up_to_phase(rec.post_state, projective_solve(s, reg, rec.outcome)))
    ok = worst_sum < TIGHT and worst_fid < TIGHT
    return ok, f"sum dev {worst_sum:.2e}, fidelity dev {worst_fid:.2e}"


@check("measure.empirical_frequencies")
def _freq(quick):
    gen = _rng(6)
    layout = RegisterLayout.of(X=2)
    s = random_state(layout, gen)
    dist = born_distribution(s, "X")
    draws = 2000 if quick else 10_000
    counts = dict.fromkeys(dist, 0)
    for _ in range(draws):
        counts[measure_collapse(s, "X", gen).outcome] += 1
    worst = max(abs(counts[k] / draws - p) / (5 * np.sqrt(p * (1 - p) / draws)) for k, p in dist.items())
    return worst <= 1, f"max deviation {worst:.2f} of the 5-sigma band"


@check("measure.premeasure_isometry_and_marginal")
def _premeasure(quick):
    gen = _rng(7)
    layout = RegisterLayout.of(X=2, F=2)
    worst = 0.0
    for _ in range(20 if quick else 200):
        a, b = random_state(layout, gen), random_state(layout, gen)
        pa, pb = premeasure_von_neumann(a, "F"), premeasure_von_neumann(b, "F")
        worst = max(worst, abs(inner(pa, pb) - inner(a, b)), abs(pa.norm() - 1))
        da, dp = born_distribution(a, "F"), born_distribution(pa, "P")
        worst = max(worst, max(abs(da.get(k, 0) - dp.get(k, 0)) for k in set(da) | set(dp)))
    return worst < TIGHT, f"max deviation {worst:.2e}"


@check("measure.deferred_equivalence")
def _deferred(quick):
    gen = _rng(8)
    worst = 0.0
    for _ in range(20 if quick else 100):
        n = int(gen.integers(2, 7))
        o = random_xor_oracle(n, gen)
        t2 = alg.simon_run(o, False, gen).state("t2")
        worst = max(worst, deferred_tv_distance(t2, "F", [Gate("hadamard", "X")], "X"))
    return worst < TIGHT, f"max TV distance {worst:.2e}"


@check("measure.backdating")
def _backdate(quick):
    gen = _rng(9)
    worst = 0.0
    for _ in range(20 if quick else 100):
        o = random_xor_oracle(int(gen.integers(2, 6)), gen)
        trace = alg.simon_run(o, False, gen)
        t4, t2 = trace.state("t4"), trace.state("t2")
        for f in born_distribution(t4, "F"):
            worst = max(worst, 1 - backdate_check(t4, [Gate("hadamard", "X")], "F", f, earlier_state=t2))
    return worst < TIGHT, f"max fidelity deficit {worst:.2e}"


# -- oracles ------------------------------------------------------------------


@check("oracles.family_invariants")
def _families(quick):
    gen = _rng(10)
    built = []
    for n in range(1, 9 if quick else 13):
        built.append(random_xor_oracle(n, gen))
        built.append(orc.grover_oracle(int(gen.integers(0, 1 << n)), n))
    built += [orc.deutsch_oracle(k) for k in range(4)]
    built += [orc.make_modexp(a, 15, 4) for a in (2, 4, 7, 8, 11, 13)]
    built += [orc.deutsch_extended_oracle(), orc.grover_extended_oracle(2)]
    for o in built:
        o.check_invariants()
    return True, f"{len(built)} oracles checked exhaustively"


@check("oracles.collision_pairs_and_counters")
def _collisions(quick):
    gen = _rng(11)
    for _ in range(50 if quick else 300):
        o = random_xor_oracle(int(gen.integers(1, 9)), gen)
        x1, x2, q = orc.classical_collision_search(o)
        if o(x1) != o(x2) or x1 == x2 or x1 ^ x2 != o.params["r"] or o.classical_queries != q:
            return False, f"bad pair ({x1}, {x2}) for r={o.params['r']}"
        layout = RegisterLayout.of(X=o.in_bits, F=o.out_bits)
        before = o.quantum_invocations
        oracle_apply(random_state(layout, gen), o, "X", "F")
        if o.quantum_invocations != before + 1:
            return False, "oracle_apply did not count exactly one invocation"
    return True, "pairs satisfy f(x1)=f(x2), x1^x2=r; counters exact"


@check("oracles.seed_determinism")
def _determinism(quick):
    a = orc.make_xor_periodic(6, 5, np.random.default_rng(3))
    b = orc.make_xor_periodic(6, 5, np.random.default_rng(3))
    return a.table == b.table, "same seed, same table"


# -- algorithms ---------------------------------------------------------------


@check("algorithms.simon_constraint")
def _simon(quick):
    gen = _rng(12)
    runs = 50 if quick else 1000
    bad = 0
    for n in range(2, 9):
        for _ in range(runs):
            o = random_xor_oracle(n, gen)
            bad += orc.dot2(o.params["r"], alg.simon_run(o, True, gen, keep_states=False).result)
    return bad == 0, f"{bad} violations over {7 * runs} runs"


@check("algorithms.deutsch_states_and_budget")
def _deutsch(quick):
    layout = RegisterLayout.of(X=1, F=1)
    worst = 0.0
    for k in range(4):
        trace = alg.deutsch_standard_run(k, k)
        sign = -1 if k >= 2 else 1
        x = 1 if k in (1, 2) else 0
        ref = state_from_terms(layout, {(x, 0): 1, (x, 1): -1})
        raw = trace.state("t3").amplitudes
        worst = max(worst, np.max(np.abs(raw - sign * ref.amplitudes)))
        if trace.result != x or trace.oracle_invocations != 1:
            return False, f"k={k}: outcome {trace.result}, invocations {trace.oracle_invocations}"
        o = orc.deutsch_oracle(k)
        if orc.classical_deutsch_queries(o)[1] != 2:
            return False, "classical baseline did not need 2 queries"
    return worst < TIGHT, f"max raw amplitude deviation {worst:.2e}"


@check("algorithms.extended_correlations")
def _extended(quick):
    n_runs = 100 if quick else 1000
    for seed in range(n_runs):
        d = alg.deutsch_extended_run(seed)
        if d.result["x"] != int(orc.is_balanced(d.result["k"])):
            return False, f"deutsch seed {seed}: {d.result}"
        g = alg.grover_run(None, True, seed)
        if g.result["x"] != g.result["k"]:
            return False, f"grover seed {seed}: {g.result}"
    return True, f"{n_runs} seeds each"


@check("algorithms.grover_standard")
def _grover(quick):
    for k in range(4):
        for seed in range(25 if quick else 250):
            t = alg.grover_run(k, False, seed)
            if t.result != k or t.oracle_invocations != 1:
                return False, f"k={k} seed={seed}: {t.result}"
    return True, "outcome = k, one invocation"


@check("algorithms.shor_multiples")
def _shor(quick):
    N = 16
    for a in (2, 4, 7, 8, 11, 13):
        r = orc.multiplicative_order(a, 15)
        for seed in range(10 if quick else 100):
            z = alg.shor_period_run(a, 15, 4, seed).result
            if z % (N // r):
                return False, f"a={a}: z={z} not a multiple of {N // r}"
    return True, "every z is a multiple of N/r"


# -- cli ----------------------------------------------------------------------


@check("cli.reproducible_json")
def _repro(quick):
    from .cli import run_command

    argvs = [
        ["simon", "--n", "3", "--r", "5", "--seed", "4"],
        ["shor", "--a", "7", "--L", "15", "--n", "4", "--seed", "4"],
        ["deutsch", "--extended", "--seed", "4"],
        ["grover", "--extended", "--seed", "4"],
    ]
    for argv in argvs:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            if run_command(argv, out=buf) != 0:
                return False, f"{argv} failed"
            outs.append(buf.getvalue())
        if outs[0] != outs[1]:
            return False, f"{argv} not byte-identical"
    return True, f"{len(argvs)} commands"


def run_all(quick: bool = False) -> Iterator[tuple[str, bool, str]]:
    for name, fn in CHECKS:
        try:
            passed, detail = fn(quick)
        except Exception as exc:  # a crash is a failed property
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(passed), detail
