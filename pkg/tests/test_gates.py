import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vnmlab import oracles as orc
from vnmlab.errors import UnknownRegister, WidthMismatch
from vnmlab.gates import (
    Gate,
    dft,
    hadamard,
    inverse_dft,
    inversion_about_mean,
    oracle_apply,
    phase_mask,
    run_gates,
    run_inverse,
)
from vnmlab.statecore import (
    RegisterLayout,
    fidelity_up_to_phase,
    prepare,
    random_state,
    state_from_terms,
)

import reference as ref

X1 = RegisterLayout.of(X=1)
X2 = RegisterLayout.of(X=2)
SQ = 1 / np.sqrt(2)


def test_hadamard_single_qubit():
    np.testing.assert_allclose(hadamard(prepare(X1, {"X": 0}), "X").amplitudes, [SQ, SQ], atol=1e-12)
    np.testing.assert_allclose(hadamard(prepare(X1, {"X": 1}), "X").amplitudes, [SQ, -SQ], atol=1e-12)


def test_hadamard_two_qubit_value_3():
    # frozen from reference.walsh_matrix(2) @ e_3
    out = hadamard(prepare(X2, {"X": 3}), "X").amplitudes
    np.testing.assert_allclose(out, [0.5, -0.5, -0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(ref.walsh_matrix(2)[:, 3], [0.5, -0.5, -0.5, 0.5], atol=1e-12)


@pytest.mark.parametrize("widths,which", [([3, 2], 0), ([3, 2], 1), ([2, 7, 1], 1), ([6], 0)])
def test_hadamard_matches_dense_reference(widths, which, rng):
    layout = RegisterLayout(tuple((f"R{i}", w) for i, w in enumerate(widths)))
    s = random_state(layout, rng)
    full = ref.register_operator(widths, which, ref.walsh_matrix(widths[which]))
    np.testing.assert_allclose(hadamard(s, f"R{which}").amplitudes, full @ s.amplitudes, atol=1e-12)


def test_hadamard_unknown_register():
    with pytest.raises(UnknownRegister):
        hadamard(prepare(X1, {"X": 0}), "F")


def test_oracle_two_bit_rows(xf22, two_bit):
    out = oracle_apply(prepare(xf22, {"X": 2, "F": 0}), two_bit, "X", "F")
    assert fidelity_up_to_phase(out, prepare(xf22, {"X": 2, "F": 0})) == pytest.approx(1, abs=1e-12)
    out = oracle_apply(prepare(xf22, {"X": 1, "F": 0}), two_bit, "X", "F")
    assert fidelity_up_to_phase(out, prepare(xf22, {"X": 1, "F": 1})) == pytest.approx(1, abs=1e-12)


def test_oracle_involution_and_counter(xf22, two_bit, rng):
    s = random_state(xf22, rng)
    twice = oracle_apply(oracle_apply(s, two_bit, "X", "F"), two_bit, "X", "F")
    np.testing.assert_allclose(twice.amplitudes, s.amplitudes, atol=1e-15)
    assert two_bit.quantum_invocations == 2


def test_oracle_matches_permutation_reference(rng):
    o = orc.make_xor_periodic(3, 6, rng)
    layout = RegisterLayout.of(F=3, X=3)
    s = random_state(layout, rng)
    perm = ref.oracle_permutation([3, 3], 1, 0, o.table)
    np.testing.assert_allclose(oracle_apply(s, o, "X", "F").amplitudes, perm @ s.amplitudes, atol=1e-15)


def test_oracle_multi_register_input(rng):
    o = orc.deutsch_extended_oracle()
    layout = RegisterLayout.of(K=2, X=1, F=1)
    for k in range(4):
        for x in range(2):
            out = oracle_apply(prepare(layout, {"K": k, "X": x, "F": 0}), o, ["K", "X"], "F")
            want = prepare(layout, {"K": k, "X": x, "F": orc.DEUTSCH_TABLE[k][x]})
            assert fidelity_up_to_phase(out, want) == pytest.approx(1, abs=1e-12)


def test_oracle_width_mismatch(two_bit):
    with pytest.raises(WidthMismatch):
        oracle_apply(prepare(RegisterLayout.of(X=3, F=2), {"X": 0, "F": 0}), two_bit, "X", "F")
    with pytest.raises(WidthMismatch):
        oracle_apply(prepare(RegisterLayout.of(X=2, F=1), {"X": 0, "F": 0}), two_bit, "X", "F")


def test_dft_zero_frequency():
    out = dft(prepare(X2, {"X": 0}), "X").amplitudes
    np.testing.assert_allclose(out, [0.5] * 4, atol=1e-12)


def test_dft_comb_fixed_point():
    # frozen from reference.dft_matrix(2) applied to (|0> + |2>)/sqrt2
    s = state_from_terms(X2, {(0,): 1, (2,): 1})
    np.testing.assert_allclose(dft(s, "X").amplitudes, [SQ, 0, SQ, 0], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_dft_matches_dense_reference(n, rng):
    layout = RegisterLayout.of(A=1, X=n)
    s = random_state(layout, rng)
    full = ref.register_operator([1, n], 1, ref.dft_matrix(n))
    np.testing.assert_allclose(dft(s, "X").amplitudes, full @ s.amplitudes, atol=1e-12)
    np.testing.assert_allclose(inverse_dft(dft(s, "X"), "X").amplitudes, s.amplitudes, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_dft_unitary(n):
    layout = RegisterLayout.of(X=n)
    m = np.stack([dft(prepare(layout, {"X": x}), "X").amplitudes for x in range(1 << n)], axis=1)
    np.testing.assert_allclose(m @ m.conj().T, np.eye(1 << n), atol=1e-12)


def test_phase_mask_examples():
    plus = state_from_terms(X1, {(0,): 1, (1,): 1})
    np.testing.assert_allclose(phase_mask(plus, "X", [0, 0]).amplitudes, plus.amplitudes, atol=1e-15)
    np.testing.assert_allclose(phase_mask(plus, "X", [0, np.pi]).amplitudes, [SQ, -SQ], atol=1e-12)
    d = [0.0, 0.3, 1.7, 4.1]
    uniform = hadamard(prepare(RegisterLayout.of(K=2), {"K": 0}), "K")
    np.testing.assert_allclose(phase_mask(uniform, "K", d).amplitudes, 0.5 * np.exp(1j * np.array(d)), atol=1e-12)
    with pytest.raises(WidthMismatch):
        phase_mask(plus, "X", [0, 0, 0])


def test_inversion_about_mean_is_reflection(rng):
    # 2|s><s| - I = H (2|0><0| - I) H
    layout = RegisterLayout.of(X=2, F=1)
    s = random_state(layout, rng)
    via_h = hadamard(phase_mask(hadamard(s, "X"), "X", [0, np.pi, np.pi, np.pi]), "X")
    np.testing.assert_allclose(inversion_about_mean(s, "X").amplitudes, via_h.amplitudes, atol=1e-12)


def test_two_bit_pipeline_reproduces_t2(t2_state, xf22):
    want = state_from_terms(xf22, {(0, 0): 1, (1, 1): 1, (2, 0): 1, (3, 1): 1})
    assert fidelity_up_to_phase(t2_state, want) >= 1 - 1e-12


def test_gate_records_invert(rng):
    o = orc.make_xor_periodic(2, 3, rng)
    layout = RegisterLayout.of(X=2, F=2)
    gates = [
        Gate("hadamard", "X"),
        Gate("oracle", "X", target="F", oracle=o),
        Gate("dft", "X"),
        Gate("phase_mask", "F", phases=(0.1, 0.2, 0.3, 0.4)),
        Gate("inversion_about_mean", "F"),
    ]
    s = random_state(layout, rng)
    back = run_inverse(run_gates(s, gates), gates)
    np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-12)


_seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(_seeds)
def test_gates_preserve_norm_and_self_inverse(seed):
    gen = np.random.default_rng(seed)
    layout = RegisterLayout.of(X=3, F=3)
    s = random_state(layout, gen)
    o = orc.make_xor_periodic(3, int(gen.integers(1, 8)), gen)
    for out in (hadamard(s, "X"), dft(s, "F"), oracle_apply(s, o, "X", "F"),
                phase_mask(s, "X", gen.uniform(0, 6, 8)), inversion_about_mean(s, "F")):
        assert out.norm() == pytest.approx(1, abs=1e-12)
    np.testing.assert_allclose(hadamard(hadamard(s, "X"), "X").amplitudes, s.amplitudes, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(_seeds)
def test_disjoint_gates_commute(seed):
    gen = np.random.default_rng(seed)
    layout = RegisterLayout.of(K=2, X=3, F=3)
    s = random_state(layout, gen)
    o = orc.make_xor_periodic(3, int(gen.integers(1, 8)), gen)
    ab = hadamard(oracle_apply(s, o, "X", "F"), "K")
    ba = oracle_apply(hadamard(s, "K"), o, "X", "F")
    np.testing.assert_allclose(ab.amplitudes, ba.amplitudes, atol=1e-12)
