import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vnmlab import oracles as orc
from vnmlab.errors import FamilyMismatch, InvalidLabel, InvalidPeriod, NotCoprime, VnmlabError
from vnmlab.oracles import QueryLedger, classical_collision_search


def brute_collision(table):
    """First repeated value under a plain left-to-right scan."""
    for x2 in range(len(table)):
        for x1 in range(x2):
            if table[x1] == table[x2]:
                return x1, x2, x2 + 1
    return None


def test_two_bit_construction():
    o = orc.make_xor_periodic(2, 2, values=[0, 1])
    assert o.table == (0, 1, 0, 1)
    assert o.params == {"r": 2}
    assert orc.two_bit_oracle().table == (0, 1, 0, 1)


@pytest.mark.parametrize("n", range(1, 13))
def test_xor_periodic_invariants_exhaustive(n):
    gen = np.random.default_rng(n)
    for r in {1, (1 << n) - 1, 1 << (n - 1), int(gen.integers(1, 1 << n))}:
        o = orc.make_xor_periodic(n, r, gen)
        assert all(o(x) == o(x ^ r) for x in range(1 << n))
        values, counts = np.unique(o.table, return_counts=True)
        assert set(counts) == {2}
        o.check_invariants()


def test_xor_periodic_determinism():
    a = orc.make_xor_periodic(3, 5, np.random.default_rng(7))
    b = orc.make_xor_periodic(3, 5, np.random.default_rng(7))
    assert a.table == b.table
    assert brute_collision(a.table)[0] ^ brute_collision(a.table)[1] == 5


@pytest.mark.parametrize("r", [0, 4, 9, -1])
def test_invalid_period(r):
    with pytest.raises(InvalidPeriod):
        orc.make_xor_periodic(2, r, np.random.default_rng(0))


def test_from_table_recovers_period():
    o = orc.xor_periodic_from_table([5, 5, 9, 9])
    assert o.params["r"] == 1 and o.out_bits == 4
    with pytest.raises(VnmlabError):
        orc.xor_periodic_from_table([1, 2, 3, 1])


def _modexp_by_multiplication(a, L, count):
    out, v = [], 1
    for _ in range(count):
        out.append(v)
        v = v * a % L
    return out


def test_modexp_tables():
    assert orc.make_modexp(2, 15, 4).table == tuple(_modexp_by_multiplication(2, 15, 16))
    assert orc.make_modexp(2, 15, 4).table[:8] == (1, 2, 4, 8, 1, 2, 4, 8)
    assert orc.make_modexp(4, 15, 4).table[:4] == (1, 4, 1, 4)
    assert orc.make_modexp(7, 15, 4).out_bits == 4
    with pytest.raises(NotCoprime):
        orc.make_modexp(3, 15, 4)


def test_multiplicative_order():
    orders = {a: orc.multiplicative_order(a, 15) for a in (2, 4, 7, 8, 11, 13)}
    assert orders == {2: 4, 4: 2, 7: 4, 8: 4, 11: 2, 13: 4}


@pytest.mark.parametrize("k,table,balanced", [
    ("00", (0, 0), False), ("01", (0, 1), True), ("10", (1, 0), True), ("11", (1, 1), False),
])
def test_deutsch_tables(k, table, balanced):
    o = orc.deutsch_oracle(k)
    assert o.table == table
    assert orc.is_balanced(k) is balanced
    assert orc.deutsch_oracle(int(k, 2)).table == table


@pytest.mark.parametrize("k", ["2", "012", "ab", 4, -1, True])
def test_deutsch_invalid_label(k):
    with pytest.raises(InvalidLabel):
        orc.deutsch_oracle(k)


def test_grover_tables():
    assert orc.grover_oracle(2, 2).table == (0, 0, 1, 0)
    assert orc.grover_oracle(0, 2).table == (1, 0, 0, 0)
    for n in range(1, 6):
        for k in range(1 << n):
            assert sum(orc.grover_oracle(k, n).table) == 1
    with pytest.raises(InvalidLabel):
        orc.grover_oracle(4, 2)


def test_extended_oracles():
    ext = orc.deutsch_extended_oracle()
    for k, x in itertools.product(range(4), range(2)):
        assert ext((k << 1) | x) == orc.deutsch_oracle(k)(x)
    g = orc.grover_extended_oracle(2)
    for k, x in itertools.product(range(4), range(4)):
        assert g((k << 2) | x) == orc.grover_oracle(k, 2)(x)
    ext.check_invariants()
    g.check_invariants()


def test_collision_search_examples():
    o = orc.two_bit_oracle()
    assert classical_collision_search(o) == (0, 2, 3)
    assert o.classical_queries == 3
    assert classical_collision_search(orc.xor_periodic_from_table([5, 5, 9, 9])) == (0, 1, 2)


def test_collision_search_rejects_other_families():
    with pytest.raises(FamilyMismatch):
        classical_collision_search(orc.grover_oracle(1, 2))


@pytest.mark.parametrize("n", [2, 3])
def test_worst_case_by_enumeration(n):
    # every xor-periodic table for this n, enumerated
    worst_all = 0
    for r in range(1, 1 << n):
        reps = [x for x in range(1 << n) if x < x ^ r]
        worst_r = 0
        for values in itertools.permutations(range(1 << n), len(reps)):
            table = [0] * (1 << n)
            for rep, v in zip(reps, values):
                table[rep] = table[rep ^ r] = v
            worst_r = max(worst_r, brute_collision(table)[2])
        if r == 1 << (n - 1):
            assert worst_r == (1 << (n - 1)) + 1
        worst_all = max(worst_all, worst_r)
    assert worst_all == (1 << (n - 1)) + 1


@pytest.mark.parametrize("n", range(2, 11))
def test_adversarial_family_count(n):
    gen = np.random.default_rng(n)
    for _ in range(5):
        o = orc.make_xor_periodic(n, 1 << (n - 1), gen)
        assert classical_collision_search(o)[2] == (1 << (n - 1)) + 1


@settings(max_examples=100)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, (1 << n) - 1), st.integers(0, 2**32 - 1))))
def test_collision_pair_properties(args):
    n, r, seed = args
    o = orc.make_xor_periodic(n, r, np.random.default_rng(seed))
    x1, x2, q = classical_collision_search(o)
    assert o(x1) == o(x2) and x1 != x2 and x1 ^ x2 == r
    assert (x1, x2, q) == brute_collision(o.table)
    assert o.classical_queries == q


def test_counters():
    o = orc.two_bit_oracle()
    o.lookup(0)
    o.lookup(3)
    assert o.classical_queries == 2
    o.record_invocation()
    assert o.quantum_invocations == 1
    o.reset_counters()
    assert (o.classical_queries, o.quantum_invocations) == (0, 0)


def test_classical_deutsch_needs_two_queries():
    for k in range(4):
        balanced, used = orc.classical_deutsch_queries(orc.deutsch_oracle(k))
        assert balanced is orc.is_balanced(k)
        assert used == 2


def test_json_round_trip():
    for o in (orc.make_xor_periodic(4, 9, np.random.default_rng(1)), orc.make_modexp(7, 15, 4),
              orc.deutsch_oracle("10"), orc.grover_oracle(3, 2)):
        doc = o.to_dict()
        assert set(doc) == {"family", "params", "in_bits", "out_bits", "table"}
        back = orc.OracleFunction.from_json(o.to_json())
        assert back.table == o.table and back.family == o.family and back.params == o.params


def test_json_rejects_tampered_table():
    doc = orc.two_bit_oracle().to_dict()
    doc["table"] = [0, 1, 1, 0]
    with pytest.raises(VnmlabError):
        orc.OracleFunction.from_dict(doc)


def test_ledger_monotone():
    led = QueryLedger()
    led.add_classical(3)
    led.add_run(1, [2, 2])
    led.add_run(1, [2])
    assert led.as_dict() == {"classical_queries": 3, "quantum_invocations": 2,
                             "quantum_runs": 2, "measurement_cost_units": 6}
    with pytest.raises(VnmlabError):
        led.add_classical(-1)
