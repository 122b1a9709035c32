"""Function families as explicit truth tables, classical collision search,
and query/cost accounting."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .errors import (
    FamilyMismatch,
    InvalidLabel,
    InvalidPeriod,
    NoCollision,
    NotCoprime,
    VnmlabError,
)

XOR_PERIODIC = "xor_periodic"
MODEXP = "modexp"
DEUTSCH = "deutsch"
GROVER = "grover"
# Label-register gates F(k, x) = f_k(x) with the label register K as extra input.
DEUTSCH_EXTENDED = "deutsch_extended"
GROVER_EXTENDED = "grover_extended"

FAMILIES = (XOR_PERIODIC, MODEXP, DEUTSCH, GROVER, DEUTSCH_EXTENDED, GROVER_EXTENDED)

# f_k(x) for k = 00, 01, 10, 11, indexed [k][x].
DEUTSCH_TABLE = ((0, 0), (0, 1), (1, 0), (1, 1))


def parity(v: int) -> int:
    """Parity of the set bits of ``v`` (the mod-2 inner product when v = a & b)."""
    return bin(int(v)).count("1") & 1


def dot2(a: int, b: int) -> int:
    return parity(int(a) & int(b))


@dataclass(eq=False)
class OracleFunction:
    """Truth table ``f: B^in_bits -> B^out_bits`` plus usage counters.

    ``table`` is immutable; the counters are guarded by a lock so concurrent
    callers can share one oracle.
    """

    in_bits: int
    out_bits: int
    table: tuple[int, ...]
    family: str
    params: dict = field(default_factory=dict)
    classical_queries: int = 0
    quantum_invocations: int = 0

    def __post_init__(self):
        self.table = tuple(int(v) for v in self.table)
        if self.family not in FAMILIES:
            raise VnmlabError(f"unknown oracle family {self.family!r}")
        if self.in_bits < 1 or self.out_bits < 1:
            raise VnmlabError("oracle widths must be positive")
        if len(self.table) != 1 << self.in_bits:
            raise VnmlabError(f"table length {len(self.table)} != 2^{self.in_bits}")
        top = 1 << self.out_bits
        if any(not 0 <= v < top for v in self.table):
            raise VnmlabError(f"table values must lie in [0, {top})")
        self._lock = threading.Lock()
        self._array = np.array(self.table, dtype=np.int64)
        self._array.flags.writeable = False

    @property
    def array(self) -> np.ndarray:
        return self._array

    def lookup(self, x: int) -> int:
        """Classical query: one table lookup, counted."""
        with self._lock:
            self.classical_queries += 1
        return self.table[x]

    def record_invocation(self) -> None:
        with self._lock:
            self.quantum_invocations += 1

    def reset_counters(self) -> None:
        with self._lock:
            self.classical_queries = 0
            self.quantum_invocations = 0

    def __call__(self, x: int) -> int:
        """Uncounted evaluation, for checks and oracles of the oracle."""
        return self.table[x]

    def check_invariants(self) -> None:
        """Exhaustive family-invariant check; raises VnmlabError on failure."""
        t = self.table
        fam = self.family
        if fam == XOR_PERIODIC:
            r = self.params.get("r")
            if not r or not 0 < r < len(t):
                raise VnmlabError(f"xor_periodic oracle has invalid r={r!r}")
            for x in range(len(t)):
                if t[x] != t[x ^ r]:
                    raise VnmlabError(f"f({x}) != f({x ^ r})")
            counts: dict[int, int] = {}
            for v in t:
                counts[v] = counts.get(v, 0) + 1
            if any(c != 2 for c in counts.values()):
                raise VnmlabError("xor_periodic oracle is not 2-to-1")
        elif fam == MODEXP:
            a, L = self.params["a"], self.params["L"]
            if gcd(a, L) != 1:
                raise VnmlabError("modexp base not coprime with modulus")
            if any(t[x] != pow(a, x, L) for x in range(len(t))):
                raise VnmlabError("modexp table mismatch")
        elif fam == DEUTSCH:
            k = self.params["k"]
            if t != DEUTSCH_TABLE[k]:
                raise VnmlabError("deutsch table mismatch")
        elif fam == GROVER:
            k = self.params["k"]
            if any(v != int(x == k) for x, v in enumerate(t)):
                raise VnmlabError("grover table mismatch")
        elif fam == DEUTSCH_EXTENDED:
            for idx, v in enumerate(t):
                if v != DEUTSCH_TABLE[idx >> 1][idx & 1]:
                    raise VnmlabError("extended deutsch table mismatch")
        elif fam == GROVER_EXTENDED:
            n = self.params["n"]
            for idx, v in enumerate(t):
                if v != int((idx >> n) == (idx & ((1 << n) - 1))):
                    raise VnmlabError("extended grover table mismatch")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "in_bits": self.in_bits,
            "out_bits": self.out_bits,
            "table": list(self.table),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "OracleFunction":
        oracle = cls(
            in_bits=int(doc["in_bits"]),
            out_bits=int(doc["out_bits"]),
            table=tuple(doc["table"]),
            family=doc["family"],
            params=dict(doc.get("params", {})),
        )
        oracle.check_invariants()
        return oracle

    @classmethod
    def from_json(cls, text: str) -> "OracleFunction":
        return cls.from_dict(json.loads(text))


def _pair_reps(n: int, r: int) -> list[int]:
    return [x for x in range(1 << n) if x < x ^ r]


def make_xor_periodic(
    n: int,
    r: int,
    rng: np.random.Generator | None = None,
    values: Sequence[int] | None = None,
    out_bits: int | None = None,
) -> OracleFunction:
    """2-to-1 function with ``f(x) == f(x ^ r)``.

    Pairs ``{x, x ^ r}`` are ordered by their smaller member.  Each pair gets a
    distinct value, either from ``values`` (one per pair, in that order) or from
    a random injection drawn with ``rng``.
    """
    if n < 1:
        raise InvalidPeriod(f"register width must be >= 1, got {n}")
    if isinstance(r, bool) or not 1 <= r < (1 << n):
        raise InvalidPeriod(f"period r={r} must satisfy 1 <= r < 2^{n}")
    out_bits = n if out_bits is None else out_bits
    reps = _pair_reps(n, r)
    if values is None:
        if rng is None:
            raise VnmlabError("need either rng or explicit values")
        values = rng.choice(1 << out_bits, size=len(reps), replace=False).tolist()
    values = [int(v) for v in values]
    if len(values) != len(reps) or len(set(values)) != len(values):
        raise VnmlabError(f"need {len(reps)} distinct pair values, got {values}")
    table = [0] * (1 << n)
    for rep, v in zip(reps, values):
        table[rep] = v
        table[rep ^ r] = v
    oracle = OracleFunction(n, out_bits, tuple(table), XOR_PERIODIC, {"r": r})
    oracle.check_invariants()
    return oracle


def xor_periodic_from_table(table: Sequence[int], out_bits: int | None = None) -> OracleFunction:
    """Wrap an explicit 2-to-1 table, recovering its hidden period by brute force."""
    table = [int(v) for v in table]
    size = len(table)
    n = size.bit_length() - 1
    if size < 2 or 1 << n != size:
        raise VnmlabError(f"table length {size} is not a power of two >= 2")
    if out_bits is None:
        out_bits = max(1, max(table).bit_length())
    partner = [x for x in range(1, size) if table[x] == table[0]]
    if len(partner) != 1:
        raise InvalidPeriod("table is not 2-to-1")
    oracle = OracleFunction(n, out_bits, tuple(table), XOR_PERIODIC, {"r": partner[0]})
    oracle.check_invariants()
    return oracle


def two_bit_oracle() -> OracleFunction:
    """The 2-bit example f = [0, 1, 0, 1] with hidden period 2."""
    return make_xor_periodic(2, 2, values=[0, 1])


def make_modexp(a: int, L: int, n: int) -> OracleFunction:
    if gcd(a, L) != 1:
        raise NotCoprime(f"gcd({a}, {L}) = {gcd(a, L)}")
    if not 2 <= a < L:
        raise VnmlabError(f"base must satisfy 2 <= a < L, got a={a}, L={L}")
    table = tuple(pow(a, x, L) for x in range(1 << n))
    return OracleFunction(n, L.bit_length(), table, MODEXP, {"a": a, "L": L})


def multiplicative_order(a: int, L: int) -> int:
    if gcd(a, L) != 1:
        raise NotCoprime(f"gcd({a}, {L}) = {gcd(a, L)}")
    r, v = 1, a % L
    while v != 1:
        v = v * a % L
        r += 1
    return r


def parse_deutsch_label(k) -> int:
    """Accepts ``"01"``-style strings or integers 0..3."""
    if isinstance(k, str):
        if len(k) != 2 or any(c not in "01" for c in k):
            raise InvalidLabel(f"deutsch label must be one of 00, 01, 10, 11; got {k!r}")
        return int(k, 2)
    if isinstance(k, (int, np.integer)) and not isinstance(k, bool) and 0 <= k < 4:
        return int(k)
    raise InvalidLabel(f"invalid deutsch label {k!r}")


def deutsch_label(k: int) -> str:
    return format(k, "02b")


def is_balanced(k) -> bool:
    return parse_deutsch_label(k) in (1, 2)


def deutsch_oracle(k) -> OracleFunction:
    k = parse_deutsch_label(k)
    return OracleFunction(1, 1, DEUTSCH_TABLE[k], DEUTSCH, {"k": k})


def deutsch_extended_oracle() -> OracleFunction:
    """F(k, x) = f_k(x) over the concatenated (K, X) input, K two bits wide."""
    table = tuple(DEUTSCH_TABLE[idx >> 1][idx & 1] for idx in range(8))
    return OracleFunction(3, 1, table, DEUTSCH_EXTENDED, {})


def grover_oracle(k: int, n: int) -> OracleFunction:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k < (1 << n):
        raise InvalidLabel(f"grover target {k!r} out of range for n={n}")
    table = tuple(int(x == k) for x in range(1 << n))
    return OracleFunction(n, 1, table, GROVER, {"k": int(k), "n": n})


def grover_extended_oracle(n: int) -> OracleFunction:
    mask = (1 << n) - 1
    table = tuple(int((idx >> n) == (idx & mask)) for idx in range(1 << (2 * n)))
    return OracleFunction(2 * n, 1, table, GROVER_EXTENDED, {"n": n})


def classical_collision_search(oracle: OracleFunction) -> tuple[int, int, int]:
    """Deterministic scan x = 0, 1, ... until a repeated value appears.

    Returns ``(x1, x2, queries)`` with ``x1 < x2`` and ``f(x1) == f(x2)``.
    """
    if oracle.family != XOR_PERIODIC:
        raise FamilyMismatch(f"collision search needs a 2-to-1 oracle, got {oracle.family}")
    seen: dict[int, int] = {}
    queries = 0
    for x in range(1 << oracle.in_bits):
        v = oracle.lookup(x)
        queries += 1
        if v in seen:
            return seen[v], x, queries
        seen[v] = x
    raise NoCollision("scanned the whole domain without a collision")


def classical_deutsch_queries(oracle: OracleFunction) -> tuple[bool, int]:
    """Classical balanced test: needs both f(0) and f(1)."""
    if oracle.family != DEUTSCH:
        raise FamilyMismatch(f"expected a deutsch oracle, got {oracle.family}")
    before = oracle.classical_queries
    balanced = oracle.lookup(0) != oracle.lookup(1)
    return balanced, oracle.classical_queries - before


@dataclass
class QueryLedger:
    """Classical vs quantum accounting.  Counts only ever grow."""

    classical_queries: int = 0
    quantum_invocations: int = 0
    quantum_runs: int = 0
    measurement_cost_units: int = 0

    def __post_init__(self):
        self._lock = threading.Lock()

    def add_classical(self, queries: int) -> None:
        self._add(classical_queries=queries)

    def add_run(self, invocations: int, measured_widths: Sequence[int]) -> None:
        """One quantum run: its oracle invocations and the widths of every
        register measured (cost is one unit per measured qubit)."""
        self._add(
            quantum_invocations=invocations,
            quantum_runs=1,
            measurement_cost_units=sum(measured_widths),
        )

    def _add(self, **deltas: int) -> None:
        if any(v < 0 for v in deltas.values()):
            raise VnmlabError("ledger counts are monotone; negative increment rejected")
        with self._lock:
            for key, v in deltas.items():
                setattr(self, key, getattr(self, key) + v)

    def as_dict(self) -> dict:
        return {
            "classical_queries": self.classical_queries,
            "quantum_invocations": self.quantum_invocations,
            "quantum_runs": self.quantum_runs,
            "measurement_cost_units": self.measurement_cost_units,
        }
