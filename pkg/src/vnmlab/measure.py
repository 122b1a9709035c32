"""Three views of a projective register measurement.

* procedural collapse: sample an outcome, project, renormalize
  (:func:`measure_collapse`);
* von Neumann's two-step model: a unitary copy of the register into a pointer
  register (:func:`premeasure_von_neumann`), after which the branches are read
  as exclusive outcomes weighted by :func:`born_distribution`;
* algebraic: the post-state is the unit vector fixed by the outcome projector
  with maximal overlap with the input (:func:`projective_solve`).

:func:`backdate_check` and :func:`deferred_tv_distance` compare collapses taken
at different instants of a circuit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UnreachableOutcome
from .gates import Gate, _split, run_inverse
from .statecore import ANALYTIC_TOL, PureState, fidelity_up_to_phase

ZERO_PROBABILITY = 1e-14


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    register: str
    outcome: int
    probability: float
    post_state: PureState
    rng_draw: float

    def to_dict(self) -> dict:
        return {"register": self.register, "outcome": self.outcome, "probability": self.probability}


def outcome_weights(state: PureState, register: str) -> np.ndarray:
    """Squared norm of the state component for every register value."""
    t, _ = _split(state, register)
    return (t.real**2 + t.imag**2).sum(axis=(0, 2))


def born_distribution(state: PureState, register: str) -> dict[int, float]:
    """Reachable outcomes (weight >= 1e-14) mapped to their probabilities, sorted."""
    w = outcome_weights(state, register)
    return {int(k): float(w[k]) for k in np.flatnonzero(w >= ZERO_PROBABILITY)}


def projective_solve(state: PureState, register: str, outcome: int) -> PureState:
    """Normalized projection of ``state`` on the subspace where ``register == outcome``."""
    t, width = _split(state, register)
    if not 0 <= outcome < (1 << width):
        raise UnreachableOutcome(f"{register}={outcome} is outside the register range")
    block = t[:, outcome, :]
    p = float(np.vdot(block, block).real)
    if p < ZERO_PROBABILITY:
        raise UnreachableOutcome(f"{register}={outcome} has Born weight {p:.3g}")
    out = np.zeros_like(t)
    out[:, outcome, :] = block / np.sqrt(p)
    return PureState.wrap(state.layout, out.reshape(-1))


def sample_outcome(dist: dict[int, float], u: float) -> int:
    """Inverse CDF over outcomes in increasing order, for one uniform draw u."""
    items = sorted(dist.items())
    total = sum(p for _, p in items)
    acc = 0.0
    for outcome, p in items:
        acc += p / total
        if u < acc:
            return outcome
    return items[-1][0]


def measure_collapse(state: PureState, register: str, rng: np.random.Generator) -> MeasurementRecord:
    dist = born_distribution(state, register)
    u = float(rng.random())
    outcome = sample_outcome(dist, u)
    post = projective_solve(state, register, outcome)
    return MeasurementRecord(register, outcome, dist[outcome], post, u)


def premeasure_von_neumann(state: PureState, register: str, pointer: str = "P") -> PureState:
    """Measurement interaction |.., f, ..>|0>_P -> |.., f, ..>|f>_P.

    The pointer register is appended to the layout with the measured width
    and kept in the output.
    """
    width = state.layout.width(register)
    layout = state.layout.extend(pointer, width)
    t, _ = _split(state, register)
    pre, dim, post = t.shape
    out = np.zeros((pre, dim, post, dim), dtype=np.complex128)
    f = np.arange(dim)
    out[:, f, :, f] = t.transpose(1, 0, 2)
    return PureState.wrap(layout, out.reshape(-1))


def eigenspace_overlap(candidate: PureState, state: PureState) -> float:
    """|<candidate|state>|, the quantity maximized by the post-measurement state."""
    return float(abs(np.vdot(candidate.amplitudes, state.amplitudes)))


def in_eigenspace(state: PureState, register: str, outcome: int, tol: float = ANALYTIC_TOL) -> bool:
    t, _ = _split(state, register)
    mask = np.ones(t.shape[1], dtype=bool)
    mask[outcome] = False
    return float(np.sum(np.abs(t[:, mask, :]) ** 2)) <= tol


def backdate_check(
    final_state: PureState,
    post_unitaries: Sequence[Gate],
    register: str,
    outcome: int,
    earlier_state: PureState | None = None,
) -> float:
    """Fidelity between a late collapse evolved backwards and an early collapse.

    ``post_unitaries`` are the gates applied after the earlier instant, in
    time order.  The earlier-instant state defaults to ``final_state`` evolved
    back through them; pass ``earlier_state`` to use a forward-simulated one.
    """
    late = projective_solve(final_state, register, outcome)
    backdated = run_inverse(late, post_unitaries)
    if earlier_state is None:
        earlier_state = run_inverse(final_state, post_unitaries)
    early = projective_solve(earlier_state, register, outcome)
    return fidelity_up_to_phase(backdated, early)


def tv_distance(p: dict[int, float], q: dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def mixture_distribution(
    state: PureState,
    measured: str,
    gates: Sequence[Gate],
    register: str,
) -> dict[int, float]:
    """Distribution of ``register`` after measuring ``measured`` then applying ``gates``.

    Computed exactly: each reachable branch is evolved and weighted by its
    Born probability, no sampling.
    """
    total: dict[int, float] = {}
    for outcome, p in born_distribution(state, measured).items():
        branch = projective_solve(state, measured, outcome)
        for g in gates:
            branch = g.apply(branch)
        for z, q in born_distribution(branch, register).items():
            total[z] = total.get(z, 0.0) + p * q
    return total


def deferred_tv_distance(
    state: PureState,
    measured: str,
    gates: Sequence[Gate],
    register: str,
) -> float:
    """TV distance between final ``register`` statistics with and without an
    intermediate measurement of ``measured`` placed before ``gates``."""
    direct = state
    for g in gates:
        direct = g.apply(direct)
    return tv_distance(born_distribution(direct, register), mixture_distribution(state, measured, gates, register))
