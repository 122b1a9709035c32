"""Unitary gates acting on named registers.

Gates work on the per-register tensor view of a state (see
:meth:`PureState.tensor`) as index permutations, phase maps or small
per-register transforms; no full-space matrix is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import LayoutCollision, WidthMismatch
from .oracles import OracleFunction
from .statecore import PureState

_SQRT_HALF = 1.0 / np.sqrt(2.0)
_BLOCK = 5


def _split(state: PureState, register: str) -> tuple[np.ndarray, int]:
    layout = state.layout
    axis = layout.axis(register)
    shape = layout.shape
    pre = int(np.prod(shape[:axis], dtype=np.int64))
    post = int(np.prod(shape[axis + 1 :], dtype=np.int64))
    return state.amplitudes.reshape(pre, shape[axis], post), layout.width(register)


@lru_cache(maxsize=None)
def _walsh(width: int) -> np.ndarray:
    h = np.array([[1.0]])
    for _ in range(width):
        h = np.kron(h, np.array([[1.0, 1.0], [1.0, -1.0]]) * _SQRT_HALF)
    h.flags.writeable = False
    return h


def hadamard(state: PureState, register: str) -> PureState:
    """H on every qubit of ``register``: |a> -> N^-1/2 sum_x (-1)^(a.x) |x>."""
    t, width = _split(state, register)
    pre, dim, post = t.shape
    # real view: interleaved (re, im) pairs share the same real transform
    out = np.ascontiguousarray(t).view(np.float64)
    j = 0
    # H^(x)w factorizes over qubits; apply it in blocks of up to _BLOCK qubits
    while j < width:
        g = min(_BLOCK, width - j)
        v = out.reshape(pre << j, 1 << g, 2 * (dim >> (j + g)) * post)
        out = np.matmul(_walsh(g), v)
        j += g
    return PureState.wrap(state.layout, out.reshape(-1).view(np.complex128))


def oracle_apply(
    state: PureState,
    oracle: OracleFunction,
    input: str | Sequence[str],
    target: str,
) -> PureState:
    """|x>_in |y>_target -> |x>_in |y XOR f(x)>_target.

    ``input`` may list several registers; their values are concatenated in the
    order given (first register most significant).  Counts one invocation.
    """
    layout = state.layout
    inputs = [input] if isinstance(input, str) else list(input)
    if target in inputs:
        raise LayoutCollision(f"register {target!r} cannot be both input and target")
    in_axes = [layout.axis(name) for name in inputs]
    t_axis = layout.axis(target)
    in_width = sum(layout.width(name) for name in inputs)
    if in_width != oracle.in_bits:
        raise WidthMismatch(f"input width {in_width} != oracle in_bits {oracle.in_bits}")
    if layout.width(target) != oracle.out_bits:
        raise WidthMismatch(
            f"target width {layout.width(target)} != oracle out_bits {oracle.out_bits}"
        )
    order = in_axes + [t_axis] + [i for i in range(len(layout.shape)) if i not in in_axes + [t_axis]]
    n_in = 1 << in_width
    n_t = 1 << oracle.out_bits
    moved = state.tensor().transpose(order)
    moved_shape = moved.shape
    flat = moved.reshape(n_in, n_t, -1)
    ynew = np.arange(n_t)[None, :] ^ oracle.array[:, None]
    out = np.empty_like(flat)
    out[np.arange(n_in)[:, None], ynew, :] = flat
    out = out.reshape(moved_shape).transpose(np.argsort(order))
    oracle.record_invocation()
    return PureState.wrap(layout, np.ascontiguousarray(out).reshape(-1))


def dft(state: PureState, register: str) -> PureState:
    """|x> -> N^-1/2 sum_z exp(2 pi i x z / N) |z> on ``register``."""
    t, _ = _split(state, register)
    return PureState.wrap(state.layout, np.fft.ifft(t, axis=1, norm="ortho").reshape(-1))


def inverse_dft(state: PureState, register: str) -> PureState:
    t, _ = _split(state, register)
    return PureState.wrap(state.layout, np.fft.fft(t, axis=1, norm="ortho").reshape(-1))


def phase_mask(state: PureState, register: str, phases: Sequence[float]) -> PureState:
    """Multiply each term whose ``register`` value is k by exp(i * phases[k])."""
    t, width = _split(state, register)
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.shape[0] != 1 << width:
        raise WidthMismatch(f"need {1 << width} phases for register {register}, got {phases.shape[0]}")
    out = t * np.exp(1j * phases)[None, :, None]
    return PureState.wrap(state.layout, out.reshape(-1))


def inversion_about_mean(state: PureState, register: str) -> PureState:
    """Reflection 2|s><s| - I about the uniform superposition of ``register``."""
    t, _ = _split(state, register)
    out = 2.0 * t.mean(axis=1, keepdims=True) - t
    return PureState.wrap(state.layout, out.reshape(-1))


@dataclass(frozen=True)
class Gate:
    """A recorded gate application, replayable forwards or inverted.

    ``kind`` is one of ``hadamard``, ``oracle``, ``dft``, ``inverse_dft``,
    ``phase_mask`` or ``inversion_about_mean``.
    """

    kind: str
    register: str | tuple[str, ...]
    target: str | None = None
    oracle: OracleFunction | None = None
    phases: tuple[float, ...] | None = None

    def apply(self, state: PureState) -> PureState:
        k = self.kind
        if k == "hadamard":
            return hadamard(state, self.register)
        if k == "oracle":
            return oracle_apply(state, self.oracle, self.register, self.target)
        if k == "dft":
            return dft(state, self.register)
        if k == "inverse_dft":
            return inverse_dft(state, self.register)
        if k == "phase_mask":
            return phase_mask(state, self.register, self.phases)
        if k == "inversion_about_mean":
            return inversion_about_mean(state, self.register)
        raise ValueError(f"unknown gate kind {k!r}")

    __call__ = apply

    def inverse(self) -> "Gate":
        if self.kind == "dft":
            return Gate("inverse_dft", self.register)
        if self.kind == "inverse_dft":
            return Gate("dft", self.register)
        if self.kind == "phase_mask":
            return Gate("phase_mask", self.register, phases=tuple(-p for p in self.phases))
        # hadamard, XOR oracles and the reflection are involutions
        return self


def run_gates(state: PureState, gates: Sequence[Gate]) -> PureState:
    for gate in gates:
        state = gate.apply(state)
    return state


def run_inverse(state: PureState, gates: Sequence[Gate]) -> PureState:
    for gate in reversed(gates):
        state = gate.inverse().apply(state)
    return state
