"""Multi-register pure states, density matrices and basis-index arithmetic.

Global basis indices concatenate the registers in declaration order, each
register written most-significant bit first.  For a layout ``X:2, F:2`` the
label ``{X: 3, F: 1}`` therefore sits at index ``3 * 4 + 1 = 13``.  Under this
convention a C-order reshape of the amplitude vector to ``(2**w1, 2**w2, ...)``
gives one tensor axis per register, which is what the gate code relies on.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    InvalidAssignment,
    InvalidLayout,
    InvalidWeights,
    LayoutCollision,
    LayoutMismatch,
    UnknownRegister,
    VnmlabError,
)

DEFAULT_QUBIT_CAP = 22
INVARIANT_TOL = 1e-9
ANALYTIC_TOL = 1e-12


def qubit_cap() -> int:
    """Layout width cap, overridable through ``VNMLAB_QUBIT_CAP``."""
    raw = os.environ.get("VNMLAB_QUBIT_CAP")
    if raw is None or raw == "":
        return DEFAULT_QUBIT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidLayout(f"VNMLAB_QUBIT_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InvalidLayout(f"VNMLAB_QUBIT_CAP must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered roster of named registers and their qubit widths."""

    registers: tuple[tuple[str, int], ...]

    def __post_init__(self):
        regs = tuple((str(name), int(width)) for name, width in self.registers)
        object.__setattr__(self, "registers", regs)
        if not regs:
            raise InvalidLayout("a layout needs at least one register")
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            raise InvalidLayout(f"register names must be unique: {names}")
        for name, width in regs:
            if not name.isidentifier():
                raise InvalidLayout(f"register name {name!r} is not an identifier")
            if width < 1:
                raise InvalidLayout(f"register {name} has width {width} < 1")
        cap = qubit_cap()
        if self.total_width > cap:
            raise InvalidLayout(f"layout needs {self.total_width} qubits, cap is {cap}")

    @classmethod
    def of(cls, *pairs: tuple[str, int], **widths: int) -> "RegisterLayout":
        """``RegisterLayout.of(X=2, F=2)`` or ``RegisterLayout.of(("X", 2), ("F", 2))``."""
        return cls(tuple(pairs) + tuple(widths.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def total_width(self) -> int:
        return sum(width for _, width in self.registers)

    @property
    def dim(self) -> int:
        return 1 << self.total_width

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(1 << width for _, width in self.registers)

    def axis(self, name: str) -> int:
        for i, (reg, _) in enumerate(self.registers):
            if reg == name:
                return i
        raise UnknownRegister(f"no register named {name!r} in layout {self.names}")

    def width(self, name: str) -> int:
        return self.registers[self.axis(name)][1]

    def extend(self, name: str, width: int) -> "RegisterLayout":
        if name in self.names:
            raise LayoutCollision(f"register {name!r} already in layout {self.names}")
        return RegisterLayout(self.registers + ((name, width),))

    def sub(self, keep: Iterable[str]) -> "RegisterLayout":
        """Sub-layout of the kept registers, in declaration order."""
        keep = set(keep)
        for name in keep:
            self.axis(name)
        return RegisterLayout(tuple(r for r in self.registers if r[0] in keep))

    def index(self, assignment: Mapping[str, int]) -> int:
        """Global basis index of a full register assignment."""
        if set(assignment) != set(self.names):
            missing = set(self.names) - set(assignment)
            extra = set(assignment) - set(self.names)
            raise InvalidAssignment(f"assignment registers mismatch: missing {missing}, extra {extra}")
        idx = 0
        for name, width in self.registers:
            value = assignment[name]
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidAssignment(f"{name}={value!r} is not an integer")
            if not 0 <= value < (1 << width):
                raise InvalidAssignment(f"{name}={value} out of range for width {width}")
            idx = (idx << width) | int(value)
        return idx

    def assignment(self, index: int) -> dict[str, int]:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.dim:
            raise InvalidAssignment(f"index {index} out of range for dimension {self.dim}")
        out = {}
        for name, width in reversed(self.registers):
            out[name] = index & ((1 << width) - 1)
            index >>= width
        return {name: out[name] for name in self.names}


def _layout(layout) -> RegisterLayout:
    if isinstance(layout, RegisterLayout):
        return layout
    if isinstance(layout, Mapping):
        return RegisterLayout(tuple(layout.items()))
    return RegisterLayout(tuple(layout))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm amplitude vector over a register layout.

    The amplitude array is copied and frozen on construction.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        layout = _layout(self.layout)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != layout.dim:
            raise InvalidLayout(
                f"amplitude vector has length {amps.shape[0]}, layout needs {layout.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > INVARIANT_TOL:
            raise VnmlabError(f"state norm is {norm!r}, expected 1")
        amps.flags.writeable = False
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def wrap(cls, layout: RegisterLayout, amplitudes: np.ndarray) -> "PureState":
        """Adopt a freshly computed complex128 vector without copying it.

        The caller must not keep a writable reference to ``amplitudes``.
        """
        amps = amplitudes.reshape(-1)
        if amps.dtype != np.complex128 or amps.shape[0] != layout.dim:
            return cls(layout, amplitudes)
        norm2 = np.vdot(amps, amps).real
        if abs(norm2 - 1.0) > INVARIANT_TOL:
            raise VnmlabError(f"state norm is {np.sqrt(norm2)!r}, expected 1")
        amps.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "layout", layout)
        object.__setattr__(obj, "amplitudes", amps)
        return obj

    @classmethod
    def from_tensor(cls, layout: RegisterLayout, tensor: np.ndarray) -> "PureState":
        return cls(layout, np.asarray(tensor).reshape(-1))

    def tensor(self) -> np.ndarray:
        """Read-only view with one axis per register."""
        return self.amplitudes.reshape(self.layout.shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def canonical(self) -> np.ndarray:
        """Amplitudes rotated so the first nonzero entry is real positive."""
        amps = self.amplitudes
        nz = np.flatnonzero(np.abs(amps) > ANALYTIC_TOL)
        if nz.size == 0:
            return amps.copy()
        lead = amps[nz[0]]
        return amps * (abs(lead) / lead)

    def __repr__(self) -> str:
        terms = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) > ANALYTIC_TOL):
            label = ",".join(f"{k}={v}" for k, v in self.layout.assignment(int(idx)).items())
            terms.append(f"{self.amplitudes[idx]:.6g}|{label}>")
        return f"PureState({' + '.join(terms)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    layout: RegisterLayout
    entries: np.ndarray

    def __post_init__(self):
        layout = _layout(self.layout)
        rho = np.array(self.entries, dtype=np.complex128)
        if rho.shape != (layout.dim, layout.dim):
            raise InvalidLayout(f"density matrix shape {rho.shape}, layout needs {layout.dim}^2")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > INVARIANT_TOL:
            raise VnmlabError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > INVARIANT_TOL:
            raise VnmlabError(f"density matrix trace is {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(rho)) < -INVARIANT_TOL:
            raise VnmlabError("density matrix has a negative eigenvalue")
        rho.flags.writeable = False
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "entries", rho)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


def prepare(layout, assignment: Mapping[str, int]) -> PureState:
    """Computational basis state carrying ``assignment``."""
    layout = _layout(layout)
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[layout.index(assignment)] = 1.0
    return PureState(layout, amps)


def amplitude(state: PureState, assignment: Mapping[str, int]) -> complex:
    return complex(state.amplitudes[state.layout.index(assignment)])


def state_from_terms(layout, terms: Mapping[tuple[int, ...], complex] | Sequence) -> PureState:
    """Build a state from ``{(v1, v2, ...): coeff}`` with values in declaration order.

    Coefficients are normalized, so callers may write unnormalized sums.
    """
    layout = _layout(layout)
    items = terms.items() if isinstance(terms, Mapping) else terms
    amps = np.zeros(layout.dim, dtype=np.complex128)
    for values, coeff in items:
        amps[layout.index(dict(zip(layout.names, values)))] += coeff
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise VnmlabError("all coefficients are zero")
    return PureState(layout, amps / norm)


def random_state(layout, rng: np.random.Generator) -> PureState:
    """Haar-like random state (normalized complex Gaussian vector)."""
    layout = _layout(layout)
    v = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return PureState(layout, v / np.linalg.norm(v))


def _check_same_layout(a, b):
    if a.layout != b.layout:
        raise LayoutMismatch(f"layouts differ: {a.layout.registers} vs {b.layout.registers}")


def inner(a: PureState, b: PureState) -> complex:
    _check_same_layout(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_up_to_phase(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, clipped into [0, 1]."""
    f = abs(inner(a, b)) ** 2
    return float(min(max(f, 0.0), 1.0))


def mix_to_density(states: Sequence[PureState], weights: Sequence[float]) -> DensityMatrix:
    if len(states) == 0 or len(states) != len(weights):
        raise InvalidWeights("need one weight per state and at least one state")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > INVARIANT_TOL:
        raise InvalidWeights(f"weights must be nonnegative and sum to 1 (sum={w.sum()!r})")
    layout = states[0].layout
    for s in states[1:]:
        _check_same_layout(states[0], s)
    psi = np.stack([s.amplitudes for s in states])
    rho = (psi.T * w) @ psi.conj()
    return DensityMatrix(layout, rho)


def _kept(layout: RegisterLayout, keep: Sequence[str]) -> tuple[list[int], list[int]]:
    if not keep:
        raise UnknownRegister("keep must name at least one register")
    axes = sorted({layout.axis(name) for name in keep})
    rest = [i for i in range(len(layout.registers)) if i not in axes]
    return axes, rest


def partial_trace(dm: DensityMatrix, keep: Sequence[str]) -> DensityMatrix:
    """Reduced density matrix on ``keep`` (output registers in declaration order)."""
    layout = dm.layout
    axes, rest = _kept(layout, keep)
    k = len(layout.registers)
    t = dm.entries.reshape(layout.shape + layout.shape)
    perm = axes + rest + [k + i for i in axes] + [k + i for i in rest]
    sub = layout.sub(layout.names[i] for i in axes)
    dk = sub.dim
    dt = layout.dim // dk
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return DensityMatrix(sub, np.einsum("ijkj->ik", t))


def reduced_density(state: PureState, keep: Sequence[str]) -> DensityMatrix:
    """Partial trace of |psi><psi| without forming the full density matrix."""
    layout = state.layout
    axes, rest = _kept(layout, keep)
    sub = layout.sub(layout.names[i] for i in axes)
    m = state.tensor().transpose(axes + rest).reshape(sub.dim, -1)
    return DensityMatrix(sub, m @ m.conj().T)


def to_density(state: PureState) -> DensityMatrix:
    return DensityMatrix(state.layout, np.outer(state.amplitudes, state.amplitudes.conj()))
