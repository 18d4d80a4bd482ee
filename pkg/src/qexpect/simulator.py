"""Dense statevector simulator.

Conventions used throughout the package:

- qubit 0 is the least-significant bit of the amplitude index, so basis
  state ``|q_{n-1} ... q_1 q_0>`` lives at index ``sum(q_i << i)``;
- amplitudes are double-precision complex; unitary evolution keeps the
  norm within 1e-10 (asserted after every gate);
- ``R_Y(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>``;
- controlled gates act directly on the statevector, they are never
  decomposed into one- and two-qubit primitives;
- bitstrings (sampling keys, circuit dumps) are written most-significant
  qubit first, i.e. ``format(index, "0{n}b")``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 24

_NORM_TOL = 1e-10


class ResourceLimitError(RuntimeError):
    """Raised when a register or matrix would exceed the configured cap."""


_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
}

_AXES = ("X", "Y", "Z")


@dataclass
class StateVector:
    """Amplitudes of an n-qubit register. Owned by one execution context."""

    n_qubits: int
    amplitudes: np.ndarray

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def new_state(n_qubits: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Return |0...0> on ``n_qubits`` qubits.

    Raises ResourceLimitError above ``max_qubits`` (default 24) because the
    dense vector doubles per qubit.
    """
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    if n_qubits > max_qubits:
        raise ResourceLimitError(
            f"{n_qubits} qubits exceeds the cap of {max_qubits}"
        )
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def state_from_amplitudes(values, normalize: bool = False) -> StateVector:
    """Wrap an explicit amplitude vector (length must be a power of two)."""
    amps = np.asarray(values, dtype=complex).reshape(-1)
    n = int(amps.size).bit_length() - 1
    if amps.size != (1 << n) or amps.size < 2:
        raise ValueError(f"length {amps.size} is not a power of two >= 2")
    nrm = np.linalg.norm(amps)
    if not np.isfinite(nrm) or nrm == 0:
        raise ValueError("amplitudes have zero or non-finite norm")
    if normalize:
        amps = amps / nrm
    elif abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"amplitudes are not normalized (norm {nrm!r})")
    return StateVector(n, amps)


@dataclass(frozen=True)
class Gate:
    """One primitive: a fixed/rotation gate or a controlled Pauli string.

    ``kind`` is one of X, Y, Z, H, S, SDG, RY, RZ, PAULI.  For PAULI the
    ``factors`` tuple maps qubits to axes and ``sign`` is +-1; the other
    kinds act on a single target.  All controls are on |1>.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float | None = None
    factors: tuple[tuple[int, str], ...] = ()
    sign: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _FIXED_MATRICES and self.kind not in ("RY", "RZ", "PAULI"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in ("RY", "RZ"):
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} needs a finite angle, got {self.angle!r}")
        if self.kind == "PAULI":
            if self.sign not in (1.0, -1.0):
                raise ValueError(f"Pauli string sign must be +-1, got {self.sign!r}")
            for q, ax in self.factors:
                if ax not in _AXES or q < 0:
                    raise ValueError(f"bad Pauli factor {ax!r} on qubit {q}")
        elif len(self.targets) != 1:
            raise ValueError(f"{self.kind} acts on exactly one target")
        seen = set(self.targets)
        if len(seen) != len(self.targets):
            raise ValueError("duplicate target qubit")
        if seen & set(self.controls) or len(set(self.controls)) != len(self.controls):
            raise ValueError("targets and controls must be disjoint")

    def matrix(self) -> np.ndarray:
        """2x2 matrix of a single-target kind."""
        if self.kind in _FIXED_MATRICES:
            return _FIXED_MATRICES[self.kind]
        t = self.angle
        if self.kind == "RY":
            c, s = math.cos(t / 2), math.sin(t / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "RZ":
            return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]])
        raise ValueError(f"{self.kind} has no 2x2 matrix")

    def inverse(self) -> Gate:
        if self.kind in ("RY", "RZ"):
            return Gate(self.kind, self.targets, self.controls, -self.angle)
        if self.kind == "S":
            return Gate("SDG", self.targets, self.controls)
        if self.kind == "SDG":
            return Gate("S", self.targets, self.controls)
        return self  # X, Y, Z, H and Pauli strings square to identity

    def shifted(self, offset: int) -> Gate:
        return Gate(
            self.kind,
            tuple(q + offset for q in self.targets),
            tuple(q + offset for q in self.controls),
            self.angle,
            tuple((q + offset, ax) for q, ax in self.factors),
            self.sign,
        )

    def remapped(self, mapping: dict[int, int]) -> Gate:
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.targets),
            tuple(mapping[q] for q in self.controls),
            self.angle,
            tuple(sorted((mapping[q], ax) for q, ax in self.factors)),
            self.sign,
        )

    def describe(self) -> str:
        if self.kind == "PAULI":
            body = " ".join(f"{ax}{q}" for q, ax in self.factors) or "I"
            name = f"PAULI({body}, {self.sign:+.0f})"
        elif self.kind in ("RY", "RZ"):
            name = f"{self.kind}({self.angle:.6f})"
        else:
            name = self.kind
        ctrl = " ".join(str(c) for c in self.controls)
        return f"{name} {' '.join(str(t) for t in self.targets)} | {ctrl}".rstrip()


def x(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("X", (target,), tuple(controls))


def y(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("Y", (target,), tuple(controls))


def z(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("Z", (target,), tuple(controls))


def h(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("H", (target,), tuple(controls))


def s(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("S", (target,), tuple(controls))


def sdg(target: int, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("SDG", (target,), tuple(controls))


def ry(target: int, angle: float, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("RY", (target,), tuple(controls), float(angle))


def rz(target: int, angle: float, controls: tuple[int, ...] = ()) -> Gate:
    return Gate("RZ", (target,), tuple(controls), float(angle))


def cnot(control: int, target: int) -> Gate:
    return x(target, (control,))


def pauli_gate(
    factors: dict[int, str],
    sign: float = 1.0,
    controls: tuple[int, ...] = (),
) -> Gate:
    """A (controlled) Pauli-string gate: sign * prod_i P_i."""
    items = tuple(sorted(factors.items()))
    targets = tuple(q for q, _ in items)
    return Gate("PAULI", targets, tuple(controls), None, items, float(sign))


@dataclass
class Circuit:
    """An ordered gate list on a fixed register width (a value, not hardware)."""

    n_qubits: int
    ops: list[Gate] = field(default_factory=list)

    def add(self, gate: Gate) -> Circuit:
        for q in (*gate.targets, *gate.controls):
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} outside register of {self.n_qubits}")
        self.ops.append(gate)
        return self

    def extend(self, other: Circuit) -> Circuit:
        for g in other.ops:
            self.add(g)
        return self

    def inverse(self) -> Circuit:
        inv = Circuit(self.n_qubits)
        for g in reversed(self.ops):
            inv.add(g.inverse())
        return inv

    def shifted(self, offset: int, n_total: int) -> Circuit:
        """Embed into a wider register with all qubit indices moved up."""
        out = Circuit(n_total)
        for g in self.ops:
            out.add(g.shifted(offset))
        return out

    def remapped(self, mapping: dict[int, int], n_total: int) -> Circuit:
        """Embed into a register where qubit q moves to mapping[q]."""
        out = Circuit(n_total)
        for g in self.ops:
            out.add(g.remapped(mapping))
        return out

    def to_text(self) -> str:
        """One gate per line: ``GATE(params) targets | controls``."""
        return "\n".join(g.describe() for g in self.ops)


def _bits(mask: int) -> list[int]:
    out = []
    b = 0
    while mask:
        if mask & 1:
            out.append(b)
        mask >>= 1
        b += 1
    return out


def pauli_action(
    amps: np.ndarray,
    n_qubits: int,
    factors: tuple[tuple[int, str], ...],
    sign: float = 1.0,
    controls: tuple[int, ...] = (),
) -> np.ndarray:
    """Apply sign * (Pauli string), optionally controlled, to raw amplitudes."""
    flip = 0
    ymask = 0
    phase_mask = 0  # qubits whose |1> picks up -1 (Y and Z)
    n_y = 0
    for q, ax in factors:
        if ax == "X":
            flip |= 1 << q
        elif ax == "Y":
            flip |= 1 << q
            ymask |= 1 << q
            phase_mask |= 1 << q
            n_y += 1
        else:
            phase_mask |= 1 << q
    cmask = 0
    for c in controls:
        cmask |= 1 << c

    idx = np.arange(amps.size, dtype=np.int64)
    src = idx if cmask == 0 else idx[(idx & cmask) == cmask]
    parity = np.zeros(src.size, dtype=np.int64)
    for b in _bits(phase_mask):
        parity ^= (src >> b) & 1
    phase = sign * (1j ** (n_y % 4)) * (1 - 2 * parity)
    out = amps.copy()
    out[src ^ flip] = phase * amps[src]
    return out


def apply(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place and return the state."""
    n = state.n_qubits
    for q in (*gate.targets, *gate.controls):
        if not 0 <= q < n:
            raise ValueError(f"gate touches qubit {q} outside register of {n}")

    if gate.kind == "PAULI":
        state.amplitudes = pauli_action(
            state.amplitudes, n, gate.factors, gate.sign, gate.controls
        )
    else:
        target = gate.targets[0]
        mat = gate.matrix()
        view = state.amplitudes.reshape([2] * n)
        sel: list = [slice(None)] * n
        for c in gate.controls:
            sel[n - 1 - c] = 1
        sub = view[tuple(sel)]
        axis = n - 1 - target
        axis -= sum(1 for c in gate.controls if n - 1 - c < axis)
        moved = np.moveaxis(sub, axis, -1)
        view[tuple(sel)] = np.moveaxis(moved @ mat.T, -1, axis)

    drift = abs(state.norm() - 1.0)
    if drift > _NORM_TOL:
        raise AssertionError(f"norm drifted by {drift:.3e} after {gate.describe()}")
    return state


def run_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(
            f"circuit register ({circuit.n_qubits}) != state register ({state.n_qubits})"
        )
    for gate in circuit.ops:
        apply(state, gate)
    return state


def run_on_zero(circuit: Circuit) -> StateVector:
    """Convenience: run a circuit on a fresh |0...0>."""
    return run_circuit(new_state(circuit.n_qubits), circuit)


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def marginal_probability(state: StateVector, qubits, outcome) -> float:
    """P(qubits == outcome), marginalizing everything else."""
    qubits = list(qubits)
    outcome = list(outcome)
    if len(qubits) != len(outcome):
        raise ValueError(f"{len(qubits)} qubits vs {len(outcome)} outcome bits")
    if len(set(qubits)) != len(qubits):
        raise ValueError("duplicate qubit in marginal")
    mask = 0
    want = 0
    for q, bit in zip(qubits, outcome):
        if not 0 <= q < state.n_qubits:
            raise ValueError(f"qubit {q} outside register of {state.n_qubits}")
        if bit not in (0, 1):
            raise ValueError(f"outcome bits must be 0/1, got {bit!r}")
        mask |= 1 << q
        want |= bit << q
    idx = np.arange(state.amplitudes.size, dtype=np.int64)
    probs = np.abs(state.amplitudes) ** 2
    return float(probs[(idx & mask) == want].sum())


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_counts(state: StateVector, shots: int, seed=None) -> np.ndarray:
    """Multinomial counts per basis index (length 2**n array)."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    return _as_rng(seed).multinomial(shots, probs)


def sample(state: StateVector, shots: int, seed=None) -> dict[str, int]:
    """Measure all qubits ``shots`` times; keys are bitstrings, MSB first."""
    counts = sample_counts(state, shots, seed)
    n = state.n_qubits
    return {
        format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c > 0
    }


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"register mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def states_equal(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """Equality up to global phase (|<a|b>| = 1 within tol)."""
    return abs(abs(inner_product(a, b)) - 1.0) <= tol
