"""Block-encoding of a Pauli sum as a linear combination of unitaries.

Given O = sum_i beta_i U_i (beta_i > 0, U_i signed Pauli strings) the block
W = V_P^dag V_S V_P acts on ancilla x system as

    W |0...0>|psi> = (1/Lambda) |0...0> O|psi> + (orthogonal rest),

so post-selecting the ancillas on 0 applies O with success probability
||O psi||^2 / Lambda^2.  V_P loads the amplitudes sqrt(beta_i / Lambda)
onto ancilla label i with one rotation per term: walking the binary labels
i-1 -> i, a controlled R_Y targets the single bit that flips 0 -> 1
(controls: the ones of i-1) and controlled-X gates clear the bits that
flip 1 -> 0 (controls: the ones of i).  V_S applies U_i controlled on the
ancilla pattern i, with X conjugation supplying the 0-controls.

Ancillas occupy the high qubits of the joint register, so the block with
ancillas at zero is the leading 2^n_system amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import LcuForm, PauliTerm
from .simulator import (
    Circuit,
    StateVector,
    _bits,
    pauli_gate,
    ry,
    run_circuit,
    x,
)

MAX_TERMS = 1 << 20


class PostSelectionError(RuntimeError):
    """Raised when the ancilla-zero block carries (numerically) no weight."""


def ancilla_count(k: int) -> int:
    return max(0, math.ceil(math.log2(k))) if k > 1 else 0


def synthesize_vp(betas) -> Circuit:
    """Prepare sum_i sqrt(beta_i / Lambda)|i> on ceil(log2 k) qubits."""
    b = np.asarray(betas, dtype=float).reshape(-1)
    if b.size == 0:
        raise ValueError("need at least one weight")
    if b.size > MAX_TERMS:
        raise ValueError(f"{b.size} terms exceeds cap of {MAX_TERMS}")
    if np.any(b <= 0) or not np.all(np.isfinite(b)):
        raise ValueError("weights must be positive and finite")
    amps = np.sqrt(b / b.sum())
    k = b.size
    circuit = Circuit(ancilla_count(k))
    remaining = 1.0
    for i in range(k - 1):
        # move the carrier from label i to label i+1, leaving amps[i] behind
        ratio = amps[i] / math.sqrt(remaining) if remaining > 0 else 1.0
        theta = math.acos(min(1.0, max(-1.0, ratio)))
        rising = _bits((i + 1) & ~i)
        assert len(rising) == 1  # binary increment flips exactly one bit 0 -> 1
        circuit.add(ry(rising[0], 2.0 * theta, tuple(_bits(i))))
        for t in _bits(i & ~(i + 1)):
            circuit.add(x(t, tuple(_bits(i + 1))))
        remaining = max(remaining - amps[i] ** 2, 0.0)
    return circuit


@dataclass(frozen=True)
class LcuBlock:
    """The synthesized block: prepare circuit plus the select table."""

    form: LcuForm
    n_system: int
    n_ancilla: int
    vp: Circuit
    select: tuple[tuple[int, PauliTerm], ...]  # (ancilla pattern, signed unitary)


def build_block(form: LcuForm) -> LcuBlock:
    k = len(form.betas)
    if k > MAX_TERMS:
        raise ValueError(f"{k} terms exceeds cap of {MAX_TERMS}")
    return LcuBlock(
        form=form,
        n_system=form.n_qubits,
        n_ancilla=ancilla_count(k),
        vp=synthesize_vp(form.betas),
        select=tuple(enumerate(form.unitaries)),
    )


def w_circuit(block: LcuBlock) -> Circuit:
    """V_P^dag V_S V_P on the joint register (system low, ancillas high)."""
    ns, na = block.n_system, block.n_ancilla
    joint = Circuit(ns + na)
    vp = block.vp.shifted(ns, ns + na)
    joint.extend(vp)
    anc = tuple(range(ns, ns + na))
    for pattern, unitary in block.select:
        zeros = [anc[b] for b in range(na) if not (pattern >> b) & 1]
        for q in zeros:
            joint.add(x(q))
        joint.add(
            pauli_gate(unitary.factor_map(), sign=unitary.coefficient, controls=anc)
        )
        for q in zeros:
            joint.add(x(q))
    joint.extend(vp.inverse())
    return joint


def apply_w(block: LcuBlock, psi: StateVector) -> StateVector:
    """Run the block on |0...0>_ancilla (x) psi and return the joint state."""
    ns, na = block.n_system, block.n_ancilla
    if psi.n_qubits != ns:
        raise ValueError(f"state on {psi.n_qubits} qubits, block expects {ns}")
    amps = np.zeros(1 << (ns + na), dtype=complex)
    amps[: 1 << ns] = psi.amplitudes
    return run_circuit(StateVector(ns + na, amps), w_circuit(block))


def post_select(joint: StateVector, ancilla_count: int) -> tuple[float, StateVector]:
    """Project the top ``ancilla_count`` qubits onto |0...0>.

    Returns (success probability, normalized system state).
    """
    if not 0 <= ancilla_count < joint.n_qubits:
        raise ValueError(
            f"cannot take {ancilla_count} ancillas from {joint.n_qubits} qubits"
        )
    ns = joint.n_qubits - ancilla_count
    blockamps = joint.amplitudes[: 1 << ns]
    prob = float(np.linalg.norm(blockamps) ** 2)
    if prob < 1e-14:
        raise PostSelectionError(
            f"ancilla-zero block weight {prob:.3e} is numerically degenerate"
        )
    return prob, StateVector(ns, blockamps / math.sqrt(prob))
