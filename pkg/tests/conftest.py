"""Shared helpers: independent dense-matrix oracles and random generators.

The oracles here rebuild gates and circuits as explicit 2^n x 2^n matrices,
column by column over basis states.  They share no code with the simulator's
in-place index arithmetic, so agreement between the two is meaningful.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qexpect import Circuit, Gate, PauliSum, PauliTerm
from qexpect.simulator import cnot, h, ry, rz, s, sdg, x

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO_ROOT / "configs"

_SINGLE = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
}


def single_qubit_matrix(gate: Gate) -> np.ndarray:
    if gate.kind in _SINGLE:
        return _SINGLE[gate.kind]
    t = gate.angle
    if gate.kind == "RY":
        c, sn = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -sn], [sn, c]], dtype=complex)
    if gate.kind == "RZ":
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    raise ValueError(gate.kind)


def dense_gate_matrix(gate: Gate, n_qubits: int) -> np.ndarray:
    """Full 2^n unitary of one gate, built basis state by basis state."""
    dim = 1 << n_qubits
    u = np.zeros((dim, dim), dtype=complex)
    for src in range(dim):
        if any(not (src >> c) & 1 for c in gate.controls):
            u[src, src] = 1.0
            continue
        if gate.kind == "PAULI":
            dst, phase = src, complex(gate.sign)
            for q, ax in gate.factors:
                bit = (dst >> q) & 1
                if ax == "X":
                    dst ^= 1 << q
                elif ax == "Y":
                    phase *= 1j if bit == 0 else -1j
                    dst ^= 1 << q
                else:
                    phase *= -1.0 if bit else 1.0
            u[dst, src] = phase
        else:
            t = gate.targets[0]
            m = single_qubit_matrix(gate)
            bit = (src >> t) & 1
            u[src & ~(1 << t), src] += m[0, bit]
            u[src | (1 << t), src] += m[1, bit]
    return u


def dense_circuit_matrix(circuit: Circuit) -> np.ndarray:
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for gate in circuit.ops:
        u = dense_gate_matrix(gate, circuit.n_qubits) @ u
    return u


def random_real_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    vec = rng.normal(size=1 << n_qubits)
    return vec / np.linalg.norm(vec)


def random_complex_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    vec = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return vec / np.linalg.norm(vec)


def random_gate(rng: np.random.Generator, n_qubits: int) -> Gate:
    axes = "XYZ"
    kind = rng.integers(8)
    target = int(rng.integers(n_qubits))
    others = [q for q in range(n_qubits) if q != target]
    rng.shuffle(others)
    controls = tuple(others[: rng.integers(0, min(2, len(others)) + 1)])
    if kind == 0:
        return h(target, controls)
    if kind == 1:
        return x(target, controls)
    if kind == 2:
        return ry(target, float(rng.uniform(-np.pi, np.pi)), controls)
    if kind == 3:
        return rz(target, float(rng.uniform(-np.pi, np.pi)), controls)
    if kind == 4:
        return s(target, controls)
    if kind == 5:
        return sdg(target, controls)
    if kind == 6 and n_qubits > 1:
        return cnot(controls[0] if controls else (target + 1) % n_qubits, target)
    free = [q for q in range(n_qubits) if q not in controls]
    factors = tuple(
        (q, axes[int(rng.integers(3))]) for q in free if rng.random() < 0.7
    )
    if not factors:
        factors = ((target, "Z"),)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return Gate("PAULI", (), controls, factors=factors, sign=sign)


def random_circuit(rng: np.random.Generator, n_qubits: int, length: int) -> Circuit:
    circuit = Circuit(n_qubits)
    for _ in range(length):
        circuit.add(random_gate(rng, n_qubits))
    return circuit


def random_pauli_sum(
    rng: np.random.Generator,
    n_qubits: int,
    max_terms: int,
    include_identity: bool = False,
    min_coeff: float = 0.05,
) -> PauliSum:
    axes = "XYZ"
    terms: list[PauliTerm] = []
    seen: set[tuple[tuple[int, str], ...]] = set()
    for _ in range(max_terms):
        factors = tuple(
            (q, axes[int(rng.integers(3))])
            for q in range(n_qubits)
            if rng.random() < 0.6
        )
        if factors in seen or (not factors and not include_identity):
            continue
        seen.add(factors)
        coeff = float(rng.uniform(-1.0, 1.0))
        if abs(coeff) < min_coeff:
            coeff = min_coeff if coeff >= 0 else -min_coeff
        terms.append(PauliTerm(coeff, factors))
    if not terms:
        terms.append(PauliTerm(0.5, ((int(rng.integers(n_qubits)), "Z"),)))
    return PauliSum.from_terms(terms, n_qubits=n_qubits)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)
