"""Circuits that prepare real-amplitude states from |0...0>.

Two builders cover the package's state sources:

- ``prepare_real_amplitudes``: any signed real vector on a dense register,
  via a binary tree of multiplexed R_Y rotations (branch probabilities at
  internal nodes, exact signed pairs at the leaves);
- ``prepare_one_hot``: amplitudes over one-hot states |e_i>, via an X on
  qubit 0 followed by a controlled-R_Y / CNOT ladder.

Inputs are renormalized; a zero or non-finite norm is an error.
"""

from __future__ import annotations

import math

import numpy as np

from .simulator import Circuit, cnot, ry, x


def _normalized(values) -> np.ndarray:
    vec = np.asarray(values, dtype=float).reshape(-1)
    nrm = np.linalg.norm(vec)
    if not np.isfinite(nrm) or nrm == 0:
        raise ValueError("amplitudes have zero or non-finite norm")
    return vec / nrm


def _emit_rotation(circuit: Circuit, target: int, angle: float, pattern) -> None:
    """R_Y(angle) on target, conditioned on (qubit, bit) assignments."""
    zeros = [q for q, bit in pattern if bit == 0]
    controls = tuple(q for q, _ in pattern)
    for q in zeros:
        circuit.add(x(q))
    circuit.add(ry(target, angle, controls))
    for q in zeros:
        circuit.add(x(q))


def prepare_real_amplitudes(values) -> Circuit:
    """Circuit taking |0...0> to the given real vector (length a power of two)."""
    vec = _normalized(values)
    n = int(vec.size).bit_length() - 1
    if vec.size != (1 << n) or vec.size < 2:
        raise ValueError(f"length {vec.size} is not a power of two >= 2")
    circuit = Circuit(n)

    def walk(sub: np.ndarray, qubit: int, pattern: tuple) -> None:
        half = sub.size // 2
        lo, hi = sub[:half], sub[half:]
        if qubit == 0:
            if abs(lo[0]) + abs(hi[0]) < 1e-15:
                return
            angle = 2.0 * math.atan2(hi[0], lo[0])
            if angle != 0.0:
                _emit_rotation(circuit, qubit, angle, pattern)
            return
        r0, r1 = np.linalg.norm(lo), np.linalg.norm(hi)
        if r0 + r1 < 1e-15:
            return
        angle = 2.0 * math.atan2(r1, r0)
        if angle != 0.0:
            _emit_rotation(circuit, qubit, angle, pattern)
        walk(lo, qubit - 1, pattern + ((qubit, 0),))
        walk(hi, qubit - 1, pattern + ((qubit, 1),))

    walk(vec, n - 1, ())
    return circuit


def prepare_one_hot(values) -> Circuit:
    """Circuit taking |0...0> to sum_i a_i |e_i> on k = len(values) qubits.

    For k = 1 a negative amplitude is prepared up to global phase.
    """
    a = _normalized(values)
    k = a.size
    circuit = Circuit(k)
    circuit.add(x(0))
    remaining = 1.0  # squared mass not yet pinned to a mode
    for i in range(k - 1):
        if i < k - 2:
            carrier = math.sqrt(max(remaining, 0.0))
            ratio = min(1.0, max(-1.0, a[i] / carrier)) if carrier > 0 else 1.0
            angle = 2.0 * math.acos(ratio)
            remaining = max(remaining - a[i] * a[i], 0.0)
        else:
            angle = 2.0 * math.atan2(a[i + 1], a[i])
        circuit.add(ry(i + 1, angle, (i,)))
        circuit.add(cnot(i + 1, i))
    return circuit
