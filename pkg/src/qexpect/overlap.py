"""Expectation-value estimation protocols.

Three measurement protocols, each usable exactly (``shots=0`` reads the
final probability distribution) or with multinomial sampling:

- Hadamard test: ancilla interference gives Re or Im of <psi|U|psi> for a
  single signed Pauli string; ``estimate_htest`` sums the per-term tests
  with the identity coefficient added analytically.
- SWAP test and its reduced form (controlled-SWAPs collapse to a CNOT + H
  per pair followed by Toffolis onto the ancilla), plus the destructive
  variant that drops the ancilla and reads the parity of (1,1) pairs.
- ``estimate_lcu``: a block-encoded operator is applied to one register
  copy and its overlap with a fresh copy is measured, conditioned on the
  block ancillas reading zero.  The combination

      magnitude = Lambda * sqrt(P0 * (1 - 2 p))

  recovers |<psi|O'|psi>| (P0: ancilla-zero probability, p: conditional
  readout probability); the sign is not observable here, so a policy
  supplies it: ``oracle`` (statevector sign), ``assume-positive``, or
  ``htest-sign`` (one Hadamard-test estimate just for the sign).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .lcu import build_block, w_circuit
from .pauli import PauliSum, PauliTerm, expectation_exact, lcu_normal_form
from .simulator import (
    Circuit,
    _as_rng,
    h,
    marginal_probability,
    pauli_gate,
    run_on_zero,
    sample_counts,
    sdg,
    x,
)

log = logging.getLogger(__name__)

SIGN_POLICIES = ("oracle", "assume-positive", "htest-sign")


@dataclass(frozen=True)
class OverlapEstimate:
    """One protocol outcome; ``value`` is range-clamped, ``raw_value`` is not."""

    value: float
    raw_value: float
    variance_bound: float
    shots: int
    protocol: str
    clamped: bool = False


def _ancilla_bit_counts(counts: np.ndarray, bit: int) -> tuple[int, int]:
    idx = np.arange(counts.size, dtype=np.int64)
    ones = int(counts[(idx >> bit) & 1 == 1].sum())
    return int(counts.sum()) - ones, ones


def hadamard_test(
    u: PauliTerm,
    prep_psi: Circuit,
    shots: int = 0,
    seed=None,
    part: str = "re",
) -> OverlapEstimate:
    """Estimate Re (or Im) of <psi|U|psi> for a signed Pauli string U."""
    if abs(abs(u.coefficient) - 1.0) > 1e-12:
        raise ValueError(f"U must carry a +-1 sign, got {u.coefficient!r}")
    if part not in ("re", "im"):
        raise ValueError(f"part must be 're' or 'im', got {part!r}")
    ns = prep_psi.n_qubits
    anc = ns
    sign = 1.0 if u.coefficient > 0 else -1.0
    circuit = Circuit(ns + 1)
    circuit.extend(prep_psi.shifted(0, ns + 1))
    circuit.add(h(anc))
    circuit.add(pauli_gate(u.factor_map(), sign=sign, controls=(anc,)))
    if part == "im":
        circuit.add(sdg(anc))
    circuit.add(h(anc))
    state = run_on_zero(circuit)

    if shots == 0:
        p0 = marginal_probability(state, [anc], [0])
        value = 2.0 * p0 - 1.0
        return OverlapEstimate(value, value, 0.0, 0, f"htest-{part}")
    counts = sample_counts(state, shots, seed)
    c0, c1 = _ancilla_bit_counts(counts, anc)
    value = (c0 - c1) / shots
    bound = (1.0 - min(value * value, 1.0)) / shots
    return OverlapEstimate(value, value, bound, shots, f"htest-{part}")


def combine_term_estimates(coefficients, values, identity_offset: float) -> float:
    """identity_offset + sum_i c_i * v_i (the estimator's recombination step)."""
    coefficients = list(coefficients)
    values = list(values)
    if len(coefficients) != len(values):
        raise ValueError(
            f"{len(coefficients)} coefficients vs {len(values)} estimates"
        )
    return float(identity_offset + sum(c * v for c, v in zip(coefficients, values)))


def estimate_htest(
    op: PauliSum,
    prep_psi: Circuit,
    shots_per_term: int = 0,
    seed=None,
) -> float:
    """<psi|O|psi> via one Hadamard test per non-identity term."""
    if op.n_qubits != prep_psi.n_qubits:
        raise ValueError(
            f"operator on {op.n_qubits} qubits vs preparation on {prep_psi.n_qubits}"
        )
    rng = _as_rng(seed) if shots_per_term else None
    offset = 0.0
    coeffs: list[float] = []
    values: list[float] = []
    for t in op.terms:
        if t.is_identity:
            offset += t.coefficient
            continue
        est = hadamard_test(
            PauliTerm(1.0, t.factors), prep_psi, shots_per_term, rng
        )
        coeffs.append(t.coefficient)
        values.append(est.value)
    return combine_term_estimates(coeffs, values, offset)


def _overlap_registers(prep_a: Circuit, prep_b: Circuit, extra: int) -> tuple[Circuit, int]:
    if prep_a.n_qubits != prep_b.n_qubits:
        raise ValueError(
            f"register mismatch: {prep_a.n_qubits} vs {prep_b.n_qubits} qubits"
        )
    ns = prep_a.n_qubits
    n = 2 * ns + extra
    circuit = Circuit(n)
    circuit.extend(prep_a.shifted(0, n))
    circuit.extend(prep_b.shifted(ns, n))
    return circuit, ns


def swap_test(
    prep_a: Circuit,
    prep_b: Circuit,
    shots: int = 0,
    seed=None,
    reduced: bool = False,
) -> OverlapEstimate:
    """Estimate |<a|b>|^2 = 2 p(ancilla=0) - 1."""
    circuit, ns = _overlap_registers(prep_a, prep_b, extra=1)
    anc = 2 * ns
    if reduced:
        for i in range(ns):
            circuit.add(x(ns + i, (i,)))
            circuit.add(h(i))
        for i in range(ns):
            circuit.add(x(anc, (i, ns + i)))
    else:
        circuit.add(h(anc))
        for i in range(ns):
            circuit.add(x(ns + i, (anc, i)))
            circuit.add(x(i, (anc, ns + i)))
            circuit.add(x(ns + i, (anc, i)))
        circuit.add(h(anc))
    state = run_on_zero(circuit)

    protocol = "swap"
    if shots == 0:
        raw = 2.0 * marginal_probability(state, [anc], [0]) - 1.0
        value = min(max(raw, 0.0), 1.0)
        return OverlapEstimate(value, raw, 0.0, 0, protocol, clamped=value != raw)
    counts = sample_counts(state, shots, seed)
    c0, c1 = _ancilla_bit_counts(counts, anc)
    raw = (c0 - c1) / shots
    value = min(max(raw, 0.0), 1.0)
    return OverlapEstimate(value, raw, 1.0 / shots, shots, protocol, clamped=value != raw)


def _pair_parity(indices: np.ndarray, ns: int) -> np.ndarray:
    """Parity of the number of qubit pairs (a_i, b_i) that both read 1."""
    pairs = indices & (indices >> ns) & ((1 << ns) - 1)
    parity = np.zeros(indices.shape, dtype=np.int64)
    for b in range(ns):
        parity ^= (pairs >> b) & 1
    return parity


def destructive_swap_test(
    prep_a: Circuit,
    prep_b: Circuit,
    shots: int = 0,
    seed=None,
) -> OverlapEstimate:
    """|<a|b>|^2 without the ancilla: 1 - 2 P(odd number of (1,1) pairs)."""
    circuit, ns = _overlap_registers(prep_a, prep_b, extra=0)
    for i in range(ns):
        circuit.add(x(ns + i, (i,)))
        circuit.add(h(i))
    state = run_on_zero(circuit)

    idx = np.arange(state.amplitudes.size, dtype=np.int64)
    odd = _pair_parity(idx, ns) == 1
    if shots == 0:
        p_odd = float((np.abs(state.amplitudes) ** 2)[odd].sum())
        raw = 1.0 - 2.0 * p_odd
        value = min(max(raw, 0.0), 1.0)
        return OverlapEstimate(value, raw, 0.0, 0, "dswap", clamped=value != raw)
    counts = sample_counts(state, shots, seed)
    p_odd = float(counts[odd].sum()) / shots
    raw = 1.0 - 2.0 * p_odd
    value = min(max(raw, 0.0), 1.0)
    return OverlapEstimate(value, raw, 1.0 / shots, shots, "dswap", clamped=value != raw)


@dataclass(frozen=True)
class LcuEstimate:
    """Combined block-encoding + overlap-test estimate of <psi|O|psi>.

    ``magnitude`` is real by construction (negative radicands clamp to 0,
    flagged via ``clamped``); ``raw_magnitude`` keeps the signed square
    root instead, so per-run records preserve the symmetric shot-noise
    distribution around the true value and their median stays a
    consistent estimator.
    """

    value: float  # identity_offset + sign * magnitude
    raw_value: float  # identity_offset + sign * raw_magnitude
    magnitude: float
    raw_magnitude: float
    sign: float
    identity_offset: float
    lam: float
    p0: float  # ancilla-zero probability (estimated in sampled mode)
    shots: int
    variant: str
    clamped: bool
    variance_bound: float

    @property
    def signed_value(self) -> float:
        return self.value


def _oracle_sign(op_prime: PauliSum, prep_psi: Circuit) -> float:
    val = expectation_exact(op_prime, run_on_zero(prep_psi))
    return 1.0 if val >= 0 else -1.0


def estimate_lcu(
    op: PauliSum,
    prep_psi: Circuit,
    shots: int = 0,
    seed=None,
    variant: str = "dswap",
    sign_policy: str = "oracle",
) -> LcuEstimate:
    """Estimate <psi|O|psi> by post-selected application of O to one copy.

    Register layout: system copy 1 (the one O acts on), system copy 2,
    block ancillas, then the SWAP-test ancilla for ``variant="swap"``.
    Everything is measured once; the block ancillas are conditioned on in
    post-processing.
    """
    if variant not in ("swap", "dswap"):
        raise ValueError(f"variant must be 'swap' or 'dswap', got {variant!r}")
    if sign_policy not in SIGN_POLICIES:
        raise ValueError(f"sign_policy must be one of {SIGN_POLICIES}")
    if op.n_qubits != prep_psi.n_qubits:
        raise ValueError(
            f"operator on {op.n_qubits} qubits vs preparation on {prep_psi.n_qubits}"
        )

    form = lcu_normal_form(op, drop_identity=True)
    block = build_block(form)
    ns, na = block.n_system, block.n_ancilla
    use_swap_anc = variant == "swap"
    n = 2 * ns + na + (1 if use_swap_anc else 0)
    anc = tuple(range(2 * ns, 2 * ns + na))
    swap_anc = 2 * ns + na

    circuit = Circuit(n)
    circuit.extend(prep_psi.shifted(0, n))
    circuit.extend(prep_psi.shifted(ns, n))
    # the block's own layout is system at 0.., ancillas directly above
    w_map = {q: q for q in range(ns)}
    w_map.update({ns + b: anc[b] for b in range(na)})
    circuit.extend(w_circuit(block).remapped(w_map, n))
    if use_swap_anc:
        circuit.add(h(swap_anc))
        for i in range(ns):
            circuit.add(x(ns + i, (swap_anc, i)))
            circuit.add(x(i, (swap_anc, ns + i)))
            circuit.add(x(ns + i, (swap_anc, i)))
        circuit.add(h(swap_anc))
    else:
        for i in range(ns):
            circuit.add(x(ns + i, (i,)))
            circuit.add(h(i))
    state = run_on_zero(circuit)

    idx = np.arange(state.amplitudes.size, dtype=np.int64)
    anc_mask = 0
    for q in anc:
        anc_mask |= 1 << q
    anc_zero = (idx & anc_mask) == 0
    if use_swap_anc:
        readout = ((idx >> swap_anc) & 1) == 1
    else:
        readout = _pair_parity(idx, ns) == 1

    rng = _as_rng(seed) if shots else None
    if shots == 0:
        probs = np.abs(state.amplitudes) ** 2
        p0 = float(probs[anc_zero].sum())
        p_bad = float(probs[anc_zero & readout].sum()) / p0 if p0 > 1e-14 else 0.0
        n_cond = 0
    else:
        counts = sample_counts(state, shots, rng)
        n_cond = int(counts[anc_zero].sum())
        p0 = n_cond / shots
        if n_cond == 0:
            log.warning(
                "no ancilla-zero events in %d shots; magnitude is unresolved", shots
            )
        p_bad = float(counts[anc_zero & readout].sum()) / n_cond if n_cond else 0.5

    radicand = p0 * (1.0 - 2.0 * p_bad)
    clamped = radicand < 0.0
    magnitude = form.lam * math.sqrt(max(radicand, 0.0))
    raw_magnitude = form.lam * math.copysign(math.sqrt(abs(radicand)), radicand)

    op_prime = PauliSum.from_terms(
        [t for t in op.terms if not t.is_identity], op.n_qubits
    )
    if sign_policy == "assume-positive":
        sign = 1.0
    elif sign_policy == "oracle":
        sign = _oracle_sign(op_prime, prep_psi)
    else:
        sign_seed = int(rng.integers(2**31)) if rng is not None else None
        sign_est = estimate_htest(op_prime, prep_psi, shots, sign_seed)
        sign = 1.0 if sign_est >= 0 else -1.0

    if shots == 0:
        bound = 0.0
    elif n_cond == 0:
        bound = math.inf
    else:
        # delta-method bound, floored so a tiny magnitude cannot divide away
        m_eff = max(magnitude, form.lam / math.sqrt(shots))
        dq = (form.lam**2 * p0 / (2.0 * m_eff)) ** 2 / n_cond
        dp = (form.lam**2 * abs(1.0 - 2.0 * p_bad) / (2.0 * m_eff)) ** 2 / (4.0 * shots)
        bound = dq + dp

    return LcuEstimate(
        value=form.identity_offset + sign * magnitude,
        raw_value=form.identity_offset + sign * raw_magnitude,
        magnitude=magnitude,
        raw_magnitude=raw_magnitude,
        sign=sign,
        identity_offset=form.identity_offset,
        lam=form.lam,
        p0=p0,
        shots=shots,
        variant=variant,
        clamped=clamped,
        variance_bound=bound,
    )
