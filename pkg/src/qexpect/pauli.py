"""Real-coefficient Pauli sums: parsing, algebra, and the LCU normal form.

Operator file format, one term per line::

    # comment
    -0.18144 I
    0.18144  Z0
    0.28394  X0
    0.5      X0 X1

The first token is a real coefficient, the rest are factors ``<AXIS><qubit>``
with axis in {X, Y, Z}; a plain ``I`` marks an identity term.  ``#`` starts a
comment, blank lines are skipped.  Terms with identical factor maps are
merged; term order is first appearance (factors inside a term are sorted by
qubit).  Qubit count is inferred as max index + 1 unless given explicitly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .simulator import (
    ResourceLimitError,
    StateVector,
    _FIXED_MATRICES,
    pauli_action,
)

MATRIX_QUBIT_CAP = 10

_FACTOR_RE = re.compile(r"^([IXYZ])(\d*)$")


class ParseError(ValueError):
    """Raised for malformed operator text."""


@dataclass(frozen=True)
class PauliTerm:
    """coefficient * product of single-qubit Paulis (empty product = identity)."""

    coefficient: float
    factors: tuple[tuple[int, str], ...]

    @classmethod
    def from_map(cls, coefficient: float, factors: dict[int, str]) -> PauliTerm:
        items = tuple(sorted(factors.items()))
        for q, ax in items:
            if ax not in ("X", "Y", "Z"):
                raise ValueError(f"bad axis {ax!r} on qubit {q}")
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
        return cls(float(coefficient), items)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def factor_map(self) -> dict[int, str]:
        return dict(self.factors)

    def label(self) -> str:
        if not self.factors:
            return "I"
        return " ".join(f"{ax}{q}" for q, ax in self.factors)


@dataclass(frozen=True)
class PauliSum:
    """Merged sum of PauliTerms on a fixed register width."""

    n_qubits: int
    terms: tuple[PauliTerm, ...]

    @classmethod
    def from_terms(cls, terms, n_qubits: int | None = None) -> PauliSum:
        order: list[tuple[tuple[int, str], ...]] = []
        acc: dict[tuple[tuple[int, str], ...], float] = {}
        top = -1
        for t in terms:
            if not isinstance(t, PauliTerm):
                t = PauliTerm.from_map(*t)
            if not math.isfinite(t.coefficient):
                raise ValueError(f"non-finite coefficient {t.coefficient!r}")
            if t.factors not in acc:
                order.append(t.factors)
                acc[t.factors] = 0.0
            acc[t.factors] += t.coefficient
            for q, _ in t.factors:
                top = max(top, q)
        inferred = max(top + 1, 1)
        if n_qubits is None:
            n_qubits = inferred
        elif n_qubits < inferred:
            raise ValueError(
                f"terms touch qubit {top} but register is {n_qubits} qubits"
            )
        merged = tuple(
            PauliTerm(acc[f], f) for f in order if acc[f] != 0.0
        )
        return cls(n_qubits, merged)

    def __eq__(self, other) -> bool:  # order-insensitive
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and dict(
            (t.factors, t.coefficient) for t in self.terms
        ) == dict((t.factors, t.coefficient) for t in other.terms)

    def __hash__(self):
        return hash((self.n_qubits, frozenset((t.factors, t.coefficient) for t in self.terms)))

    def coefficient_of(self, factors: dict[int, str]) -> float:
        key = tuple(sorted(factors.items()))
        for t in self.terms:
            if t.factors == key:
                return t.coefficient
        return 0.0

    @property
    def identity_coefficient(self) -> float:
        return self.coefficient_of({})


def parse_pauli_sum(text: str, n_qubits: int | None = None) -> PauliSum:
    """Parse operator text (see module docstring for the grammar)."""
    terms: list[PauliTerm] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip().replace("−", "-")
        if not line:
            continue
        tokens = line.split()
        try:
            coeff = float(tokens[0])
        except ValueError:
            raise ParseError(f"line {lineno}: bad coefficient {tokens[0]!r}") from None
        factors: dict[int, str] = {}
        for tok in tokens[1:]:
            m = _FACTOR_RE.match(tok)
            if m is None:
                raise ParseError(f"line {lineno}: bad factor {tok!r}")
            axis, idx = m.groups()
            if axis == "I":
                continue  # identity contributes no factor
            if not idx:
                raise ParseError(f"line {lineno}: factor {tok!r} needs a qubit index")
            q = int(idx)
            if q in factors:
                raise ParseError(f"line {lineno}: qubit {q} repeated in one term")
            factors[q] = axis
        terms.append(PauliTerm.from_map(coeff, factors))
    return PauliSum.from_terms(terms, n_qubits)


def format_pauli_sum(op: PauliSum) -> str:
    """Inverse of parse_pauli_sum (round-trips bit-exactly via repr floats)."""
    return "\n".join(f"{t.coefficient!r} {t.label()}" for t in op.terms)


def load_operator(path, n_qubits: int | None = None) -> PauliSum:
    with open(path, encoding="utf-8") as fh:
        return parse_pauli_sum(fh.read(), n_qubits)


def term_matrix(term: PauliTerm, n_qubits: int) -> np.ndarray:
    """Dense matrix of one term (kron order: qubit n-1 leftmost)."""
    out = np.array([[term.coefficient]], dtype=complex)
    fmap = term.factor_map()
    eye = np.eye(2, dtype=complex)
    for q in range(n_qubits - 1, -1, -1):
        out = np.kron(out, _FIXED_MATRICES.get(fmap.get(q), eye))
    return out


def to_matrix(op: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix; oracle-grade, capped at 10 qubits."""
    if op.n_qubits > MATRIX_QUBIT_CAP:
        raise ResourceLimitError(
            f"dense matrix on {op.n_qubits} qubits exceeds cap of {MATRIX_QUBIT_CAP}"
        )
    dim = 1 << op.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for t in op.terms:
        out += term_matrix(t, op.n_qubits)
    return out


def apply_pauli_sum(op: PauliSum, state: StateVector) -> np.ndarray:
    """Raw (unnormalized) amplitudes of O|psi>."""
    if op.n_qubits != state.n_qubits:
        raise ValueError(
            f"operator on {op.n_qubits} qubits vs state on {state.n_qubits}"
        )
    out = np.zeros_like(state.amplitudes)
    for t in op.terms:
        out += t.coefficient * pauli_action(state.amplitudes, state.n_qubits, t.factors)
    return out


def expectation_exact(op: PauliSum, state: StateVector) -> float:
    """<psi|O|psi> for a normalized state; imaginary residue (<1e-10) dropped."""
    val = complex(np.vdot(state.amplitudes, apply_pauli_sum(op, state)))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def is_hermitian(op: PauliSum) -> bool:
    """True for real-coefficient sums; verified against the dense matrix when small."""
    if any(not isinstance(t.coefficient, float) for t in op.terms):
        return False
    if op.n_qubits <= MATRIX_QUBIT_CAP:
        m = to_matrix(op)
        return bool(np.allclose(m, m.conj().T, atol=1e-12))
    return True


@dataclass(frozen=True)
class LcuForm:
    """O = identity_offset * I + sum_i beta_i * U_i with beta_i > 0, U_i = +-(Pauli string)."""

    n_qubits: int
    lam: float  # sum of betas (the one-norm of the non-offset part)
    betas: tuple[float, ...]
    unitaries: tuple[PauliTerm, ...]  # coefficient is the +-1 sign
    identity_offset: float

    def reconstruct(self) -> PauliSum:
        terms = []
        if self.identity_offset != 0.0:
            terms.append(PauliTerm.from_map(self.identity_offset, {}))
        for b, u in zip(self.betas, self.unitaries):
            terms.append(PauliTerm(b * u.coefficient, u.factors))
        return PauliSum.from_terms(terms, self.n_qubits)


def lcu_normal_form(op: PauliSum, drop_identity: bool = False) -> LcuForm:
    """Split an operator into positive weights and signed Pauli unitaries.

    With ``drop_identity`` the identity term is returned as a classical
    offset instead of occupying an LCU slot (it shifts every expectation
    value by a constant, so no circuit is needed for it).
    """
    if not op.terms:
        raise ValueError("cannot build an LCU form of the empty operator")
    betas: list[float] = []
    unitaries: list[PauliTerm] = []
    offset = 0.0
    for t in op.terms:
        if drop_identity and t.is_identity:
            offset += t.coefficient
            continue
        betas.append(abs(t.coefficient))
        unitaries.append(PauliTerm(math.copysign(1.0, t.coefficient), t.factors))
    if not betas:
        raise ValueError("operator reduced to a pure identity offset")
    return LcuForm(
        n_qubits=op.n_qubits,
        lam=float(sum(betas)),
        betas=tuple(betas),
        unitaries=tuple(unitaries),
        identity_offset=offset,
    )
