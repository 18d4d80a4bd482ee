"""Map a k-mode one-body operator onto qubit registers.

Two encodings of the single-particle problem are supported:

- Gray code (dense): mode i occupies basis label ``gray(i) = i ^ (i >> 1)``
  of a ceil(log2 k)-qubit register; the padded, permuted matrix is then
  decomposed over the full Pauli basis.
- one-hot (Jordan-Wigner): mode i occupies qubit i of a k-qubit register;
  a diagonal entry O_ii becomes (O_ii/2)(I - Z_i) and an off-diagonal O_ij
  becomes (O_ij/2)(X_i X_j + Y_i Y_j).  On the one-particle sector the
  interior Z strings of the textbook transform cancel, so they are omitted
  unless ``strict`` is set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .pauli import PauliSum, PauliTerm, apply_pauli_sum
from .simulator import ResourceLimitError, StateVector, _FIXED_MATRICES

DENSE_MODE_CAP = 64  # gray_encode decomposes over 4^n strings; n <= 6 stays cheap
ONE_HOT_MODE_CAP = 10


def default_labels(k: int) -> tuple[tuple[int, int], ...]:
    """(radial n, orbital l) labels in the interleaved order (0,0), (0,2), (1,0), ..."""
    return tuple((i // 2, 2 * (i % 2)) for i in range(k))


@dataclass(frozen=True)
class OneBodyMatrix:
    """Real symmetric k x k matrix of a one-body operator."""

    k: int
    entries: np.ndarray
    basis_labels: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (self.k, self.k):
            raise ValueError(f"entries shape {m.shape} does not match k={self.k}")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("one-body matrix must be symmetric (tol 1e-12)")
        object.__setattr__(self, "entries", m)
        labels = self.basis_labels or default_labels(self.k)
        if len(labels) != self.k:
            raise ValueError(f"{len(labels)} labels for k={self.k} modes")
        object.__setattr__(self, "basis_labels", tuple(labels))


def load_matrix(path) -> OneBodyMatrix:
    """Read ``k`` on the first line then k rows of k decimals."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    k = int(lines[0])
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1 : k + 1]]
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ValueError(f"{path}: expected {k} rows of {k} entries")
    return OneBodyMatrix(k, np.array(rows))


def _as_matrix(m) -> OneBodyMatrix:
    if isinstance(m, OneBodyMatrix):
        return m
    m = np.asarray(m)
    if np.iscomplexobj(m):
        residue = float(np.abs(m.imag).max()) if m.size else 0.0
        if residue > 1e-12:
            raise ValueError(f"matrix has imaginary residue {residue:.3e}")
        m = m.real
    m = m.astype(float)
    return OneBodyMatrix(m.shape[0], m)


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_permutation(n_qubits: int) -> np.ndarray:
    """gray(i) for i in [0, 2^n)."""
    return np.array([gray_code(i) for i in range(1 << n_qubits)], dtype=np.int64)


def _qubits_for(k: int) -> int:
    return max(1, math.ceil(math.log2(k)))


def gray_encode(m, drop_tol: float = 1e-12) -> PauliSum:
    """Dense Pauli decomposition of the Gray-permuted (zero-padded) matrix."""
    mat = _as_matrix(m)
    if mat.k > DENSE_MODE_CAP:
        raise ResourceLimitError(f"k={mat.k} exceeds dense cap of {DENSE_MODE_CAP}")
    n = _qubits_for(mat.k)
    dim = 1 << n
    padded = np.zeros((dim, dim))
    padded[: mat.k, : mat.k] = mat.entries
    perm = gray_permutation(n)
    dense = np.zeros((dim, dim))
    dense[np.ix_(perm, perm)] = padded  # dense[gray(i), gray(j)] = padded[i, j]

    eye = np.eye(2, dtype=complex)
    mats = {"I": eye, **{a: _FIXED_MATRICES[a] for a in "XYZ"}}
    terms = []
    axes = ["I", "X", "Y", "Z"]
    for code in range(4**n):
        string = []
        c = code
        for _ in range(n):
            string.append(axes[c % 4])
            c //= 4
        # string[q] is the axis on qubit q; kron builds qubit n-1 leftmost
        p = reduce(np.kron, [mats[string[q]] for q in range(n - 1, -1, -1)])
        coeff = complex(np.trace(p @ dense)) / dim
        if abs(coeff.imag) > 1e-12:
            raise AssertionError("symmetric input produced a complex coefficient")
        if abs(coeff.real) >= drop_tol:
            terms.append(
                PauliTerm.from_map(
                    coeff.real,
                    {q: string[q] for q in range(n) if string[q] != "I"},
                )
            )
    return PauliSum.from_terms(terms, n)


def gray_decode_matrix(dense) -> np.ndarray:
    """Inverse basis relabeling: entry (i, j) = dense[gray(i), gray(j)]."""
    dense = np.asarray(dense)
    n = dense.shape[0].bit_length() - 1
    if dense.shape != (1 << n, 1 << n):
        raise ValueError(f"matrix shape {dense.shape} is not a power of two square")
    perm = gray_permutation(n)
    return dense[np.ix_(perm, perm)]


def jw_encode(m, strict: bool = False) -> PauliSum:
    """One-hot encoding on k qubits; ``strict`` keeps the interior Z strings."""
    mat = _as_matrix(m)
    k = mat.k
    if k > ONE_HOT_MODE_CAP:
        raise ResourceLimitError(f"k={k} exceeds one-hot cap of {ONE_HOT_MODE_CAP}")
    terms: list[PauliTerm] = []
    ident = 0.0
    for i in range(k):
        d = mat.entries[i, i]
        if d != 0.0:
            ident += d / 2
            terms.append(PauliTerm.from_map(-d / 2, {i: "Z"}))
    if ident != 0.0:
        terms.insert(0, PauliTerm.from_map(ident, {}))
    for i in range(k):
        for j in range(i + 1, k):
            o = mat.entries[i, j]
            if o == 0.0:
                continue
            chain = {q: "Z" for q in range(i + 1, j)} if strict else {}
            terms.append(PauliTerm.from_map(o / 2, {**chain, i: "X", j: "X"}))
            terms.append(PauliTerm.from_map(o / 2, {**chain, i: "Y", j: "Y"}))
    return PauliSum.from_terms(terms, k)


def one_hot_restrict(op: PauliSum) -> np.ndarray:
    """Matrix elements <e_i|O|e_j> on the one-hot basis states e_i = |0..1..0>."""
    k = op.n_qubits
    if k > ONE_HOT_MODE_CAP:
        raise ResourceLimitError(f"k={k} exceeds one-hot cap of {ONE_HOT_MODE_CAP}")
    dim = 1 << k
    out = np.zeros((k, k), dtype=complex)
    for j in range(k):
        amps = np.zeros(dim, dtype=complex)
        amps[1 << j] = 1.0
        image = apply_pauli_sum(op, StateVector(k, amps))
        for i in range(k):
            out[i, j] = image[1 << i]
    if np.abs(out.imag).max() > 1e-12:
        return out
    return out.real


def gray_state_vector(mode_amplitudes) -> np.ndarray:
    """Dense register state with amplitude a_i on basis label gray(i)."""
    a = np.asarray(mode_amplitudes, dtype=float).reshape(-1)
    n = _qubits_for(a.size)
    vec = np.zeros(1 << n)
    vec[gray_permutation(n)[: a.size]] = a
    nrm = np.linalg.norm(vec)
    if not np.isfinite(nrm) or nrm == 0:
        raise ValueError("mode amplitudes have zero or non-finite norm")
    return vec / nrm


def one_hot_state_vector(mode_amplitudes) -> np.ndarray:
    """k-qubit register state with amplitude a_i on |e_i>."""
    a = np.asarray(mode_amplitudes, dtype=float).reshape(-1)
    vec = np.zeros(1 << a.size)
    for i, v in enumerate(a):
        vec[1 << i] = v
    nrm = np.linalg.norm(vec)
    if not np.isfinite(nrm) or nrm == 0:
        raise ValueError("mode amplitudes have zero or non-finite norm")
    return vec / nrm
