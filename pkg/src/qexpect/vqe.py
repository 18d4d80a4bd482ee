"""Minimal variational eigensolver.

Two real-amplitude ansatz families:

- ``single-ry``: one R_Y on qubit 0, one parameter, enough for any real
  single-qubit state;
- ``ry-cnot-ladder``: an R_Y on every qubit, then ``depth`` repetitions of
  a CNOT ladder (i -> i+1) followed by another R_Y layer; n*(depth+1)
  parameters.

``minimize`` runs derivative-free simplex descent (scipy's Nelder-Mead)
from ``restarts`` random starting points, splitting the evaluation budget
evenly, and keeps the best restart.  Everything is deterministic for a
fixed seed, including sampled-mode energy evaluations (the shared RNG is
consumed in evaluation order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .overlap import estimate_htest
from .pauli import PauliSum, expectation_exact
from .simulator import Circuit, _as_rng, cnot, run_on_zero, ry

ANSATZ_KINDS = ("single-ry", "ry-cnot-ladder")


@dataclass(frozen=True)
class Ansatz:
    """A parameterized real-amplitude circuit family on a fixed register."""

    kind: str
    n_qubits: int
    depth: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ANSATZ_KINDS:
            raise ValueError(f"ansatz kind must be one of {ANSATZ_KINDS}, got {self.kind!r}")
        if self.n_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.n_qubits}")
        if self.kind == "ry-cnot-ladder" and self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    @property
    def parameter_count(self) -> int:
        if self.kind == "single-ry":
            return 1
        return self.n_qubits * (self.depth + 1)


def prepare_ansatz(ansatz: Ansatz, params) -> Circuit:
    """Circuit mapping |0...0> to the ansatz state at ``params`` (radians)."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.size != ansatz.parameter_count:
        raise ValueError(
            f"{ansatz.kind} on {ansatz.n_qubits} qubits takes "
            f"{ansatz.parameter_count} parameters, got {params.size}"
        )
    n = ansatz.n_qubits
    circuit = Circuit(n)
    if ansatz.kind == "single-ry":
        circuit.add(ry(0, params[0]))
        return circuit
    layers = params.reshape(ansatz.depth + 1, n)
    for q in range(n):
        circuit.add(ry(q, layers[0][q]))
    for d in range(ansatz.depth):
        for q in range(n - 1):
            circuit.add(cnot(q, q + 1))
        for q in range(n):
            circuit.add(ry(q, layers[d + 1][q]))
    return circuit


def energy(
    hamiltonian: PauliSum,
    ansatz: Ansatz,
    params,
    mode: str = "exact",
    shots: int = 0,
    seed=None,
) -> float:
    """<psi(params)|H|psi(params)>, exact or estimated by per-term tests."""
    if hamiltonian.n_qubits != ansatz.n_qubits:
        raise ValueError(
            f"hamiltonian on {hamiltonian.n_qubits} qubits vs ansatz on {ansatz.n_qubits}"
        )
    prep = prepare_ansatz(ansatz, params)
    if mode == "exact":
        return expectation_exact(hamiltonian, run_on_zero(prep))
    if mode == "sampled":
        if shots < 1:
            raise ValueError(f"sampled mode needs shots >= 1, got {shots}")
        return estimate_htest(hamiltonian, prep, shots, seed)
    raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 3
    max_evaluations: int = 2000
    xtol: float = 1e-6
    ftol: float = 1e-8

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_evaluations < self.restarts:
            raise ValueError("evaluation budget smaller than the restart count")


@dataclass(frozen=True)
class VqeResult:
    best_params: tuple[float, ...]
    energy: float
    evaluations: int
    converged: bool


def minimize(
    hamiltonian: PauliSum,
    ansatz: Ansatz,
    mode: str = "exact",
    config: OptimizerConfig = OptimizerConfig(),
    seed=None,
    shots: int = 0,
) -> VqeResult:
    """Simplex descent from ``restarts`` random starts; best restart wins.

    Starting points are drawn uniformly from [-pi, pi); the evaluation
    budget is split evenly across restarts.  In sampled mode every energy
    evaluation consumes the shared RNG, so a fixed seed fixes the whole
    trajectory.
    """
    rng = _as_rng(seed)
    budget = config.max_evaluations // config.restarts

    def objective(params: np.ndarray) -> float:
        return energy(hamiltonian, ansatz, params, mode, shots, rng)

    best = None
    total_evals = 0
    for _ in range(config.restarts):
        start = rng.uniform(-np.pi, np.pi, size=ansatz.parameter_count)
        res = _scipy_minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={
                "xatol": config.xtol,
                "fatol": config.ftol,
                "maxfev": budget,
                "disp": False,
            },
        )
        total_evals += int(res.nfev)
        if best is None or res.fun < best.fun:
            best = res
    return VqeResult(
        best_params=tuple(float(v) for v in best.x),
        energy=float(best.fun),
        evaluations=total_evals,
        converged=bool(best.success),
    )
