"""Request and response schemas for the experiment service.

An ``ExperimentRequest`` is self-contained: operators arrive either as
inline text or as a ``builtin:<name>`` reference to a bundled file; the
service never reads arbitrary filesystem paths.  ``to_spec`` turns a
validated request into the runner's ExperimentSpec, deriving a compact
config echo (inline operators are identified by a content hash unless the
caller supplied a label).
"""

from __future__ import annotations

import hashlib

from pydantic import BaseModel, Field, model_validator

from ..experiments import (
    ENCODINGS,
    METHODS,
    ExperimentSpec,
    VqeSource,
    resolve_operator,
)
from ..overlap import SIGN_POLICIES
from ..pauli import PauliSum, parse_pauli_sum
from ..vqe import ANSATZ_KINDS, Ansatz, OptimizerConfig


def _load_source(text: str | None, builtin: str | None) -> PauliSum:
    if text is not None:
        return parse_pauli_sum(text)
    if not builtin.startswith("builtin:"):
        raise ValueError(
            f"operator references must use the builtin:<name> form, got {builtin!r}"
        )
    return resolve_operator(builtin)


def _source_label(text: str | None, builtin: str | None, label: str | None) -> str:
    if label is not None:
        return label
    if builtin is not None:
        return builtin
    digest = hashlib.sha256(text.encode()).hexdigest()[:12]
    return f"inline:{digest}"


class VqeRequest(BaseModel):
    """Ground-state search settings; the optimum state feeds the estimator."""

    hamiltonian_text: str | None = None
    hamiltonian: str | None = None
    hamiltonian_label: str | None = None
    ansatz: str = "ry-cnot-ladder"
    depth: int = Field(default=1, ge=0)
    restarts: int = Field(default=3, ge=1)
    max_evaluations: int = Field(default=2000, ge=1)
    mode: str = "exact"
    shots: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _validate(self) -> VqeRequest:
        if (self.hamiltonian_text is None) == (self.hamiltonian is None):
            raise ValueError("provide exactly one of hamiltonian_text or hamiltonian")
        if self.ansatz not in ANSATZ_KINDS:
            raise ValueError(f"ansatz must be one of {ANSATZ_KINDS}, got {self.ansatz!r}")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled-mode VQE needs shots >= 1")
        return self


class ExperimentRequest(BaseModel):
    """One runs-by-shots experiment, fully specified."""

    operator_text: str | None = None
    operator: str | None = None
    operator_label: str | None = None
    encoding: str = "gc"
    method: str = "exact"
    shots: int = Field(default=0, ge=0)
    runs: int = Field(default=1, ge=1)
    seed: int = 0
    sign_policy: str = "oracle"
    amplitudes: list[float] | None = None
    vqe: VqeRequest | None = None
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _validate(self) -> ExperimentRequest:
        if (self.operator_text is None) == (self.operator is None):
            raise ValueError("provide exactly one of operator_text or operator")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.sign_policy not in SIGN_POLICIES:
            raise ValueError(f"sign_policy must be one of {SIGN_POLICIES}")
        if (self.amplitudes is None) == (self.vqe is None):
            raise ValueError("provide exactly one state source (amplitudes or vqe)")
        if self.method != "exact" and self.shots < 1:
            raise ValueError(f"method {self.method!r} needs shots >= 1")
        return self

    def to_spec(self) -> ExperimentSpec:
        operator = _load_source(self.operator_text, self.operator)
        echo: dict = {
            "operator": _source_label(self.operator_text, self.operator, self.operator_label),
            "encoding": self.encoding,
            "method": self.method,
            "shots": self.shots,
            "runs": self.runs,
            "seed": self.seed,
            "sign_policy": self.sign_policy,
            "workers": self.workers,
        }
        vqe = None
        if self.vqe is not None:
            hamiltonian = _load_source(self.vqe.hamiltonian_text, self.vqe.hamiltonian)
            vqe = VqeSource(
                hamiltonian=hamiltonian,
                ansatz=Ansatz(
                    kind=self.vqe.ansatz,
                    n_qubits=operator.n_qubits,
                    depth=self.vqe.depth,
                ),
                optimizer=OptimizerConfig(
                    restarts=self.vqe.restarts,
                    max_evaluations=self.vqe.max_evaluations,
                ),
                mode=self.vqe.mode,
                shots=self.vqe.shots,
            )
            echo["vqe"] = {
                "hamiltonian": _source_label(
                    self.vqe.hamiltonian_text,
                    self.vqe.hamiltonian,
                    self.vqe.hamiltonian_label,
                ),
                "ansatz": self.vqe.ansatz,
                "depth": self.vqe.depth,
                "restarts": self.vqe.restarts,
                "max_evaluations": self.vqe.max_evaluations,
                "mode": self.vqe.mode,
                "shots": self.vqe.shots,
            }
        else:
            echo["amplitudes"] = list(self.amplitudes)
        return ExperimentSpec(
            operator=operator,
            encoding=self.encoding,
            method=self.method,
            runs=self.runs,
            shots=self.shots,
            base_seed=self.seed,
            sign_policy=self.sign_policy,
            amplitudes=tuple(self.amplitudes) if self.amplitudes is not None else None,
            vqe=vqe,
            workers=self.workers,
            echo=echo,
        )


class InspectRequest(BaseModel):
    """Operator to parse: inline text or a builtin:<name> reference."""

    operator_text: str | None = None
    operator: str | None = None

    @model_validator(mode="after")
    def _validate(self) -> InspectRequest:
        if (self.operator_text is None) == (self.operator is None):
            raise ValueError("provide exactly one of operator_text or operator")
        return self


class ReportModel(BaseModel):
    """Serialized EstimateReport (the JSON the CLI writes, verbatim)."""

    schema_version: int
    config: dict
    seeds: list[int]
    per_run_values: list[float]
    median: float
    mad: float
    vqe_energies: list[float] | None
    clamp_count: int
    wall_time_s: float


class OperatorInspection(BaseModel):
    n_qubits: int
    n_terms: int
    identity_coefficient: float
    terms: list[dict]
    lcu_lambda: float | None
    lcu_ancillas: int | None
    lcu_identity_offset: float | None


class ShotHint(BaseModel):
    shots: int
    warning: str | None = None
