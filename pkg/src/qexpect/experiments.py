"""Experiment runner: the runs-by-shots protocol with median/MAD reporting.

An experiment evaluates one operator expectation value ``runs`` times.
Each run r gets its own seeds (VQE: ``base_seed + r``, estimator:
``base_seed + runs + r``), so the whole experiment is reproducible from
the config alone, and the runs are independent draws for the median /
median-absolute-deviation summary.

Configs are INI files with an ``[experiment]`` section and an optional
``[vqe]`` section::

    [experiment]
    operator = builtin:q2_gc      # path, or builtin:<name> for bundled data
    encoding = gc                 # gc | jw
    amplitudes = 0.2759, 0.9611   # ... or use [vqe] instead
    method = htest                # htest | lcu-swap | lcu-dswap | exact
    shots = 100000
    runs = 100
    seed = 7

    [vqe]
    hamiltonian = builtin:...     # Pauli operator file
    ansatz = ry-cnot-ladder       # single-ry | ry-cnot-ladder
    depth = 1

Plain paths are resolved relative to the config file.  CLI flags override
config keys one-to-one.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .encode import gray_state_vector, one_hot_state_vector
from .overlap import SIGN_POLICIES, estimate_htest, estimate_lcu
from .pauli import (
    PauliSum,
    expectation_exact,
    lcu_normal_form,
    load_operator,
    parse_pauli_sum,
)
from .simulator import Circuit, run_on_zero
from .stateprep import prepare_one_hot, prepare_real_amplitudes
from .vqe import Ansatz, OptimizerConfig, minimize, prepare_ansatz

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
METHODS = ("htest", "lcu-swap", "lcu-dswap", "exact")
ENCODINGS = ("gc", "jw")
MAX_HINT_SHOTS = 10_000_000

DEFAULTS = {
    "encoding": "gc",
    "method": "exact",
    "shots": 0,
    "runs": 1,
    "seed": 0,
    "sign_policy": "oracle",
    "workers": 1,
    "format": "json",
    "vqe_ansatz": "ry-cnot-ladder",
    "vqe_depth": 1,
    "vqe_restarts": 3,
    "vqe_max_evaluations": 2000,
    "vqe_mode": "exact",
    "vqe_shots": 0,
}

_VQE_SECTION_KEYS = (
    "hamiltonian",
    "ansatz",
    "depth",
    "restarts",
    "max_evaluations",
    "mode",
    "shots",
)


@dataclass(frozen=True)
class VqeSource:
    """Ground-state search whose optimum parameters feed the estimator."""

    hamiltonian: PauliSum
    ansatz: Ansatz
    optimizer: OptimizerConfig = OptimizerConfig()
    mode: str = "exact"
    shots: int = 0


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully resolved experiment: operators parsed, state source fixed."""

    operator: PauliSum
    encoding: str
    method: str
    runs: int
    shots: int
    base_seed: int
    sign_policy: str = "oracle"
    amplitudes: tuple[float, ...] | None = None
    vqe: VqeSource | None = None
    workers: int = 1
    echo: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.sign_policy not in SIGN_POLICIES:
            raise ValueError(f"sign_policy must be one of {SIGN_POLICIES}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.method != "exact" and self.shots < 1:
            raise ValueError(f"method {self.method!r} needs shots >= 1, got {self.shots}")
        if (self.amplitudes is None) == (self.vqe is None):
            raise ValueError("exactly one state source (amplitudes or vqe) is required")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def _prep_from_amplitudes(spec: ExperimentSpec) -> Circuit:
    if spec.encoding == "gc":
        prep = prepare_real_amplitudes(gray_state_vector(spec.amplitudes))
    else:
        prep = prepare_one_hot(spec.amplitudes)
    if prep.n_qubits != spec.operator.n_qubits:
        raise ValueError(
            f"operator acts on {spec.operator.n_qubits} qubits but "
            f"{len(spec.amplitudes)} {spec.encoding}-encoded amplitudes "
            f"prepare {prep.n_qubits}"
        )
    return prep


def _check_vqe(spec: ExperimentSpec) -> None:
    src = spec.vqe
    if src.ansatz.n_qubits != spec.operator.n_qubits:
        raise ValueError(
            f"operator acts on {spec.operator.n_qubits} qubits but the "
            f"ansatz has {src.ansatz.n_qubits}"
        )
    if src.hamiltonian.n_qubits != spec.operator.n_qubits:
        raise ValueError(
            f"operator acts on {spec.operator.n_qubits} qubits but the "
            f"VQE hamiltonian on {src.hamiltonian.n_qubits}"
        )


@dataclass(frozen=True)
class _RunRecord:
    value: float
    energy: float | None
    clamped: bool


def _run_once(spec: ExperimentSpec, r: int, prep: Circuit | None) -> _RunRecord:
    energy = None
    if prep is None:
        src = spec.vqe
        fit = minimize(
            src.hamiltonian,
            src.ansatz,
            mode=src.mode,
            config=src.optimizer,
            seed=spec.base_seed + r,
            shots=src.shots,
        )
        prep = prepare_ansatz(src.ansatz, fit.best_params)
        energy = fit.energy

    seed = spec.base_seed + spec.runs + r
    clamped = False
    if spec.method == "exact":
        value = expectation_exact(spec.operator, run_on_zero(prep))
    elif spec.method == "htest":
        value = estimate_htest(spec.operator, prep, spec.shots, seed)
    else:
        variant = "swap" if spec.method == "lcu-swap" else "dswap"
        est = estimate_lcu(
            spec.operator, prep, spec.shots, seed, variant, spec.sign_policy
        )
        # raw records keep the unclamped (signed-root) value so the
        # median/MAD see the symmetric shot-noise distribution
        value = est.raw_value
        clamped = est.clamped
    return _RunRecord(float(value), energy, clamped)


@dataclass(frozen=True)
class EstimateReport:
    """One experiment's output record (JSON schema documented in the README)."""

    schema_version: int
    config: dict
    seeds: list[int]
    per_run_values: list[float]
    median: float
    mad: float
    vqe_energies: list[float] | None
    clamp_count: int
    wall_time_s: float


def summarize(values) -> tuple[float, float]:
    """(median, median absolute deviation); even-length median averages the middle two."""
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError("cannot summarize an empty value list")
    med = float(np.median(arr))
    return med, float(np.median(np.abs(arr - med)))


def shot_budget_hint(expected_value: float, maximum: int = MAX_HINT_SHOTS) -> int:
    """Advisory shot count to resolve a value of the given size (10 / |v|).

    A vanishing expectation cannot be resolved at any budget, so 0 returns
    ``maximum`` with a warning.
    """
    if not math.isfinite(expected_value) or abs(expected_value) > 1.0:
        raise ValueError(f"expected value must lie in [-1, 1], got {expected_value!r}")
    if expected_value == 0.0:
        log.warning("expected value 0 cannot be resolved; returning the maximum")
        return maximum
    return min(math.ceil(10.0 / abs(expected_value)), maximum)


def run_experiment(spec: ExperimentSpec) -> EstimateReport:
    """Execute runs with per-run seeds and fold them into a report.

    Results are aggregated in run order no matter how the worker pool
    schedules them, so reports are deterministic for a fixed config.
    """
    start = time.perf_counter()
    prep = None if spec.vqe is not None else _prep_from_amplitudes(spec)
    if spec.vqe is not None:
        _check_vqe(spec)

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(lambda r: _run_once(spec, r, prep), range(spec.runs)))
    else:
        records = [_run_once(spec, r, prep) for r in range(spec.runs)]

    values = [rec.value for rec in records]
    median, mad = summarize(values)
    if spec.method in ("lcu-swap", "lcu-dswap"):
        # summary values are clamped to the physically reachable range
        # even though raw per-run records are not
        form = lcu_normal_form(spec.operator, drop_identity=True)
        lo = form.identity_offset - form.lam
        hi = form.identity_offset + form.lam
        median = min(max(median, lo), hi)
    energies = [rec.energy for rec in records]
    return EstimateReport(
        schema_version=SCHEMA_VERSION,
        config=dict(spec.echo),
        seeds=[spec.base_seed + spec.runs + r for r in range(spec.runs)],
        per_run_values=values,
        median=median,
        mad=mad,
        vqe_energies=energies if spec.vqe is not None else None,
        clamp_count=sum(1 for rec in records if rec.clamped),
        wall_time_s=time.perf_counter() - start,
    )


def report_text(report: EstimateReport, fmt: str = "json") -> str:
    """Render as schema-versioned JSON or per-run CSV rows."""
    if fmt == "json":
        return json.dumps(asdict(report), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        energies = report.vqe_energies or [None] * len(report.per_run_values)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["run", "seed", "value", "energy"])
        for r, (seed, value, energy) in enumerate(
            zip(report.seeds, report.per_run_values, energies)
        ):
            writer.writerow([r, seed, repr(value), "" if energy is None else repr(energy)])
        return buf.getvalue()
    raise ValueError(f"format must be 'json' or 'csv', got {fmt!r}")


def emit_report(report: EstimateReport, path, fmt: str = "json") -> None:
    """Write report_text to a file (newline-normalized csv included)."""
    Path(path).write_text(report_text(report, fmt), newline="")


def load_report(path) -> EstimateReport:
    """Re-load a JSON report (field-for-field inverse of emit_report)."""
    data = json.loads(Path(path).read_text())
    return EstimateReport(**data)


def resolve_operator(source: str, base_dir: Path | None = None) -> PauliSum:
    """Load an operator from a path or a ``builtin:<name>`` bundled file."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        data_dir = resources.files("qexpect") / "data"
        ref = data_dir / f"{name}.ops"
        if not ref.is_file():
            available = sorted(
                p.name[: -len(".ops")]
                for p in data_dir.iterdir()
                if p.name.endswith(".ops")
            )
            raise FileNotFoundError(
                f"no bundled operator {name!r}; available: {', '.join(available)}"
            )
        return parse_pauli_sum(ref.read_text())
    path = Path(source)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return load_operator(path)


def parse_amplitudes(text: str) -> tuple[float, ...]:
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    if not parts:
        raise ValueError("empty amplitude list")
    return tuple(float(p) for p in parts)


def load_config(path) -> dict:
    """Read an INI config into a flat settings dict (vqe keys prefixed)."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with path.open() as fh:
        parser.read_file(fh)
    unknown = set(parser.sections()) - {"experiment", "vqe"}
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")
    settings: dict = {"config_dir": str(path.parent)}
    if parser.has_section("experiment"):
        for key, value in parser.items("experiment"):
            if key not in KNOWN_SETTINGS or key.startswith("vqe_") or key == "config_dir":
                raise ValueError(f"unknown [experiment] key {key!r}")
            settings[key] = value
    if parser.has_section("vqe"):
        for key, value in parser.items("vqe"):
            if key not in _VQE_SECTION_KEYS:
                raise ValueError(f"unknown [vqe] key {key!r}")
            settings[f"vqe_{key}"] = value
    return settings


KNOWN_SETTINGS = frozenset(DEFAULTS) | {
    "operator",
    "amplitudes",
    "vqe_hamiltonian",
    "output",
    "config_dir",
}
