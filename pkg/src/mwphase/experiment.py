"""Sweep of <S12> against <N2> for several atom numbers, plus file output.

Each run starts with all N atoms in well 1, evolves until half of them
have tunneled into well 2, and tabulates a :class:`PhaseRecord` per sample.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import __version__
from .dynamics import TransferTime, WellParams, half_transfer_time, hamiltonian, trajectory
from .fock import DomainError, fock_state, make_basis
from .phase import RECORD_FIELDS, PhaseRecord, phase_operators

__all__ = [
    "AVERAGING_MODES",
    "SweepConfig",
    "SweepRun",
    "SweepResult",
    "FringeParams",
    "mandel_sweep",
    "classical_reference",
    "fringe_profile",
    "format_number",
    "write_records_csv",
    "export",
    "load_json",
]

AVERAGING_MODES = ("inst", "timeavg")
AVERAGE_FIELDS = ("avg_mean_n2", "avg_mean_sin")


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...]
    params: WellParams = field(default_factory=WellParams)
    samples_per_window: int = 200
    averaging: str = "inst"
    horizon: float | None = None

    def __post_init__(self):
        n_values = tuple(int(n) for n in self.n_values)
        if not n_values:
            raise DomainError("n_values must not be empty")
        if any(n < 1 for n in n_values):
            raise DomainError(f"every N must be >= 1, got {n_values}")
        if self.samples_per_window < 2:
            raise DomainError("samples_per_window must be >= 2")
        if self.averaging not in AVERAGING_MODES:
            raise DomainError(f"averaging must be one of {AVERAGING_MODES}")
        object.__setattr__(self, "n_values", n_values)

    @property
    def nominal_dt(self) -> float:
        return self.params.rabi_half_time / self.samples_per_window


@dataclass(frozen=True, eq=False)
class SweepRun:
    n_total: int
    records: tuple[PhaseRecord, ...]
    transfer: TransferTime
    dt: float
    avg_n2: np.ndarray | None = None
    avg_sin: np.ndarray | None = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    def rows(self) -> list[list[float]]:
        rows = [list(r.as_row()) for r in self.records]
        if self.avg_n2 is not None:
            for row, a, b in zip(rows, self.avg_n2, self.avg_sin):
                row.extend((float(a), float(b)))
        return rows


@dataclass(frozen=True, eq=False)
class SweepResult:
    config: SweepConfig
    runs: tuple[SweepRun, ...]

    @property
    def columns(self) -> tuple[str, ...]:
        if self.config.averaging == "timeavg":
            return RECORD_FIELDS + AVERAGE_FIELDS
        return RECORD_FIELDS

    @property
    def meta(self) -> dict:
        p = self.config.params
        return {
            "j": p.j,
            "u": p.u,
            "tilt": p.tilt,
            "dt": self.config.nominal_dt,
            "averaging": self.config.averaging,
            "version": __version__,
            "samples_per_window": self.config.samples_per_window,
            "columns": list(self.columns),
        }

    def run(self, n_total: int) -> SweepRun:
        for r in self.runs:
            if r.n_total == n_total:
                return r
        raise KeyError(n_total)


def running_average(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(1/t) * integral_0^t y dt' by the trapezoid rule; y(0) at t = 0."""
    integral = cumulative_trapezoid(y, t, initial=0.0)
    out = np.empty_like(y, dtype=float)
    out[0] = y[0]
    out[1:] = integral[1:] / t[1:]
    return out


def _sweep_one(n: int, config: SweepConfig) -> SweepRun:
    p = config.params
    basis = make_basis(n)
    ops = phase_operators(basis)
    h = hamiltonian(basis, p)
    transfer = half_transfer_time(
        p, basis, horizon=config.horizon, samples=config.samples_per_window
    )
    if transfer.crossed:
        dt = transfer.t / config.samples_per_window
    else:
        dt = config.nominal_dt
    points = trajectory(h, fock_state(basis, n), dt, transfer.t, ops)
    records = tuple(pt.record for pt in points)
    avg_n2 = avg_sin = None
    if config.averaging == "timeavg":
        t = np.array([r.t for r in records])
        avg_n2 = running_average(t, np.array([r.mean_n2 for r in records]))
        avg_sin = running_average(t, np.array([r.mean_sin for r in records]))
    return SweepRun(n, records, transfer, dt, avg_n2, avg_sin)


def mandel_sweep(config: SweepConfig) -> SweepResult:
    """Evolve |N,0> to half transfer for every N in ``config.n_values``.

    Runs whose population never reaches N/2 before the horizon are kept,
    sampled up to the horizon, and carry ``transfer.crossed == False``.
    """
    return SweepResult(config, tuple(_sweep_one(n, config) for n in config.n_values))


def classical_reference() -> float:
    """Sine of the classical inter-well phase (pi/2) during free tunneling.

    This is the large-N limit of <S12> at half transfer.
    """
    return 1.0


@dataclass(frozen=True)
class FringeParams:
    visibility: float = 1.0
    wavenumber: float = 2 * math.pi
    width: float = 3.0
    samples: int = 801
    half_width: float = 6.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise DomainError(f"visibility must lie in [0, 1], got {self.visibility}")
        if not (self.width > 0 and self.half_width > 0):
            raise DomainError("width and half_width must be > 0")
        if self.samples < 2:
            raise DomainError("samples must be >= 2")


def fringe_profile(phase: float, fp: FringeParams) -> tuple[np.ndarray, np.ndarray]:
    """Two-source interference density exp(-x^2/2w^2) * (1 + V cos(kx + phase))."""
    x = np.linspace(-fp.half_width, fp.half_width, fp.samples)
    envelope = np.exp(-(x**2) / (2 * fp.width**2))
    return x, envelope * (1 + fp.visibility * np.cos(fp.wavenumber * x + phase))


def format_number(x: float) -> str:
    """Single formatting path for every number written to a table."""
    return format(float(x), ".17e")


def write_records_csv(
    path: str | Path, columns: Sequence[str], rows: Iterable[Sequence[float]]
) -> Path:
    path = Path(path)
    lines = [",".join(columns)]
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _json_document(result: SweepResult) -> dict:
    runs = []
    for run in result.runs:
        runs.append(
            {
                "n_total": run.n_total,
                "crossed": run.transfer.crossed,
                "t_end": run.transfer.t,
                "rows": run.rows(),
            }
        )
    return {"meta": result.meta, "runs": runs}


def export(
    result: SweepResult, fmt: str, path: str | Path, prefix: str = "sweep"
) -> list[Path]:
    """Write ``result`` to ``path`` (a directory).

    ``csv`` writes one ``<prefix>_N<n>.csv`` per run; ``json`` writes a single
    ``<prefix>.json``. Returns the written paths.
    """
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if fmt == "csv":
        return [
            write_records_csv(out / f"{prefix}_N{run.n_total}.csv", result.columns, run.rows())
            for run in result.runs
        ]
    if fmt == "json":
        target = out / f"{prefix}.json"
        text = json.dumps(_json_document(result), separators=(",", ":"))
        try:
            target.write_text(text + "\n", encoding="ascii")
        except OSError as exc:
            raise OSError(f"cannot write {target}: {exc.strerror or exc}") from exc
        return [target]
    raise DomainError(f"unknown export format {fmt!r}")


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="ascii"))
