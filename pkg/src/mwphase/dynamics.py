"""Two-mode double-well Hamiltonian and exact propagation (hbar = 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .fock import (
    DomainError,
    FockBasis,
    Operator,
    StateVector,
    _check_same_basis,
    fock_state,
    hop_op,
)
from .phase import PhaseOperatorSet, PhaseRecord, observables_batch

__all__ = [
    "WellParams",
    "TrajectoryPoint",
    "TransferTime",
    "hamiltonian",
    "evolve",
    "evolve_many",
    "half_transfer_time",
    "sample_times",
    "trajectory",
]


@dataclass(frozen=True)
class WellParams:
    """Tunneling ``j``, on-site interaction ``u`` and inter-well bias ``tilt``.

    Times are measured in units of 1/j.
    """

    j: float = 1.0
    u: float = 0.0
    tilt: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.j) and self.j > 0):
            raise DomainError(f"tunneling j must be finite and > 0, got {self.j!r}")
        for name in ("u", "tilt"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def noninteracting_symmetric(self) -> bool:
        return self.u == 0 and self.tilt == 0

    @property
    def rabi_half_time(self) -> float:
        """pi/(4j): the half-transfer time without interaction or bias."""
        return math.pi / (4 * self.j)


def hamiltonian(basis: FockBasis, p: WellParams) -> Operator:
    """H = J(a1^dag a2 + a2^dag a1) + U/2 sum_i n_i(n_i - 1) + tilt/2 (n1 - n2).

    The positive hopping sign makes <S12> approach +1 at half transfer
    from |N,0>. Flipping it leaves populations unchanged and reverses the
    sign of <S12>.
    """
    hop = hop_op(basis, "2->1").matrix
    n1 = basis.n1.astype(float)
    n2 = basis.n2.astype(float)
    diag = 0.5 * p.u * (n1 * (n1 - 1) + n2 * (n2 - 1)) + 0.5 * p.tilt * (n1 - n2)
    return Operator(basis, p.j * (hop + hop.conj().T) + np.diag(diag))


def evolve_many(h: Operator, state0: StateVector, times) -> np.ndarray:
    """Amplitudes exp(-iHt)|psi0> for every t, stacked as rows."""
    _check_same_basis(h.basis, state0.basis)
    energies, vecs = h.eigh
    coeffs = vecs.conj().T @ state0.amplitudes
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phases = np.exp(-1j * np.outer(times, energies))
    amps = (phases * coeffs) @ vecs.T
    # t = 0 is the identity; skip the eigenbasis round trip
    amps[times == 0] = state0.amplitudes
    return amps


def evolve(h: Operator, state0: StateVector, t: float) -> StateVector:
    if t == 0:
        _check_same_basis(h.basis, state0.basis)
        if not h.is_hermitian():
            raise DomainError("evolution requires a Hermitian Hamiltonian")
        return state0
    amps = evolve_many(h, state0, [t])[0]
    # renormalize away round-off only; the propagator is unitary
    return StateVector(h.basis, amps / np.linalg.norm(amps))


class TransferTime(NamedTuple):
    """Outcome of the half-transfer search.

    ``t`` is the crossing time, or the horizon when ``crossed`` is False;
    ``max_n2`` is the largest <N2> seen on the search grid.
    """

    t: float
    crossed: bool
    max_n2: float


def half_transfer_time(
    p: WellParams,
    basis: FockBasis,
    horizon: float | None = None,
    samples: int = 200,
    rtol: float = 1e-9,
) -> TransferTime:
    """First time at which <N2>(t) reaches N/2 starting from |N,0>.

    Without interaction and bias this is pi/(4j) exactly. Otherwise <N2> is
    scanned on a grid of step (pi/4j)/samples up to ``horizon`` (default
    2*pi/j) and the first crossing is bisected.
    """
    if p.noninteracting_symmetric:
        return TransferTime(p.rabi_half_time, True, basis.n_total / 2)

    if horizon is None:
        horizon = 8 * p.rabi_half_time
    h = hamiltonian(basis, p)
    psi0 = fock_state(basis, basis.n_total)
    target = basis.n_total / 2
    n2 = basis.n2.astype(float)

    def excess(t):
        amps = evolve_many(h, psi0, [t])[0]
        return float(np.abs(amps) ** 2 @ n2) - target

    grid = sample_times(p.rabi_half_time / samples, horizon)
    pops = np.abs(evolve_many(h, psi0, grid)) ** 2 @ n2
    above = np.nonzero(pops >= target)[0]
    if above.size == 0:
        return TransferTime(float(horizon), False, float(pops.max()))
    i = int(above[0])
    hi = float(grid[i])
    if excess(hi) == 0.0:
        return TransferTime(hi, True, float(pops[: i + 1].max()))
    lo = float(grid[i - 1])
    t = bisect(excess, lo, hi, xtol=rtol * hi, rtol=rtol)
    return TransferTime(float(t), True, float(pops[: i + 1].max()))


def sample_times(dt: float, t_end: float) -> np.ndarray:
    """0, dt, 2dt, ... up to t_end, with t_end appended when off-grid."""
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if not t_end >= 0:
        raise DomainError(f"t_end must be >= 0, got {t_end!r}")
    eps = 1e-9
    n = int(math.floor(t_end / dt + eps))
    times = np.arange(n + 1) * dt
    if t_end - times[-1] > eps * dt:
        times = np.append(times, t_end)
    else:
        times[-1] = t_end
    return times


@dataclass(frozen=True, eq=False)
class TrajectoryPoint:
    t: float
    state: StateVector
    record: PhaseRecord


def trajectory(
    h: Operator,
    state0: StateVector,
    dt: float,
    t_end: float,
    ops: PhaseOperatorSet,
) -> list[TrajectoryPoint]:
    _check_same_basis(h.basis, ops.basis)
    times = sample_times(dt, t_end)
    amps = evolve_many(h, state0, times)
    amps /= np.linalg.norm(amps, axis=1, keepdims=True)
    records = observables_batch(amps, ops, times)
    return [
        TrajectoryPoint(float(t), StateVector(h.basis, a), r)
        for t, a, r in zip(times, amps, records)
    ]
