"""Cosine and sine phase-difference operators on the fixed-N double-well space.

Two families are provided. The Carruthers-Nieto (CN) pair is Hermitian but
``C + iS`` is not unitary. Adding the corner terms that couple ``|N,0>`` and
``|0,N>`` gives the unitary Barnett-Pegg (BP) pair, for which
``E = C + iS`` is the cyclic shift ``k -> k-1 (mod N+1)`` of the basis.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .fock import (
    DomainError,
    FockBasis,
    Operator,
    StateVector,
    _check_same_basis,
    hop_op,
    imbalance_op,
)

__all__ = [
    "PhaseOperatorSet",
    "PhaseRecord",
    "RECORD_FIELDS",
    "cn_cos",
    "cn_sin",
    "edge_cos",
    "edge_sin",
    "bp_cos",
    "bp_sin",
    "exp_phase",
    "phase_operators",
    "phase_spectrum",
    "spectrum_deviation",
    "phase_observables",
    "observables_batch",
    "commutator_residuals",
    "uncertainty_check",
]


def _cn_lowering(basis: FockBasis) -> Operator:
    """(N1+1)^(-1/2) a1 a2^dag (N2+1)^(-1/2), assembled factor by factor."""
    inv1 = np.diag(1.0 / np.sqrt(basis.n1 + 1.0))
    inv2 = np.diag(1.0 / np.sqrt(basis.n2 + 1.0))
    a1_a2dag = hop_op(basis, "1->2").matrix
    return Operator(basis, inv1 @ a1_a2dag @ inv2)


def _unit_lowering(basis: FockBasis) -> np.ndarray:
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    k = np.arange(1, basis.dim)
    m[k - 1, k] = 1.0
    return m


def _cn_pair(basis: FockBasis) -> tuple[Operator, Operator]:
    lower = _cn_lowering(basis)
    # a1^dag (N1+1)^(-1/2) (N2+1)^(-1/2) a2 is exactly the adjoint of `lower`
    raise_ = lower.dag()
    # the number factors cancel to unit amplitudes on every allowed transition
    assert np.max(np.abs(lower.matrix - _unit_lowering(basis))) < 1e-12
    return lower, raise_


def cn_cos(basis: FockBasis) -> Operator:
    lower, raise_ = _cn_pair(basis)
    return 0.5 * (lower + raise_)


def cn_sin(basis: FockBasis) -> Operator:
    lower, raise_ = _cn_pair(basis)
    return (1 / 2j) * (lower - raise_)


def _corner(basis: FockBasis) -> Operator:
    """|N,0><0,N|, the transition from the last index to the first."""
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    m[basis.n_total, 0] = 1.0
    return Operator(basis, m)


def edge_cos(basis: FockBasis) -> Operator:
    c = _corner(basis)
    return 0.5 * (c + c.dag())


def edge_sin(basis: FockBasis) -> Operator:
    c = _corner(basis)
    return (1 / 2j) * (c - c.dag())


def bp_cos(basis: FockBasis) -> Operator:
    return cn_cos(basis) + edge_cos(basis)


def bp_sin(basis: FockBasis) -> Operator:
    return cn_sin(basis) + edge_sin(basis)


def exp_phase(basis: FockBasis) -> Operator:
    return bp_cos(basis) + 1j * bp_sin(basis)


@dataclass(frozen=True, eq=False)
class PhaseOperatorSet:
    basis: FockBasis
    cn_cos: Operator
    cn_sin: Operator
    edge_cos: Operator
    edge_sin: Operator
    bp_cos: Operator
    bp_sin: Operator
    exp_phase: Operator
    imbalance: Operator


@lru_cache(maxsize=256)
def phase_operators(basis: FockBasis) -> PhaseOperatorSet:
    """Build (once per basis) every operator needed for phase observables."""
    cc, cs = cn_cos(basis), cn_sin(basis)
    ec, es = edge_cos(basis), edge_sin(basis)
    c, s = cc + ec, cs + es
    return PhaseOperatorSet(
        basis=basis,
        cn_cos=cc,
        cn_sin=cs,
        edge_cos=ec,
        edge_sin=es,
        bp_cos=c,
        bp_sin=s,
        exp_phase=c + 1j * s,
        imbalance=imbalance_op(basis),
    )


def _wrap_phases(phases: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    phases = np.mod(phases, 2 * np.pi)
    phases[phases > 2 * np.pi - tol] = 0.0
    return np.sort(phases)


def phase_spectrum(basis: FockBasis) -> np.ndarray:
    """Sorted eigenphases of E in [0, 2*pi), obtained by diagonalization."""
    ops = phase_operators(basis)
    return _wrap_phases(np.angle(np.linalg.eigvals(ops.exp_phase.matrix)))


def spectrum_deviation(basis: FockBasis) -> float:
    """Largest distance of the E, C and S spectra from the roots-of-unity values."""
    ops = phase_operators(basis)
    m = np.arange(basis.dim)
    expected = 2 * np.pi * m / basis.dim
    dev = np.max(np.abs(phase_spectrum(basis) - expected))
    cos_eigs = np.linalg.eigvalsh(ops.bp_cos.matrix)
    sin_eigs = np.linalg.eigvalsh(ops.bp_sin.matrix)
    dev = max(dev, np.max(np.abs(cos_eigs - np.sort(np.cos(expected)))))
    dev = max(dev, np.max(np.abs(sin_eigs - np.sort(np.sin(expected)))))
    return float(dev)


@dataclass(frozen=True)
class PhaseRecord:
    """Phase and number observables of one state at time ``t``."""

    t: float
    mean_n2: float
    mean_cos: float
    mean_sin: float
    var_cos: float
    var_sin: float
    phase_fluct: float
    sql: float
    sigma_p: float
    sigma_w: float
    mean_w: float

    def as_row(self) -> tuple[float, ...]:
        return astuple(self)


RECORD_FIELDS: tuple[str, ...] = tuple(f.name for f in fields(PhaseRecord))


def _moments(psi: np.ndarray, op: Operator) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise mean and clamped variance of a Hermitian operator."""
    phi = psi @ op.matrix.T
    mean = np.einsum("ti,ti->t", psi.conj(), phi).real
    second = np.einsum("ti,ti->t", phi.conj(), phi).real
    var = second - mean**2
    bad = var < -1e-12 * np.maximum(1.0, second)
    if np.any(bad):
        raise ArithmeticError(f"negative variance {var[bad].min()!r}")
    return mean, np.maximum(var, 0.0)


def _mean(psi: np.ndarray, op: Operator) -> np.ndarray:
    return np.einsum("ti,ti->t", psi.conj(), psi @ op.matrix.T).real


def observables_batch(
    amplitudes: np.ndarray, ops: PhaseOperatorSet, times: Sequence[float]
) -> list[PhaseRecord]:
    """Phase observables for a stack of states, one row of ``amplitudes`` per time."""
    psi = np.atleast_2d(np.asarray(amplitudes, dtype=complex))
    basis = ops.basis
    n = basis.n_total
    if psi.shape[1] != basis.dim:
        raise DomainError(f"state dimension {psi.shape[1]} does not match N={n}")
    times = np.asarray(times, dtype=float)
    if times.shape != (psi.shape[0],):
        raise DomainError("need exactly one time per state")

    mean_c, var_c = _moments(psi, ops.bp_cos)
    mean_s, var_s = _moments(psi, ops.bp_sin)
    mean_w, var_w = _moments(psi, ops.imbalance)
    mean_c0 = _mean(psi, ops.edge_cos)
    mean_s0 = _mean(psi, ops.edge_sin)
    prob = np.abs(psi) ** 2
    mean_n2 = prob @ basis.n2.astype(float)

    fluct2 = var_c + var_s
    sql = np.hypot(mean_s - (n + 1) * mean_s0, mean_c - (n + 1) * mean_c0) / n
    sigma_p = fluct2 - sql
    sigma_w = var_w / n**2 - sql

    cols = zip(
        times, mean_n2, mean_c, mean_s, var_c, var_s,
        np.sqrt(fluct2), sql, sigma_p, sigma_w, mean_w,
    )
    return [PhaseRecord(*map(float, row)) for row in cols]


def phase_observables(
    state: StateVector, ops: PhaseOperatorSet, t: float = 0.0
) -> PhaseRecord:
    _check_same_basis(state.basis, ops.basis)
    return observables_batch(state.amplitudes[None, :], ops, [t])[0]


class CommutatorResiduals(NamedTuple):
    cos_w: float
    sin_w: float
    cos_sin: float

    def max(self) -> float:
        return max(self)


def commutator_residuals(basis: FockBasis) -> CommutatorResiduals:
    """Max-norm violations of the three C/S/W commutation relations."""
    ops = phase_operators(basis)
    c, s, w = ops.bp_cos.matrix, ops.bp_sin.matrix, ops.imbalance.matrix
    c0, s0 = ops.edge_cos.matrix, ops.edge_sin.matrix
    n1 = basis.n_total + 1

    def comm(a, b):
        return a @ b - b @ a

    r1 = comm(c, w) - 2j * (s - n1 * s0)
    r2 = comm(s, w) + 2j * (c - n1 * c0)
    r3 = comm(c, s)
    return CommutatorResiduals(*(float(np.max(np.abs(r))) for r in (r1, r2, r3)))


class UncertaintyResult(NamedTuple):
    cos_holds: bool
    sin_holds: bool
    cos_slack: float
    sin_slack: float


def uncertainty_check(
    state: StateVector, ops: PhaseOperatorSet, tol: float = 1e-12
) -> UncertaintyResult:
    """Check dC*dW >= |<S> - (N+1)<S0>| and dS*dW >= |<C> - (N+1)<C0>|."""
    _check_same_basis(state.basis, ops.basis)
    psi = state.amplitudes[None, :]
    n1 = ops.basis.n_total + 1
    mean_c, var_c = _moments(psi, ops.bp_cos)
    mean_s, var_s = _moments(psi, ops.bp_sin)
    _, var_w = _moments(psi, ops.imbalance)
    mean_c0 = _mean(psi, ops.edge_cos)
    mean_s0 = _mean(psi, ops.edge_sin)
    dw = np.sqrt(var_w[0])
    slack_c = float(np.sqrt(var_c[0]) * dw - abs(mean_s[0] - n1 * mean_s0[0]))
    slack_s = float(np.sqrt(var_s[0]) * dw - abs(mean_c[0] - n1 * mean_c0[0]))
    return UncertaintyResult(slack_c >= -tol, slack_s >= -tol, slack_c, slack_s)
