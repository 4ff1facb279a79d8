"""Two-mode bosonic Fock space at fixed total particle number.

Basis index ``k`` labels the state ``|n1 = k, n2 = N - k>``, so index 0 is
``|0, N>`` and index ``N`` is ``|N, 0>``. All matrices are dense complex128.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "DomainError",
    "FockBasis",
    "StateVector",
    "Operator",
    "make_basis",
    "fock_state",
    "hop_op",
    "number_op",
    "imbalance_op",
    "identity_op",
    "expectation",
    "variance",
    "commutator",
]

NORM_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FockBasis:
    n_total: int

    def __post_init__(self):
        if int(self.n_total) != self.n_total or self.n_total < 1:
            raise DomainError(f"n_total must be an integer >= 1, got {self.n_total!r}")

    @property
    def dim(self) -> int:
        return self.n_total + 1

    @property
    def n1(self) -> np.ndarray:
        """Occupation of well 1 for every basis index."""
        return np.arange(self.dim)

    @property
    def n2(self) -> np.ndarray:
        return self.n_total - np.arange(self.dim)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector over a :class:`FockBasis`."""

    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.shape != (self.basis.dim,):
            raise DomainError(
                f"amplitude vector has shape {amps.shape}, expected ({self.basis.dim},)"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalized: |psi|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, basis: FockBasis, amplitudes) -> "StateVector":
        """Build a state from an arbitrary nonzero vector, normalizing it."""
        amps = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(basis, amps / norm)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        _check_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense matrix acting on a fixed-N two-mode Fock space."""

    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        d = self.basis.dim
        if m.shape != (d, d):
            raise DomainError(f"matrix has shape {m.shape}, expected ({d}, {d})")
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.basis, self.matrix.conj().T)

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def unitarity_residual(self) -> float:
        eye = np.eye(self.basis.dim)
        m = self.matrix
        return float(
            max(
                np.max(np.abs(m @ m.conj().T - eye)),
                np.max(np.abs(m.conj().T @ m - eye)),
            )
        )

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_residual() <= tol

    def is_unitary(self, tol: float = 1e-12) -> bool:
        return self.unitarity_residual() <= tol

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Spectral decomposition ``(energies, vectors)`` of a Hermitian operator.

        Computed once per instance and then reused.
        """
        if not self.is_hermitian():
            raise DomainError("spectral decomposition requires a Hermitian operator")
        w, v = np.linalg.eigh(self.matrix)
        w.flags.writeable = False
        v.flags.writeable = False
        return w, v

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_same_basis(self.basis, other.basis)
            return Operator(self.basis, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _check_same_basis(self.basis, other.basis)
            return self.matrix @ other.amplitudes
        return NotImplemented

    def __add__(self, other: "Operator") -> "Operator":
        _check_same_basis(self.basis, other.basis)
        return Operator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_basis(self.basis, other.basis)
        return Operator(self.basis, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "Operator":
        if not np.isscalar(scalar):
            return NotImplemented
        return Operator(self.basis, scalar * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.basis, -self.matrix)


def _check_same_basis(a: FockBasis, b: FockBasis) -> None:
    if a != b:
        raise DomainError(f"basis mismatch: N={a.n_total} vs N={b.n_total}")


def make_basis(n_total: int) -> FockBasis:
    return FockBasis(n_total)


def fock_state(basis: FockBasis, n1: int) -> StateVector:
    """The Fock state with ``n1`` atoms in well 1 and the rest in well 2."""
    if not 0 <= n1 <= basis.n_total:
        raise DomainError(f"n1 must lie in [0, {basis.n_total}], got {n1}")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[n1] = 1.0
    return StateVector(basis, amps)


def hop_op(basis: FockBasis, direction: str) -> Operator:
    """Number-conserving hopping operator.

    ``"2->1"`` gives a1^dag a2 (moves one atom into well 1); ``"1->2"`` gives
    its adjoint a2^dag a1.
    """
    n = basis.n_total
    k = np.arange(n)
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    m[k + 1, k] = np.sqrt((k + 1) * (n - k))
    if direction == "2->1":
        return Operator(basis, m)
    if direction == "1->2":
        return Operator(basis, m.conj().T)
    raise DomainError(f"direction must be '1->2' or '2->1', got {direction!r}")


def number_op(basis: FockBasis, mode: int) -> Operator:
    if mode == 1:
        return Operator(basis, np.diag(basis.n1.astype(complex)))
    if mode == 2:
        return Operator(basis, np.diag(basis.n2.astype(complex)))
    raise DomainError(f"mode must be 1 or 2, got {mode!r}")


def imbalance_op(basis: FockBasis, normalized: bool = False) -> Operator:
    """Population imbalance W = N1 - N2, or W/N when ``normalized``."""
    w = (2 * basis.n1 - basis.n_total).astype(complex)
    if normalized:
        w = w / basis.n_total
    return Operator(basis, np.diag(w))


def identity_op(basis: FockBasis) -> Operator:
    return Operator(basis, np.eye(basis.dim, dtype=complex))


def expectation(op: Operator, state: StateVector) -> complex:
    _check_same_basis(op.basis, state.basis)
    psi = state.amplitudes
    return complex(np.vdot(psi, op.matrix @ psi))


def variance(op: Operator, state: StateVector, tol: float = 1e-12) -> float:
    """<A^2> - <A>^2 for Hermitian ``op``; tiny negative round-off is clamped to 0."""
    _check_same_basis(op.basis, state.basis)
    if not op.is_hermitian(tol):
        raise DomainError("variance requires a Hermitian operator")
    phi = op.matrix @ state.amplitudes
    mean = np.vdot(state.amplitudes, phi).real
    second = float(np.vdot(phi, phi).real)
    var = second - mean * mean
    if var < 0:
        if var < -tol * max(1.0, second):
            raise ArithmeticError(f"negative variance {var!r} beyond tolerance")
        var = 0.0
    return var


def commutator(a: Operator, b: Operator) -> Operator:
    _check_same_basis(a.basis, b.basis)
    return Operator(a.basis, a.matrix @ b.matrix - b.matrix @ a.matrix)
