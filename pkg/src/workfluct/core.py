"""Dense linear algebra and state primitives for small Hilbert spaces.

All operator-valued objects are plain complex ``numpy`` arrays wrapped in
frozen dataclasses; the arrays are marked read-only on construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from ._tol import tol
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    NotProjector,
    NotUnitary,
    NotUnitTrace,
    ValidationError,
)

__all__ = [
    "DensityMatrix", "HamiltonianSpec", "UnitarySpec", "ThermalConfig",
    "as_matrix", "is_hermitian", "is_unitary", "is_projector",
    "validate_density", "pure_state", "eigh", "gibbs_state",
    "partition_function", "dephase", "evolve", "time_ordered_unitary",
    "commutator_norm", "degeneracy_tol", "PAULI_X", "PAULI_Y", "PAULI_Z",
    "HADAMARD",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex array, raising if the shape is wrong."""
    if isinstance(m, DensityMatrix):
        return m.matrix
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def _check_same_dim(*mats) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def hermitian_deviation(m) -> float:
    a = as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, atol: float = 1e-10) -> bool:
    return hermitian_deviation(m) <= atol


def is_unitary(m, atol: float = 1e-9) -> bool:
    a = as_matrix(m)
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))) <= atol


def is_projector(m, atol: float = 1e-10) -> bool:
    a = as_matrix(m)
    return is_hermitian(a, atol) and float(np.max(np.abs(a @ a - a))) <= atol


def require_projector(m, name: str = "operator") -> np.ndarray:
    a = as_matrix(m)
    if not is_projector(a, tol(1e-10)):
        raise NotProjector(f"{name} is not a projector within {tol(1e-10):g}")
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state. Build with :func:`validate_density`."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def validate_density(m) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity, in that order.

    Raises
    ------
    NotHermitian, NotUnitTrace, NotPositive
        The message reports the measured deviation.
    """
    a = as_matrix(m)
    dev = hermitian_deviation(a)
    if dev > tol(1e-10):
        raise NotHermitian(f"state not Hermitian: max |m - m^dagger| = {dev:.3e}")
    tr = np.trace(a)
    if abs(tr - 1) > tol(1e-10):
        raise NotUnitTrace(f"state trace {tr.real:.12g} deviates from 1 by {abs(tr - 1):.3e}")
    lam = float(np.linalg.eigvalsh((a + a.conj().T) / 2)[0])
    if lam < -tol(1e-10):
        raise NotPositive(f"state has negative eigenvalue {lam:.6g}")
    return DensityMatrix(a)


def pure_state(psi) -> DensityMatrix:
    v = np.asarray(psi, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()))


def degeneracy_tol(energies) -> float:
    e = np.asarray(energies, dtype=float)
    return 1e-9 * max(1.0, float(np.max(np.abs(e)))) if e.size else 1e-9


@dataclass(frozen=True)
class HamiltonianSpec:
    """Spectral data of a Hamiltonian: sorted energies and eigenvector columns."""

    energies: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float).ravel()
        v = np.asarray(self.eigenvectors, dtype=complex)
        if v.ndim != 2 or v.shape != (e.size, e.size):
            raise DimensionMismatch(
                f"need {e.size}x{e.size} eigenvector matrix, got {v.shape}")
        dev = float(np.max(np.abs(v.conj().T @ v - np.eye(e.size))))
        if dev > tol(1e-10):
            raise NotUnitary(f"eigenvectors not orthonormal: deviation {dev:.3e}")
        order = np.argsort(e, kind="stable")
        e = e[order]
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "eigenvectors", _frozen(v[:, order]))

    @classmethod
    def from_energies(cls, energies: Sequence[float], eigenvectors=None) -> "HamiltonianSpec":
        e = np.asarray(energies, dtype=float)
        if eigenvectors is None:
            eigenvectors = np.eye(e.size)
        return cls(e, eigenvectors)

    @classmethod
    def from_matrix(cls, m) -> "HamiltonianSpec":
        return eigh(m)

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def matrix(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.energies) @ v.conj().T

    @property
    def degenerate(self) -> bool:
        return bool(np.any(np.diff(self.energies) <= degeneracy_tol(self.energies)))

    def projector(self, i: int) -> np.ndarray:
        """Rank-one projector onto eigenvector ``i``."""
        v = self.eigenvectors[:, i]
        return np.outer(v, v.conj())

    def projectors(self) -> list[np.ndarray]:
        return [self.projector(i) for i in range(self.dim)]

    def eigenspace_blocks(self) -> list[list[int]]:
        """Group level indices whose energies are degenerate."""
        thr = degeneracy_tol(self.energies)
        blocks: list[list[int]] = []
        for k, e in enumerate(self.energies):
            if blocks and e - self.energies[blocks[-1][-1]] <= thr:
                blocks[-1].append(k)
            else:
                blocks.append([k])
        return blocks

    def eigenspace_projectors(self) -> list[np.ndarray]:
        out = []
        for block in self.eigenspace_blocks():
            v = self.eigenvectors[:, block]
            out.append(v @ v.conj().T)
        return out


def eigh(m) -> HamiltonianSpec:
    """Spectral decomposition of a Hermitian matrix.

    >>> eigh([[0, 1], [1, 0]]).energies
    array([-1.,  1.])
    """
    a = as_matrix(m)
    dev = hermitian_deviation(a)
    if dev > tol(1e-9):
        raise NotHermitian(f"matrix not Hermitian: max deviation {dev:.3e}")
    try:
        w, v = np.linalg.eigh((a + a.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc
    return HamiltonianSpec(w, v)


@dataclass(frozen=True)
class ThermalConfig:
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValidationError(f"beta must be positive and finite, got {self.beta}")


def _log_weights(h: HamiltonianSpec, t: ThermalConfig) -> np.ndarray:
    return -t.beta * h.energies


def partition_function(h: HamiltonianSpec, t: ThermalConfig) -> float:
    """Z = sum_i exp(-beta E_i), evaluated through log-sum-exp."""
    return float(np.exp(logsumexp(_log_weights(h, t))))


def gibbs_state(h: HamiltonianSpec, t: ThermalConfig) -> DensityMatrix:
    lw = _log_weights(h, t)
    p = np.exp(lw - logsumexp(lw))
    v = h.eigenvectors
    return DensityMatrix((v * p) @ v.conj().T)


def dephase(rho, h: HamiltonianSpec) -> DensityMatrix:
    """Remove coherences between distinct eigenspaces of ``h``."""
    r = as_matrix(rho)
    _check_same_dim(r, h.eigenvectors)
    out = sum(P @ r @ P for P in h.eigenspace_projectors())
    return DensityMatrix(out)


@dataclass(frozen=True)
class UnitarySpec:
    """Driving unitary: either explicit, or a piecewise-constant schedule.

    ``schedule`` is a tuple of ``(hamiltonian, duration)`` pairs in
    chronological order. An empty schedule needs ``size`` and stands for
    the identity.
    """

    explicit: np.ndarray | None = None
    schedule: tuple = ()
    size: int | None = None

    def __post_init__(self):
        if self.explicit is not None and self.schedule:
            raise ValidationError("give either an explicit unitary or a schedule, not both")
        if self.explicit is not None:
            u = as_matrix(self.explicit)
            if not is_unitary(u, tol(1e-9)):
                raise NotUnitary("explicit drive is not unitary within 1e-9")
            object.__setattr__(self, "explicit", _frozen(u))
            return
        segs = []
        for h, dt in self.schedule:
            h = as_matrix(h)
            if not dt > 0:
                raise ValidationError(f"segment duration must be positive, got {dt}")
            segs.append((_frozen(h), float(dt)))
        if segs:
            _check_same_dim(*(h for h, _ in segs))
        elif self.size is None:
            raise ValidationError("empty schedule needs an explicit size")
        object.__setattr__(self, "schedule", tuple(segs))

    @classmethod
    def identity(cls, d: int) -> "UnitarySpec":
        return cls(explicit=np.eye(d))

    @property
    def dim(self) -> int:
        if self.explicit is not None:
            return self.explicit.shape[0]
        if not self.schedule:
            return int(self.size)
        return self.schedule[0][0].shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return time_ordered_unitary(self)


def _expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    spec = eigh(h)
    v = spec.eigenvectors
    return (v * np.exp(-1j * spec.energies * t)) @ v.conj().T


def time_ordered_unitary(u: UnitarySpec) -> np.ndarray:
    """Ordered product of segment propagators, later segments on the left."""
    if u.explicit is not None:
        return np.array(u.explicit)
    out = np.eye(u.dim, dtype=complex)
    for h, dt in u.schedule:
        out = _expm_hermitian(h, dt) @ out
    return out


def evolve(rho, u) -> DensityMatrix:
    r = as_matrix(rho)
    U = u.matrix if isinstance(u, UnitarySpec) else as_matrix(u)
    _check_same_dim(r, U)
    if not is_unitary(U, tol(1e-9)):
        raise NotUnitary("evolution operator is not unitary within 1e-9")
    return DensityMatrix(U @ r @ U.conj().T)


def commutator_norm(a, b) -> float:
    """Largest singular value of ``ab - ba``."""
    A, B = as_matrix(a), as_matrix(b)
    _check_same_dim(A, B)
    return float(np.linalg.norm(A @ B - B @ A, ord=2))
