"""Work statistics of a driven protocol.

A protocol is the triple (initial Hamiltonian, drive, final Hamiltonian).
Distributions are kept per level pair ``(i, j)`` with work ``E'_j - E_i``;
merging equal work values is a separate presentation step
(:func:`merge_by_work`).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from ._tol import tol
from .core import HamiltonianSpec, UnitarySpec, as_matrix
from .errors import DegenerateSpectrum, DimensionMismatch, ValidationError

TPM = "TPM"
WEAK = "WEAK"
FINITE_S = "FINITE_S"
KINDS = (TPM, WEAK, FINITE_S)


@dataclass(frozen=True)
class ProtocolSpec:
    h_initial: HamiltonianSpec
    drive: UnitarySpec
    h_final: HamiltonianSpec
    unitary: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = {self.h_initial.dim, self.drive.dim, self.h_final.dim}
        if len(dims) != 1:
            raise DimensionMismatch(f"protocol dimensions differ: {sorted(dims)}")
        u = self.drive.matrix
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def dim(self) -> int:
        return self.h_initial.dim

    def initial_projector(self, i: int) -> np.ndarray:
        return self.h_initial.projector(i)

    def postselection(self, j: int) -> np.ndarray:
        """Heisenberg-picture final projector ``U^dagger |j'><j'| U``."""
        v = self.unitary.conj().T @ self.h_final.eigenvectors[:, j]
        return np.outer(v, v.conj())

    def work(self, i: int, j: int) -> float:
        return float(self.h_final.energies[j] - self.h_initial.energies[i])

    def pairs(self):
        d = self.dim
        return [(i, j) for i in range(d) for j in range(d)]

    def energy_scale(self) -> float:
        e = np.concatenate([self.h_initial.energies, self.h_final.energies])
        return max(1.0, float(np.max(np.abs(e))))


def default_merge_tol(p: ProtocolSpec) -> float:
    return 1e-9 * p.energy_scale()


@dataclass(frozen=True)
class WorkPoint:
    w: float
    i: int
    j: int
    value: float
    pairs: tuple = ()


@dataclass(frozen=True)
class WorkDistribution:
    """Work (quasi-)distribution.

    ``kind`` is one of ``"TPM"``, ``"WEAK"``, ``"FINITE_S"``; ``s`` is set only
    for the latter. ``basis`` records the initial eigenbasis used when a
    degenerate initial Hamiltonian was accepted.
    """

    points: tuple
    kind: str
    s: float | None = None
    aggregated: bool = False
    basis: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown distribution kind {self.kind!r}")
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def values(self) -> np.ndarray:
        return np.array([pt.value for pt in self.points], dtype=float)

    @property
    def works(self) -> np.ndarray:
        return np.array([pt.w for pt in self.points], dtype=float)

    def total(self) -> float:
        return float(np.sum(self.values))

    def as_matrix(self) -> np.ndarray:
        """Values arranged as ``[i, j]``; only for unmerged distributions."""
        if self.aggregated:
            raise ValidationError("merged distribution has no (i, j) matrix form")
        d = int(round(np.sqrt(len(self.points))))
        out = np.zeros((d, d))
        for pt in self.points:
            out[pt.i, pt.j] = pt.value
        return out

    def __len__(self):
        return len(self.points)


class WorkSupport(NamedTuple):
    groups: list
    matching_gaps: bool


def work_support(p: ProtocolSpec, merge_tol: float | None = None) -> WorkSupport:
    """All work values ``E'_j - E_i`` with the level pairs that produce them.

    Pairs whose work values lie within ``merge_tol`` of their neighbour (after
    sorting) share one group; ``matching_gaps`` is set when any group holds
    more than one pair.
    """
    merge_tol = default_merge_tol(p) if merge_tol is None else merge_tol
    items = sorted((p.work(i, j), (i, j)) for i, j in p.pairs())
    groups: list = []
    last_w = None
    for w, pair in items:
        if groups and w - last_w <= merge_tol:
            groups[-1][1].append(pair)
        else:
            groups.append((w, [pair]))
        last_w = w
    return WorkSupport(groups, any(len(g[1]) > 1 for g in groups))


@dataclass(frozen=True)
class PovmElement:
    matrix: np.ndarray
    label: tuple


def tpm_povm(p: ProtocolSpec) -> list[PovmElement]:
    """Elements ``|<j'|U|i>|^2 |i><i|``, one per level pair."""
    amp = p.h_final.eigenvectors.conj().T @ p.unitary @ p.h_initial.eigenvectors
    trans = np.abs(amp) ** 2  # [j, i]
    return [PovmElement(trans[j, i] * p.initial_projector(i), (i, j)) for i, j in p.pairs()]


def _check_state(rho, p: ProtocolSpec) -> np.ndarray:
    r = as_matrix(rho)
    if r.shape[0] != p.dim:
        raise DimensionMismatch(f"state dimension {r.shape[0]} != protocol dimension {p.dim}")
    return r


def _require_nondegenerate(p: ProtocolSpec, allow_degenerate: bool):
    if p.h_initial.degenerate and not allow_degenerate:
        raise DegenerateSpectrum(
            "initial Hamiltonian is degenerate; pass allow_degenerate=True to use "
            "its stored eigenbasis level by level")


def _build(p: ProtocolSpec, values, kind, s=None, allow_degenerate=False) -> WorkDistribution:
    pts = [WorkPoint(p.work(i, j), i, j, float(values[i, j])) for i, j in p.pairs()]
    basis = None
    if allow_degenerate and p.h_initial.degenerate:
        basis = np.array(p.h_initial.eigenvectors)
    return WorkDistribution(tuple(pts), kind, s=s, basis=basis)


def _tpm_values(r: np.ndarray, p: ProtocolSpec) -> np.ndarray:
    V0 = p.h_initial.eigenvectors
    pi = np.real(np.einsum("ki,kl,li->i", V0.conj(), r, V0))
    amp = p.h_final.eigenvectors.conj().T @ p.unitary @ V0
    return pi[:, None] * (np.abs(amp) ** 2).T  # [i, j]: p_i p_{j|i}


def tpm_distribution(rho, p: ProtocolSpec) -> WorkDistribution:
    return _build(p, _tpm_values(_check_state(rho, p), p), TPM)


def weak_distribution(rho, p: ProtocolSpec, allow_degenerate: bool = False) -> WorkDistribution:
    """Margenau-Hill quasi-distribution ``Re tr(rho E_i Pi_j)``.

    Negative entries are kept as they are.
    """
    _require_nondegenerate(p, allow_degenerate)
    r = _check_state(rho, p)
    vals = np.empty((p.dim, p.dim))
    for i, j in p.pairs():
        vals[i, j] = np.trace(r @ p.initial_projector(i) @ p.postselection(j)).real
    return _build(p, vals, WEAK, allow_degenerate=allow_degenerate)


def decoherence_factor(s: float) -> float:
    """Overlap ``exp(-1/(4 s^2))`` of the two pointer branches."""
    return float(np.exp(-1.0 / (4.0 * s * s)))


def finite_s_distribution(rho, p: ProtocolSpec, s: float,
                          allow_degenerate: bool = False) -> WorkDistribution:
    """Postselected pointer shift for a Gaussian pointer of spread ``s``.

    Entry ``(i, j)`` is ``tr(Pi_j E rho E) + exp(-1/(4 s^2)) Re tr(Pi_j E rho E_perp)``
    with ``E = |i><i|``. Small ``s`` recovers the TPM distribution and large
    ``s`` the weak one.
    """
    if not s > 0:
        raise ValidationError(f"pointer spread must be positive, got {s}")
    _require_nondegenerate(p, allow_degenerate)
    r = _check_state(rho, p)
    eye = np.eye(p.dim)
    coherent = np.empty((p.dim, p.dim))
    for i, j in p.pairs():
        E = p.initial_projector(i)
        coherent[i, j] = np.trace(p.postselection(j) @ E @ r @ (eye - E)).real
    # tr(Pi_j E rho E) is exactly the TPM entry p_i p_{j|i}
    vals = _tpm_values(r, p) + decoherence_factor(s) * coherent
    return _build(p, vals, FINITE_S, s=float(s), allow_degenerate=allow_degenerate)


def distribution(kind: str, rho, p: ProtocolSpec, s: float | None = None) -> WorkDistribution:
    kind = kind.upper()
    if kind == TPM:
        return tpm_distribution(rho, p)
    if kind == WEAK:
        return weak_distribution(rho, p)
    if kind == FINITE_S:
        if s is None:
            raise ValidationError("FINITE_S needs a pointer spread s")
        return finite_s_distribution(rho, p, s)
    raise ValidationError(f"unknown distribution kind {kind!r}")


def average_work(d: WorkDistribution) -> float:
    return float(np.sum(d.values * d.works))


def merge_by_work(d: WorkDistribution, merge_tol: float = 1e-9) -> WorkDistribution:
    """Sum points whose work values chain within ``merge_tol``.

    Each merged point carries the smallest work value of its group and lists
    its contributing ``(i, j)`` pairs.
    """
    pts = sorted(d.points, key=lambda pt: (pt.w, pt.i, pt.j))
    groups: list[list[WorkPoint]] = []
    for pt in pts:
        if groups and pt.w - groups[-1][-1].w <= merge_tol:
            groups[-1].append(pt)
        else:
            groups.append([pt])
    merged = []
    for g in groups:
        pairs = tuple(pair for pt in g for pair in (pt.pairs or ((pt.i, pt.j),)))
        value = float(np.sum([pt.value for pt in g]))
        merged.append(WorkPoint(g[0].w, g[0].i, g[0].j, value, pairs))
    return replace(d, points=tuple(merged), aggregated=True)


def check_normalized(d: WorkDistribution, atol: float = 1e-10) -> bool:
    return abs(d.total() - 1.0) <= tol(atol)
