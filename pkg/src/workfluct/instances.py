"""Seeded random instances for property checks and verification batches.

Every generator takes a ``numpy.random.Generator``; callers derive it from a
recorded integer seed so batches are reproducible.
"""
from __future__ import annotations

import numpy as np

from .core import DensityMatrix, HamiltonianSpec, UnitarySpec, validate_density


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for instance ``stream`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def ginibre(d: int, rng: np.random.Generator, cols: int | None = None) -> np.ndarray:
    cols = d if cols is None else cols
    return (rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))) / np.sqrt(2)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix (phase-fixed)."""
    q, r = np.linalg.qr(ginibre(d, rng))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    g = ginibre(d, rng, rank)
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real)


def random_pure(d: int, rng: np.random.Generator) -> DensityMatrix:
    return random_density(d, rng, rank=1)


def random_hamiltonian(d: int, rng: np.random.Generator, width: float = 1.0) -> HamiltonianSpec:
    """Levels uniform in ``[0, width)`` with a Haar-random eigenbasis."""
    return HamiltonianSpec(rng.uniform(0.0, width, d), random_unitary(d, rng))


def random_diagonal_hamiltonian(d: int, rng: np.random.Generator, width: float = 1.0) -> HamiltonianSpec:
    return HamiltonianSpec.from_energies(rng.uniform(0.0, width, d))


def random_projector(d: int, rng: np.random.Generator, rank: int = 1) -> np.ndarray:
    v = random_unitary(d, rng)[:, :rank]
    return v @ v.conj().T


def random_drive(d: int, rng: np.random.Generator) -> UnitarySpec:
    return UnitarySpec(explicit=random_unitary(d, rng))


def state_diagonal_in(h: HamiltonianSpec, rng: np.random.Generator) -> DensityMatrix:
    """Random state with no coherence in the eigenbasis of ``h``."""
    p = rng.dirichlet(np.ones(h.dim))
    v = h.eigenvectors
    return validate_density((v * p) @ v.conj().T)
