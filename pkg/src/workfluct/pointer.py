"""Discretized Gaussian-pointer model of the weak-to-strong measurement.

The pointer starts in a Gaussian of spread ``s``; coupling to a projector
``E`` shifts it by one unit on the ``E`` branch. The shift is applied
analytically to the Gaussian amplitudes, so no momentum operator is ever
discretized. Integrals over the pointer position use the composite
trapezoid rule on a uniform grid, which makes these routines an independent
numerical check of the closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, require_projector
from .errors import DimensionMismatch, PostselectionImpossible, ResolutionTooCoarse, ValidationError
from .work import decoherence_factor

DEFAULT_POINTS = 4096


@dataclass(frozen=True)
class PointerConfig:
    s: float
    x_min: float
    x_max: float
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.s > 0:
            raise ValidationError(f"pointer spread must be positive, got {self.s}")
        if self.n_points < 2:
            raise ValidationError("grid needs at least two points")
        if not (self.x_min < 0 and self.x_max > 1):
            raise ValidationError("grid must cover both branch centres 0 and 1")
        if self.spacing > self.s / 8:
            raise ResolutionTooCoarse(
                f"grid spacing {self.spacing:.4g} exceeds s/8 = {self.s / 8:.4g}")

    @classmethod
    def default(cls, s: float, n_points: int = DEFAULT_POINTS) -> "PointerConfig":
        """Grid covering ten spreads beyond both branch centres."""
        return cls(s, -10 * s - 1, 10 * s + 2, n_points)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self, factor: int = 2) -> "PointerConfig":
        return PointerConfig(self.s, self.x_min, self.x_max, self.n_points * factor)


@dataclass(frozen=True)
class PointerOracleResult:
    q_j: float
    mean_x: float
    x: np.ndarray
    density: np.ndarray
    s: float

    @property
    def per_x_density(self):
        return list(zip(self.x.tolist(), self.density.tolist()))


def gaussian_amplitude(s: float, x):
    """Pointer wavefunction ``(pi s^2)^(-1/4) exp(-x^2 / (2 s^2))``."""
    x = np.asarray(x, dtype=float)
    return (np.pi * s * s) ** -0.25 * np.exp(-x * x / (2 * s * s))


def kraus_nx(e, s: float, x):
    """Kraus operator ``G_s(x - 1) E + G_s(x) (1 - E)`` for pointer reading ``x``.

    Vectorized over ``x``: an array input returns a stack of shape
    ``(len(x), d, d)``.
    """
    E = require_projector(e, "E")
    Et = np.eye(E.shape[0]) - E
    x = np.asarray(x, dtype=float)
    a = gaussian_amplitude(s, x - 1)[..., None, None]
    b = gaussian_amplitude(s, x)[..., None, None]
    return a * E + b * Et


def _dagger(stack: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(stack, -1, -2))


def _inputs(rho, e, pi):
    r = as_matrix(rho)
    E = require_projector(e, "E")
    P = require_projector(pi, "Pi")
    if not r.shape == E.shape == P.shape:
        raise DimensionMismatch(f"shapes {r.shape}, {E.shape}, {P.shape} differ")
    return r, E, P


def postselected_density(rho, e, pi, x, s: float) -> np.ndarray:
    """``tr(Pi N_x rho N_x^dagger)`` at every grid point."""
    N = kraus_nx(e, s, x)
    out = N @ as_matrix(rho) @ _dagger(N)
    return np.real(np.einsum("ij,xji->x", as_matrix(pi), out))


def postselected_pointer_mean(rho, e, pi, cfg: PointerConfig | float) -> PointerOracleResult:
    """Grid simulation of the postselected pointer: probability and mean shift."""
    if not isinstance(cfg, PointerConfig):
        cfg = PointerConfig.default(float(cfg))
    r, E, P = _inputs(rho, e, pi)
    x = cfg.grid()
    dens = postselected_density(r, E, P, x, cfg.s)
    q = float(np.trapezoid(dens, x))
    if q < 1e-14:
        raise PostselectionImpossible(f"postselection probability {q:.3e} is zero")
    mean = float(np.trapezoid(x * dens, x)) / q
    return PointerOracleResult(q, mean, x, dens, cfg.s)


def closed_form_pointer_mean(rho, e, pi, s: float) -> tuple[float, float]:
    """Exact ``(q_j, <X>_j)`` of the postselected pointer."""
    r, E, P = _inputs(rho, e, pi)
    Et = np.eye(E.shape[0]) - E
    r11 = np.trace(P @ E @ r @ E).real
    r10 = np.trace(P @ E @ r @ Et).real
    c = decoherence_factor(s)
    q = np.trace(P @ r).real + 2 * np.expm1(-1.0 / (4 * s * s)) * r10
    if q < 1e-14:
        raise PostselectionImpossible(f"postselection probability {q:.3e} is zero")
    return float(q), float((r11 + c * r10) / q)


def grid_povm_integral(e, cfg: PointerConfig, weight=None) -> np.ndarray:
    """Trapezoid integral of ``N_x^dagger W N_x`` (``W`` defaults to identity)."""
    E = require_projector(e, "E")
    W = np.eye(E.shape[0]) if weight is None else as_matrix(weight)
    x = cfg.grid()
    N = kraus_nx(E, cfg.s, x)
    integrand = _dagger(N) @ W @ N
    return np.trapezoid(integrand, x, axis=0)


def grid_negative_half(rho, e, pi, s: float, n_points: int = 65537) -> float:
    """Trapezoid value of ``integral_{-inf}^0 tr(N_x^dagger Pi N_x rho) dx``.

    Uses its own grid on ``[-10 s - 1, 0]`` so the origin is a node.
    """
    r, E, P = _inputs(rho, e, pi)
    x = np.linspace(-10 * s - 1, 0.0, n_points)
    return float(np.trapezoid(postselected_density(r, E, P, x, s), x))


def pointer_csv(res: PointerOracleResult) -> str:
    lines = ["x,density"]
    lines += [f"{x!r},{d!r}" for x, d in zip(res.x.tolist(), res.density.tolist())]
    return "\n".join(lines) + "\n"


def pointer_header(res: PointerOracleResult) -> dict:
    return {"s": res.s, "q_j": res.q_j, "mean_x": res.mean_x}
