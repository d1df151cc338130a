"""Free energies and checks of the fluctuation-theorem equalities."""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
from scipy.special import logsumexp

from ._tol import tol
from .core import HamiltonianSpec, ThermalConfig, as_matrix, gibbs_state
from .errors import NotAProbability, SingularGibbsState
from .instances import (
    random_density,
    random_drive,
    random_hamiltonian,
    rng_for,
)
from .work import TPM, WEAK, ProtocolSpec, WorkDistribution, average_work, distribution, tpm_distribution, weak_distribution

# Beyond this exponent e^{beta (E - E_min)} is no longer a safe double.
MAX_EXPONENT = 690.0


@dataclass(frozen=True)
class FtReport:
    lhs: float
    rhs: float
    residual: float
    rel_residual: float
    passed: bool
    upsilon: float | None = None
    thermal: bool = False
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def delta_f(h0: HamiltonianSpec, ht: HamiltonianSpec, t: ThermalConfig) -> float:
    """``-(1/beta) log(Z_final / Z_initial)``."""
    return float(-(logsumexp(-t.beta * ht.energies) - logsumexp(-t.beta * h0.energies)) / t.beta)


def exp_beta_work(d: WorkDistribution, t: ThermalConfig | float) -> float:
    beta = t.beta if isinstance(t, ThermalConfig) else float(t)
    return float(np.sum(d.values * np.exp(-beta * d.works)))


def is_thermal(rho, h0: HamiltonianSpec, t: ThermalConfig, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(as_matrix(rho) - gibbs_state(h0, t).matrix)) <= atol)


def _report(lhs, rhs, atol, scale, **extra) -> FtReport:
    res = lhs - rhs
    rel = abs(res) / abs(rhs) if rhs != 0 else float("inf")
    return FtReport(float(lhs), float(rhs), float(res), float(rel),
                    bool(abs(res) <= atol * scale), **extra)


def jarzynski_check(rho, p: ProtocolSpec, t: ThermalConfig, tolerance: float = 1e-10,
                    seed: int | None = None) -> FtReport:
    """TPM average of ``exp(-beta W)`` against ``exp(-beta dF)``.

    The equality is only claimed for thermal initial states; ``thermal`` in
    the report says whether ``rho`` is the initial Gibbs state.
    """
    lhs = exp_beta_work(tpm_distribution(rho, p), t)
    rhs = np.exp(-t.beta * delta_f(p.h_initial, p.h_final, t))
    return _report(lhs, rhs, tol(tolerance), abs(rhs),
                   thermal=is_thermal(rho, p.h_initial, t), seed=seed)


def inverse_gibbs(h: HamiltonianSpec, t: ThermalConfig) -> np.ndarray:
    """``gamma^{-1} = Z exp(beta H)``, built in the eigenbasis."""
    x = t.beta * h.energies
    if np.max(x) - np.min(x) > MAX_EXPONENT:
        raise SingularGibbsState(
            f"beta * energy spread {np.max(x) - np.min(x):.1f} exceeds {MAX_EXPONENT}")
    # Z e^{x_i} = sum_k e^{x_i - x_k}
    w = np.exp(logsumexp(-x) + x)
    v = h.eigenvectors
    return (v * w) @ v.conj().T


def upsilon(rho, p: ProtocolSpec, t: ThermalConfig) -> float:
    """``Re tr(U^dagger gamma_final U gamma_initial^{-1} rho)``."""
    U = p.unitary
    g_t = gibbs_state(p.h_final, t).matrix
    return float(np.trace(U.conj().T @ g_t @ U @ inverse_gibbs(p.h_initial, t) @ as_matrix(rho)).real)


def allahverdyan_check(rho, p: ProtocolSpec, t: ThermalConfig, tolerance: float = 1e-10,
                       seed: int | None = None) -> FtReport:
    """Weak-distribution average of ``exp(-beta W)`` against ``exp(-beta dF) * Upsilon``."""
    ups = upsilon(rho, p, t)
    lhs = exp_beta_work(weak_distribution(rho, p), t)
    rhs = np.exp(-t.beta * delta_f(p.h_initial, p.h_final, t)) * ups
    return _report(lhs, rhs, tol(tolerance), max(1.0, abs(rhs)), upsilon=ups,
                   thermal=is_thermal(rho, p.h_initial, t), seed=seed)


def energy_change(rho, p: ProtocolSpec) -> float:
    """``tr(U rho U^dagger H_final) - tr(rho H_initial)``."""
    r = as_matrix(rho)
    U = p.unitary
    return float(np.trace(U @ r @ U.conj().T @ p.h_final.matrix).real
                 - np.trace(r @ p.h_initial.matrix).real)


def average_work_check(rho, p: ProtocolSpec, kind: str = WEAK, tolerance: float = 1e-10,
                       s: float | None = None) -> tuple[float, float, bool]:
    lhs = average_work(distribution(kind, rho, p, s))
    rhs = energy_change(rho, p)
    return lhs, rhs, bool(abs(lhs - rhs) <= tol(tolerance))


def tail_bound_check(d: WorkDistribution, t: ThermalConfig, df: float,
                     x: float) -> tuple[float, float, bool]:
    """Probability of extracting ``x`` more work than ``-dF`` against ``exp(-beta x)``.

    ``prob`` is the weight of ``W < dF - x``. Markov's inequality applied to
    ``exp(-beta W)`` bounds it by ``exp(-beta x)`` whenever the Jarzynski
    equality holds. The opposite tail ``W > dF + x`` admits no such bound.
    """
    if d.kind != TPM or np.any(d.values < -1e-12):
        raise NotAProbability("tail bound needs a genuine (TPM) probability distribution")
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    prob = float(np.sum(d.values[d.works < df - x]))
    bound = float(np.exp(-t.beta * x))
    return prob, bound, prob <= bound + 1e-12


# ---------------------------------------------------------------- batches

BETA_RANGE = (0.1, 5.0)
DIM_RANGE = (2, 8)


def random_protocol(rng: np.random.Generator, d: int) -> ProtocolSpec:
    return ProtocolSpec(random_hamiltonian(d, rng), random_drive(d, rng), random_hamiltonian(d, rng))


def _instance(seed: int, suite: int, index: int):
    rng = rng_for(seed, suite, index)
    d = int(rng.integers(DIM_RANGE[0], DIM_RANGE[1] + 1))
    beta = float(rng.uniform(*BETA_RANGE))
    return rng, d, ThermalConfig(beta), random_protocol(rng, d)


def jarzynski_suite(n: int, seed: int, tolerance: float = 1e-10) -> list[dict]:
    """Thermal initial states; one row per instance."""
    rows = []
    for k in range(n):
        rng, d, t, p = _instance(seed, 1, k)
        rep = jarzynski_check(gibbs_state(p.h_initial, t), p, t, tolerance, seed=seed)
        rows.append(dict(suite="jarzynski", index=k, seed=seed, d=d, beta=t.beta,
                         lhs=rep.lhs, rhs=rep.rhs, residual=rep.residual,
                         rel_residual=rep.rel_residual, passed=rep.passed))
    return rows


def allahverdyan_suite(n: int, seed: int, tolerance: float = 1e-10) -> list[dict]:
    """Arbitrary initial states; every fourth instance is thermal."""
    rows = []
    for k in range(n):
        rng, d, t, p = _instance(seed, 2, k)
        rho = gibbs_state(p.h_initial, t) if k % 4 == 0 else random_density(d, rng)
        rep = allahverdyan_check(rho, p, t, tolerance, seed=seed)
        ok = rep.passed and (not rep.thermal or abs(rep.upsilon - 1) <= tol(1e-12))
        rows.append(dict(suite="allahverdyan", index=k, seed=seed, d=d, beta=t.beta,
                         lhs=rep.lhs, rhs=rep.rhs, residual=rep.residual,
                         rel_residual=rep.rel_residual, passed=ok,
                         upsilon=rep.upsilon, thermal=rep.thermal))
    return rows


def average_work_suite(n: int, seed: int, tolerance: float = 1e-10) -> list[dict]:
    """Weak-distribution average work against the unmeasured energy change."""
    rows = []
    for k in range(n):
        rng, d, t, p = _instance(seed, 3, k)
        rho = random_density(d, rng)
        lhs, rhs, ok = average_work_check(rho, p, WEAK, tolerance)
        res = lhs - rhs
        rows.append(dict(suite="average_work", index=k, seed=seed, d=d, beta=t.beta,
                         lhs=lhs, rhs=rhs, residual=res,
                         rel_residual=abs(res) / max(1.0, abs(rhs)), passed=ok))
    return rows


SUITES = {
    "jarzynski": jarzynski_suite,
    "allahverdyan": allahverdyan_suite,
    "average_work": average_work_suite,
}
