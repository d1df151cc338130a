"""Weak values, negativity and the anomalous-weak-value contextuality witness.

The witness for a preparation ``rho``, measured projector ``E`` and
postselection ``Pi`` is ``Re tr(rho E Pi)``. When it is negative, a Gaussian
pointer that is broad enough yields statistics that no measurement
non-contextual, outcome-deterministic model reproduces. :func:`lemma1_report`
evaluates the quantities entering that argument and :func:`s_threshold`
locates the pointer spread beyond which the decisive inequality holds.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import erfc

from ._tol import tol
from .core import DensityMatrix, as_matrix, eigh, pure_state, require_projector
from .errors import (
    BracketFailure,
    DegenerateSpectrum,
    DimensionMismatch,
    PostselectionImpossible,
    ProtocolMismatch,
)
from .work import WorkDistribution, ProtocolSpec, tpm_povm


def _inputs(rho, e, pi):
    r = as_matrix(rho)
    E = require_projector(e, "E")
    P = require_projector(pi, "Pi")
    if not r.shape == E.shape == P.shape:
        raise DimensionMismatch(f"shapes {r.shape}, {E.shape}, {P.shape} differ")
    return r, E, P


def witness(rho, e, pi) -> float:
    """``Re tr(rho E Pi)``."""
    r, E, P = _inputs(rho, e, pi)
    return float(np.trace(r @ E @ P).real)


def weak_value(rho, e, pi) -> tuple[float, float]:
    """Generalised weak value ``tr(rho E Pi) / tr(rho Pi)`` as ``(re, im)``.

    Only the real part carries a contextuality claim; the imaginary part is
    returned for diagnostics.
    """
    r, E, P = _inputs(rho, e, pi)
    p_pi = np.trace(r @ P).real
    if p_pi <= 1e-14:
        raise PostselectionImpossible(f"tr(rho Pi) = {p_pi:.3e}")
    wv = np.trace(r @ E @ P) / p_pi
    return float(wv.real), float(wv.imag)


def negativity(d: WorkDistribution) -> float:
    """Total negative mass ``-sum min(0, value)``."""
    v = d.values
    return float(-np.sum(np.minimum(v, 0.0)))


def dephasing_weight(s: float) -> float:
    """``(1 - exp(-1/(4 s^2))) / 2``, the weight of ``E_d`` in ``S^s``."""
    return float(-np.expm1(-1.0 / (4.0 * s * s)) / 2.0)


def reflected_postselection(e, pi) -> np.ndarray:
    """``E_d = (E - E~) Pi (E - E~)``; a projector since ``E - E~`` is a reflection."""
    E = require_projector(e, "E")
    P = require_projector(pi, "Pi")
    R = 2 * E - np.eye(E.shape[0])
    return R @ P @ R


def s_matrix(e, pi, s: float) -> np.ndarray:
    """``S^s = (1 - p_d) Pi + p_d E_d``: the postselection effect after the pointer."""
    P = require_projector(pi, "Pi")
    pd = dephasing_weight(s)
    return (1 - pd) * P + pd * reflected_postselection(e, P)


def p_minus(rho, e, pi, s: float) -> float:
    """Postselected probability that the pointer reads ``x < 0``.

    Closed form in terms of ``erfc(1/s)`` and ``erfc(1/(2s))``.
    """
    r, E, P = _inputs(rho, e, pi)
    p_pi = np.trace(P @ r).real
    if p_pi <= 1e-14:
        raise PostselectionImpossible(f"tr(Pi rho) = {p_pi:.3e}")
    Et = np.eye(E.shape[0]) - E
    both = np.trace(E @ P @ E @ r).real
    cross = np.trace((Et @ P @ E + E @ P @ Et) @ r).real
    none = np.trace(Et @ P @ Et @ r).real
    val = (0.5 * erfc(1.0 / s) * both
           + 0.5 * np.exp(-1.0 / (4 * s * s)) * erfc(1.0 / (2 * s)) * cross
           + 0.5 * none)
    return float(val / p_pi)


@dataclass(frozen=True)
class ContextualityReport:
    witness: float
    p_pi: float
    s: float
    p_d: float
    e_d: np.ndarray = field(repr=False)
    p_minus: float
    condition_2c: bool
    asymptotic_gap: float

    @property
    def gap(self) -> float:
        """``p_minus - 1/2 - p_d / p_pi``; condition 2c is ``gap > 0``."""
        return self.p_minus - 0.5 - self.p_d / self.p_pi

    @property
    def weak_value(self) -> float:
        return self.witness / self.p_pi


def lemma1_report(rho, e, pi, s: float) -> ContextualityReport:
    r, E, P = _inputs(rho, e, pi)
    p_pi = float(np.trace(P @ r).real)
    if p_pi <= 1e-14:
        raise PostselectionImpossible(f"tr(Pi rho) = {p_pi:.3e}")
    w = witness(r, E, P)
    pd = dephasing_weight(s)
    pm = p_minus(r, E, P, s)
    return ContextualityReport(
        witness=w,
        p_pi=p_pi,
        s=float(s),
        p_d=pd,
        e_d=reflected_postselection(E, P),
        p_minus=pm,
        condition_2c=bool(pm > 0.5 + pd / p_pi),
        asymptotic_gap=float(-w / (p_pi * np.sqrt(np.pi) * s)),
    )


def condition_2c(rho, e, pi, s: float) -> bool:
    return lemma1_report(rho, e, pi, s).condition_2c


@dataclass(frozen=True)
class ThresholdResult:
    """Empirical onset of condition 2c.

    ``holds_at_10x`` / ``holds_at_100x`` check the asymptotic regime;
    ``flips`` counts truth-value changes on a 64-point log grid over
    ``[s*/100, 100 s*]`` and ``monotone`` is true when the only change is the
    single false-to-true crossing.
    """

    s_star: float
    holds_at_s_star: bool
    fails_below: bool
    holds_at_10x: bool
    holds_at_100x: bool
    flips: int
    monotone: bool


def s_threshold(rho, e, pi, s_max: float = 1e9, rel_width: float = 1e-6) -> ThresholdResult | None:
    """Smallest pointer spread (found by doubling then bisection) where 2c holds.

    Returns ``None`` when the witness is non-negative. No monotonicity in
    ``s`` is assumed; see :class:`ThresholdResult`.
    """
    r, E, P = _inputs(rho, e, pi)
    if witness(r, E, P) >= -1e-12:
        return None

    def holds(s):
        return condition_2c(r, E, P, s)

    s = 1.0
    if holds(s):
        hi = s
        lo = s / 2
        while holds(lo):
            hi, lo = lo, lo / 2
            if lo < 1e-6:
                raise BracketFailure("condition 2c holds down to s = 1e-6; no onset found")
    else:
        lo = s
        hi = 2 * s
        while not holds(hi):
            lo, hi = hi, 2 * hi
            if hi > s_max:
                raise BracketFailure(f"condition 2c never observed up to s = {s_max:g}")
    while (hi - lo) > rel_width * hi:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    grid = np.geomspace(hi / 100, hi * 100, 64)
    seq = [holds(x) for x in grid]
    flips = sum(a != b for a, b in zip(seq, seq[1:]))
    monotone = flips <= 1 and seq[-1]
    return ThresholdResult(
        s_star=float(hi),
        holds_at_s_star=holds(hi),
        fails_below=not holds(hi * (1 - rel_width)),
        holds_at_10x=holds(10 * hi),
        holds_at_100x=holds(100 * hi),
        flips=int(flips),
        monotone=bool(monotone),
    )


def find_negative_state(e, pi) -> tuple[DensityMatrix, float]:
    """State minimising the witness, with the minimum.

    The witness is linear in the state, ``tr(rho (E Pi + Pi E) / 2)``, so the
    minimum over all states is the lowest eigenvalue of that operator,
    attained on its eigenvector.
    """
    E = require_projector(e, "E")
    P = require_projector(pi, "Pi")
    spec = eigh((E @ P + P @ E) / 2)
    return pure_state(spec.eigenvectors[:, 0]), float(spec.energies[0])


def _unitary_from_params(theta: np.ndarray, d: int) -> np.ndarray:
    K = np.zeros((d, d), dtype=complex)
    iu = np.triu_indices(d, 1)
    n_off = len(iu[0])
    K[iu] = theta[:n_off] + 1j * theta[n_off:2 * n_off]
    K = K + K.conj().T
    K[np.diag_indices(d)] = theta[2 * n_off:]
    w, v = np.linalg.eigh(K)
    return (v * np.exp(1j * w)) @ v.conj().T


def search_max_negativity(e, final_projector, seed: int = 0, restarts: int = 8,
                          maxiter: int = 4000) -> tuple[float, np.ndarray]:
    """Heuristic search over drives ``U`` for the most negative witness.

    Minimises ``lambda_min((E Pi + Pi E)/2)`` with ``Pi = U^dagger F U`` over a
    Hermitian-generator parametrisation of ``U`` using seeded Nelder-Mead
    restarts. The result is a local optimum, not a certified one.
    """
    E = require_projector(e, "E")
    F = require_projector(final_projector, "final projector")
    d = E.shape[0]
    rng = np.random.default_rng(seed)

    def objective(theta):
        U = _unitary_from_params(theta, d)
        P = U.conj().T @ F @ U
        return np.linalg.eigvalsh((E @ P + P @ E) / 2)[0]

    best = (np.inf, None)
    for _ in range(restarts):
        x0 = rng.uniform(-np.pi, np.pi, d * d)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-14})
        if res.fun < best[0]:
            best = (float(res.fun), _unitary_from_params(res.x, d))
    return best


@dataclass(frozen=True)
class OntologicalModel:
    """Non-contextual model of the TPM statistics.

    Hidden states are the eigenvectors of the initial Hamiltonian.
    ``response[lam, k]`` is the probability of work point ``labels_w[k]``
    given hidden state ``lam``; each row sums to one.
    """

    basis: np.ndarray = field(repr=False)
    response: np.ndarray
    points: tuple
    povm: tuple = field(repr=False)

    @property
    def labels(self) -> list[int]:
        return list(range(self.basis.shape[1]))

    def prep_weights(self, rho) -> np.ndarray:
        r = as_matrix(rho)
        return np.real(np.einsum("kl,km,ml->l", self.basis.conj(), r, self.basis))


def build_tpm_model(p: ProtocolSpec) -> OntologicalModel:
    if p.h_initial.degenerate:
        raise DegenerateSpectrum("ontological model needs a non-degenerate initial Hamiltonian")
    povm = tpm_povm(p)
    V = p.h_initial.eigenvectors
    resp = np.empty((p.dim, len(povm)))
    for lam in range(p.dim):
        v = V[:, lam]
        for k, el in enumerate(povm):
            resp[lam, k] = np.real(v.conj() @ el.matrix @ v)
    return OntologicalModel(np.array(V), resp, tuple(el.label for el in povm),
                            tuple(np.array(el.matrix) for el in povm))


def verify_model(m: OntologicalModel, rho, p: ProtocolSpec, atol: float = 1e-12) -> tuple[float, bool]:
    """Largest gap between model-averaged and Born-rule work probabilities."""
    povm = tpm_povm(p)
    if (tuple(el.label for el in povm) != m.points
            or any(not np.allclose(a.matrix, b, atol=1e-12) for a, b in zip(povm, m.povm))):
        raise ProtocolMismatch("model was built from a different protocol")
    r = as_matrix(rho)
    model = m.prep_weights(r) @ m.response
    born = np.array([np.trace(el.matrix @ r).real for el in povm])
    dev = float(np.max(np.abs(model - born)))
    return dev, dev <= tol(atol)
