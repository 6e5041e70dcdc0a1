"""Predicting one record from the other: discrimination and correlation.

Given the joint record state of an event pair, how well can an observer who
holds only the first record guess the second outcome?  Two quantities answer
this:

* the optimal discrimination success probability between the first-record
  conditionals (exact for two hypotheses, an achievable square-root
  measurement bound otherwise), and
* the classical correlation: the entropy of the second record minus its
  average entropy conditioned on the best projective first-record readout.

For ordered qubit events there is additionally a search for a first-
measurement basis that makes the second outcome perfectly predictable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .event_states import EventState, conditional_decomposition
from .policy import DEFAULT_POLICY, NumericPolicy, ScenarioError
from .quantum_core import (
    MeasurementModel,
    bloch_pair,
    partial_trace,
    von_neumann_entropy,
)

__all__ = [
    "SearchPolicy",
    "HelstromResult",
    "PredictionReport",
    "CorrelationReport",
    "DeterminismReport",
    "BasisSearchResult",
    "helstrom_success",
    "helstrom_pure",
    "predict_future_outcome",
    "classical_correlation",
    "determinism_check",
    "find_deterministic_basis",
]


@dataclass(frozen=True)
class SearchPolicy:
    """Grid and refinement settings for Bloch-sphere searches.

    The coarse grid is theta-major (theta in [0, pi] inclusive, phi in
    [0, 2 pi) exclusive), so ties resolve toward the smallest polar angle.
    """

    theta_points: int = 64
    phi_points: int = 128
    refine_maxiter: int = 200
    refine_tol: float = 1e-6
    residual_tol: float = 1e-6


DEFAULT_SEARCH = SearchPolicy()


@dataclass(frozen=True)
class HelstromResult:
    """Optimal two-hypothesis discrimination outcome.

    ``projector`` projects onto the subspace where the first hypothesis is
    favored; guessing "first" on a click and "second" otherwise attains
    ``success``.
    """

    success: float
    projector: np.ndarray


def helstrom_success(
    p1: float, rho1: np.ndarray, p2: float, rho2: np.ndarray
) -> HelstromResult:
    """Best success probability for telling two weighted states apart.

    Equals (1 + tracenorm(p1 rho1 - p2 rho2)) / 2, attained by measuring the
    sign of the weighted difference.  Priors must sum to 1.
    """
    if p1 < 0.0 or p2 < 0.0 or abs(p1 + p2 - 1.0) > 1e-9:
        raise ValueError(f"priors must be nonnegative and sum to 1, got {p1} and {p2}")
    gap = p1 * np.asarray(rho1, dtype=complex) - p2 * np.asarray(rho2, dtype=complex)
    gap = 0.5 * (gap + gap.conj().T)
    vals, vecs = np.linalg.eigh(gap)
    success = 0.5 * (1.0 + float(np.sum(np.abs(vals))))
    pos = vecs[:, vals > 0.0]
    return HelstromResult(success=min(success, 1.0), projector=pos @ pos.conj().T)


def helstrom_pure(p1: float, ket1: np.ndarray, p2: float, ket2: np.ndarray) -> float:
    """Closed form of the two-state success probability for pure hypotheses."""
    overlap = abs(np.vdot(np.asarray(ket1, dtype=complex), np.asarray(ket2, dtype=complex))) ** 2
    radicand = max(1.0 - 4.0 * p1 * p2 * overlap, 0.0)
    return 0.5 * (1.0 + np.sqrt(radicand))


def _sqrt_pinv(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    inv = np.where(vals > 1e-14, 1.0 / np.sqrt(np.clip(vals, 1e-300, None)), 0.0)
    return (vecs * inv) @ vecs.conj().T


@dataclass(frozen=True)
class PredictionReport:
    """How well the second outcome can be guessed from the first record.

    ``exact`` is True when ``success`` is the optimal value (at most two
    outcomes carry mass); with more outcomes ``success`` is the achievable
    square-root-measurement value and ``pairwise[i, j]`` holds the exact
    two-hypothesis success for each supported pair.
    """

    success: float
    exact: bool
    projector: np.ndarray | None
    pairwise: np.ndarray | None


def predict_future_outcome(
    state: EventState, *, policy: NumericPolicy = DEFAULT_POLICY
) -> PredictionReport:
    """Optimal probability of predicting the second record from the first.

    Decomposes the state by the second outcome and discriminates the
    first-record conditionals with their outcome probabilities as priors.
    """
    decomp = conditional_decomposition(state, policy=policy)
    da = state.dims[0]
    zero = np.zeros((da, da), dtype=complex)
    weighted = [
        (float(p), decomp.conditionals[b] if decomp.conditionals[b] is not None else zero)
        for b, p in enumerate(decomp.probs)
    ]
    live = [idx for idx, (p, _) in enumerate(weighted) if p > 0.0]

    if len(live) <= 1:
        return PredictionReport(success=1.0, exact=True, projector=None, pairwise=None)
    if len(live) == 2:
        (pa, sa), (pb, sb) = weighted[live[0]], weighted[live[1]]
        # Other outcomes carry zero mass, so the two live priors sum to 1
        # up to the mass dropped with empty blocks.
        scale = pa + pb
        result = helstrom_success(pa / scale, sa, pb / scale, sb)
        return PredictionReport(
            success=result.success, exact=True, projector=result.projector, pairwise=None
        )

    rho_bar = sum(p * sigma for p, sigma in weighted)
    root = _sqrt_pinv(rho_bar)
    success = 0.0
    for p, sigma in weighted:
        m = root @ (p * sigma) @ root
        success += float(np.real(np.trace(m @ (p * sigma))))
    n = len(weighted)
    pairwise = np.full((n, n), np.nan)
    for i in live:
        for j in live:
            if i < j:
                pi, si = weighted[i]
                pj, sj = weighted[j]
                scale = pi + pj
                pairwise[i, j] = pairwise[j, i] = helstrom_success(
                    pi / scale, si, pj / scale, sj
                ).success
    np.fill_diagonal(pairwise, 1.0)
    return PredictionReport(
        success=min(success, 1.0), exact=False, projector=None, pairwise=pairwise
    )


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def _holevo_like(rho4: np.ndarray, kets: np.ndarray, entropy_b: float) -> np.ndarray:
    """Entropy drop of the second record given a batch of first-record bases.

    ``kets[n, o]`` is outcome ket o of basis n.  Returns, per basis, the
    second-record entropy minus the average conditional entropy.
    """
    blocks = np.einsum("noa,abAB,noA->nobB", kets.conj(), rho4, kets)
    probs = np.clip(np.real(np.einsum("nobb->no", blocks)), 0.0, None)
    vals = np.linalg.eigvalsh(0.5 * (blocks + np.conj(np.swapaxes(blocks, -1, -2))))
    vals = np.clip(vals, 0.0, None)
    cond = np.sum(_plogp(probs), axis=1) - np.sum(_plogp(vals), axis=(1, 2))
    return entropy_b - cond


@dataclass(frozen=True)
class CorrelationReport:
    """Maximized entropy reduction on the second record, with its argmax.

    ``bits`` is the classical correlation; ``basis`` is the first-record
    measurement attaining it (ties resolve toward the smallest polar angle
    on the Bloch grid, or the earliest entry of an explicit candidate list).
    """

    bits: float
    basis: MeasurementModel

    def __float__(self) -> float:
        return self.bits


def _as_model(candidate) -> MeasurementModel:
    if isinstance(candidate, MeasurementModel):
        return candidate
    kets = np.asarray(candidate, dtype=complex)
    return MeasurementModel(kets=kets, labels=np.arange(kets.shape[0], dtype=float))


def classical_correlation(
    state: EventState,
    *,
    measurements: list | None = None,
    search: SearchPolicy = DEFAULT_SEARCH,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> CorrelationReport:
    """Classical correlation of the second record with the first, in bits.

    Maximizes S(rho_b) - sum_i p_i S(rho_b | i) over complete projective
    measurements of the first record.  Qubit first records are searched over
    the Bloch sphere (coarse grid plus a simplex refinement); larger records
    need an explicit list of candidate bases.
    """
    if state.timers is not None:
        raise ScenarioError("trace out the timer registers first")
    da, db = state.dims
    rho4 = state.rho.reshape(da, db, da, db)
    rho_b = partial_trace(state.rho, (da, db), keep="B")
    entropy_b = von_neumann_entropy(rho_b, policy=policy)

    if measurements is not None:
        stacked = np.stack(
            [m.kets if isinstance(m, MeasurementModel) else np.asarray(m, dtype=complex) for m in measurements]
        )
        values = _holevo_like(rho4, stacked, entropy_b)
        best = int(np.argmax(values))
        return CorrelationReport(bits=float(values[best]), basis=_as_model(measurements[best]))
    if da != 2:
        raise ValueError(
            "first record is not a qubit; pass an explicit list of candidate measurements"
        )

    thetas = np.linspace(0.0, np.pi, search.theta_points)
    phis = np.linspace(0.0, 2.0 * np.pi, search.phi_points, endpoint=False)
    grid = np.array([bloch_pair(t, p) for t in thetas for p in phis])
    values = _holevo_like(rho4, grid, entropy_b)
    best = int(np.argmax(values))
    best_value = float(values[best])
    x0 = np.array([thetas[best // search.phi_points], phis[best % search.phi_points]])

    def objective(x):
        return -float(_holevo_like(rho4, bloch_pair(x[0], x[1])[None], entropy_b)[0])

    refined = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": search.refine_maxiter,
            "xatol": search.refine_tol,
            "fatol": search.refine_tol,
        },
    )
    if -float(refined.fun) > best_value:
        return CorrelationReport(
            bits=-float(refined.fun),
            basis=MeasurementModel.from_axis_angle(float(refined.x[0]), float(refined.x[1])),
        )
    return CorrelationReport(
        bits=best_value,
        basis=MeasurementModel.from_axis_angle(float(x0[0]), float(x0[1])),
    )


@dataclass(frozen=True)
class DeterminismReport:
    """Distinguishability of the first-record conditionals.

    ``max_overlap`` is the largest pairwise overlap Tr(sigma_b sigma_b')
    between supported conditionals; the pair is deterministic when every
    overlap sits below the policy threshold, i.e. the second outcome is
    readable from the first record without error.  ``gram`` holds the full
    pairwise picture on the amplitude scale, sqrt(Tr(sigma_b sigma_b')),
    which for pure conditionals is the magnitude of the ket overlap; rows
    of unsupported outcomes are zero.
    """

    deterministic: bool
    max_overlap: float
    gram: np.ndarray


def determinism_check(
    state: EventState, *, policy: NumericPolicy = DEFAULT_POLICY
) -> DeterminismReport:
    """Decide whether the second outcome is perfectly encoded in the first record."""
    if state.kind != "TL":
        raise ScenarioError("determinism of the second outcome only applies to ordered pairs")
    decomp = conditional_decomposition(state, policy=policy)
    n = len(decomp.conditionals)
    gram = np.zeros((n, n))
    worst = 0.0
    for i, si in enumerate(decomp.conditionals):
        if si is None:
            continue
        gram[i, i] = np.sqrt(max(float(np.real(np.trace(si @ si))), 0.0))
        for j in range(i + 1, n):
            sj = decomp.conditionals[j]
            if sj is None:
                continue
            overlap = float(np.real(np.trace(si @ sj)))
            worst = max(worst, overlap)
            gram[i, j] = gram[j, i] = np.sqrt(max(overlap, 0.0))
    return DeterminismReport(
        deterministic=worst < policy.determinism_tol, max_overlap=worst, gram=gram
    )


@dataclass(frozen=True)
class BasisSearchResult:
    """Result of searching first-measurement bases for perfect predictability."""

    found: bool
    basis: MeasurementModel | None
    residual: float
    theta: float
    phi: float


def _orthogonality_residual(
    kets: np.ndarray, psi0: np.ndarray, u: np.ndarray, basis_b: MeasurementModel, floor: float
) -> np.ndarray:
    """Normalized overlap of the two conditional records per candidate basis.

    ``kets[n, a]`` are candidate first-basis kets.  Returns zero where one
    outcome has (almost) no mass, since prediction is then trivial.
    """
    coeff = np.einsum("nai,i->na", kets.conj(), psi0)
    hops = np.einsum("bi,ij,naj->nba", basis_b.kets.conj(), u, kets)
    branch = hops * coeff[:, None, :]
    probs = np.sum(np.abs(branch) ** 2, axis=2)
    cross = np.abs(np.einsum("na,na->n", branch[:, 0].conj(), branch[:, 1]))
    tiny = np.any(probs < floor, axis=1)
    denom = np.sqrt(np.clip(probs[:, 0] * probs[:, 1], 1e-300, None))
    return np.where(tiny, 0.0, cross / denom)


def find_deterministic_basis(
    initial: np.ndarray,
    evolution: np.ndarray | None,
    basis_b: MeasurementModel,
    *,
    search: SearchPolicy = DEFAULT_SEARCH,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> BasisSearchResult:
    """Search qubit first-measurement bases that make the second outcome certain.

    Scans the Bloch sphere for a basis whose two conditional records are
    orthogonal (residual overlap below the search tolerance), refining the
    best grid point with a simplex step.  The initial state must be a ket.
    """
    psi0 = np.asarray(initial, dtype=complex)
    if psi0.ndim != 1:
        raise ScenarioError("the basis search needs a pure initial state")
    if psi0.shape[0] != 2 or basis_b.dim != 2:
        raise ScenarioError("the basis search is implemented for qubits")
    u = np.eye(2, dtype=complex) if evolution is None else np.asarray(evolution, dtype=complex)

    thetas = np.linspace(0.0, np.pi, search.theta_points)
    phis = np.linspace(0.0, 2.0 * np.pi, search.phi_points, endpoint=False)
    grid = np.array([bloch_pair(t, p) for t in thetas for p in phis])
    residuals = _orthogonality_residual(grid, psi0, u, basis_b, policy.empty_block_floor)
    best = int(np.argmin(residuals))
    best_theta = float(thetas[best // search.phi_points])
    best_phi = float(phis[best % search.phi_points])
    best_res = float(residuals[best])

    def objective(x):
        return float(
            _orthogonality_residual(
                bloch_pair(x[0], x[1])[None], psi0, u, basis_b, policy.empty_block_floor
            )[0]
        )

    refined = minimize(
        objective,
        np.array([best_theta, best_phi]),
        method="Nelder-Mead",
        options={
            "maxiter": search.refine_maxiter,
            "xatol": search.refine_tol,
            "fatol": search.refine_tol,
        },
    )
    if float(refined.fun) < best_res:
        best_res = float(refined.fun)
        best_theta, best_phi = float(refined.x[0]), float(refined.x[1])

    found = best_res <= search.residual_tol
    basis = MeasurementModel.from_axis_angle(best_theta, best_phi) if found else None
    return BasisSearchResult(
        found=found, basis=basis, residual=best_res, theta=best_theta, phi=best_phi
    )
