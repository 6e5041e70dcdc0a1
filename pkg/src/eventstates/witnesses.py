"""Operational witnesses separating ordered event pairs from independent ones.

Two observable signatures distinguish the record state of a causally ordered
pair from that of two independent measurements:

* the joint record state of an ordered pair retains coherence in the first
  record index, while an independent pair's record state is exactly diagonal;
* an ordered pair's second detection time is conditioned on the first, so the
  two firing times covary, while independent detectors with separable timing
  give exactly zero covariance.

Both witnesses are one-sided: a significant value certifies order, a null
value is merely consistent with independence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .event_states import EventState
from .policy import DEFAULT_POLICY, NumericPolicy, ScenarioError
from .quantum_core import relative_entropy_of_coherence
from .timing import JointTimeDistribution

__all__ = [
    "WitnessReport",
    "ChebyshevCheck",
    "VERDICT_SIGNATURE",
    "VERDICT_CLEAR",
    "record_coherence",
    "coherence_witness",
    "conditional_mean_arrival",
    "time_correlation",
    "time_witness",
    "chebyshev_check",
]

VERDICT_SIGNATURE = "causal-signature"
VERDICT_CLEAR = "no-signature"


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of one witness evaluation."""

    witness: str
    value: float
    verdict: str


def record_coherence(state: EventState, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Coherence (in bits) the record state carries in the record basis.

    Measured as the entropy gained by dephasing in the joint record basis.
    Diagonal states score exactly zero.
    """
    if state.timers is not None:
        raise ScenarioError("trace out the timer registers first")
    return relative_entropy_of_coherence(state.rho, basis=None, policy=policy)


def coherence_witness(state: EventState, *, policy: NumericPolicy = DEFAULT_POLICY) -> WitnessReport:
    """Flag a record state whose coherence exceeds the policy floor.

    Independent pairs build diagonal record states, so any coherence above
    rounding noise certifies that the second event acted on the first
    event's output rather than on an independent system.
    """
    value = record_coherence(state, policy=policy)
    verdict = VERDICT_SIGNATURE if value > policy.coherence_floor_bits else VERDICT_CLEAR
    return WitnessReport(witness="record-coherence", value=value, verdict=verdict)


def conditional_mean_arrival(dist: JointTimeDistribution) -> np.ndarray:
    """Mean second firing time conditioned on each first-firing bin.

    Every trigger bin must carry mass; restrict the table to its support
    before calling.
    """
    pa = dist.marginal_a()
    if np.any(pa <= 0.0):
        empty = int(np.flatnonzero(pa <= 0.0)[0])
        raise ValueError(f"trigger bin {empty} carries no mass; restrict the table to its support")
    return (dist.table @ dist.times) / pa


def time_correlation(dist: JointTimeDistribution) -> float:
    """Covariance of the two firing times under the joint table.

    Times are centered before accumulating so that grids far from the origin
    do not lose precision to cancellation.
    """
    t = dist.times
    pa = dist.marginal_a()
    pb = dist.marginal_b()
    center = 0.5 * float(pa @ t + pb @ t)
    ta = t - center
    mixed = float(ta @ dist.table @ ta)
    return mixed - float(pa @ ta) * float(pb @ ta)


def time_witness(dist: JointTimeDistribution, *, policy: NumericPolicy = DEFAULT_POLICY) -> WitnessReport:
    """Flag a joint firing-time table whose covariance clears the policy floor.

    Independent detectors with separable timing produce a product table and
    hence zero covariance; conditioning the second firing on the first leaves
    a covariance of definite sign.
    """
    value = time_correlation(dist)
    verdict = VERDICT_SIGNATURE if abs(value) > policy.time_correlation_floor else VERDICT_CLEAR
    return WitnessReport(witness="time-correlation", value=value, verdict=verdict)


@dataclass(frozen=True)
class ChebyshevCheck:
    """Consistency check relating conditional means to the covariance sign.

    When the conditional mean of the second time is nondecreasing in the
    first time, the covariance equals Cov(T_a, m(T_a)) with m nondecreasing,
    which is nonnegative for comonotone functions of one variable.
    """

    covariance: float
    monotone: bool
    consistent: bool


def chebyshev_check(dist: JointTimeDistribution, *, slack: float = 1e-9) -> ChebyshevCheck:
    """Verify that a monotone conditional mean comes with nonnegative covariance.

    Rows without mass are skipped.  ``consistent`` is True when either the
    conditional mean is not monotone (no constraint applies) or the
    covariance is above ``-slack``.
    """
    pa = dist.marginal_a()
    support = pa > 0.0
    means = (dist.table[support] @ dist.times) / pa[support]
    span = float(dist.times[-1] - dist.times[0])
    monotone = bool(means.size < 2 or np.all(np.diff(means) >= -slack * max(span, 1.0)))
    cov = time_correlation(dist)
    return ChebyshevCheck(covariance=cov, monotone=monotone, consistent=(not monotone) or cov >= -slack)
