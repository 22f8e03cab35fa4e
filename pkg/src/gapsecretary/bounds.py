"""Closed-form guarantee values for the gap-augmented secretary algorithms.

Everything here is deterministic arithmetic on the published bound formulas;
the Monte Carlo engine checks simulated ratios against these values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GuaranteeReport",
    "FrontierPoint",
    "TWO_BEST_UPPER_BOUND",
    "K_SCAN_MAX",
    "tau_for_k",
    "alpha_exact",
    "alpha_exact_values",
    "guarantee_exact_gap",
    "robustness",
    "consistency",
    "frontier",
    "guarantee_bounded_error",
    "two_three_tie_prob",
    "l_selection_bound",
]

# Hardness reference for the zero-gap (two-best) special case; documented
# constant only, never computed here.
TWO_BEST_UPPER_BOUND = 0.5736

# Cap for worst-case aggregation over the gap index; the capped scan plus the
# analytic large-index limit of the gap-case term brackets the infimum.
K_SCAN_MAX = 10_000


@dataclass(frozen=True)
class GuaranteeReport:
    """A competitive-ratio lower bound together with the sub-terms compared.

    ``alpha`` equals the min/max composition of ``components``;
    ``binding_term`` names the component realizing the outer min.
    ``penalty_form`` is set when the guarantee carries an additive loss.
    """

    alpha: float
    components: dict[str, float] = field(default_factory=dict)
    binding_term: str = ""
    penalty_form: str | None = None

    def as_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "components": dict(self.components),
            "binding_term": self.binding_term,
        }
        if self.penalty_form is not None:
            out["penalty_form"] = self.penalty_form
        return out


@dataclass(frozen=True)
class FrontierPoint:
    """Best consistency achievable at a required level of robustness."""

    robustness_target: float
    tau: float
    gamma: float
    consistency: float
    feasible: bool = True


def _check_k(k: int) -> None:
    if not (isinstance(k, (int, np.integer)) and k >= 2):
        raise ValueError("gap index k must be an integer >= 2")


def _check_open_tau(tau: float) -> None:
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")


def _check_schedule(tau: float, gamma: float) -> None:
    # Closed upper end: the bound formulas are continuous at gamma = 1 - tau
    # and the classical-recovery point sits exactly there.
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    if not 0.0 <= gamma <= 1.0 - tau:
        raise ValueError("gamma must lie in [0, 1 - tau]")


def tau_for_k(k: int) -> float:
    """Waiting time tuned to the gap index: 1 - (1/(k+1))^(1/k)."""
    _check_k(k)
    return 1.0 - math.exp(-math.log(k + 1) / k)


def _alpha_terms(tau, k):
    """The three compared terms of the exact-gap bound, vectorized.

    case1  : (1-tau) * k / (2(k-1))          -- large-gap case
    alpha3 : ((k+1)/(2k)) * (1 - tau - (1-tau)^(k+1))
    alpha4 : (3/2) tau ln(1/tau) - (1/2) tau (1-tau)
    """
    tau = np.asarray(tau, dtype=float)
    k = np.asarray(k, dtype=float)
    case1 = (1.0 - tau) * k / (2.0 * (k - 1.0))
    alpha3 = (k + 1.0) / (2.0 * k) * (1.0 - tau - (1.0 - tau) ** (k + 1.0))
    alpha4 = 1.5 * tau * np.log(1.0 / tau) - 0.5 * tau * (1.0 - tau)
    return case1, alpha3, alpha4


def alpha_exact_values(tau, ks) -> np.ndarray:
    """Vectorized exact-gap bound min(case1, max(alpha3, alpha4)) over ``ks``."""
    case1, alpha3, alpha4 = _alpha_terms(tau, ks)
    return np.minimum(case1, np.maximum(alpha3, alpha4))


def alpha_exact(tau: float, k: int) -> GuaranteeReport:
    """Exact-gap competitive-ratio bound for waiting time ``tau`` and index ``k``."""
    _check_open_tau(tau)
    _check_k(k)
    case1, alpha3, alpha4 = (float(x) for x in _alpha_terms(tau, k))
    inner = max(alpha3, alpha4)
    alpha = min(case1, inner)
    if alpha == case1 and case1 <= inner:
        binding = "case1"
    else:
        binding = "alpha3" if alpha3 >= alpha4 else "alpha4"
    return GuaranteeReport(
        alpha=alpha,
        components={"case1": case1, "alpha3": alpha3, "alpha4": alpha4},
        binding_term=binding,
    )


def guarantee_exact_gap(k: int) -> float:
    """Stated guarantee at the tuned waiting time: max(0.4, (1/2)(1/(k+1))^(1/k))."""
    _check_k(k)
    return max(0.4, 0.5 * math.exp(-math.log(k + 1) / k))


def robustness(tau: float, gamma: float) -> float:
    """Competitive ratio guaranteed regardless of prediction error:
    tau * ln(1/(1-gamma))."""
    _check_schedule(tau, gamma)
    return tau * math.log(1.0 / (1.0 - gamma))


def _consistency_small_gap_terms(tau: float, gamma: float) -> tuple[float, float]:
    """alpha1 and alpha2 of the robust-consistent bound (large-gap case)."""
    log_late = math.log(1.0 / (1.0 - gamma)) if gamma > 0.0 else 0.0
    alpha1 = 1.0 - gamma - tau + tau * log_late
    alpha2 = 0.5 * (
        (1.0 + gamma) * (1.0 - tau - gamma)
        + tau * math.log(1.0 / tau)
        + tau * log_late
    )
    return alpha1, alpha2


def _worst_gap_case(tau_values: np.ndarray, k_max: int = K_SCAN_MAX) -> np.ndarray:
    """inf over k >= 2 of max(alpha3(k), alpha4), vectorized over tau.

    Equals max(alpha4, inf_k alpha3); the infimum over k combines a capped
    scan with the k -> inf limit (1-tau)/2 of alpha3.
    """
    tau_values = np.atleast_1d(np.asarray(tau_values, dtype=float))
    ks = np.arange(2, k_max + 1, dtype=float)
    min_alpha3 = np.full(tau_values.shape, np.inf)
    chunk = max(1, int(2e7) // ks.size)
    for lo in range(0, tau_values.size, chunk):
        t = tau_values[lo : lo + chunk, None]
        alpha3 = (ks + 1.0) / (2.0 * ks) * (1.0 - t - (1.0 - t) ** (ks + 1.0))
        min_alpha3[lo : lo + chunk] = alpha3.min(axis=1)
    min_alpha3 = np.minimum(min_alpha3, 0.5 * (1.0 - tau_values))
    alpha4 = 1.5 * tau_values * np.log(1.0 / tau_values) - 0.5 * tau_values * (
        1.0 - tau_values
    )
    return np.maximum(alpha4, min_alpha3)


def consistency(tau: float, gamma: float, k_aggregation="worst-case") -> GuaranteeReport:
    """Competitive-ratio bound of the robust-consistent rule on an accurate gap.

    ``k_aggregation`` is either a specific gap index (int >= 2) or
    ``"worst-case"``: the infimum over all indices, taken as a scan over
    k in [2, K_SCAN_MAX] plus the analytic large-k limit.
    """
    _check_schedule(tau, gamma)
    alpha1, alpha2 = _consistency_small_gap_terms(tau, gamma)
    components = {"alpha1": alpha1, "alpha2": alpha2}
    if k_aggregation == "worst-case":
        gap_case = float(_worst_gap_case(np.array([tau]))[0])
        _, _, alpha4 = (float(x) for x in _alpha_terms(tau, 2))
        components["alpha4"] = alpha4
        components["worst_case_gap_term"] = gap_case
        gap_name = "alpha4" if gap_case == alpha4 else "worst_case_gap_term"
    else:
        _check_k(k_aggregation)
        _, alpha3, alpha4 = (float(x) for x in _alpha_terms(tau, k_aggregation))
        components["alpha3"] = alpha3
        components["alpha4"] = alpha4
        gap_case = max(alpha3, alpha4)
        gap_name = "alpha3" if alpha3 >= alpha4 else "alpha4"
    small = min(alpha1, alpha2)
    alpha = min(small, gap_case)
    if alpha == small and small <= gap_case:
        binding = "alpha1" if alpha1 <= alpha2 else "alpha2"
    else:
        binding = gap_name
    return GuaranteeReport(alpha=alpha, components=components, binding_term=binding)


def frontier(
    robustness_targets,
    grid_step: float = 0.001,
    k_aggregation="worst-case",
) -> list[FrontierPoint]:
    """Best consistency for each required robustness level, by grid search.

    For every target r the search maximizes consistency(tau, gamma,
    k_aggregation) over the (tau, gamma) grid subject to
    robustness(tau, gamma) >= r; ties go to the lexicographically smallest
    (tau, gamma). Targets beyond the grid's reach come back infeasible.
    """
    targets = list(robustness_targets)
    if not targets:
        raise ValueError("at least one robustness target required")
    if any(r < 0 for r in targets):
        raise ValueError("robustness targets must be non-negative")
    if not 0.0 < grid_step <= 0.1:
        raise ValueError("grid step must lie in (0, 0.1]")

    steps = int(round(1.0 / grid_step))
    taus = np.arange(1, steps) * grid_step
    gammas = np.arange(0, steps) * grid_step
    if k_aggregation == "worst-case":
        gap_case = _worst_gap_case(taus)
    else:
        _check_k(k_aggregation)
        _, alpha3, alpha4 = _alpha_terms(taus, k_aggregation)
        gap_case = np.maximum(alpha3, alpha4)

    t = taus[:, None]
    g = gammas[None, :]
    valid = g < (1.0 - t) - 1e-9
    with np.errstate(divide="ignore", invalid="ignore"):
        log_late = np.log(1.0 / (1.0 - g))
        alpha1 = 1.0 - g - t + t * log_late
        alpha2 = 0.5 * ((1.0 + g) * (1.0 - t - g) + t * np.log(1.0 / t) + t * log_late)
        rob = t * log_late
    cons = np.minimum(np.minimum(alpha1, alpha2), gap_case[:, None])
    cons = np.where(valid, cons, -np.inf)

    points = []
    for r in targets:
        feasible = valid & (rob >= r)
        if not feasible.any():
            points.append(FrontierPoint(float(r), math.nan, math.nan, math.nan, False))
            continue
        masked = np.where(feasible, cons, -np.inf)
        flat = int(np.argmax(masked))  # first max in row-major order:
        ti, gi = divmod(flat, gammas.size)  # smallest tau, then smallest gamma
        points.append(
            FrontierPoint(
                float(r), float(taus[ti]), float(gammas[gi]), float(masked[ti, gi])
            )
        )
    return points


def guarantee_bounded_error(tau: float, k: int) -> GuaranteeReport:
    """Bounded-error guarantee: same alpha as the exact-gap bound, holding
    with an additive loss of twice the error bound."""
    report = alpha_exact(tau, k)
    return GuaranteeReport(
        alpha=report.alpha,
        components=report.components,
        binding_term=report.binding_term,
        penalty_form="alpha * w1 - 2 * epsilon",
    )


def two_three_tie_prob(tau: float, n: int | None = None) -> float:
    """Probability that the strict-threshold rule selects the best element on
    instances whose second and third weights tie.

    Default is the large-n approximation (1/2) tau (1-tau)^2 + tau ln(1/tau);
    passing ``n`` evaluates the exact finite-n sum instead.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    base = 0.5 * tau * (1.0 - tau) ** 2
    if n is None:
        return base + tau * math.log(1.0 / tau)
    if n < 3:
        raise ValueError("exact mode needs n >= 3")
    i = np.arange(1, n, dtype=float)
    series = float(np.sum(tau * (1.0 - tau) ** i / i))
    return base + series + (1.0 - tau) ** n / n


def l_selection_bound(L: int, beta: float) -> float:
    """Multi-selection guarantee 1/e + (beta/(2e)) (1 - 1/L + 1/(L e^L)).

    ``beta`` is the fraction of the optimum covered by the L-th largest
    weight, hence at most 1/L.
    """
    if not (isinstance(L, (int, np.integer)) and L >= 2):
        raise ValueError("L must be an integer >= 2")
    if not 0.0 <= beta <= 1.0 / L:
        raise ValueError("beta must lie in [0, 1/L]")
    e = math.e
    return 1.0 / e + (beta / (2.0 * e)) * (1.0 - 1.0 / L + 1.0 / (L * e**L))
