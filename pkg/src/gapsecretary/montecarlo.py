"""Experiment engine: competitive-ratio estimation, parameter sweeps, and an
exhaustive small-instance expectation oracle.

Reproducibility contract: the draws for iteration i are a pure function of
(master_seed, i), so results are bit-identical across runs and thread counts;
reductions happen in iteration order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations, permutations

import numpy as np

from .algorithms import run_l_selection_gap
from .core import ArrivalDraw, WeightProfile, normalize
from .generators import InstanceFamily, SeededRng

__all__ = [
    "ALGORITHM_TAGS",
    "ConfigError",
    "AlgorithmSpec",
    "GapSpec",
    "ExperimentConfig",
    "RatioEstimate",
    "SweepCell",
    "estimate_ratio",
    "per_iteration_outcomes",
    "batch_ratio_for_profiles",
    "regenerate_profiles",
    "sweep_k",
    "sweep_sigma",
    "exact_expectation_small_n",
    "estimate_l_selection",
    "simulate_fixed_profile",
]

ALGORITHM_TAGS = (
    "classical",
    "exact-gap",
    "robust",
    "bounded",
    "strict-classical",
    "l-select",
)

_SINGLE_SELECTION = ALGORITHM_TAGS[:5]

CLASSICAL_BASELINE_TAU = 1.0 / math.e


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to CLI usage errors)."""


@dataclass(frozen=True)
class AlgorithmSpec:
    """Algorithm tag plus the parameters it actually uses."""

    tag: str
    tau: float = 0.2
    gamma: float = 0.0
    epsilon: float = 0.0
    L: int = 1

    def __post_init__(self):
        if self.tag not in ALGORITHM_TAGS:
            raise ConfigError(f"unknown algorithm tag {self.tag!r}")
        if not 0.0 <= self.tau < 1.0:
            raise ConfigError("tau must lie in [0, 1)")
        if self.tag == "robust" and not 0.0 <= self.gamma < 1.0 - self.tau:
            raise ConfigError("gamma must lie in [0, 1 - tau)")
        if self.epsilon < 0.0:
            raise ConfigError("epsilon must be non-negative")
        if self.tag == "l-select" and self.L < 1:
            raise ConfigError("L must be a positive integer")

    @property
    def uses_gap(self) -> bool:
        return self.tag in ("exact-gap", "robust", "bounded", "l-select")


@dataclass(frozen=True)
class GapSpec:
    """How the predicted gap is produced for each generated instance.

    Either the prediction is ``sigma`` times the instance's realized gap at
    index ``k``, or ``absolute`` fixes the predicted value outright (the
    index-unknown regime).
    """

    k: int | None = None
    sigma: float = 1.0
    absolute: float | None = None

    def __post_init__(self):
        if self.k is not None and self.k < 2:
            raise ConfigError("gap index k must be >= 2")
        if self.sigma < 0.0:
            raise ConfigError("sigma must be non-negative")
        if self.absolute is not None:
            if self.absolute < 0.0:
                raise ConfigError("absolute gap must be non-negative")
            if self.sigma != 1.0:
                raise ConfigError("sigma applies to index-derived gaps only")


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment cell.

    Stream i draws iteration i's arrival times first, then its instance
    weights. A fixed (family, n, master_seed) triple therefore pins every
    iteration's draws regardless of the algorithm or gap evaluated on them,
    and replaying dumped instances under the same master seed reproduces the
    original arrival draws too.
    """

    family: InstanceFamily
    n: int
    iterations: int
    algorithm: AlgorithmSpec
    gap: GapSpec = GapSpec()
    master_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.gap.k is not None and self.gap.k > self.n:
            raise ConfigError(f"gap index k={self.gap.k} exceeds n={self.n}")
        # l-select is exempt: its auto-computed gap is index-free (L-th minus
        # (L+1)-th largest weight)
        if (
            self.algorithm.tag in ("exact-gap", "robust", "bounded")
            and self.gap.k is None
            and self.gap.absolute is None
        ):
            raise ConfigError(
                "gap-using algorithms need a gap index k or an absolute gap value"
            )


@dataclass(frozen=True)
class RatioEstimate:
    """Monte Carlo competitive-ratio estimate.

    ``mean`` averages per-iteration ratios (selected weight over that
    iteration's maximum); ``ratio_of_means`` is the alternative estimator
    E[selected]/E[max], kept for sensitivity checks.
    """

    mean: float
    stderr: float
    iterations: int
    select_best_prob: float
    none_prob: float
    ratio_of_means: float | None = None


@dataclass(frozen=True)
class SweepCell:
    """One (k, sigma, algorithm) cell of a sweep table."""

    k: int | None
    sigma: float
    algo: str
    tau: float
    estimate: RatioEstimate


# ---------------------------------------------------------------------------
# Vectorized single-selection kernel


def _run_threshold_batch(
    weights: np.ndarray,
    times: np.ndarray,
    tau: float,
    gap=0.0,
    gamma: float = 0.0,
    strict: bool = False,
    chunk_elements: int = 5_000_000,
) -> dict:
    """Run one threshold policy over a batch of draws.

    ``weights`` and ``times`` are (B, n); ``gap`` is a scalar or (B,) array in
    the same units as ``weights``. Mirrors the per-draw runners in
    ``algorithms``: threshold max(best-so-far, gap) after ``tau``, dropping to
    best-so-far after time 1 - ``gamma``; ``strict`` switches >= to >.
    """
    if strict and gamma > 0.0:
        raise ValueError("strict comparison has no late phase")
    B, n = weights.shape
    gap = np.broadcast_to(np.asarray(gap, dtype=float), (B,))
    accept_index = np.full(B, -1, dtype=np.int64)
    accept_weight = np.zeros(B)
    accept_time = np.full(B, np.nan)

    rows_per = max(1, chunk_elements // max(n, 1))
    for lo in range(0, B, rows_per):
        sl = slice(lo, min(lo + rows_per, B))
        W = weights[sl]
        T = times[sl]
        order = np.argsort(T, axis=1, kind="stable")  # ties: lower index first
        w = np.take_along_axis(W, order, axis=1)
        t = np.take_along_axis(T, order, axis=1)
        pre = t <= tau
        bsf = np.max(np.where(pre, w, 0.0), axis=1)
        if strict:
            meets = w > bsf[:, None]
        else:
            meets = w >= np.maximum(bsf, gap[sl])[:, None]
        if gamma > 0.0:
            late = t > 1.0 - gamma
            cand = ~pre & np.where(late, w >= bsf[:, None], meets)
        else:
            cand = ~pre & meets
        has = cand.any(axis=1)
        pos = np.argmax(cand, axis=1)
        r = np.arange(w.shape[0])
        orig = order[r, pos]
        accept_index[sl] = np.where(has, orig, -1)
        accept_weight[sl] = np.where(has, W[r, orig], 0.0)
        accept_time[sl] = np.where(has, T[r, orig], np.nan)

    return {
        "accept_index": accept_index,
        "accept_weight": accept_weight,
        "accept_time": accept_time,
        "best_index": np.argmax(weights, axis=1),
    }


# ---------------------------------------------------------------------------
# Instance batches


@dataclass(frozen=True)
class _InstanceBatch:
    weights: np.ndarray  # normalized linear weights, (iters, n)
    times: np.ndarray  # arrival times, (iters, n)
    max_log: np.ndarray  # per-instance log normalization constant, (iters,)
    sorted_weights: np.ndarray  # normalized weights sorted descending


def _build_batch(
    family: InstanceFamily, n: int, iterations: int, master_seed: int, threads: int = 1
) -> _InstanceBatch:
    W = np.empty((iterations, n))
    T = np.empty((iterations, n))
    M = np.empty(iterations)
    seeds = SeededRng(master_seed)

    def fill(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            rng = seeds.stream(i)
            T[i] = rng.random(n)  # arrivals first, then weights
            prof = family.generate(n, rng)
            M[i] = prof.max_log_weight
            W[i] = prof.normalized_weights

    if threads <= 1 or iterations < 2 * threads:
        fill(0, iterations)
    else:
        chunk = -(-iterations // threads)
        spans = [
            (lo, min(lo + chunk, iterations)) for lo in range(0, iterations, chunk)
        ]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda span: fill(*span), spans))

    return _InstanceBatch(W, T, M, np.sort(W, axis=1)[:, ::-1])


def regenerate_profiles(
    family: InstanceFamily, n: int, iterations: int, master_seed: int
) -> list[WeightProfile]:
    """The instances an experiment with this (family, n, seed) draws, in
    iteration order; matches the engine's stream discipline exactly."""
    seeds = SeededRng(master_seed)
    out = []
    for i in range(iterations):
        rng = seeds.stream(i)
        rng.random(n)  # arrivals precede weights within a stream
        out.append(family.generate(n, rng))
    return out


def _rescale_raw(values, max_log: np.ndarray) -> np.ndarray:
    """Map raw-unit additive quantities into each instance's normalized view."""
    values = np.asarray(values, dtype=float)
    with np.errstate(over="ignore", under="ignore"):
        out = values * np.exp(-max_log)
    return np.where(values == 0.0, 0.0, out)


def _cell_gaps(batch: _InstanceBatch, gap: GapSpec, sigma: float | None = None, k: int | None = None):
    """Per-instance predicted gap in normalized units for one sweep cell."""
    if gap.absolute is not None:
        base = _rescale_raw(gap.absolute, batch.max_log)
        return base if sigma is None else sigma * base
    k = gap.k if k is None else k
    if k is None:
        raise ConfigError("gap index k required when no absolute gap is given")
    if not 2 <= k <= batch.weights.shape[1]:
        raise ConfigError(f"gap index k={k} out of range [2, {batch.weights.shape[1]}]")
    realized = 1.0 - batch.sorted_weights[:, k - 1]
    return (gap.sigma if sigma is None else sigma) * realized


def _cell_outcomes(batch: _InstanceBatch, algorithm: AlgorithmSpec, gaps) -> dict:
    tag = algorithm.tag
    if tag == "classical":
        out = _run_threshold_batch(batch.weights, batch.times, algorithm.tau, 0.0)
    elif tag == "strict-classical":
        out = _run_threshold_batch(
            batch.weights, batch.times, algorithm.tau, 0.0, strict=True
        )
    elif tag == "exact-gap":
        out = _run_threshold_batch(batch.weights, batch.times, algorithm.tau, gaps)
    elif tag == "bounded":
        eps = _rescale_raw(algorithm.epsilon, batch.max_log)
        out = _run_threshold_batch(
            batch.weights, batch.times, algorithm.tau, np.maximum(gaps - eps, 0.0)
        )
    elif tag == "robust":
        out = _run_threshold_batch(
            batch.weights, batch.times, algorithm.tau, gaps, gamma=algorithm.gamma
        )
    else:
        raise ConfigError("l-select runs through estimate_l_selection")
    out["ratio"] = out["accept_weight"]  # normalized max weight is exactly 1
    out["select_best"] = out["accept_index"] == out["best_index"]
    out["none"] = out["accept_index"] < 0
    return out


def _estimate_from(ratios, select_best, none, scales=None) -> RatioEstimate:
    iters = int(ratios.size)
    mean = float(np.mean(ratios))
    stderr = float(np.std(ratios, ddof=1) / math.sqrt(iters)) if iters > 1 else 0.0
    rom = None
    if scales is not None:
        s = np.exp(scales - np.max(scales))
        rom = float(np.sum(ratios * s) / np.sum(s))
    return RatioEstimate(
        mean=mean,
        stderr=stderr,
        iterations=iters,
        select_best_prob=float(np.mean(select_best)),
        none_prob=float(np.mean(none)),
        ratio_of_means=rom,
    )


def per_iteration_outcomes(config: ExperimentConfig) -> dict:
    """Raw per-iteration outcomes for one experiment cell (validation surface)."""
    if config.algorithm.tag == "l-select":
        raise ConfigError("l-select runs through estimate_l_selection")
    batch = _build_batch(
        config.family, config.n, config.iterations, config.master_seed, config.threads
    )
    gaps = _cell_gaps(batch, config.gap) if config.algorithm.uses_gap else 0.0
    out = _cell_outcomes(batch, config.algorithm, gaps)
    out["max_log"] = batch.max_log
    return out


def estimate_ratio(config: ExperimentConfig) -> RatioEstimate:
    """Monte Carlo competitive-ratio estimate for one experiment cell."""
    out = per_iteration_outcomes(config)
    return _estimate_from(
        out["ratio"], out["select_best"], out["none"], out["max_log"]
    )


# ---------------------------------------------------------------------------
# Sweeps


def _resolve_tau(base_tau: float, k: int | None, tau_policy: str) -> float:
    from .bounds import tau_for_k

    if tau_policy == "fixed" or k is None:
        return base_tau
    if tau_policy == "from-k":
        return tau_for_k(k)
    if tau_policy == "min":
        return min(base_tau, tau_for_k(k))
    raise ConfigError(f"unknown tau policy {tau_policy!r}")


def sweep_k(
    config: ExperimentConfig,
    ks,
    tau_policy: str = "fixed",
    include_baseline: bool = True,
    baseline_tau: float = CLASSICAL_BASELINE_TAU,
) -> list[SweepCell]:
    """One estimate per gap index in ``ks``, on shared instance draws.

    The classical baseline ignores k, so it is computed once (at
    ``baseline_tau``) and repeated for each k row.
    """
    ks = [int(k) for k in ks]
    for k in ks:
        if not 2 <= k <= config.n:
            raise ConfigError(f"gap index k={k} out of range [2, {config.n}]")
    batch = _build_batch(
        config.family, config.n, config.iterations, config.master_seed, config.threads
    )
    cells: list[SweepCell] = []
    baseline = None
    if include_baseline and config.algorithm.tag != "classical":
        out = _cell_outcomes(batch, AlgorithmSpec("classical", tau=baseline_tau), 0.0)
        baseline = _estimate_from(
            out["ratio"], out["select_best"], out["none"], batch.max_log
        )
    for k in ks:
        tau = _resolve_tau(config.algorithm.tau, k, tau_policy)
        algo = replace(config.algorithm, tau=tau)
        gaps = _cell_gaps(batch, config.gap, k=k) if algo.uses_gap else 0.0
        out = _cell_outcomes(batch, algo, gaps)
        est = _estimate_from(out["ratio"], out["select_best"], out["none"], batch.max_log)
        cells.append(SweepCell(k, config.gap.sigma, algo.tag, tau, est))
        if baseline is not None:
            cells.append(SweepCell(k, 0.0, "classical", baseline_tau, baseline))
    return cells


def sweep_sigma(config: ExperimentConfig, sigmas, ks) -> list[SweepCell]:
    """Full (k, sigma) grid of estimates for the configured algorithm.

    At sigma = 0 the predicted gap vanishes, so gap algorithms coincide with
    the classical rule at the same tau draw-for-draw.
    """
    sigmas = [float(s) for s in sigmas]
    if any(s < 0 for s in sigmas):
        raise ConfigError("sigma values must be non-negative")
    ks = [int(k) for k in ks]
    for k in ks:
        if not 2 <= k <= config.n:
            raise ConfigError(f"gap index k={k} out of range [2, {config.n}]")
    batch = _build_batch(
        config.family, config.n, config.iterations, config.master_seed, config.threads
    )
    cells: list[SweepCell] = []
    for k in ks:
        for sigma in sigmas:
            gaps = (
                _cell_gaps(batch, config.gap, sigma=sigma, k=k)
                if config.algorithm.uses_gap
                else 0.0
            )
            out = _cell_outcomes(batch, config.algorithm, gaps)
            est = _estimate_from(
                out["ratio"], out["select_best"], out["none"], batch.max_log
            )
            cells.append(
                SweepCell(k, sigma, config.algorithm.tag, config.algorithm.tau, est)
            )
    return cells


def batch_ratio_for_profiles(
    profiles,
    algorithm: AlgorithmSpec,
    gap: GapSpec,
    master_seed: int,
    threads: int = 1,
) -> RatioEstimate:
    """Estimate on user-supplied instances (replay files); stream i of the
    master seed provides iteration i's arrival draw."""
    profiles = list(profiles)
    iterations = len(profiles)
    if iterations < 1:
        raise ConfigError("need at least one profile")
    n = profiles[0].n
    if any(p.n != n for p in profiles):
        raise ConfigError("all profiles must have the same size")
    if algorithm.tag == "l-select":
        raise ConfigError("l-select runs through estimate_l_selection")

    W = np.empty((iterations, n))
    T = np.empty((iterations, n))
    M = np.empty(iterations)
    seeds = SeededRng(master_seed)

    def fill(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            M[i] = profiles[i].max_log_weight
            W[i] = profiles[i].normalized_weights
            T[i] = seeds.stream(i).random(n)

    if threads <= 1 or iterations < 2 * threads:
        fill(0, iterations)
    else:
        chunk = -(-iterations // threads)
        spans = [(lo, min(lo + chunk, iterations)) for lo in range(0, iterations, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda span: fill(*span), spans))

    batch = _InstanceBatch(W, T, M, np.sort(W, axis=1)[:, ::-1])
    gaps = _cell_gaps(batch, gap) if algorithm.uses_gap else 0.0
    out = _cell_outcomes(batch, algorithm, gaps)
    return _estimate_from(out["ratio"], out["select_best"], out["none"], M)


# ---------------------------------------------------------------------------
# Fixed-profile Monte Carlo


def simulate_fixed_profile(
    profile: WeightProfile,
    algorithm: AlgorithmSpec,
    iterations: int,
    seed: int,
    gap_values=0.0,
    chunk_rows: int = 50_000,
) -> dict:
    """Monte Carlo over arrival draws only, holding the profile fixed.

    ``gap_values`` (scalar or per-iteration array) is interpreted in the
    profile's raw units. Arrival times come from one stream derived from
    ``seed``; the whole run is a single-threaded deterministic batch.
    Returns per-iteration arrays, with accepted weights both normalized
    (``ratio``) and in raw units (``accept_weight``).
    """
    if iterations < 1:
        raise ConfigError("iterations must be >= 1")
    norm = normalize(profile)
    w = norm.normalized_weights
    n = norm.n
    m = profile.max_log_weight
    gaps = np.broadcast_to(
        np.asarray(_rescale_raw(gap_values, np.asarray(m)), dtype=float), (iterations,)
    )
    eps_norm = float(_rescale_raw(algorithm.epsilon, np.asarray(m)))

    rng = np.random.default_rng([int(seed)])
    pieces = []
    for lo in range(0, iterations, chunk_rows):
        rows = min(chunk_rows, iterations - lo)
        times = rng.random((rows, n))
        W = np.broadcast_to(w, (rows, n))
        g = gaps[lo : lo + rows]
        if algorithm.tag == "classical":
            out = _run_threshold_batch(W, times, algorithm.tau, 0.0)
        elif algorithm.tag == "strict-classical":
            out = _run_threshold_batch(W, times, algorithm.tau, 0.0, strict=True)
        elif algorithm.tag == "exact-gap":
            out = _run_threshold_batch(W, times, algorithm.tau, g)
        elif algorithm.tag == "bounded":
            out = _run_threshold_batch(
                W, times, algorithm.tau, np.maximum(g - eps_norm, 0.0)
            )
        elif algorithm.tag == "robust":
            out = _run_threshold_batch(
                W, times, algorithm.tau, g, gamma=algorithm.gamma
            )
        else:
            raise ConfigError("l-select runs through estimate_l_selection")
        pieces.append(out)

    joined = {
        key: np.concatenate([p[key] for p in pieces])
        for key in ("accept_index", "accept_weight", "accept_time")
    }
    best = int(np.argmax(w))
    ratio = joined["accept_weight"]  # normalized units, max weight is 1
    with np.errstate(over="ignore"):
        raw = ratio * np.exp(m)
    return {
        "accept_index": joined["accept_index"],
        "accept_time": joined["accept_time"],
        "ratio": ratio,
        "accept_weight": raw,
        "select_best": joined["accept_index"] == best,
        "none": joined["accept_index"] < 0,
    }


# ---------------------------------------------------------------------------
# Exhaustive small-instance oracle


def exact_expectation_small_n(
    profile: WeightProfile, algorithm: AlgorithmSpec, gap_value: float = 0.0
) -> float:
    """Exact expected accepted weight by enumerating arrival configurations.

    For two-phase rules the enumeration runs over (pre-tau subset S, ordering
    of the rest) with probability tau^|S| (1-tau)^(n-|S|) / (n-|S|)!; the
    robust rule adds the split of the post-tau ordering between the gap phase
    and the late phase. The enumerated probabilities are asserted to sum to 1.

    Kept deliberately independent of the simulation kernels: the acceptance
    rule is restated inline on plain floats.
    """
    n = profile.n
    if n > 6:
        raise ValueError("enumeration oracle limited to n <= 6")
    if gap_value < 0.0:
        raise ValueError("gap must be non-negative")
    tag = algorithm.tag
    if tag not in _SINGLE_SELECTION:
        raise ValueError("oracle covers the single-selection rules only")
    tau = algorithm.tau
    gamma = algorithm.gamma if tag == "robust" else 0.0
    w = [float(x) for x in profile.weights]
    elements = tuple(range(n))

    if tag in ("classical", "strict-classical"):
        term = 0.0
    elif tag == "exact-gap":
        term = gap_value
    elif tag == "bounded":
        term = max(gap_value - algorithm.epsilon, 0.0)
    else:
        term = gap_value
    strict = tag == "strict-classical"

    def first_hit(seq, threshold, strict_cmp):
        for i in seq:
            if (w[i] > threshold) if strict_cmp else (w[i] >= threshold):
                return w[i]
        return None

    total_p = 0.0
    total_val = 0.0
    for s_size in range(n + 1):
        for S in combinations(elements, s_size):
            bsf = max((w[i] for i in S), default=0.0)
            rest = [i for i in elements if i not in S]
            m = len(rest)
            if tag == "robust":
                thr_mid = max(bsf, term)
                for perm in permutations(rest):
                    for j in range(m + 1):
                        p = (
                            tau**s_size
                            * (1.0 - gamma - tau) ** j
                            / math.factorial(j)
                            * gamma ** (m - j)
                            / math.factorial(m - j)
                        )
                        if p == 0.0:
                            total_p += p
                            continue
                        val = first_hit(perm[:j], thr_mid, False)
                        if val is None:
                            val = first_hit(perm[j:], bsf, False)
                        total_p += p
                        total_val += p * (val or 0.0)
            else:
                thr = max(bsf, term)
                base_p = tau**s_size * (1.0 - tau) ** m / math.factorial(m)
                for perm in permutations(rest):
                    val = first_hit(perm, thr, strict)
                    total_p += base_p
                    total_val += base_p * (val or 0.0)
    assert abs(total_p - 1.0) < 1e-9, "enumeration probabilities must sum to 1"
    return total_val


# ---------------------------------------------------------------------------
# Multi-selection estimation


def estimate_l_selection(
    config: ExperimentConfig,
    L: int | None = None,
    fixed_profile: WeightProfile | None = None,
) -> RatioEstimate:
    """Monte Carlo ratio of the multi-selection rule against the sum of the
    top L weights.

    The gap fed per instance is sigma times (L-th minus (L+1)-th largest
    weight) unless an absolute gap is configured; with ``fixed_profile`` only
    the arrival times are random.
    """
    L = config.algorithm.L if L is None else int(L)
    n = fixed_profile.n if fixed_profile is not None else config.n
    if not 2 <= L <= n:
        raise ConfigError(f"L={L} out of range [2, {n}]")
    auto_gap = config.gap.absolute is None
    if auto_gap and L > n - 1:
        raise ConfigError("the auto-computed gap needs L <= n - 1")

    tau = config.algorithm.tau
    sigma = config.gap.sigma
    seeds = SeededRng(config.master_seed)
    iters = config.iterations

    fixed = None
    if fixed_profile is not None:
        norm = normalize(fixed_profile)
        ws = np.sort(norm.normalized_weights)[::-1]
        opt = float(np.sum(ws[:L]))
        if opt <= 0.0:
            raise ConfigError("the top-L weights must have positive total")
        if auto_gap:
            gap = sigma * float(ws[L - 1] - ws[L])
        else:
            gap = float(_rescale_raw(config.gap.absolute, np.asarray(fixed_profile.max_log_weight)))
        fixed = (norm, opt, gap, int(np.argmax(norm.normalized_weights)))

    ratios = np.empty(iters)
    select_best = np.empty(iters, dtype=bool)
    none = np.empty(iters, dtype=bool)

    def run_range(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            rng = seeds.stream(i)
            if fixed is not None:
                prof, opt, gap, best = fixed
                times = rng.random(n)
            else:
                times = rng.random(n)  # arrivals first, then weights
                prof = normalize(config.family.generate(n, rng))
                ws = np.sort(prof.normalized_weights)[::-1]
                opt = float(np.sum(ws[:L]))
                if auto_gap:
                    gap = sigma * float(ws[L - 1] - ws[L])
                else:
                    gap = float(
                        _rescale_raw(config.gap.absolute, np.asarray(prof.max_log_weight))
                    )
                best = int(np.argmax(prof.normalized_weights))
            out = run_l_selection_gap(prof, ArrivalDraw(times), tau, gap, L)
            ratios[i] = out.total_weight / opt
            select_best[i] = best in out.indices
            none[i] = not out.accepted

    if config.threads <= 1 or iters < 2 * config.threads:
        run_range(0, iters)
    else:
        chunk = -(-iters // config.threads)
        spans = [(lo, min(lo + chunk, iters)) for lo in range(0, iters, chunk)]
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            list(pool.map(lambda span: run_range(*span), spans))

    return _estimate_from(ratios, select_best, none)
