"""Seeded generation of the benchmark instance families and arrival draws.

Each generator is a pure function of its random stream, and streams are
derived from a master seed so parallel experiments reproduce bit-identically
regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ArrivalDraw, WeightProfile, normalize

__all__ = [
    "FAMILY_TAGS",
    "InstanceFamily",
    "SeededRng",
    "gen_arrivals",
    "gen_pareto_power",
    "gen_exponential",
    "gen_chi_squared",
    "gen_exp_superstar",
    "save_profiles",
    "load_profiles",
]

FAMILY_TAGS = ("pareto_power", "exponential", "chi_squared", "exp_superstar")


@dataclass(frozen=True)
class SeededRng:
    """Derives reproducible random streams from one 64-bit master seed.

    ``stream(i)`` is a pure function of (master_seed, i): the draws for work
    item i never depend on thread count or evaluation order.
    """

    master_seed: int

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master seed must be a 64-bit non-negative integer")

    def stream(self, index: int) -> np.random.Generator:
        if index < 0:
            raise ValueError("stream index must be non-negative")
        return np.random.default_rng([int(self.master_seed), int(index)])


@dataclass(frozen=True)
class InstanceFamily:
    """One of the benchmark weight distributions plus its parameters."""

    tag: str
    df: int = 10  # chi-squared degrees of freedom
    factor: float = 100.0  # superstar multiplier
    pareto_reading: str = "scale_shape"  # parameter order; see gen_pareto_power

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")
        if not (isinstance(self.df, (int, np.integer)) and self.df >= 1):
            raise ValueError("chi-squared df must be an integer >= 1")
        if not self.factor > 0:
            raise ValueError("superstar factor must be positive")
        if self.pareto_reading not in ("scale_shape", "shape_scale"):
            raise ValueError("pareto_reading must be 'scale_shape' or 'shape_scale'")

    def generate(self, n: int, rng: np.random.Generator) -> WeightProfile:
        if self.tag == "pareto_power":
            return gen_pareto_power(n, rng, reading=self.pareto_reading)
        if self.tag == "exponential":
            return gen_exponential(n, rng)
        if self.tag == "chi_squared":
            return gen_chi_squared(n, self.df, rng)
        return gen_exp_superstar(n, self.factor, rng)


def gen_arrivals(n: int, rng: np.random.Generator) -> ArrivalDraw:
    """n i.i.d. Uniform[0, 1] arrival times."""
    if n < 1:
        raise ValueError("need at least one arrival")
    return ArrivalDraw(rng.random(n))


def gen_pareto_power(
    n: int, rng: np.random.Generator, reading: str = "scale_shape"
) -> WeightProfile:
    """Uniforms on [0, theta] raised to the power n^1.5, theta Pareto-drawn.

    The construction stays in log space throughout (the exponent is ~2828 at
    n = 200, far beyond float64 in linear form) and the profile comes back
    normalized. ``reading`` picks the interpretation of the Pareto parameters
    (5/n, 1): ``"scale_shape"`` means scale 5/n with shape 1 (the default),
    ``"shape_scale"`` means shape 5/n with scale 1. Both produce the huge
    top-gap phenomenon, since the power dominates the gap structure.
    """
    if n < 2:
        raise ValueError("pareto-power family needs n >= 2")
    u = 1.0 - rng.random()  # Uniform(0, 1], keeps theta finite
    if reading == "scale_shape":
        log_theta = np.log(5.0 / n) - np.log(u)
    elif reading == "shape_scale":
        log_theta = -(n / 5.0) * np.log(u)
    else:
        raise ValueError("reading must be 'scale_shape' or 'shape_scale'")
    y = rng.random(n)  # w_i = (theta * y_i)^(n^1.5), in logs
    with np.errstate(divide="ignore"):
        log_w = n**1.5 * (log_theta + np.log(y))
    return normalize(WeightProfile(log_w))


def gen_exponential(n: int, rng: np.random.Generator) -> WeightProfile:
    """n i.i.d. Exp(1) weights."""
    if n < 1:
        raise ValueError("need at least one weight")
    return WeightProfile.from_weights(rng.standard_exponential(n))


def gen_chi_squared(n: int, df: int, rng: np.random.Generator) -> WeightProfile:
    """Each weight is an explicit sum of ``df`` squared standard normals."""
    if n < 1:
        raise ValueError("need at least one weight")
    if df < 1:
        raise ValueError("df must be >= 1")
    z = rng.standard_normal((n, df))
    return WeightProfile.from_weights(np.sum(z * z, axis=1))


def gen_exp_superstar(
    n: int, factor: float, rng: np.random.Generator
) -> WeightProfile:
    """n - 1 Exp(1) weights plus one element at ``factor`` times their maximum."""
    if n < 2:
        raise ValueError("superstar family needs n >= 2")
    if factor <= 0:
        raise ValueError("factor must be positive")
    base = rng.standard_exponential(n - 1)
    star = factor * float(np.max(base))
    return WeightProfile.from_weights(np.append(base, star))


def save_profiles(
    path, profiles, family_tag: str = "custom", master_seed: int | None = None
) -> None:
    """Write profiles as replay text: one comma-separated row of log-weights
    per instance, after a header naming family and seed."""
    path = Path(path)
    seed_part = "" if master_seed is None else f" seed={master_seed}"
    with path.open("w", encoding="utf-8") as f:
        f.write(f"# family={family_tag}{seed_part}\n")
        for prof in profiles:
            f.write(",".join(repr(float(v)) for v in prof.log_weights) + "\n")


def load_profiles(path) -> tuple[list[WeightProfile], dict]:
    """Read a replay file written by :func:`save_profiles`.

    Returns the profiles plus the parsed header metadata.
    """
    path = Path(path)
    meta: dict = {}
    profiles: list[WeightProfile] = []
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line.lstrip("#").split():
                    if "=" in token:
                        key, val = token.split("=", 1)
                        meta[key] = val
                continue
            profiles.append(
                WeightProfile(np.array([float(v) for v in line.split(",")]))
            )
    if not profiles:
        raise ValueError(f"no profiles found in {path}")
    return profiles, meta
