"""Advice-guided regression mechanisms.

`pfa` fits a constant by projecting every agent onto their personal
weighted-median value and then taking a weighted median of those
projections augmented with fractional copies of the advice.  `lpfa`
lifts the same pipeline to homogeneous linear functions through the
|x|-weighted y/x mapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    REALS,
    AgentDataset,
    ClassMismatchError,
    ConstantChoice,
    ConstantClass,
    Instance,
    InvalidInstanceError,
    LinearChoice,
    LinearClass,
    Real,
    ValueDomain,
    WeightedSample,
    erm_constant,
    weighted_median_bounds,
)
from .model import INF, exact_div


class DegenerateLinearInstance(InvalidInstanceError):
    """Every slope fits equally well: all input x values are zero."""


def _exact_div(y: Real, x: Real) -> Real:
    """y/x, kept rational when both operands are rational."""
    return exact_div(y, x)


def confidence_weight(gamma: Real) -> Real:
    """The advice copy factor lambda = (2 - gamma) / (2 + gamma)."""
    if not 0 <= gamma <= 2:
        raise ValueError("gamma must lie in [0, 2]")
    if isinstance(gamma, float):
        return (2 - gamma) / (2 + gamma)
    return Fraction(2 - Fraction(gamma), 2 + Fraction(gamma))


@dataclass(frozen=True)
class PfaConfig:
    """Confidence parameter and output domain for the constant mechanism.

    gamma near 0 leans on the advice; gamma = 2 ignores it entirely.
    """

    gamma: Real
    domain: ValueDomain = REALS

    def __post_init__(self):
        confidence_weight(self.gamma)  # validates the range

    @property
    def lam(self) -> Real:
        return confidence_weight(self.gamma)


def agent_projection(domain: ValueDomain, agent: AgentDataset) -> Real:
    """The agent's personal-risk-minimizing constant (largest tie-break)."""
    return erm_constant(domain, WeightedSample.from_values(agent.labels))


def pfa(cfg: PfaConfig, instance: Instance, advice: Real) -> ConstantChoice:
    """Project-and-fit with advice over constant functions.

    Each agent is replaced by |S_i| copies of their personal optimum b_i;
    the advice enters with weight lam * |S| and the weighted median of the
    result (largest tie-break) is returned.
    """
    cls = instance.function_class
    if not isinstance(cls, ConstantClass) or cls.domain != cfg.domain:
        raise ClassMismatchError("instance domain does not match the mechanism")
    if advice not in cfg.domain:
        raise ClassMismatchError(f"advice {advice!r} lies outside the value domain")
    entries = [
        (agent_projection(cfg.domain, agent), len(agent)) for agent in instance.agents
    ]
    advice_weight = cfg.lam * instance.total_points
    if advice_weight > 0:
        entries.append((advice, advice_weight))
    return ConstantChoice(erm_constant(cfg.domain, WeightedSample(tuple(entries))))


# ---------------------------------------------------------------------------
# Homogeneous linear functions via the weighted constant mapping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MappedLinearInstance:
    """Per-agent weighted samples of y/x values with |x| weights.

    Points with x = 0 cannot influence the slope; they are dropped from the
    samples and their |y| losses accumulate into `risk_offset` (already
    normalized by the original point count).  `total_mapped_weight` is the
    mapped multiset's size, i.e. the sum of all |x|.
    """

    agent_samples: tuple  # one WeightedSample or None per agent
    risk_offset: Real
    total_mapped_weight: Real
    original_points: int

    def pooled_sample(self) -> WeightedSample:
        entries = []
        for s in self.agent_samples:
            if s is not None:
                entries.extend(s.entries)
        return WeightedSample(tuple(entries))

    def mapped_risk(self, slope: Real) -> Real:
        """Weighted absolute risk of the constant `slope` on the mapped data."""
        return self.pooled_sample().risk(slope)

    def linear_risk(self, slope: Real) -> Real:
        """Risk of x -> slope*x on the original instance, offset included."""
        heavy = sum(
            w * abs(slope - v)
            for s in self.agent_samples
            if s is not None
            for v, w in s.entries
        )
        return exact_div(heavy, self.original_points) + self.risk_offset


def map_to_constant_instance(instance: Instance) -> MappedLinearInstance:
    """Turn a homogeneous-linear instance into weighted constant-fitting data.

    Each point (x, y) with x != 0 becomes the value y/x carrying weight |x|;
    non-integer x values are handled by the weights directly.
    """
    if not isinstance(instance.function_class, LinearClass):
        raise ClassMismatchError("linear-class instance required")
    samples = []
    offset_sum = 0
    total_weight = 0
    for agent in instance.agents:
        entries = []
        for p in agent.points:
            if p.x == 0:
                offset_sum += abs(p.y)
            else:
                entries.append((_exact_div(p.y, p.x), abs(p.x)))
                total_weight += abs(p.x)
        samples.append(WeightedSample(tuple(entries)) if entries else None)
    if total_weight == 0:
        raise DegenerateLinearInstance("all x values are zero; every slope is optimal")
    size = instance.total_points
    return MappedLinearInstance(
        tuple(samples), exact_div(offset_sum, size), total_weight, size
    )


def lpfa(gamma: Real, instance: Instance, advice_slope: Real) -> LinearChoice:
    """Project-and-fit with advice lifted to homogeneous linear functions.

    Runs the constant pipeline on the mapped weighted data: each agent is
    projected to the weighted median of its y/x values, projections carry
    the agent's total |x| weight, and the advice enters with weight
    lam * (total mapped weight) since the mapped multiset is what the
    constant mechanism actually sees.  A fully degenerate instance (all
    x = 0) returns the advice slope: every slope is optimal there.
    """
    lam = confidence_weight(gamma)
    try:
        mapped = map_to_constant_instance(instance)
    except DegenerateLinearInstance:
        return LinearChoice(advice_slope)
    entries = []
    for sample in mapped.agent_samples:
        if sample is None:
            continue
        b = erm_constant(REALS, sample)
        entries.append((b, sample.total_weight))
    advice_weight = lam * mapped.total_mapped_weight
    if advice_weight > 0:
        entries.append((advice_slope, advice_weight))
    return LinearChoice(erm_constant(REALS, WeightedSample(tuple(entries))))


def optimal_slope_set(instance: Instance):
    """Minimizing slopes as an interval, plus the optimal linear risk."""
    mapped = map_to_constant_instance(instance)
    lo, hi = weighted_median_bounds(mapped.pooled_sample())
    return (lo, hi), mapped.linear_risk(hi)


def advice_error_linear(instance: Instance, advice_slope: Real) -> Real:
    """Advice error for the linear class: distance from the advice slope to
    the optimal slope set, normalized by the optimal linear risk."""
    try:
        (lo, hi), best = optimal_slope_set(instance)
    except DegenerateLinearInstance:
        return 0
    dist = max(lo - advice_slope, advice_slope - hi, 0)
    if best == 0:
        return 0 if dist == 0 else INF
    return exact_div(dist, best)


def advice_error_mapped(instance: Instance, advice_slope: Real) -> Real:
    """Advice error of the slope measured on the mapped weighted data, i.e.
    what the constant mechanism inside `lpfa` actually faces.  On instances
    without x = 0 points this equals advice_error_linear scaled by the ratio
    of the mapped weight to the point count."""
    try:
        mapped = map_to_constant_instance(instance)
    except DegenerateLinearInstance:
        return 0
    pooled = mapped.pooled_sample()
    lo, hi = weighted_median_bounds(pooled)
    dist = max(lo - advice_slope, advice_slope - hi, 0)
    best = pooled.risk(hi)
    if best == 0:
        return 0 if dist == 0 else INF
    return exact_div(dist, best)
