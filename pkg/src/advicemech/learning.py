"""Distribution-level setting: agents hold finite-support input
distributions and private labeling functions; sampled datasets feed the
decision-level mechanisms and exact statistical risks measure what those
mechanisms achieve at the population level.

Finite supports keep every statistical risk an exact expectation, so the
sample-size composition guarantees can be checked per trial instead of
only in probability.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    AgentDataset,
    ConstantClass,
    Instance,
    InvalidInstanceError,
    LabeledPoint,
    LinearClass,
    Real,
    REALS,
    exact_div,
    global_risk,
)
from .regression import PfaConfig, pfa


@dataclass(frozen=True)
class AgentModel:
    """A discrete input distribution plus the agent's private labeling.

    `support` holds (x, probability) pairs with positive probabilities that
    sum to one exactly; `labeler` maps every support point to its label.
    """

    support: tuple
    labeler: tuple  # ((x, y), ...) pairs, total on the support

    def __post_init__(self):
        support = tuple((x, p) for x, p in self.support)
        labeler = dict(self.labeler)
        if not support:
            raise InvalidInstanceError("support must be nonempty")
        total = 0
        for x, p in support:
            if p <= 0:
                raise InvalidInstanceError("support probabilities must be positive")
            if x not in labeler:
                raise InvalidInstanceError(f"labeler undefined at support point {x!r}")
            total += p
        if total != 1:
            raise InvalidInstanceError("support probabilities must sum to one")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "labeler", tuple(sorted(labeler.items())))

    @classmethod
    def uniform(cls, labeled_points) -> "AgentModel":
        pts = list(labeled_points)
        p = Fraction(1, len(pts))
        return cls(tuple((x, p) for x, _ in pts), tuple(pts))

    def label_of(self, x):
        for key, y in self.labeler:
            if key == x:
                return y
        raise KeyError(x)

    def label_values(self) -> tuple:
        return tuple(y for _, y in self.labeler)


def _loss(f, cls, x, y):
    if isinstance(cls, LinearClass):
        return abs(f * x - y)
    return abs(f - y)


def statistical_personal_risk(f, agent: AgentModel, cls=ConstantClass(REALS)) -> Real:
    """Exact expected loss of f under the agent's input distribution."""
    return sum(p * _loss(f, cls, x, agent.label_of(x)) for x, p in agent.support)


def statistical_global_risk(f, agents, cls=ConstantClass(REALS)) -> Real:
    """Risk of an agent drawn uniformly at random: the mean personal risk."""
    agents = list(agents)
    return exact_div(sum(statistical_personal_risk(f, a, cls) for a in agents), len(agents))


def statistical_optimal_constant(agents) -> tuple:
    """Brute-force optimal constant and risk at the population level.

    The pooled objective is piecewise linear with breakpoints at the label
    values, so scanning those is exact.  Ties break toward the largest.
    """
    candidates = sorted({y for a in agents for y in a.label_values()})
    best_value, best_risk = None, None
    for c in candidates:
        r = statistical_global_risk(c, agents)
        if best_risk is None or r <= best_risk:
            best_value, best_risk = c, r
    return best_value, best_risk


def sample_instance(
    agents, m: int, seed: int, function_class=ConstantClass(REALS)
) -> Instance:
    """m iid draws per agent from its distribution, labeled truthfully.
    Deterministic for a given seed."""
    rng = random.Random(seed)
    sampled = []
    for agent in agents:
        xs = [x for x, _ in agent.support]
        weights = [float(p) for _, p in agent.support]
        draws = rng.choices(xs, weights=weights, k=m)
        sampled.append(
            AgentDataset(tuple(LabeledPoint(x, agent.label_of(x)) for x in draws))
        )
    return Instance(tuple(sampled), function_class)


def required_sample_size(n: int, epsilon, delta, constant=8) -> int:
    """ceil(constant * ln(n/delta) / epsilon^2), bumped to the next odd
    number so the per-agent sample sizes support the group guarantees."""
    if n < 1 or not 0 < float(delta) < 1 or float(epsilon) <= 0:
        raise ValueError("need n >= 1, epsilon > 0 and delta in (0, 1)")
    m = math.ceil(float(constant) * math.log(n / float(delta)) / float(epsilon) ** 2)
    m = max(m, 1)
    return m if m % 2 == 1 else m + 1


# ---------------------------------------------------------------------------
# Empirical-vs-statistical risk gaps
# ---------------------------------------------------------------------------


def _empirical_personal(f, dataset: AgentDataset) -> Real:
    return exact_div(sum(abs(f - p.y) for p in dataset.points), len(dataset))


def sup_personal_gap(agent: AgentModel, dataset: AgentDataset) -> Real:
    """Exact sup over all constants of |statistical - empirical| risk.

    Both risks are piecewise linear in the constant with breakpoints at the
    label values, and their difference is constant beyond the extremes, so
    the sup is attained at a breakpoint or equals the difference of means.
    """
    breaks = sorted(set(agent.label_values()) | set(dataset.labels))
    gap = max(
        abs(statistical_personal_risk(b, agent) - _empirical_personal(b, dataset))
        for b in breaks
    )
    stat_mean = sum(p * agent.label_of(x) for x, p in agent.support)
    emp_mean = sum(dataset.labels, start=Fraction(0)) / len(dataset)
    return max(gap, abs(stat_mean - emp_mean))


def sup_global_gap(agents, instance: Instance) -> Real:
    """Exact sup over all constants of the global risk gap; requires the
    equal per-agent sample sizes that `sample_instance` produces."""
    agents = list(agents)
    sizes = {len(a) for a in instance.agents}
    if len(sizes) != 1:
        raise InvalidInstanceError("global gap needs equal per-agent sample sizes")
    breaks = sorted(
        {y for a in agents for y in a.label_values()}
        | {y for a in instance.agents for y in a.labels}
    )
    gap = max(
        abs(statistical_global_risk(b, agents) - global_risk(b, instance))
        for b in breaks
    )
    stat_mean = sum(
        p * a.label_of(x) for a in agents for x, p in a.support
    ) / len(agents)
    labels = instance.all_labels()
    emp_mean = sum(labels, start=Fraction(0)) / len(labels)
    return max(gap, abs(stat_mean - emp_mean))


@dataclass(frozen=True)
class GapTrialRow:
    trial: int
    max_personal_gap: Real
    global_gap: Real


def risk_gap_experiment(agents, m: int, trials: int, seed: int, epsilon=None,
                        f_grid=None):
    """Per-trial maximal risk gaps and, when epsilon is given, the fraction
    of trials whose maximal gap exceeds it.

    With `f_grid` the gaps are maximized over those constants only;
    otherwise the exact supremum over every constant is used (the gap is
    piecewise linear, so it is computable in closed form).
    """
    agents = list(agents)
    rows = []
    for t in range(trials):
        inst = sample_instance(agents, m, seed + t)
        if f_grid is None:
            personal = max(
                sup_personal_gap(a, d) for a, d in zip(agents, inst.agents)
            )
            global_gap = sup_global_gap(agents, inst)
        else:
            personal = max(
                abs(statistical_personal_risk(f, a) - _empirical_personal(f, d))
                for a, d in zip(agents, inst.agents)
                for f in f_grid
            )
            global_gap = max(
                abs(statistical_global_risk(f, agents) - global_risk(f, inst))
                for f in f_grid
            )
        rows.append(GapTrialRow(t, personal, global_gap))
    if epsilon is None:
        return rows, None
    exceed = sum(1 for r in rows if max(r.max_personal_gap, r.global_gap) > epsilon)
    return rows, Fraction(exceed, trials)


@dataclass(frozen=True)
class CompositionTrial:
    trial: int
    seed: int
    gaps_ok: bool
    achieved: Real
    bound: Real
    ok: bool


def composition_experiment(
    agents, gamma, epsilon, delta, constant=8, trials=50, seed=0
):
    """Sample, run the constant mechanism with empirically correct advice,
    and compare its statistical risk against the consistency bound plus the
    concentration slack, trial by trial.

    The inequality is only claimed on trials where every measured gap is at
    most epsilon/2; the flag for that precondition is recorded per trial.
    """
    agents = list(agents)
    m = required_sample_size(len(agents), epsilon, delta, constant)
    _, best_stat = statistical_optimal_constant(agents)
    alpha = 1 + Fraction(gamma)
    rows = []
    for t in range(trials):
        trial_seed = seed + t
        inst = sample_instance(agents, m, trial_seed)
        labels = sorted(set(inst.all_labels()))
        risks = {c: global_risk(c, inst) for c in labels}
        emp_best = max(c for c in labels if risks[c] == min(risks.values()))
        choice = pfa(PfaConfig(Fraction(gamma)), inst, emp_best).value
        personal_ok = all(
            sup_personal_gap(a, d) <= Fraction(epsilon) / 2
            for a, d in zip(agents, inst.agents)
        )
        global_ok = sup_global_gap(agents, inst) <= Fraction(epsilon) / 2
        achieved = statistical_global_risk(choice, agents)
        bound = alpha * best_stat + (alpha + 1) / 2 * Fraction(epsilon)
        rows.append(
            CompositionTrial(
                t,
                trial_seed,
                personal_ok and global_ok,
                achieved,
                bound,
                achieved <= bound,
            )
        )
    return rows, m
