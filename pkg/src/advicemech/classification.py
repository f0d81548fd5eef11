"""Classification mechanisms for shared-input binary labeling problems.

`srda` runs a squared, advice-scaled lottery between the all-zeros and
all-ones labelings.  Any menu of two labelings reduces to that case by
restricting attention to the points where the pair disagrees; the
reduction and mechanism wrappers built on it live here too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    AgentDataset,
    BINARY_DOMAIN,
    ClassMismatchError,
    ConstantClass,
    Instance,
    LabeledPoint,
    LabelingChoice,
    LabelingLottery,
    LabelingsClass,
    Real,
    c0c1_class,
    personal_risk,
)
from .regression import PfaConfig, pfa


@dataclass(frozen=True)
class BinaryPreferenceSummary:
    """Fraction of agents weakly preferring the all-ones labeling, and its
    complement.  Exact rationals."""

    P: Fraction
    N: Fraction

    def __post_init__(self):
        if self.P + self.N != 1 or not 0 <= self.P <= 1:
            raise ValueError("P and N must be complementary probabilities")


def _require_c0c1(instance: Instance) -> int:
    cls = instance.function_class
    if not isinstance(cls, LabelingsClass) or len(cls.labelings) != 2:
        raise ClassMismatchError("a two-labeling instance is required")
    m = cls.num_points
    if cls.labelings != ((0,) * m, (1,) * m):
        raise ClassMismatchError("instance must be over the all-0s/all-1s pair")
    return m


def preference_summary(
    instance: Instance, literal_indicator: bool = False
) -> BinaryPreferenceSummary:
    """Count the agents siding with the all-ones labeling.

    The default counts an agent into P when its personal risk under c1 is at
    most its risk under c0 (ties included, so indifferent agents support c1).
    `literal_indicator=True` flips the comparison to >=, counting agents
    that weakly prefer c0 instead; it exists purely for comparison
    experiments and breaks the mechanism's incentive guarantees.
    """
    _require_c0c1(instance)
    cls = instance.function_class
    count = 0
    for agent in instance.agents:
        r1 = personal_risk(1, agent, cls)
        r0 = personal_risk(0, agent, cls)
        if (r1 >= r0) if literal_indicator else (r1 <= r0):
            count += 1
    P = Fraction(count, instance.n)
    return BinaryPreferenceSummary(P, 1 - P)


def srda(
    gamma: Real,
    instance: Instance,
    advice: int,
    literal_indicator: bool = False,
) -> LabelingLottery:
    """Square-random-dictator with advice over the {c0, c1} pair.

    With support P for c1 and N = 1 - P, the squared weights are scaled in
    favor of the advised labeling by 1/gamma before normalizing, so the
    lottery concentrates on the advice without ever silencing the data.
    Probabilities are exact rationals when gamma is rational.
    """
    gamma = Fraction(gamma) if not isinstance(gamma, float) else gamma
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    _require_c0c1(instance)
    if advice not in (0, 1):
        raise ClassMismatchError("advice must be one of the two labeling indices")
    s = preference_summary(instance, literal_indicator)
    P, N = s.P, s.N
    if advice == 1:
        favored, other = (P / gamma) ** 2, N**2
        p1 = favored / (favored + other)
    else:
        favored, other = (N / gamma) ** 2, P**2
        p1 = other / (other + favored)
    return LabelingLottery(((1, p1), (0, 1 - p1)))


def sample_outcome(lottery: LabelingLottery, seed: int) -> int:
    """Draw one labeling index from the lottery; simulation only, audits
    always use the analytic expected risks."""
    rng = random.Random(seed)
    u = rng.random()
    acc = 0.0
    for index, p in lottery.branches:
        acc += float(p)
        if u < acc:
            return index
    return lottery.branches[-1][0]


# ---------------------------------------------------------------------------
# Two arbitrary labelings -> {c0, c1} reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoLabelingReduction:
    """Restriction of a two-labeling instance to the disagreement points.

    Index 0 of the reduced instance stands for the first original labeling
    and index 1 for the second, so lotteries lift back unchanged.  The
    errors both labelings share outside the disagreement set are recorded
    as the labeling-independent `off_errors` count.
    """

    instance: Instance
    advice: int
    indices: tuple
    off_errors: int
    original: Instance

    def lift(self, outcome):
        return outcome  # reduced index i already names original labeling i


def two_labeling_reduce(instance: Instance, advice: int) -> TwoLabelingReduction:
    """Restrict to the points where the two labelings disagree and recode
    each agent's labels as agreement with the first (0) or second (1)."""
    cls = instance.function_class
    if not isinstance(cls, LabelingsClass) or len(cls.labelings) != 2:
        raise ClassMismatchError("a two-labeling instance is required")
    if advice not in (0, 1):
        raise ClassMismatchError("advice must be one of the two labeling indices")
    first, second = cls.labelings
    J = tuple(j for j in range(len(first)) if first[j] != second[j])
    disagree = set(J)
    off_errors = 0
    agents = []
    for agent in instance.agents:
        labels = agent.labels
        off_errors += sum(
            1 for j, y in enumerate(labels) if j not in disagree and first[j] != y
        )
        transformed = tuple(0 if labels[j] == first[j] else 1 for j in J)
        agents.append(
            AgentDataset(tuple(LabeledPoint(pos, y) for pos, y in enumerate(transformed)))
        )
    reduced = Instance(tuple(agents), c0c1_class(len(J)))
    return TwoLabelingReduction(reduced, advice, J, off_errors, instance)


def pfa_two_labeling(gamma: Real, instance: Instance, advice: int) -> LabelingChoice:
    """Deterministic two-labeling mechanism: reduce to {c0, c1}, treat each
    agent's reduced labels as a constant dataset over the {0, 1} domain, and
    run the constant project-and-fit mechanism."""
    reduction = two_labeling_reduce(instance, advice)
    cfg = PfaConfig(gamma, BINARY_DOMAIN)
    constant = Instance(
        tuple(
            AgentDataset.from_labels(agent.labels)
            for agent in reduction.instance.agents
        ),
        ConstantClass(BINARY_DOMAIN),
    )
    choice = pfa(cfg, constant, reduction.advice)
    return LabelingChoice(int(choice.value))


def srda_two_labeling(
    gamma: Real, instance: Instance, advice: int, literal_indicator: bool = False
) -> LabelingLottery:
    """Randomized two-labeling mechanism: reduce, run the lottery, lift."""
    reduction = two_labeling_reduce(instance, advice)
    lottery = srda(gamma, reduction.instance, reduction.advice, literal_indicator)
    return reduction.lift(lottery)
