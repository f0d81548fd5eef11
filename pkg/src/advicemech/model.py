"""Core data model: strategic datasets, exact risk functionals, and the
weighted-median fitting oracle.

Everything here is a pure function of immutable inputs.  Arithmetic is
type-generic: feed `int`/`fractions.Fraction` labels and every risk,
median and ratio comes out exact; feed `float` labels and the same code
runs as a fast approximate path.  All acceptance-grade computations in
the test suite use the exact path.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Real = Union[int, float, Fraction]

INF = math.inf


class InvalidInstanceError(ValueError):
    """Raised when a dataset or instance violates a structural invariant."""


class ClassMismatchError(ValueError):
    """Raised when a function/advice does not belong to the instance's class."""


def _check_finite(x: Real, what: str) -> None:
    if isinstance(x, float) and not math.isfinite(x):
        raise InvalidInstanceError(f"{what} must be finite, got {x!r}")


def frac(x) -> Fraction:
    """Parse a number into an exact Fraction. Accepts int, Fraction, and
    strings like '3', '-0.25' or '2/7'. Floats are rejected to keep the
    exact path honest; convert explicitly if that is really wanted."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def exact_div(num: Real, den: Real) -> Real:
    """num/den staying rational whenever both operands are rational."""
    if isinstance(num, float) or isinstance(den, float):
        return num / den
    return Fraction(num) / Fraction(den)


# ---------------------------------------------------------------------------
# Domains and function classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValueDomain:
    """The set of permitted constant outputs: all reals, or a finite sorted set.

    ``values is None`` means the whole real line.
    """

    values: tuple | None = None

    def __post_init__(self):
        if self.values is not None:
            vals = tuple(self.values)
            if not vals:
                raise InvalidInstanceError("finite domain must be nonempty")
            for v in vals:
                _check_finite(v, "domain value")
            if any(a >= b for a, b in zip(vals, vals[1:])):
                raise InvalidInstanceError("finite domain must be strictly increasing")
            object.__setattr__(self, "values", vals)

    @classmethod
    def reals(cls) -> "ValueDomain":
        return cls(None)

    @classmethod
    def finite(cls, values: Iterable[Real]) -> "ValueDomain":
        return cls(tuple(sorted(values)))

    @property
    def is_reals(self) -> bool:
        return self.values is None

    def __contains__(self, a) -> bool:
        if self.values is None:
            return not (isinstance(a, float) and not math.isfinite(a))
        return any(a == v for v in self.values)


REALS = ValueDomain.reals()
BINARY_DOMAIN = ValueDomain.finite((0, 1))


class FunctionClass:
    """Marker base for the three supported hypothesis classes."""


@dataclass(frozen=True)
class ConstantClass(FunctionClass):
    """All constant functions with values in `domain`."""

    domain: ValueDomain = REALS


@dataclass(frozen=True)
class LinearClass(FunctionClass):
    """Homogeneous linear functions x -> a*x over the real line."""


@dataclass(frozen=True)
class LabelingsClass(FunctionClass):
    """A finite menu of binary labelings of a shared input sequence."""

    labelings: tuple

    def __post_init__(self):
        labs = tuple(tuple(v) for v in self.labelings)
        if len(labs) < 2:
            raise InvalidInstanceError("need at least two labelings")
        m = len(labs[0])
        if m < 1 or any(len(v) != m for v in labs):
            raise InvalidInstanceError("labelings must share a positive length")
        if any(y not in (0, 1) for v in labs for y in v):
            raise InvalidInstanceError("labelings must be 0/1 valued")
        if len(set(labs)) < 2:
            raise InvalidInstanceError("need at least two distinct labelings")
        object.__setattr__(self, "labelings", labs)

    @property
    def num_points(self) -> int:
        return len(self.labelings[0])


def c0c1_class(m: int) -> LabelingsClass:
    """The two constant labelings (all zeros, all ones) of m shared points."""
    return LabelingsClass(((0,) * m, (1,) * m))


# ---------------------------------------------------------------------------
# Datasets and instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledPoint:
    x: Real
    y: Real

    def __post_init__(self):
        _check_finite(self.x, "point x")
        _check_finite(self.y, "label y")


@dataclass(frozen=True)
class AgentDataset:
    """One agent's reported points; the unit of strategic misreporting."""

    points: tuple

    def __post_init__(self):
        pts = tuple(
            p if isinstance(p, LabeledPoint) else LabeledPoint(p[0], p[1])
            for p in self.points
        )
        if not pts:
            raise InvalidInstanceError("agent dataset must contain at least one point")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_labels(cls, labels: Iterable[Real]) -> "AgentDataset":
        return cls(tuple(LabeledPoint(0, y) for y in labels))

    @property
    def labels(self) -> tuple:
        return tuple(p.y for p in self.points)

    @property
    def xs(self) -> tuple:
        return tuple(p.x for p in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def with_labels(self, labels: Sequence[Real]) -> "AgentDataset":
        """Same public x values, different (possibly misreported) labels."""
        if len(labels) != len(self.points):
            raise InvalidInstanceError("misreport must relabel exactly the same points")
        return AgentDataset(
            tuple(LabeledPoint(p.x, y) for p, y in zip(self.points, labels))
        )


@dataclass(frozen=True)
class Instance:
    """A multiset union of agent datasets plus the hypothesis class."""

    agents: tuple
    function_class: FunctionClass

    def __post_init__(self):
        agents = tuple(
            a if isinstance(a, AgentDataset) else AgentDataset(tuple(a))
            for a in self.agents
        )
        if not agents:
            raise InvalidInstanceError("instance needs at least one agent")
        cls = self.function_class
        if isinstance(cls, LabelingsClass):
            m = cls.num_points
            shared = agents[0].xs
            if len(shared) != m:
                raise InvalidInstanceError("agent data must cover all shared points")
            for a in agents:
                if a.xs != shared:
                    raise InvalidInstanceError(
                        "labeling instances require an identical x sequence per agent"
                    )
                if any(y not in (0, 1) for y in a.labels):
                    raise InvalidInstanceError("labels must be 0/1 in a labeling instance")
        object.__setattr__(self, "agents", agents)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def total_points(self) -> int:
        return sum(len(a) for a in self.agents)

    def all_labels(self) -> list:
        return [y for a in self.agents for y in a.labels]

    def with_agent_labels(self, i: int, labels: Sequence[Real]) -> "Instance":
        agents = list(self.agents)
        agents[i] = agents[i].with_labels(labels)
        return Instance(tuple(agents), self.function_class)


def constant_instance(label_lists, domain: ValueDomain = REALS) -> Instance:
    """Instance over constant functions; agents given as bare label lists."""
    return Instance(
        tuple(AgentDataset.from_labels(labels) for labels in label_lists),
        ConstantClass(domain),
    )


def linear_instance(pair_lists) -> Instance:
    """Instance over homogeneous linear functions; agents as (x, y) pair lists."""
    return Instance(
        tuple(AgentDataset(tuple(pairs)) for pairs in pair_lists), LinearClass()
    )


def shared_binary_instance(vectors, labelings=None) -> Instance:
    """Shared-input binary instance; defaults to the {all-0s, all-1s} menu."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise InvalidInstanceError("instance needs at least one agent")
    m = len(vectors[0])
    cls = c0c1_class(m) if labelings is None else LabelingsClass(tuple(labelings))
    agents = tuple(
        AgentDataset(tuple(LabeledPoint(j, y) for j, y in enumerate(v)))
        for v in vectors
    )
    return Instance(agents, cls)


# ---------------------------------------------------------------------------
# Weighted samples and the median oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedSample:
    """(value, nonnegative weight) pairs; the substrate of weighted-median
    fitting.  Fractional weights are first-class citizens."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((v, w) for v, w in self.entries)
        total = 0
        for v, w in entries:
            _check_finite(v, "sample value")
            _check_finite(w, "sample weight")
            if w < 0:
                raise InvalidInstanceError("weights must be nonnegative")
            total += w
        if not entries or total <= 0:
            raise InvalidInstanceError("total weight must be positive")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_values(cls, values: Iterable[Real]) -> "WeightedSample":
        return cls(tuple((v, 1) for v in values))

    @property
    def total_weight(self) -> Real:
        return sum(w for _, w in self.entries)

    def risk(self, a: Real) -> Real:
        """Average weighted absolute loss of the constant a."""
        return exact_div(sum(w * abs(a - v) for v, w in self.entries), self.total_weight)


def weighted_median_bounds(sample: WeightedSample) -> tuple:
    """The closed interval [lo, hi] of minimizers of the weighted absolute loss.

    lo is the smallest sample value carrying at least half the total weight
    at or below it, hi the largest carrying at least half at or above it.
    Comparisons are done doubled so integer weights never hit division.
    """
    items = sorted((v, w) for v, w in sample.entries if w > 0)
    total = sum(w for _, w in items)
    lo = hi = None
    acc = 0
    for v, w in items:
        acc += w
        if 2 * acc >= total:
            lo = v
            break
    acc = 0
    for v, w in reversed(items):
        acc += w
        if 2 * acc >= total:
            hi = v
            break
    return lo, hi


def erm_constant(domain: ValueDomain, sample: WeightedSample) -> Real:
    """The largest minimizer over `domain` of the weighted absolute loss.

    For the real line this is the upper end of the weighted-median interval.
    For a finite domain, convexity makes it enough to inspect the domain
    values inside the interval plus the nearest neighbours on either side.
    Ties always break toward the largest value.
    """
    lo, hi = weighted_median_bounds(sample)
    if domain.is_reals:
        return hi
    vals = domain.values
    left = bisect_left(vals, lo)
    right = bisect_right(vals, hi)
    if left < right:
        # domain values inside [lo, hi] all attain the minimum risk
        return vals[right - 1]
    candidates = []
    if left > 0:
        candidates.append(vals[left - 1])
    if left < len(vals):
        candidates.append(vals[left])
    best = None
    best_risk = None
    for c in candidates:  # ascending, so >= keeps the largest tie
        r = sample.risk(c)
        if best is None or r <= best_risk:
            best, best_risk = c, r
    return best


def optimal_constant_set(instance: Instance):
    """The set of unconstrained-risk minimizers within the instance's domain.

    Returns (representatives, optimal_risk) where `representatives` is either
    the interval endpoints (lo, hi) for a real-line domain or the tuple of
    optimal domain values for a finite domain.
    """
    cls = instance.function_class
    if not isinstance(cls, ConstantClass):
        raise ClassMismatchError("constant-class instance required")
    sample = WeightedSample.from_values(instance.all_labels())
    lo, hi = weighted_median_bounds(sample)
    if cls.domain.is_reals:
        return (lo, hi), sample.risk(hi)
    vals = cls.domain.values
    left = bisect_left(vals, lo)
    right = bisect_right(vals, hi)
    candidates = set(vals[left:right])
    if left > 0:
        candidates.add(vals[left - 1])
    if right < len(vals):
        candidates.add(vals[right])
    risks = {c: sample.risk(c) for c in candidates}
    best = min(risks.values())
    opt = tuple(sorted(c for c, r in risks.items() if r == best))
    return opt, best


# ---------------------------------------------------------------------------
# Mechanism outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantChoice:
    value: Real


@dataclass(frozen=True)
class LinearChoice:
    slope: Real


@dataclass(frozen=True)
class LabelingChoice:
    index: int


@dataclass(frozen=True)
class LabelingLottery:
    """An exact two-or-more point distribution over labeling indices."""

    branches: tuple  # ((index, probability), ...)

    def __post_init__(self):
        branches = tuple((int(i), p) for i, p in self.branches)
        total = sum(p for _, p in branches)
        exact = all(not isinstance(p, float) for _, p in branches)
        if any(p < 0 for _, p in branches):
            raise InvalidInstanceError("lottery probabilities must be nonnegative")
        if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
            raise InvalidInstanceError("lottery probabilities must sum to one")
        object.__setattr__(self, "branches", branches)

    def probability(self, index: int) -> Real:
        return sum(p for i, p in self.branches if i == index)


MechanismOutcome = Union[ConstantChoice, LinearChoice, LabelingChoice, LabelingLottery]


# ---------------------------------------------------------------------------
# Risk functionals
# ---------------------------------------------------------------------------


def _point_loss(f, cls: FunctionClass, point: LabeledPoint, j: int) -> Real:
    if isinstance(cls, ConstantClass):
        return abs(f - point.y)
    if isinstance(cls, LinearClass):
        return abs(f * point.x - point.y)
    if isinstance(cls, LabelingsClass):
        return 0 if cls.labelings[f][j] == point.y else 1
    raise ClassMismatchError(f"unknown function class {cls!r}")


def _bare_function(f, cls: FunctionClass):
    """Unwrap an outcome into the bare value the class understands."""
    if isinstance(f, ConstantChoice):
        if not isinstance(cls, ConstantClass):
            raise ClassMismatchError("constant choice on a non-constant instance")
        return f.value
    if isinstance(f, LinearChoice):
        if not isinstance(cls, LinearClass):
            raise ClassMismatchError("linear choice on a non-linear instance")
        return f.slope
    if isinstance(f, LabelingChoice):
        if not isinstance(cls, LabelingsClass):
            raise ClassMismatchError("labeling choice on a non-labeling instance")
        if not 0 <= f.index < len(cls.labelings):
            raise ClassMismatchError("labeling index out of range")
        return f.index
    if isinstance(cls, LabelingsClass):
        if not isinstance(f, int) or not 0 <= f < len(cls.labelings):
            raise ClassMismatchError("labeling functions are referenced by index")
    return f


def personal_risk(f, agent: AgentDataset, cls: FunctionClass) -> Real:
    """Average loss of f on one agent's data; lotteries in closed form."""
    if isinstance(f, LabelingLottery):
        return sum(
            p * personal_risk(i, agent, cls) for i, p in f.branches if p != 0
        )
    g = _bare_function(f, cls)
    total = sum(_point_loss(g, cls, p, j) for j, p in enumerate(agent.points))
    return exact_div(total, len(agent))


def global_risk(f, instance: Instance) -> Real:
    """Average loss of f over the full multiset; lotteries in closed form."""
    cls = instance.function_class
    if isinstance(f, LabelingLottery):
        return sum(
            p * global_risk(i, instance) for i, p in f.branches if p != 0
        )
    g = _bare_function(f, cls)
    total = 0
    for agent in instance.agents:
        for j, p in enumerate(agent.points):
            total += _point_loss(g, cls, p, j)
    return exact_div(total, instance.total_points)


def augmented_risk(a: Real, instance: Instance, advice: Real, lam: Real) -> Real:
    """Risk of the constant a on the instance augmented with lam*|S| advice
    copies (a fractional copy count is allowed)."""
    cls = instance.function_class
    if not isinstance(cls, ConstantClass):
        raise ClassMismatchError("augmented risk is defined for constant instances")
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    size = instance.total_points
    data_term = sum(abs(a - y) for y in instance.all_labels())
    return exact_div(data_term + lam * size * abs(a - advice), (1 + lam) * size)


def advice_error_constant(instance: Instance, advice: Real) -> Real:
    """Distance from the advice to the nearest optimal constant, normalized
    by the optimal risk.  Zero-risk instances give 0 for optimal advice and
    +inf otherwise."""
    opt, best = optimal_constant_set(instance)
    cls = instance.function_class
    if cls.domain.is_reals:
        lo, hi = opt
        dist = max(lo - advice, advice - hi, 0)
    else:
        dist = min(abs(advice - c) for c in opt)
    if best == 0:
        return 0 if dist == 0 else INF
    return exact_div(dist, best)


def expected_personal_risk(outcome, agent: AgentDataset, cls: FunctionClass) -> Real:
    """Alias that reads naturally for lottery outcomes; risks of lotteries
    are always the closed-form expectation, never sampled."""
    return personal_risk(outcome, agent, cls)
