"""Core model tests: risks, the weighted-median oracle, and advice errors.

Derived expectations are frozen from independent brute-force oracles that
never touch the median logic under test.
"""

import random
from fractions import Fraction as F

import pytest

from advicemech import (
    REALS,
    AgentDataset,
    Instance,
    InvalidInstanceError,
    LabelingLottery,
    LabelingsClass,
    ValueDomain,
    WeightedSample,
    advice_error_constant,
    augmented_risk,
    constant_instance,
    erm_constant,
    global_risk,
    linear_instance,
    personal_risk,
    shared_binary_instance,
    weighted_median_bounds,
)
from advicemech.model import ConstantClass, optimal_constant_set


def brute_force_erm(domain_values, sample: WeightedSample):
    """Independent oracle: scan a candidate grid for the largest minimizer
    of the weighted absolute loss."""
    best, best_risk = None, None
    for c in sorted(domain_values):
        r = sample.risk(c)
        if best_risk is None or r <= best_risk:
            best, best_risk = c, r
    return best


# ---------------------------------------------------------------------------
# construction invariants
# ---------------------------------------------------------------------------


def test_rejects_empty_agent():
    with pytest.raises(InvalidInstanceError):
        AgentDataset(())


def test_rejects_nan_label():
    with pytest.raises(InvalidInstanceError):
        AgentDataset.from_labels([float("nan")])


def test_rejects_nonbinary_labels_in_labeling_instance():
    with pytest.raises(InvalidInstanceError):
        shared_binary_instance([(0, 2, 1)])


def test_rejects_mismatched_shared_inputs():
    cls = LabelingsClass(((0, 0), (1, 1)))
    good = AgentDataset(((0, 1), (1, 0)))
    bad = AgentDataset(((5, 1), (6, 0)))
    with pytest.raises(InvalidInstanceError):
        Instance((good, bad), cls)


def test_rejects_single_distinct_labeling():
    with pytest.raises(InvalidInstanceError):
        LabelingsClass(((0, 1), (0, 1)))


def test_domain_must_increase():
    with pytest.raises(InvalidInstanceError):
        ValueDomain.finite([1, 1, 2])
    with pytest.raises(InvalidInstanceError):
        ValueDomain((2, 1))


def test_weights_must_be_nonnegative_with_positive_total():
    with pytest.raises(InvalidInstanceError):
        WeightedSample(((1, -1),))
    with pytest.raises(InvalidInstanceError):
        WeightedSample(((1, 0),))


def test_lottery_probabilities_sum_to_one():
    LabelingLottery(((0, F(1, 3)), (1, F(2, 3))))
    with pytest.raises(InvalidInstanceError):
        LabelingLottery(((0, F(1, 3)), (1, F(1, 3))))


# ---------------------------------------------------------------------------
# risks
# ---------------------------------------------------------------------------


def test_global_risk_constant_direct():
    assert global_risk(0, constant_instance([[0, 2]])) == 1


def test_global_risk_linear_zero_loss_fit():
    assert global_risk(1, linear_instance([[(2, 2), (1, 1)]])) == 0


def test_global_risk_labeling_zero_errors():
    # unanimous all-ones labels fit the all-ones labeling exactly
    inst = shared_binary_instance([(1, 1, 1)] * 2)
    assert global_risk(1, inst) == 0


def test_personal_risk_examples():
    assert personal_risk(1, AgentDataset.from_labels([1, 1, 1]), ConstantClass()) == 0
    agent = AgentDataset.from_labels([F(0), F(1)])
    assert personal_risk(F(1, 2), agent, ConstantClass()) == F(1, 2)


def test_lottery_risk_is_probability_weighted():
    inst = shared_binary_instance([(1, 0)])
    lottery = LabelingLottery(((0, F(1, 4)), (1, F(3, 4))))
    # both labelings err on exactly one of the two points
    assert global_risk(lottery, inst) == F(1, 2)


def test_risk_zero_iff_exact_fit():
    rng = random.Random(7)
    for _ in range(50):
        labels = [rng.randint(-3, 3) for _ in range(rng.randint(1, 6))]
        inst = constant_instance([labels])
        for a in range(-3, 4):
            r = global_risk(a, inst)
            assert r >= 0
            assert (r == 0) == all(y == a for y in labels)


# ---------------------------------------------------------------------------
# the weighted-median oracle
# ---------------------------------------------------------------------------


def test_erm_odd_median():
    assert erm_constant(REALS, WeightedSample.from_values([1, 2, 3])) == 2


def test_erm_tie_breaks_largest():
    assert erm_constant(REALS, WeightedSample.from_values([0, 1])) == 1


def test_erm_weighted_brute_force_frozen():
    sample = WeightedSample(((0, 2), (10, 1)))
    assert erm_constant(REALS, sample) == 0
    grid = [F(j, 2) for j in range(-2, 25)]
    assert brute_force_erm(grid + [0, 10], sample) == 0


def test_erm_finite_domain_nearest():
    sample = WeightedSample(((F("0.4"), 1),))
    assert erm_constant(ValueDomain.finite([0, 1]), sample) == 0


def test_erm_finite_domain_tie_prefers_largest():
    # candidates 0 and 1 both at distance 1/2
    sample = WeightedSample(((F(1, 2), 1),))
    assert erm_constant(ValueDomain.finite([0, 1]), sample) == 1


def test_weighted_median_characterization_random():
    rng = random.Random(123)
    for _ in range(300):
        entries = tuple(
            (rng.randint(-5, 5), F(rng.randint(1, 8), rng.randint(1, 4)))
            for _ in range(rng.randint(1, 7))
        )
        sample = WeightedSample(entries)
        v = erm_constant(REALS, sample)
        total = sample.total_weight
        at_most = sum(w for x, w in entries if x <= v)
        at_least = sum(w for x, w in entries if x >= v)
        assert 2 * at_most >= total and 2 * at_least >= total
        # maximality: nothing above v satisfies both sides
        above = sorted(x for x, _ in entries if x > v)
        if above:
            w_above = sum(w for x, w in entries if x >= above[0])
            assert 2 * w_above < total


def test_erm_matches_grid_brute_force():
    # instances of <= 12 points over a grid of <= 21 levels
    rng = random.Random(99)
    levels = [F(j, 2) for j in range(-10, 11)]
    for _ in range(300):
        values = [rng.choice(levels) for _ in range(rng.randint(1, 12))]
        sample = WeightedSample.from_values(values)
        assert erm_constant(REALS, sample) == brute_force_erm(set(values), sample)
        domain = ValueDomain.finite(levels)
        assert erm_constant(domain, sample) == brute_force_erm(levels, sample)


def test_single_peak_ordering():
    rng = random.Random(5)
    for _ in range(200):
        labels = [rng.randint(-6, 6) for _ in range(rng.randint(1, 9))]
        inst = constant_instance([labels])
        lo, hi = weighted_median_bounds(WeightedSample.from_values(labels))
        picks = sorted(rng.uniform(-8, 8) for _ in range(3))
        a, b, c = (F(x).limit_denominator(64) for x in picks)
        if hi < a < b < c:
            assert global_risk(a, inst) <= global_risk(b, inst) <= global_risk(c, inst)
        if a < b < c < lo:
            assert global_risk(a, inst) >= global_risk(b, inst) >= global_risk(c, inst)
        mid = global_risk(b, inst)
        assert mid <= max(global_risk(a, inst), global_risk(c, inst))


# ---------------------------------------------------------------------------
# augmented risk
# ---------------------------------------------------------------------------


def test_augmented_risk_lambda_zero_collapses():
    inst = constant_instance([[1, 4], [2]])
    for a in (-1, 0, F(3, 2), 5):
        assert augmented_risk(a, inst, 100, 0) == global_risk(a, inst)


def test_augmented_risk_direct_value():
    inst = constant_instance([[0, 2]])
    assert augmented_risk(0, inst, 2, F(1, 2)) == F(4, 3)


def test_augmented_risk_zero_at_unanimous_advice():
    inst = constant_instance([[3, 3], [3]])
    assert augmented_risk(3, inst, 3, F(1, 3)) == 0


def test_augmented_risk_equals_risk_on_augmented_multiset():
    # whenever lam*|S| is an integer, augmentation = literal advice copies
    rng = random.Random(11)
    for _ in range(100):
        labels = [rng.randint(-4, 4) for _ in range(rng.randint(1, 6))]
        inst = constant_instance([labels])
        size = len(labels)
        copies = rng.randint(0, size)
        lam = F(copies, size)
        advice = rng.randint(-4, 4)
        a = F(rng.randint(-8, 8), 2)
        augmented = constant_instance([labels + [advice] * copies])
        assert augmented_risk(a, inst, advice, lam) == global_risk(a, augmented)


# ---------------------------------------------------------------------------
# advice error
# ---------------------------------------------------------------------------


def test_advice_error_zero_for_optimal_advice():
    inst = constant_instance([[0, 0, 2]])
    assert advice_error_constant(inst, 0) == 0


def test_advice_error_frozen_value():
    inst = constant_instance([[0, 0, 2]])
    # brute force: optimum 0 with risk 2/3, distance 1
    assert advice_error_constant(inst, 1) == F(3, 2)


def test_advice_error_infinite_on_zero_risk_wrong_advice():
    inst = constant_instance([[0, 0]])
    assert advice_error_constant(inst, 1) == float("inf")
    assert advice_error_constant(inst, 0) == 0


def test_advice_error_uses_nearest_optimum_of_interval():
    # even instance: optimum interval [0, 2], advice inside costs nothing
    inst = constant_instance([[0, 2]])
    assert advice_error_constant(inst, 1) == 0
    assert advice_error_constant(inst, 4) == F(2, 1) / global_risk(2, inst)


def test_optimal_constant_set_finite_domain():
    inst = constant_instance([[F(2, 5)]], ValueDomain.finite([0, 1]))
    opt, best = optimal_constant_set(inst)
    assert opt == (0,) and best == F(2, 5)
