"""The squared random-dictator lottery, up close.

Shows how the selection probability for the all-ones labeling responds to
the share of agents supporting it, how the advice rescales the squared
weights, and how an arbitrary pair of labelings reduces to the two-constant
case.
"""

from fractions import Fraction as F

from advicemech import (
    sample_outcome,
    shared_binary_instance,
    srda,
    srda_two_labeling,
    two_labeling_reduce,
)


def support_table(gamma):
    print(f"gamma = {gamma}: Pr[c1] as the c1-supporting share P grows")
    print(f"{'P':>6} {'advice c1':>12} {'advice c0':>12}")
    n = 8
    for ones in range(n + 1):
        vectors = [(1, 1, 1)] * ones + [(0, 0, 0)] * (n - ones)
        inst = shared_binary_instance(vectors)
        p1_up = srda(gamma, inst, 1).probability(1)
        p1_down = srda(gamma, inst, 0).probability(1)
        print(f"{str(F(ones, n)):>6} {str(p1_up):>12} {str(p1_down):>12}")
    print()


def reduction_walkthrough():
    first = (0, 1, 0, 1, 1)
    second = (1, 1, 0, 0, 1)
    vectors = [(1, 1, 0, 0, 1), (0, 1, 0, 1, 1), (1, 1, 1, 0, 1)]
    inst = shared_binary_instance(vectors, (first, second))
    red = two_labeling_reduce(inst, 1)
    print("two arbitrary labelings:", first, "vs", second)
    print("disagreement points:", red.indices)
    for v, agent in zip(vectors, red.instance.agents):
        print(f"  agent {v} -> reduced {agent.labels}")
    lottery = srda_two_labeling(F(1, 2), inst, 1)
    print("lottery over the original pair:", lottery.branches)
    draws = [sample_outcome(lottery, seed) for seed in range(10)]
    print("ten seeded draws:", draws)


def main():
    for gamma in (F(1), F(1, 2), F(1, 4)):
        support_table(gamma)
    reduction_walkthrough()


if __name__ == "__main__":
    main()
