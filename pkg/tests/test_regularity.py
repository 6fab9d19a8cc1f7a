"""Conditional expectations, energy, and the weak regularity decomposition."""

import math
from fractions import Fraction

import pytest

from seqlimit import (
    IntervalPartition,
    PiecewisePoly,
    SeededStream,
    conditional_expectation,
    d_box,
    energy,
    extremal_interval,
    violating_interval,
    weak_regularity,
)

from util import random_step, random_step_irregular

STEP_HALF = PiecewisePoly.step([1, 0])


def test_partition_construction():
    p = IntervalPartition.uniform(4)
    assert p.size() == 4
    assert p.refine([Fraction(1, 3), Fraction(1, 4)]).size() == 5  # 1/4 already present
    assert p.refine([Fraction(0), Fraction(1)]).size() == 4  # endpoints ignored
    with pytest.raises(ValueError):
        IntervalPartition((Fraction(0), Fraction(1, 2)))
    with pytest.raises(ValueError):
        IntervalPartition((Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1)))


def test_conditional_expectation_examples():
    x = PiecewisePoly((Fraction(0), Fraction(1)), ((Fraction(0), Fraction(1)),))
    assert conditional_expectation(x, IntervalPartition.trivial()).equals(
        PiecewisePoly.constant(Fraction(1, 2))
    )
    part = IntervalPartition((Fraction(0), Fraction(1, 2), Fraction(1)))
    assert conditional_expectation(STEP_HALF, part).equals(STEP_HALF)


def test_tower_property_preserves_integral():
    stream = SeededStream(91)
    for t in range(20):
        f = random_step_irregular(stream.substream(t), max_steps=7)
        part = IntervalPartition.uniform(1 + t % 5)
        assert conditional_expectation(f, part).integral() == f.integral()


def test_energy_examples_and_refinement_monotonicity():
    d = Fraction(3, 7)
    assert energy(PiecewisePoly.constant(d), IntervalPartition.uniform(3)) == d * d
    part = IntervalPartition((Fraction(0), Fraction(1, 2), Fraction(1)))
    assert energy(STEP_HALF, part) == Fraction(1, 2)
    stream = SeededStream(92)
    for t in range(30):
        f = random_step(stream.substream(t), max_steps=8)
        coarse = IntervalPartition.uniform(2)
        fine = coarse.refine([Fraction(1, 3), Fraction(5, 8)])
        assert energy(f, coarse) <= energy(f, fine) <= 1


def test_extremal_and_violating_interval():
    g = STEP_HALF - PiecewisePoly.constant(Fraction(1, 2))
    dev, (lo, hi) = extremal_interval(STEP_HALF, IntervalPartition.trivial())
    assert dev == Fraction(1, 4) and (lo, hi) == (Fraction(0), Fraction(1, 2))
    assert violating_interval(g, Fraction(1, 5)) == (Fraction(0), Fraction(1, 2))
    assert violating_interval(g, Fraction(1, 4)) is None  # norm equals 1/4, not above
    assert violating_interval(PiecewisePoly.constant(0), Fraction(1, 10)) is None
    with pytest.raises(ValueError):
        violating_interval(g, 0)


def test_extremal_interval_with_irrational_extremum():
    # f(x) = x^2 deviates from its mean 1/3 with an irrational crossing;
    # the reported interval is rational and its deviation exact
    f = PiecewisePoly((Fraction(0), Fraction(1)), ((Fraction(0), Fraction(0), Fraction(1)),))
    dev, (lo, hi) = extremal_interval(f, IntervalPartition.trivial())
    assert dev > 0
    g = f - conditional_expectation(f, IntervalPartition.trivial())
    H = g.antiderivative()
    assert dev == H(hi) - H(lo)


def test_weak_regularity_constant_is_immediate():
    res = weak_regularity(PiecewisePoly.constant(Fraction(2, 5)), Fraction(1, 10))
    assert res.rounds == 0
    assert res.partition.size() == 1
    assert res.final_deviation == 0


def test_weak_regularity_on_indicator():
    res = weak_regularity(STEP_HALF, Fraction(1, 10))
    assert res.final_deviation <= Fraction(1, 10)
    assert d_box(STEP_HALF, res.approximation) <= Fraction(1, 10)
    assert res.partition.size() <= 1 + 2 * 100


def test_weak_regularity_quantitative_guarantees():
    stream = SeededStream(93)
    for t in range(20):
        f = random_step_irregular(stream.substream(t), max_steps=12)
        for eps in (Fraction(3, 10), Fraction(1, 10)):
            res = weak_regularity(f, eps)
            assert d_box(f, res.approximation) <= eps
            assert res.partition.size() <= 1 + 2 * math.ceil(1 / (eps * eps))
            for before, after in zip(res.energies, res.energies[1:]):
                assert after - before > eps * eps
            assert res.rounds == len(res.energies) - 1


def test_weak_regularity_with_initial_partition_and_validation():
    f = PiecewisePoly.step([1, 0, 1, 0])
    init = IntervalPartition.uniform(4)
    res = weak_regularity(f, Fraction(1, 4), initial=init)
    assert res.rounds == 0 and res.final_deviation == 0
    with pytest.raises(ValueError):
        weak_regularity(f, 0)
    with pytest.raises(ValueError):
        weak_regularity(f, 1)


def test_weak_regularity_polynomial_input():
    f = PiecewisePoly((Fraction(0), Fraction(1)), ((Fraction(0), Fraction(0), Fraction(1)),))
    res = weak_regularity(f, Fraction(1, 20))
    assert float(d_box(f, res.approximation)) <= 1 / 20 + 1e-9
