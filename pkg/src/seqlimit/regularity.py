"""Weak regularity for limit functions via energy increment.

Given f on [0, 1] and an interval partition P, the conditional
expectation E(f|P) replaces f on each atom by its average, and the
energy is the squared L2 norm of E(f|P).  If some interval I carries
deviation |integral_I (f - E(f|P))| > eps, refining P by the endpoints
of I raises the energy by more than eps^2 (Cauchy-Schwarz), so at most
ceil(eps^-2) refinement rounds yield a partition with every interval
deviation at most eps, adding at most 2 * ceil(eps^-2) atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .piecewise import PiecewisePoly


@dataclass(frozen=True)
class IntervalPartition:
    breakpoints: tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must span [0, 1]")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def trivial(cls) -> "IntervalPartition":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def uniform(cls, m: int) -> "IntervalPartition":
        return cls(tuple(Fraction(i, m) for i in range(m + 1)))

    def size(self) -> int:
        return len(self.breakpoints) - 1

    def refine(self, points) -> "IntervalPartition":
        pts = set(self.breakpoints)
        for p in points:
            p = Fraction(p)
            if 0 < p < 1:
                pts.add(p)
        return IntervalPartition(tuple(sorted(pts)))


def conditional_expectation(f: PiecewisePoly, part: IntervalPartition) -> PiecewisePoly:
    """Step function equal on each atom to the average of f there."""
    F = f.antiderivative()
    vals = []
    for lo, hi in zip(part.breakpoints, part.breakpoints[1:]):
        vals.append((F(hi) - F(lo)) / (hi - lo))
    return PiecewisePoly.step(vals, part.breakpoints)


def energy(f: PiecewisePoly, part: IntervalPartition) -> Fraction:
    """Integral of E(f|P)^2: sum of length * average^2 over atoms."""
    F = f.antiderivative()
    total = Fraction(0)
    for lo, hi in zip(part.breakpoints, part.breakpoints[1:]):
        avg = (F(hi) - F(lo)) / (hi - lo)
        total += (hi - lo) * avg * avg
    return total


def _extremal_of(g: PiecewisePoly) -> tuple[Fraction, tuple[Fraction, Fraction]]:
    """The interval I maximizing |integral_I g| together with that value,
    located exactly from the extrema of the primitive.  Irrational
    critical points are rationalized before evaluation, so the reported
    deviation is always exact for the returned interval."""
    H = g.antiderivative()
    cands = set(g.breakpoints)
    for lo, hi, p in zip(g.breakpoints, g.breakpoints[1:], g.pieces):
        ex, ap = poly.real_roots(p, lo, hi)
        cands.update(ex)
        for x in ap:
            r = Fraction(x).limit_denominator(10**12)
            if lo < r < hi:
                cands.add(r)
    best_max = max(cands, key=lambda x: (H(x), x))
    best_min = min(cands, key=lambda x: (H(x), x))
    dev = H(best_max) - H(best_min)
    lo, hi = sorted((best_min, best_max))
    if lo == hi:
        return Fraction(0), (Fraction(0), Fraction(1))
    return dev, (lo, hi)


def extremal_interval(
    f: PiecewisePoly, part: IntervalPartition
) -> tuple[Fraction, tuple[Fraction, Fraction]]:
    """The interval maximizing |integral_I (f - E(f|P))|, with the exact
    deviation attained there."""
    return _extremal_of(f - conditional_expectation(f, part))


def violating_interval(
    g: PiecewisePoly, eps
) -> tuple[Fraction, Fraction] | None:
    """An interval I with |integral_I g| equal to the interval norm of g,
    when that norm exceeds eps; None otherwise."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    dev, interval = _extremal_of(g)
    return interval if dev > eps else None


@dataclass(frozen=True)
class RegularityResult:
    partition: IntervalPartition
    rounds: int
    energies: tuple[Fraction, ...]
    final_deviation: Fraction
    approximation: PiecewisePoly


def weak_regularity(
    f: PiecewisePoly,
    eps,
    initial: IntervalPartition | None = None,
) -> RegularityResult:
    """Energy-increment regularization.

    Refines the partition by the endpoints of an extremal deviating
    interval until every interval deviation is at most eps.  Each round
    provably raises the energy by more than eps^2, which both bounds the
    number of rounds by ceil(eps^-2) and is asserted along the way.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    part = initial or IntervalPartition.trivial()
    initial_size = part.size()
    max_rounds = math.ceil(1 / (eps * eps)) + 1
    energies = [energy(f, part)]
    rounds = 0
    while True:
        dev, (lo, hi) = extremal_interval(f, part)
        if dev <= eps:
            break
        if rounds >= max_rounds:
            raise AssertionError("energy increment failed to terminate in time")
        part = part.refine((lo, hi))
        energies.append(energy(f, part))
        assert energies[-1] - energies[-2] > eps * eps, (
            "refinement must raise energy by more than eps^2"
        )
        rounds += 1
    assert part.size() <= initial_size + 2 * math.ceil(1 / (eps * eps))
    return RegularityResult(
        partition=part,
        rounds=rounds,
        energies=tuple(energies),
        final_deviation=dev,
        approximation=conditional_expectation(f, part),
    )
