"""Shared generators for randomized tests, all driven by SeededStream."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from seqlimit import PiecewisePoly, SeededStream, Word
from seqlimit.piecewise import LimitVector


def rand_frac(rng, den: int = 32) -> Fraction:
    return Fraction(int(rng.integers(0, den + 1)), den)


def random_step(stream: SeededStream, max_steps: int = 8, den: int = 32) -> PiecewisePoly:
    """Random step function into [0, 1] on an equal-width grid."""
    rng = stream.generator()
    m = int(rng.integers(1, max_steps + 1))
    return PiecewisePoly.step([rand_frac(rng, den) for _ in range(m)])


def random_step_irregular(
    stream: SeededStream, max_steps: int = 8, den: int = 32, bden: int = 64
) -> PiecewisePoly:
    """Random step function with random (rational) breakpoints."""
    rng = stream.generator()
    m = int(rng.integers(1, max_steps + 1))
    cuts = sorted({Fraction(int(x), bden) for x in rng.integers(1, bden, size=m - 1)})
    bps = [Fraction(0)] + cuts + [Fraction(1)]
    vals = [rand_frac(rng, den) for _ in bps[:-1]]
    return PiecewisePoly.step(vals, bps)


def random_word(stream: SeededStream, n: int, density: float = 0.5) -> Word:
    rng = stream.generator()
    return Word(tuple("1" if x < density else "0" for x in rng.random(n)))


def brute_subsequence_count(w: Word, u: Word) -> int:
    """Explicit enumeration over all index sets; oracle for the DP."""
    n, l = len(w), len(u)
    return sum(
        1
        for idx in itertools.combinations(range(n), l)
        if tuple(w.letters[i] for i in idx) == u.letters
    )


def density_tables_upto(f: PiecewisePoly, max_len: int) -> dict[str, Fraction]:
    """t(u, f) for every binary pattern u of length 1..max_len, computed
    with shared prefixes (each prefix's iterated antiderivative reused)."""
    F = LimitVector.from_binary(f)
    out: dict[str, Fraction] = {}

    def rec(prefix: str, acc: PiecewisePoly) -> None:
        if prefix:
            out[prefix] = math.factorial(len(prefix)) * acc(1)
        if len(prefix) == max_len:
            return
        for letter in "01":
            rec(prefix + letter, (F[letter] * acc).antiderivative())

    rec("", PiecewisePoly.constant(1))
    return out
