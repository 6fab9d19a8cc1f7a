"""Random words driven by limit functions, with concentration experiments.

An f-random word of length n: draw n positions X uniformly on [0, 1],
attach to each a letter with probabilities given by the limit (vector)
at X, then read the letters off in increasing order of position.  The
empirical step function of such a word concentrates around f in box
distance, with explicit exponential tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .piecewise import LimitVector, PiecewisePoly, d_box
from .streams import PRNG_ID, SeededStream
from .words import Word, random_subsequence

#: Below this subsequence length the subsequence tail bound is vacuous
#: in practice; experiments report when length < tail_floor(eps).
def tail_floor(eps: float) -> int:
    return math.ceil(300 / eps**2)


def _eval_many(f: PiecewisePoly, xs: np.ndarray) -> np.ndarray:
    bps = np.array([float(b) for b in f.breakpoints])
    idx = np.clip(np.searchsorted(bps, xs, side="right") - 1, 0, len(f.pieces) - 1)
    if f.is_step():
        vals = np.array([float(p[0]) if p else 0.0 for p in f.pieces])
        return vals[idx]
    out = np.empty_like(xs)
    for i, (x, k) in enumerate(zip(xs, idx)):
        acc = 0.0
        for c in reversed(f.pieces[k]):
            acc = acc * x + float(c)
        out[i] = acc
    return out


def f_random_word(f: PiecewisePoly, n: int, stream: SeededStream) -> Word:
    """Binary f-random word of length n."""
    if n < 1:
        raise ValueError("length must be >= 1")
    rng = stream.generator()
    xs = rng.random(n)
    ys = rng.random(n) < _eval_many(f, xs)
    order = np.lexsort((np.arange(n), xs))
    return Word(tuple("1" if ys[i] else "0" for i in order))


def f_random_word_vector(F: LimitVector, n: int, stream: SeededStream) -> Word:
    """f-random word over an arbitrary alphabet from a limit vector."""
    if n < 1:
        raise ValueError("length must be >= 1")
    rng = stream.generator()
    xs = rng.random(n)
    us = rng.random(n)
    cum = np.zeros(n)
    choice = np.full(n, len(F.alphabet) - 1)
    decided = np.zeros(n, dtype=bool)
    for j, letter in enumerate(F.alphabet[:-1]):
        cum = cum + _eval_many(F[letter], xs)
        hit = (~decided) & (us < cum)
        choice[hit] = j
        decided |= hit
    order = np.lexsort((np.arange(n), xs))
    return Word(tuple(F.alphabet[choice[i]] for i in order), F.alphabet)


def empirical_limit(w: Word, letter: str = "1") -> PiecewisePoly:
    """The n-step function of a word, the object that converges to f."""
    return PiecewisePoly.associated(w, letter)


@dataclass(frozen=True)
class TailReport:
    trials: int
    threshold: float
    exceed_fraction: float
    bound: float
    prng: str
    seed: int
    note: str = ""


def tail_experiment_dbox(
    f: PiecewisePoly, n: int, a: float, trials: int, stream: SeededStream
) -> TailReport:
    """Empirical P(d_box(f_w, f) >= 8a) over f-random words of length n,
    against the bound 4 n exp(-2 a^2 n), valid for a >= 1/n."""
    if a < 1.0 / n:
        raise ValueError("tail parameter must satisfy a >= 1/n")
    threshold = 8.0 * a
    exceed = 0
    for t in range(trials):
        w = f_random_word(f, n, stream.substream(t))
        if float(d_box(empirical_limit(w), f)) >= threshold:
            exceed += 1
    bound = 4 * n * math.exp(-2 * a * a * n)
    return TailReport(
        trials=trials,
        threshold=threshold,
        exceed_fraction=exceed / trials,
        bound=min(bound, 1.0),
        prng=PRNG_ID,
        seed=stream.seed,
    )


def subsequence_tail_experiment(
    w: Word, length: int, eps: float, trials: int, stream: SeededStream
) -> TailReport:
    """Empirical P(d_box(f_u, f_w) >= eps) over uniformly random
    subsequences u of the given length, against 4 l exp(-eps^2 l / 300)."""
    fw = empirical_limit(w)
    exceed = 0
    for t in range(trials):
        u = random_subsequence(w, length, stream.substream(t))
        if float(d_box(empirical_limit(u), fw)) >= eps:
            exceed += 1
    bound = 4 * length * math.exp(-eps * eps * length / 300)
    note = ""
    if length < tail_floor(eps):
        note = f"length {length} below tail floor {tail_floor(eps)}; bound is vacuous"
    return TailReport(
        trials=trials,
        threshold=eps,
        exceed_fraction=exceed / trials,
        bound=min(bound, 1.0),
        prng=PRNG_ID,
        seed=stream.seed,
        note=note,
    )


# -- conditional position mixture --------------------------------------


def letter_probability(f: PiecewisePoly, bit: int) -> Fraction:
    """P(letter = bit) for one f-random letter: integral of f or 1 - f."""
    p1 = f.integral()
    return p1 if bit else 1 - p1


def conditional_position_cdf(f: PiecewisePoly, bit: int) -> PiecewisePoly:
    """CDF of the position X of an f-random letter conditioned on its
    value: the mixture identity density f^bit / P(letter = bit)."""
    comp = f if bit else PiecewisePoly.constant(1) - f
    mass = letter_probability(f, bit)
    if mass == 0:
        raise ValueError("conditioning event has probability zero")
    return comp.antiderivative().scale(1 / mass)


def sample_conditional_positions(
    f: PiecewisePoly, bit: int, count: int, stream: SeededStream
) -> np.ndarray:
    """Inverse-CDF samples of X | letter = bit (numeric bisection)."""
    G = conditional_position_cdf(f, bit)
    us = stream.generator().random(count)
    out = np.empty(count)
    for i, u in enumerate(us):
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            if G.eval_float(mid) < u:
                lo = mid
            else:
                hi = mid
        out[i] = (lo + hi) / 2
    return out
