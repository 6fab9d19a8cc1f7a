"""Joint moments of (x, F(x)) from pattern densities, and forcibility.

The moment of x^i F(x)^j of a limit function f with primitive F is a
fixed rational combination of pattern densities of length i+j+1: the
patterns are the binary words whose first i+j letters contain at least
j ones (the last letter is unconstrained), with weight
i! j! / (i+j+1)! * C(ones, j).

A forcibility certificate for piecewise-polynomial f packages the
finitely many pattern densities that pin f down among all limit
functions with the same branch structure: with Q_1, ..., Q_k the
distinct primitive branches of f, the polynomial
P(x, y) = prod_i (y - Q_i(x))^2 has integral of P(x, H(x)) expressible
in pattern densities of any candidate with primitive H, vanishing
exactly when H follows the branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import poly
from .piecewise import PiecewisePoly, t_density_limit
from .words import Word

MAX_PATTERN_LENGTH = 12


@dataclass(frozen=True)
class MomentCombination:
    i: int
    j: int
    terms: tuple[tuple[Word, Fraction], ...]

    def evaluate(self, densities: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for u, c in self.terms:
            key = str(u)
            if key not in densities:
                raise KeyError(f"missing pattern density for {key}")
            total += c * Fraction(densities[key])
        return total


def moment_words(i: int, j: int) -> MomentCombination:
    """The exact pattern-density combination equal to the moment of
    x^i F(x)^j for every limit function f with primitive F."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be nonnegative")
    n = i + j + 1
    if n > MAX_PATTERN_LENGTH:
        raise ValueError(f"pattern length {n} exceeds cap {MAX_PATTERN_LENGTH}")
    base = Fraction(math.factorial(i) * math.factorial(j), math.factorial(n))
    terms = []
    import itertools

    for bits in itertools.product("01", repeat=n):
        ones = sum(1 for b in bits[:-1] if b == "1")
        if ones < j:
            continue
        terms.append((Word(bits), base * math.comb(ones, j)))
    return MomentCombination(i=i, j=j, terms=tuple(terms))


def moment_direct(i: int, j: int, f: PiecewisePoly) -> Fraction:
    """Moment of x^i F(x)^j by direct symbolic integration."""
    F = f.antiderivative()
    total = Fraction(0)
    xi = poly.X * 1  # placeholder; built below
    for lo, hi, p in zip(F.breakpoints, F.breakpoints[1:], F.pieces):
        integrand = poly.pmul(poly.ppow(poly.X, i), poly.ppow(p, j))
        total += poly.pintegrate(integrand, lo, hi)
    return total


def moment_from_densities(i: int, j: int, densities: Mapping[str, Fraction]) -> Fraction:
    return moment_words(i, j).evaluate(densities)


def limit_densities(f: PiecewisePoly, words) -> dict[str, Fraction]:
    """Pattern densities of f for a collection of binary patterns."""
    out: dict[str, Fraction] = {}
    for u in words:
        if not isinstance(u, Word):
            u = Word.from_string(u)
        out.setdefault(str(u), t_density_limit(u, f))
    return out


def moment_bridge(k: int, f: PiecewisePoly) -> tuple[Fraction, Fraction]:
    """The identity tying ordinary moments of f to pattern densities:
    integral of f(x) x^k equals 1/(k+1) times the sum of t(u1, f) over
    all binary u of length k.  Returns (direct value, density value)."""
    import itertools

    direct = Fraction(0)
    for lo, hi, p in zip(f.breakpoints, f.breakpoints[1:], f.pieces):
        direct += poly.pintegrate(poly.pmul(p, poly.ppow(poly.X, k)), lo, hi)
    total = Fraction(0)
    for bits in itertools.product("01", repeat=k):
        total += t_density_limit(Word(bits + ("1",)), f)
    return direct, total / (k + 1)


# -- forcibility -------------------------------------------------------


@dataclass(frozen=True)
class ForcibilityCertificate:
    branches: tuple[poly.Poly, ...]
    monomials: tuple[tuple[int, int, Fraction], ...]  # (x-exponent, y-exponent, coeff)
    words: tuple[Word, ...]

    @property
    def word_count(self) -> int:
        return len(self.words)

    def residual(self, densities: Mapping[str, Fraction]) -> Fraction:
        """Integral of P(x, H(x)) over [0, 1] for the candidate whose
        pattern densities are given; nonnegative, zero iff the candidate
        primitive follows the branch polynomials almost everywhere."""
        total = Fraction(0)
        for a, b, c in self.monomials:
            total += c * moment_from_densities(a, b, densities)
        return total

    def residual_of(self, g: PiecewisePoly) -> Fraction:
        return self.residual(limit_densities(g, self.words))


def forcibility_certificate(f: PiecewisePoly) -> ForcibilityCertificate:
    """Certificate words and residual functional for a piecewise-
    polynomial limit function f."""
    F = f.antiderivative()
    branches: list[poly.Poly] = []
    for p in F.pieces:
        if p not in branches:
            branches.append(p)
    # P(x, y) = prod (y - Q)^2, expanded as polynomials in y whose
    # coefficients are polynomials in x
    ycoeffs: list[poly.Poly] = [poly.ONE]
    for q in branches:
        sq = poly.pmul(q, q)
        nq2 = poly.pscale(q, -2)
        new = [poly.ZERO] * (len(ycoeffs) + 2)
        for b, c in enumerate(ycoeffs):
            new[b] = poly.padd(new[b], poly.pmul(c, sq))
            new[b + 1] = poly.padd(new[b + 1], poly.pmul(c, nq2))
            new[b + 2] = poly.padd(new[b + 2], c)
        ycoeffs = new
    monomials: list[tuple[int, int, Fraction]] = []
    for b, c in enumerate(ycoeffs):
        for a, coeff in enumerate(c):
            if coeff != 0:
                monomials.append((a, b, coeff))
    max_len = max(a + b + 1 for a, b, _ in monomials)
    if max_len > MAX_PATTERN_LENGTH:
        raise ValueError(
            f"certificate needs patterns of length {max_len} > cap {MAX_PATTERN_LENGTH}"
        )
    seen: dict[str, Word] = {}
    for a, b, _ in monomials:
        for u, _c in moment_words(a, b).terms:
            seen.setdefault(str(u), u)
    words = tuple(seen[k] for k in sorted(seen))
    # structural budget: monomial bidegrees are bounded by twice the sum
    # of branch degrees, so no pattern exceeds 2*d_sum + 1 letters and the
    # word list stays finite and small
    d_sum = sum(max(poly.degree(q), 1) for q in branches)
    assert max_len <= 2 * d_sum + 1, "certificate pattern length exceeds budget"
    assert len(words) <= 2 ** (2 * d_sum + 2), "certificate exceeds its word budget"
    return ForcibilityCertificate(
        branches=tuple(branches), monomials=tuple(monomials), words=words
    )


@dataclass(frozen=True)
class ForcedVerdict:
    densities_match: bool
    witness: Word | None
    residual: Fraction
    d1: Fraction | float | None


def check_forced(
    f: PiecewisePoly, h: PiecewisePoly, cert: ForcibilityCertificate | None = None
) -> ForcedVerdict:
    """Compare a candidate h against f on the certificate words.

    A density mismatch distinguishes the two outright (witness reported).
    When all certificate densities agree, the candidate satisfies the
    same branch constraints; the L1 distance is reported as a mismatch
    indicator rather than constructing further distinguishing words.
    """
    from .piecewise import d1_fn

    if cert is None:
        cert = forcibility_certificate(f)
    df = limit_densities(f, cert.words)
    dh = limit_densities(h, cert.words)
    witness = None
    for u in cert.words:
        if df[str(u)] != dh[str(u)]:
            witness = u
            break
    return ForcedVerdict(
        densities_match=witness is None,
        witness=witness,
        residual=cert.residual(dh),
        d1=d1_fn(f, h),
    )
