"""Limit objects for words: piecewise-polynomial functions on [0, 1].

A PiecewisePoly is determined by rational breakpoints
0 = b_0 < b_1 < ... < b_m = 1 and one rational-coefficient polynomial
per piece [b_i, b_{i+1}).  The last piece is closed on the right.  Step
functions are the degree-0 case; the associated function of a word w of
length n is the n-step indicator profile of w.

All arithmetic is exact.  Floats only enter through explicitly inexact
paths: irrational extrema in box/L1 distances (tolerance 1e-12) and the
numeric quadrature fallback for pieces of degree above 3.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .poly import Poly
from .words import Word

NUMERIC_TOL = 1e-12


@dataclass(frozen=True)
class PiecewisePoly:
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Poly, ...]

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(poly.normalize(p) for p in self.pieces))
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must span [0, 1]")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bps) - 1:
            raise ValueError("need exactly one piece per interval")

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value) -> "PiecewisePoly":
        return cls((Fraction(0), Fraction(1)), (poly.normalize((Fraction(value),)),))

    @classmethod
    def step(cls, values, breakpoints=None) -> "PiecewisePoly":
        """Step function; equal-width pieces unless breakpoints are given."""
        values = [Fraction(v) for v in values]
        if not values:
            raise ValueError("need at least one step value")
        if breakpoints is None:
            m = len(values)
            breakpoints = [Fraction(i, m) for i in range(m + 1)]
        return cls(tuple(breakpoints), tuple((v,) for v in values))

    @classmethod
    def associated(cls, w: Word, letter: str = "1") -> "PiecewisePoly":
        """Indicator step function of a letter of w on the uniform n-grid."""
        if len(w) == 0:
            raise ValueError("word must be nonempty")
        return cls.step([1 if c == letter else 0 for c in w.letters])

    # -- basic queries ------------------------------------------------

    def piece_index(self, x: Fraction | float) -> int:
        i = bisect_right(self.breakpoints, x) - 1
        return min(max(i, 0), len(self.pieces) - 1)

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"argument {x} outside [0, 1]")
        return poly.peval(self.pieces[self.piece_index(x)], x)

    def eval_float(self, x: float) -> float:
        return poly.peval(self.pieces[self.piece_index(x)], float(x))

    def max_degree(self) -> int:
        return max(poly.degree(p) for p in self.pieces)

    def is_step(self) -> bool:
        return self.max_degree() <= 0

    def simplify(self) -> "PiecewisePoly":
        """Merge adjacent pieces carrying identical polynomials."""
        bps = [self.breakpoints[0]]
        pcs: list[Poly] = []
        for b, p in zip(self.breakpoints[1:], self.pieces):
            if pcs and pcs[-1] == p:
                bps[-1] = b
            else:
                pcs.append(p)
                bps.append(b)
        return PiecewisePoly(tuple(bps), tuple(pcs))

    # -- exact arithmetic ---------------------------------------------

    def refined(self, breakpoints) -> "PiecewisePoly":
        bps = sorted(set(self.breakpoints) | set(breakpoints))
        pcs = [self.pieces[self.piece_index(lo)] for lo in bps[:-1]]
        return PiecewisePoly(tuple(bps), tuple(pcs))

    def _zip(self, other: "PiecewisePoly"):
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        a = self.refined(bps)
        b = other.refined(bps)
        return bps, a.pieces, b.pieces

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        bps, pa, pb = self._zip(other)
        return PiecewisePoly(bps, tuple(poly.padd(p, q) for p, q in zip(pa, pb)))

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        bps, pa, pb = self._zip(other)
        return PiecewisePoly(bps, tuple(poly.psub(p, q) for p, q in zip(pa, pb)))

    def __mul__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        bps, pa, pb = self._zip(other)
        return PiecewisePoly(bps, tuple(poly.pmul(p, q) for p, q in zip(pa, pb)))

    def scale(self, s) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints, tuple(poly.pscale(p, s) for p in self.pieces))

    def shift(self, c) -> "PiecewisePoly":
        c = Fraction(c)
        return PiecewisePoly(
            self.breakpoints,
            tuple(poly.padd(p, (c,)) for p in self.pieces),
        )

    def antiderivative(self) -> "PiecewisePoly":
        """The continuous primitive F with F(0) = 0, piece by piece."""
        acc = Fraction(0)
        out: list[Poly] = []
        for lo, hi, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces):
            P = poly.pantider(p)
            q = poly.padd(P, (acc - poly.peval(P, lo),))
            out.append(q)
            acc = poly.peval(q, hi)
        return PiecewisePoly(self.breakpoints, tuple(out))

    def integral(self) -> Fraction:
        total = Fraction(0)
        for lo, hi, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces):
            total += poly.pintegrate(p, lo, hi)
        return total

    def equals(self, other: "PiecewisePoly") -> bool:
        _, pa, pb = self._zip(other)
        return pa == pb

    # -- extrema ------------------------------------------------------

    def extrema_candidates(self):
        """Points where an extremum can occur: breakpoints plus critical
        points of each piece.  Returns (exact Fractions, approx floats)."""
        exact = list(self.breakpoints)
        approx: list[float] = []
        for lo, hi, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces):
            ex, ap = poly.real_roots(poly.pderiv(p), lo, hi)
            exact.extend(ex)
            approx.extend(ap)
        return exact, approx

    def range_bounds(self):
        """(min, max) over [0, 1].  Exact unless a critical point is
        irrational, in which case floats are returned."""
        exact, approx = self.extrema_candidates()
        vals = [self(x) for x in exact]
        if approx:
            fvals = [float(v) for v in vals] + [self.eval_float(x) for x in approx]
            return min(fvals), max(fvals)
        return min(vals), max(vals)


def require_unit_range(f: PiecewisePoly, tol: float = NUMERIC_TOL) -> PiecewisePoly:
    """Validate that f maps [0, 1] into [0, 1]."""
    lo, hi = f.range_bounds()
    if isinstance(lo, Fraction):
        ok = 0 <= lo and hi <= 1
    else:
        ok = -tol <= lo and hi <= 1 + tol
    if not ok:
        raise ValueError(f"function range [{lo}, {hi}] leaves [0, 1]")
    return f


class LimitVector:
    """A tuple of limit functions, one per letter, summing to 1 exactly."""

    def __init__(self, components: dict[str, PiecewisePoly]):
        if not components:
            raise ValueError("need at least one component")
        self.alphabet = tuple(components)
        self.components = dict(components)
        total = None
        for letter, f in components.items():
            require_unit_range(f)
            total = f if total is None else total + f
        if not total.equals(PiecewisePoly.constant(1)):
            raise ValueError("component functions must sum to 1 exactly")

    @classmethod
    def associated(cls, w: Word) -> "LimitVector":
        return cls({a: PiecewisePoly.associated(w, a) for a in w.alphabet})

    @classmethod
    def from_binary(cls, f: PiecewisePoly) -> "LimitVector":
        require_unit_range(f)
        one = PiecewisePoly.constant(1)
        return cls({"0": one - f, "1": f})

    def __getitem__(self, letter: str) -> PiecewisePoly:
        return self.components[letter]


# -- pattern densities of limit objects -------------------------------


def t_density_vector(u: Word, F: LimitVector) -> Fraction:
    """Exact pattern density of u in the limit vector F via iterated
    symbolic integration; reduces to closed products for constants."""
    if tuple(sorted(u.alphabet)) != tuple(sorted(F.alphabet)):
        raise ValueError(f"alphabet mismatch: {u.alphabet!r} vs {F.alphabet!r}")
    if len(u) == 0:
        raise ValueError("pattern must be nonempty")
    acc = PiecewisePoly.constant(1)
    for letter in u.letters:
        acc = (F[letter] * acc).antiderivative()
    return math.factorial(len(u)) * acc(1)


def t_density_limit(u: Word, f: PiecewisePoly) -> Fraction:
    """Binary-alphabet pattern density of u in the limit function f."""
    if set(u.alphabet) != {"0", "1"}:
        raise ValueError("t_density_limit requires the binary alphabet")
    return t_density_vector(u, LimitVector.from_binary(f))


def limit_density_table(f: PiecewisePoly, length: int) -> dict[str, Fraction]:
    out = {}
    for bits in itertools.product("01", repeat=length):
        u = Word(bits)
        out[str(u)] = t_density_limit(u, f)
    return out


# -- distances --------------------------------------------------------


def _signed_area_extrema(h: PiecewisePoly):
    """Candidate (x, H(x)) values for the primitive H of h, split into
    exact and approximate parts."""
    H = h.antiderivative()
    exact = list(h.breakpoints)
    approx: list[float] = []
    for lo, hi, p in zip(h.breakpoints, h.breakpoints[1:], h.pieces):
        ex, ap = poly.real_roots(p, lo, hi)
        exact.extend(ex)
        approx.extend(ap)
    evals = [H(x) for x in exact]
    fvals = [H.eval_float(x) for x in approx]
    return evals, fvals


def d_box(f: PiecewisePoly, g: PiecewisePoly):
    """Box distance sup over intervals of |integral of f - g|.

    Equals max H - min H for the primitive H of f - g, with extrema
    searched over breakpoints and piece roots.  Exact (Fraction) when
    every candidate extremum is rational, else float within 1e-12.
    """
    if f.is_step() and g.is_step():
        return _d_box_steps(f, g)
    evals, fvals = _signed_area_extrema(f - g)
    if fvals:
        allv = [float(v) for v in evals] + fvals
        return max(allv) - min(allv)
    return max(evals) - min(evals)


def _d_box_steps(f: PiecewisePoly, g: PiecewisePoly) -> Fraction:
    """Step-step fast path: one exact sweep over the merged grid."""
    bps = sorted(set(f.breakpoints) | set(g.breakpoints))
    fi = gi = 0
    fb, gb = f.breakpoints, g.breakpoints
    acc = mx = mn = Fraction(0)
    for lo, hi in zip(bps, bps[1:]):
        while fb[fi + 1] <= lo:
            fi += 1
        while gb[gi + 1] <= lo:
            gi += 1
        fv = f.pieces[fi][0] if f.pieces[fi] else Fraction(0)
        gv = g.pieces[gi][0] if g.pieces[gi] else Fraction(0)
        acc += (fv - gv) * (hi - lo)
        if acc > mx:
            mx = acc
        elif acc < mn:
            mn = acc
    return mx - mn


def prefix_sup_dist(f: PiecewisePoly, g: PiecewisePoly):
    """sup_b |integral over [0, b] of f - g|; sandwiched by d_box:
    prefix_sup_dist <= d_box <= 2 * prefix_sup_dist."""
    evals, fvals = _signed_area_extrema(f - g)
    if fvals:
        allv = [float(v) for v in evals] + fvals
        return max(abs(max(allv)), abs(min(allv)))
    return max(abs(max(evals)), abs(min(evals)))


def d1_fn(f: PiecewisePoly, g: PiecewisePoly):
    """L1 distance integral of |f - g|.  Exact whenever every sign change
    of f - g is rational; numeric within 1e-12 otherwise."""
    h = f - g
    total = Fraction(0)
    inexact = 0.0
    any_inexact = False
    for lo, hi, p in zip(h.breakpoints, h.breakpoints[1:], h.pieces):
        ex, ap = poly.real_roots(p, lo, hi)
        if ap:
            any_inexact = True
            inexact += _numeric_abs_integral(p, lo, hi, sorted(ex + [Fraction(a).limit_denominator(10**15) for a in ap]))
            continue
        cuts = [lo] + sorted(ex) + [hi]
        for a, b in zip(cuts, cuts[1:]):
            mid = (a + b) / 2
            sign = 1 if poly.peval(p, mid) >= 0 else -1
            total += sign * poly.pintegrate(p, a, b)
    if any_inexact:
        return float(total) + inexact
    return total


def _numeric_abs_integral(p: Poly, lo, hi, cuts) -> float:
    from scipy.integrate import quad

    val, _ = quad(
        lambda x: abs(poly.peval(p, float(x))),
        float(lo),
        float(hi),
        points=[float(c) for c in cuts],
        limit=200,
    )
    return val


# -- Bernstein approximants -------------------------------------------


def bernstein_eval(J, t: int, x):
    """Evaluate the degree-t Bernstein approximant of J at x.

    J is a callable on [0,1] (1-D) or [0,1]^2 (2-D, pass x as a pair).
    Exact when J returns rationals and x is rational.
    """
    if t < 1:
        raise ValueError("degree must be >= 1")
    if isinstance(x, (tuple, list)):
        if len(x) != 2:
            raise ValueError("only 1-D and 2-D approximants are supported")
        x1, x2 = Fraction(x[0]), Fraction(x[1])
        w1 = _bernstein_weights(t, x1)
        w2 = _bernstein_weights(t, x2)
        return sum(
            J(Fraction(i, t), Fraction(j, t)) * w1[i] * w2[j]
            for i in range(t + 1)
            for j in range(t + 1)
        )
    x = Fraction(x)
    w = _bernstein_weights(t, x)
    return sum(J(Fraction(i, t)) * w[i] for i in range(t + 1))


def _bernstein_weights(t: int, x: Fraction) -> list[Fraction]:
    return [math.comb(t, i) * x**i * (1 - x) ** (t - i) for i in range(t + 1)]
