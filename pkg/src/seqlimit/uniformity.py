"""Interval-uniformity and quasi-randomness diagnostics for binary words.

A word w of length n is (d, eps)-uniform when every set of consecutive
positions I satisfies |sum_{i in I} w_i - d|I|| <= eps*n.  The
un-normalized interval discrepancy is computed exactly in O(n) from
prefix sums; the best achievable uniformity over d is the minimum of a
convex piecewise-linear function and is located exactly via convex
hulls of the prefix-sum graph.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .words import Word, all_patterns, subsequence_count

#: Forward constant: pattern-count error is at most 5 * eps * n^l for
#: every pattern of length l when w is (d, eps)-uniform.
FORWARD_CONSTANT = 5

#: Converse constant: length-3 residual eps forces (d, 42 eps^(1/3))-uniformity.
CONVERSE_CONSTANT = 42


def _require_binary(w: Word) -> None:
    if set(w.alphabet) != {"0", "1"}:
        raise ValueError("uniformity diagnostics require the binary alphabet")


def _prefix_sums(w: Word) -> list[int]:
    s = [0]
    for c in w.letters:
        s.append(s[-1] + (1 if c == "1" else 0))
    return s


def discrepancy(w: Word, d) -> tuple[Fraction, tuple[int, int]]:
    """Un-normalized sup over intervals of |sum_I w - d|I||, with a
    1-based closed witness interval attaining it."""
    _require_binary(w)
    d = Fraction(d)
    s = _prefix_sums(w)
    t = [Fraction(sj) - d * j for j, sj in enumerate(s)]
    jmax = max(range(len(t)), key=lambda j: (t[j], -j))
    jmin = min(range(len(t)), key=lambda j: (t[j], j))
    if jmax == jmin:
        return Fraction(0), (1, 1) if len(w) else (1, 0)
    lo, hi = sorted((jmin, jmax))
    return t[jmax] - t[jmin], (lo + 1, hi)


def _upper_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x2) >= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


@dataclass(frozen=True)
class UniformityReport:
    density: Fraction
    discrepancy: Fraction  # un-normalized; w is (density, discrepancy/n)-uniform
    witness: tuple[int, int]
    length: int

    @property
    def normalized(self) -> Fraction:
        return self.discrepancy / self.length


def best_uniformity(w: Word) -> UniformityReport:
    """Density d in [0, 1] minimizing the interval discrepancy, found
    exactly: the discrepancy is convex piecewise-linear in d, so the
    minimum sits at a breakpoint contributed by a convex-hull edge of
    the prefix-sum graph."""
    _require_binary(w)
    n = len(w)
    if n == 0:
        raise ValueError("word must be nonempty")
    s = _prefix_sums(w)
    pts = list(enumerate(s))
    upper = _upper_hull([(x, Fraction(y)) for x, y in pts])
    lower = _upper_hull([(x, -Fraction(y)) for x, y in pts])
    cands = {Fraction(0), Fraction(1)}
    for hull, sign in ((upper, 1), (lower, -1)):
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            d = sign * (y2 - y1) / (x2 - x1)
            if 0 <= d <= 1:
                cands.add(d)
    best = None
    for d in sorted(cands):
        disc, wit = discrepancy(w, d)
        if best is None or disc < best[0]:
            best = (disc, d, wit)
    disc, d, wit = best
    return UniformityReport(density=d, discrepancy=disc, witness=wit, length=n)


def minimizer_residuals(w: Word, d) -> dict[str, Fraction]:
    """Length-3 pattern-count residuals |binom(w,u) - d^s (1-d)^(3-s) C(n,3)|
    normalized by n^3, keyed by pattern."""
    _require_binary(w)
    d = Fraction(d)
    n = len(w)
    if n < 3:
        raise ValueError("need length >= 3")
    out = {}
    for u in all_patterns(3):
        s = u.weight()
        expected = d**s * (1 - d) ** (3 - s) * math.comb(n, 3)
        out[str(u)] = Fraction(abs(subsequence_count(w, u) - expected), n**3)
    return out


def forward_pattern_bound(w: Word, u: Word, d, eps) -> tuple[Fraction, Fraction]:
    """(actual residual, bound 5*eps*n^l) for the count of u in a
    (d, eps)-uniform word."""
    _require_binary(w)
    d, eps = Fraction(d), Fraction(eps)
    n, l = len(w), len(u)
    s = u.weight()
    expected = d**s * (1 - d) ** (l - s) * math.comb(n, l)
    actual = abs(subsequence_count(w, u) - expected)
    return actual, FORWARD_CONSTANT * eps * Fraction(n) ** l


def exponential_sum(w: Word, k: int) -> complex:
    """(1/n) sum_j w_j exp(2 pi i k j / n), compensated summation."""
    _require_binary(w)
    n = len(w)
    re = math.fsum(
        math.cos(2 * math.pi * k * j / n) for j, c in enumerate(w.letters, 1) if c == "1"
    )
    im = math.fsum(
        math.sin(2 * math.pi * k * j / n) for j, c in enumerate(w.letters, 1) if c == "1"
    )
    return complex(re / n, im / n)


def equidistribution_error(w: Word, phi: list[tuple[Fraction, Fraction]], d=None) -> float:
    """|(1/n) sum_j w_j phi(j/n) - d * integral(phi)| for a piecewise-linear
    circle function phi given by (x, value) nodes with phi(0) = phi(1)."""
    _require_binary(w)
    nodes = [(Fraction(x), Fraction(y)) for x, y in phi]
    if nodes[0][0] != 0 or nodes[-1][0] != 1:
        raise ValueError("nodes must span [0, 1]")
    if any(a[0] >= b[0] for a, b in zip(nodes, nodes[1:])):
        raise ValueError("node abscissae must be strictly increasing")
    if nodes[0][1] != nodes[-1][1]:
        raise ValueError("circle function needs phi(0) == phi(1)")
    n = len(w)
    if d is None:
        d = Fraction(w.weight(), n)
    d = Fraction(d)

    def phi_at(x: float) -> float:
        for (x1, y1), (x2, y2) in zip(nodes, nodes[1:]):
            if x <= float(x2):
                t = (x - float(x1)) / float(x2 - x1)
                return float(y1) + t * float(y2 - y1)
        return float(nodes[-1][1])

    integral = sum((y1 + y2) / 2 * (x2 - x1) for (x1, y1), (x2, y2) in zip(nodes, nodes[1:]))
    avg = math.fsum(phi_at(j / n) for j, c in enumerate(w.letters, 1) if c == "1") / n
    return abs(avg - float(d) * float(integral))


def cayley_walk_count(w: Word, u: Word) -> int:
    """Number of induced u-walks in the circulant graph of w on Z_{2n};
    equals 2n * binom(w, u) exactly."""
    _require_binary(w)
    return 2 * len(w) * subsequence_count(w, u)


def cayley_walk_enumerate(w: Word, u: Word, cap: int = 30) -> int:
    """Direct enumeration over start vertices and increasing step tuples
    in the circulant graph; small-n oracle for cayley_walk_count."""
    _require_binary(w)
    n, l = len(w), len(u)
    if n > cap:
        raise ValueError(f"enumeration limited to n <= {cap}")
    import itertools

    edges = set()
    for v in range(2 * n):
        for i, c in enumerate(w.letters, 1):
            if c == "1":
                edges.add((v, (v + i) % (2 * n)))
    total = 0
    for v0 in range(2 * n):
        for steps in itertools.combinations(range(1, n + 1), l):
            v = v0
            ok = True
            for step, uc in zip(steps, u.letters):
                nxt = (v + step) % (2 * n)
                if ((v, nxt) in edges) != (uc == "1"):
                    ok = False
                    break
                v = nxt
            if ok:
                total += 1
    return total


@dataclass(frozen=True)
class InverseCSReport:
    hypothesis_holds: bool
    ratio: float
    bad_indices: int
    bad_bound: float
    tolerance: float


def inverse_cs_check(g, h, eps: float) -> InverseCSReport:
    """Check the stability version of Cauchy-Schwarz: when <g,h>^2 >=
    |g|^2 |h|^2 - eps n^3 |h|^2, all but eps^(1/3) n indices satisfy
    |g_i - lambda h_i| <= eps^(1/3) n for lambda = <g,h>/<h,h>."""
    g = [float(x) for x in g]
    h = [float(x) for x in h]
    if len(g) != len(h):
        raise ValueError("sequences must have equal length")
    n = len(g)
    gh = math.fsum(a * b for a, b in zip(g, h))
    gg = math.fsum(a * a for a in g)
    hh = math.fsum(b * b for b in h)
    holds = gh * gh >= gg * hh - eps * n**3 * hh
    lam = gh / hh if hh else 0.0
    cube = eps ** (1 / 3)
    bad = sum(1 for a, b in zip(g, h) if abs(a - lam * b) > cube * n)
    return InverseCSReport(
        hypothesis_holds=holds,
        ratio=lam,
        bad_indices=bad,
        bad_bound=cube * n,
        tolerance=cube * n,
    )


@dataclass(frozen=True)
class QuasirandomnessReport:
    density: Fraction
    discrepancy: Fraction
    witness: tuple[int, int]
    residuals: dict[str, Fraction]
    residual_eps: Fraction
    converse_bound: float
    exponential_sums: dict[int, complex]


def quasirandomness_report(w: Word, d=None, num_frequencies: int = 4) -> QuasirandomnessReport:
    """One-stop diagnostic bundle: interval discrepancy, length-3 count
    residuals with the 42 eps^(1/3) converse bound, and low-frequency
    exponential sums."""
    _require_binary(w)
    n = len(w)
    if d is None:
        d = Fraction(w.weight(), n)
    d = Fraction(d)
    disc, wit = discrepancy(w, d)
    res = minimizer_residuals(w, d)
    eps = max(res.values())
    return QuasirandomnessReport(
        density=d,
        discrepancy=disc / n,
        witness=wit,
        residuals=res,
        residual_eps=eps,
        converse_bound=CONVERSE_CONSTANT * float(eps) ** (1 / 3),
        exponential_sums={k: exponential_sum(w, k) for k in range(1, num_frequencies + 1)},
    )
