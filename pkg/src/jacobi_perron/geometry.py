"""Cylinder cells of the expansion and their exact measures.

A digit word ``w = (a_0,b_0) ... (a_n,b_n)`` determines the cell of points
whose expansion starts with ``w``.  It is the image of the unit square (or of
the triangle ``X <= Y`` when ``a_n = b_n``) under the projective map

    P_n(X, Y) = ((p_{n-2}X + p_{n-1}Y + p_n) / (r_{n-2}X + r_{n-1}Y + r_n),
                 (q_{n-2}X + q_{n-1}Y + q_n) / (r_{n-2}X + r_{n-1}Y + r_n)),

where ``X, Y`` are the fractional parts of the n-th state.  Projective maps
send segments to segments, so every measure here is an exact shoelace area.
The strip ``0 <= X <= t`` has the closed-form measure ``S_n(t)`` (``S'_n(t)``
for triangular cells); at ``t = 1`` this is the cell measure.

Points whose next digit satisfies ``b <= B`` are those with ``X > 1/(B+1)``,
which gives two exact identities used below:

* the children of a cell with ``b <= B`` fill the cell up to ``S_n(1/(B+1))``;
* the cells of depth ``n+1`` with every ``b_i < m`` have total measure
  ``sum (S_n(1) - S_n(1/m))`` over depth-``n`` words with ``b_i < m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from . import kernels
from .expansion import ConvergentMatrix, Digit, Inadmissible, check_admissible, convergent_columns

__all__ = [
    "OutOfParameterDomain",
    "TOutOfRange",
    "EnumerationTooLarge",
    "Cell",
    "CellMeasure",
    "RegionSpec",
    "DecayReport",
    "SubdivisionReport",
    "cell_map_eval",
    "cell",
    "polygon_area",
    "cell_measure",
    "region_measure",
    "strip_measure",
    "admissible_words",
    "decay_census",
    "enumerate_and_decay",
    "subdivision_check",
    "edge_collinearity",
    "strip_ratio_exceeds",
    "triangle_area",
    "pullback_triangle",
    "pullback_area_identity",
    "pullback_area_bounds",
    "DEFAULT_WORD_CAP",
]

DEFAULT_WORD_CAP = 10**7

Point = tuple  # (Fraction, Fraction)


class OutOfParameterDomain(ValueError):
    pass


class TOutOfRange(ValueError):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


def _word(word: Sequence) -> list[Digit]:
    w = [Digit(*d) for d in word]
    if not w:
        raise Inadmissible("empty digit word")
    if not check_admissible(w):
        raise Inadmissible(f"digit word {w} is not admissible")
    return w


def _t(t) -> Fraction:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise TOutOfRange(f"t = {t} is outside [0, 1]")
    return t


def _triangular(w: list[Digit]) -> bool:
    return w[-1].a == w[-1].b


@dataclass(frozen=True)
class _Map:
    """The cell map as three integer columns at n-2, n-1, n."""

    r: tuple
    p: tuple
    q: tuple

    @classmethod
    def of(cls, w: list[Digit]) -> "_Map":
        r, p, q = convergent_columns(w)
        i = len(w) + 2
        return cls(tuple(r[i - 2:i + 1]), tuple(p[i - 2:i + 1]), tuple(q[i - 2:i + 1]))

    def homogeneous(self, X: Fraction, Y: Fraction) -> tuple[int, int, int]:
        """Integer ``(x, y, w)`` with the image point ``(x/w, y/w)``."""
        den = X.denominator * Y.denominator // gcd(X.denominator, Y.denominator)
        xi, yi = X.numerator * (den // X.denominator), Y.numerator * (den // Y.denominator)

        def lin(c):
            return c[0] * xi + c[1] * yi + c[2] * den

        return lin(self.p), lin(self.q), lin(self.r)

    def point(self, X: Fraction, Y: Fraction) -> Point:
        x, y, w = self.homogeneous(X, Y)
        return Fraction(x, w), Fraction(y, w)


def _check_param(w: list[Digit], X: Fraction, Y: Fraction):
    if not (0 <= X <= 1 and 0 <= Y <= 1):
        raise OutOfParameterDomain(f"({X}, {Y}) is outside the unit square")
    if _triangular(w) and X > Y:
        raise OutOfParameterDomain(f"({X}, {Y}) violates X <= Y for a triangular cell")


def cell_map_eval(word: Sequence, X, Y) -> Point:
    """Exact image of the parameter point ``(X, Y)`` in the cell of ``word``."""
    w = _word(word)
    X, Y = Fraction(X), Fraction(Y)
    _check_param(w, X, Y)
    return _Map.of(w).point(X, Y)


@dataclass(frozen=True)
class CellMeasure:
    value: Fraction

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("a measure cannot be negative")


QUAD_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))
TRIANGLE_CORNERS = ((0, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class Cell:
    word: tuple
    matrix: ConvergentMatrix
    kind: str  # "quadrangle" | "triangle"
    vertices: tuple
    _homog: tuple = field(repr=False, compare=False, default=())


def cell(word: Sequence) -> Cell:
    w = _word(word)
    mp = _Map.of(w)
    corners = TRIANGLE_CORNERS if _triangular(w) else QUAD_CORNERS
    homog = tuple(mp.homogeneous(Fraction(x), Fraction(y)) for x, y in corners)
    verts = tuple((Fraction(x, z), Fraction(y, z)) for x, y, z in homog)
    kind = "triangle" if _triangular(w) else "quadrangle"
    return Cell(tuple(w), ConvergentMatrix(len(w) - 1, mp.r, mp.p, mp.q), kind, verts, homog)


def _area_homog(pts) -> Fraction:
    n, d = kernels.shoelace2(list(pts))
    return abs(Fraction(n, 2 * d))


def polygon_area(c: Cell) -> CellMeasure:
    """Exact shoelace area of the cell's vertex polygon."""
    pts = c._homog or tuple((v[0].numerator * v[1].denominator, v[1].numerator * v[0].denominator, v[0].denominator * v[1].denominator) for v in c.vertices)
    return CellMeasure(_area_homog(pts))


def strip_measure(r2: int, r1: int, r0: int, t, triangle: bool) -> Fraction:
    """Closed-form measure of the strip ``0 <= X <= t`` for the given r-values."""
    t = Fraction(t)
    n, d = kernels.measure_nd(r2, r1, r0, t.numerator, t.denominator, triangle)
    return Fraction(n, d)


def cell_measure(word: Sequence, t) -> tuple[CellMeasure, CellMeasure]:
    """``(S_n(t), S_n(1))`` by the closed formula (primed form for triangular cells)."""
    w = _word(word)
    t = _t(t)
    mp = _Map.of(w)
    tri = _triangular(w)
    return CellMeasure(strip_measure(*mp.r, t, tri)), CellMeasure(strip_measure(*mp.r, 1, tri))


@dataclass(frozen=True)
class RegionSpec:
    """A parameter region: ``strip``/``strip-complement`` (``t <= X`` / ``X <= t``)
    over the square or, for triangular cells, over ``X <= Y``."""

    selector: str  # "Dt" | "DtPrime" | "Dt-complement" | "DtPrime-complement"
    t: Fraction

    def __post_init__(self):
        if self.selector not in ("Dt", "DtPrime", "Dt-complement", "DtPrime-complement"):
            raise ValueError(f"unknown region selector {self.selector!r}")
        object.__setattr__(self, "t", _t(self.t))

    @property
    def triangular(self) -> bool:
        return self.selector.startswith("DtPrime")

    def corners(self) -> tuple:
        t = self.t
        return {
            "Dt": ((t, 0), (1, 0), (1, 1), (t, 1)),
            "Dt-complement": ((0, 0), (t, 0), (t, 1), (0, 1)),
            "DtPrime": ((t, t), (1, 1), (t, 1)),
            "DtPrime-complement": ((0, 0), (t, t), (t, 1), (0, 1)),
        }[self.selector]


def region_measure(word: Sequence, spec: RegionSpec) -> CellMeasure:
    """Exact area of the image of a parameter region inside the cell of ``word``."""
    w = _word(word)
    if spec.triangular != _triangular(w):
        raise OutOfParameterDomain("region shape does not match the cell's parameter domain")
    mp = _Map.of(w)
    pts = [mp.homogeneous(Fraction(x), Fraction(y)) for x, y in spec.corners()]
    return CellMeasure(_area_homog(pts))


# ---------------------------------------------------------------------------
# enumeration


def _digits(max_b: int, after_triangle: bool) -> Iterator[Digit]:
    for b in range(1, max_b + 1):
        for a in range(1 if after_triangle else 0, b + 1):
            yield Digit(a, b)


def admissible_words(max_b: int, length: int) -> Iterator[tuple]:
    """Admissible words of ``length`` digits with ``b <= max_b``, lexicographically, depth first."""
    if length < 1:
        return

    def rec(prefix, tri):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for d in _digits(max_b, tri):
            prefix.append(d)
            yield from rec(prefix, d.a == d.b)
            prefix.pop()

    yield from rec([], False)


def decay_census(m: int, depth: int, cap: int = DEFAULT_WORD_CAP) -> list[dict]:
    """For n = 0..depth, the multiset of (r_{n-2}, r_{n-1}, r_n, triangular) over words with b_i < m."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    levels = [kernels.first_level(m)]
    for _ in range(depth):
        total = sum(levels[-1].values())
        if total * (m * (m + 1) // 2 - 1) > cap:
            raise EnumerationTooLarge(f"more than {cap} words at depth {len(levels)}")
        levels.append(kernels.next_level(levels[-1], m))
    return levels


@dataclass
class DecayReport:
    m: int
    depth: int
    measures: list  # |D_m(n)| for n = 0..depth
    bounds: list  # (1 - 1/m^2) |D_m(n)|, compared against |D_m(n+1)|
    passes: list  # strict decay per consecutive pair
    identity: list  # |D_m(n+1)| equals the sum of strip complements at 1/m
    word_counts: list
    base_ok: bool

    @property
    def ok(self) -> bool:
        return self.base_ok and all(self.passes) and all(self.identity)

    def rows(self) -> list[tuple]:
        """(n, measure, bound for the next level or None, pass or None)."""
        out = []
        for n, v in enumerate(self.measures):
            if n < len(self.bounds):
                out.append((n, v, self.bounds[n], self.passes[n]))
            else:
                out.append((n, v, None, None))
        return out


def enumerate_and_decay(m: int, depth: int, cap: int = DEFAULT_WORD_CAP) -> DecayReport:
    """Exact |D_m(n)| for n = 0..depth with the strict per-step decay check."""
    levels = decay_census(m, depth, cap)
    inv = Fraction(1, m)
    measures, shrunk = [], []
    for lv in levels:
        items = sorted(lv.items())
        n, d = kernels.weighted_sum(items, 1, 1)
        full = Fraction(n, d)
        measures.append(full)
        n, d = kernels.weighted_sum(items, inv.numerator, inv.denominator)
        shrunk.append(full - Fraction(n, d))
    factor = 1 - Fraction(1, m * m)
    bounds = [factor * v for v in measures[:-1]]
    passes = [measures[k + 1] < bounds[k] for k in range(len(bounds))]
    identity = [measures[k + 1] == shrunk[k] for k in range(len(bounds))]
    counts = [sum(lv.values()) for lv in levels]
    return DecayReport(m, depth, measures, bounds, passes, identity, counts, measures[0] == Fraction(m * m - 1, 2))


# ---------------------------------------------------------------------------
# subdivision


@dataclass
class SubdivisionReport:
    word: tuple
    B: int
    total: Fraction
    partial_sums: list  # cumulative child measure for b = 1..B
    tail: Fraction  # strip measure at 1/(B+1): what the children with b > B cover
    increasing: bool
    bounded: bool
    exact: bool  # partial_sums[-1] + tail == total

    @property
    def defect(self) -> Fraction:
        return self.total - self.partial_sums[-1]

    @property
    def ok(self) -> bool:
        return self.increasing and self.bounded and self.exact


def subdivision_check(word: Sequence, B: int) -> SubdivisionReport:
    """Children with next digit ``b <= B`` against the parent cell, exactly."""
    w = _word(word)
    if B < 1:
        raise ValueError("B must be at least 1")
    mp = _Map.of(w)
    tri = _triangular(w)
    r2, r1, r0 = mp.r
    total = strip_measure(r2, r1, r0, 1, tri)
    partial, acc = [], Fraction(0)
    for b in range(1, B + 1):
        items = {}
        for a in range(1 if tri else 0, b + 1):
            key = (r1, r0, b * r0 + a * r1 + r2, a == b)
            items[key] = items.get(key, 0) + 1
        n, d = kernels.weighted_sum(sorted(items.items()), 1, 1)
        acc += Fraction(n, d)
        partial.append(acc)
    tail = strip_measure(r2, r1, r0, Fraction(1, B + 1), tri)
    inc = all(x < y for x, y in zip([Fraction(0)] + partial, partial))
    return SubdivisionReport(tuple(w), B, total, partial, tail, inc, partial[-1] < total, partial[-1] + tail == total)


# ---------------------------------------------------------------------------
# segment and area facts


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def edge_collinearity(word: Sequence, t) -> dict:
    """Parameter lines map into the cell edges: ``P(t,0)``, ``P(t,1)``, ``P(t,t)`` on the expected segments."""
    w = _word(word)
    t = _t(t)
    mp = _Map.of(w)
    P = lambda x, y: mp.point(Fraction(x), Fraction(y))  # noqa: E731
    out = {"diagonal": _on_segment(P(t, t), P(0, 0), P(1, 1)), "top": _on_segment(P(t, 1), P(0, 1), P(1, 1))}
    if not _triangular(w):
        out["bottom"] = _on_segment(P(t, 0), P(0, 0), P(1, 0))
    return out


def strip_ratio_exceeds(word: Sequence, t) -> bool:
    """``S_n(t) > t^2 S_n(1)`` for ``0 < t < 1``."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise TOutOfRange("t must lie strictly between 0 and 1")
    s, full = cell_measure(word, t)
    return s.value > t * t * full.value


def triangle_area(p1: Point, p2: Point, p3: Point) -> Fraction:
    return abs(_cross(p1, p2, p3)) / 2


def pullback_triangle(a: int, b: int, c: int, d: int, xy: Sequence[Point]) -> tuple[list, list]:
    """Points ``P_i`` in the first-digit cell ``(a,b)`` over ``Q_i = (c+x_i, d+y_i)``.

    ``P_i = (a + 1/(d+y_i), b + (c+x_i)/(d+y_i))`` so one step of the map sends
    ``P_i`` to ``Q_i``.
    """
    if not (0 <= a <= b and b >= 1 and 0 <= c <= d and d >= 1):
        raise Inadmissible("digits out of range")
    if a == b and c < 1:
        raise Inadmissible("digit pair violates admissibility")
    P, Q = [], []
    for x, y in xy:
        x, y = Fraction(x), Fraction(y)
        if not (0 < x < 1 and 0 < y < 1) or (c == d and not x < y):
            raise OutOfParameterDomain(f"({x}, {y}) is not interior")
        P.append((a + 1 / (d + y), b + (c + x) / (d + y)))
        Q.append((c + x, d + y))
    return P, Q


def pullback_area_identity(a: int, b: int, c: int, d: int, xy: Sequence[Point]) -> bool:
    """``|P1P2P3| = |Q1Q2Q3| / prod(d + y_i)`` exactly."""
    P, Q = pullback_triangle(a, b, c, d, xy)
    scale = 1
    for _, y in xy:
        scale *= d + Fraction(y)
    return triangle_area(*P) == triangle_area(*Q) / scale


def pullback_area_bounds(a: int, b: int, c: int, d: int, xy: Sequence[Point]) -> bool:
    """``|Q|/(d+1)^3 < |P| < |Q|/d^3`` for a non-degenerate triangle."""
    P, Q = pullback_triangle(a, b, c, d, xy)
    n, nn = triangle_area(*Q), triangle_area(*P)
    if n == 0:
        raise ValueError("degenerate triangle")
    return n / (d + 1) ** 3 < nn < n / Fraction(d) ** 3
