"""Exact arithmetic in a fixed real number field of degree at most three.

Elements are coordinate vectors over the rationals with respect to the power
basis ``1, theta, theta**2`` where ``theta`` is one real root of an integer
minimal polynomial, pinned by a rational isolating interval.  Order relations
(sign, floor, comparisons) are decided exactly: the isolating interval is
bisected until an interval enclosure of the element excludes the point in
question.  Irrational elements can never sit on a rational boundary, so this
always terminates; rational elements are handled directly.

Complex and real conjugates are reached through :class:`Embedding`, which
evaluates elements at another root of the minimal polynomial with mpmath and
carries a rigorous error radius.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath

__all__ = [
    "ExactNumError",
    "Reducible",
    "NoRootInInterval",
    "MultipleRootsInInterval",
    "PrecisionExhausted",
    "ParseError",
    "NumberField",
    "FieldElement",
    "Embedding",
    "Enclosure",
    "RATIONALS",
    "make_field",
    "field_arithmetic",
    "floor_frac",
    "embed",
    "rational",
    "parse_element",
    "parse_point",
    "format_element",
    "format_fraction",
    "precision_cap",
]

DEFAULT_PRECISION_CAP = 4096
START_PRECISION = 64
# hard stop for exact interval refinement; only a bug can get near it
_MAX_REFINE_BITS = 1 << 18


class ExactNumError(ValueError):
    """Base class for number-field construction and parsing errors."""


class Reducible(ExactNumError):
    pass


class NoRootInInterval(ExactNumError):
    pass


class MultipleRootsInInterval(ExactNumError):
    pass


class ParseError(ExactNumError):
    pass


class PrecisionExhausted(ArithmeticError):
    """A numerical certificate could not be obtained below the precision cap."""


def precision_cap(override: int | None = None) -> int:
    """Resolve the precision cap: explicit value, then ``JP_PRECISION_CAP``, then default."""
    if override is not None:
        return int(override)
    env = os.environ.get("JP_PRECISION_CAP")
    if env:
        return int(env)
    return DEFAULT_PRECISION_CAP


# ---------------------------------------------------------------------------
# dense polynomial helpers (ascending coefficients)


def _strip(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return [i * c for i, c in enumerate(p)][1:] or [0]


def _prem(a, b):
    a = [Fraction(c) for c in a]
    b = _strip(b)
    db = len(b) - 1
    lead = Fraction(b[-1])
    while len(a) - 1 >= db and any(a):
        a = _strip(a)
        if len(a) - 1 < db or (len(a) == 1 and a[0] == 0):
            break
        coef = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[i + shift] -= coef * c
        a.pop()
    return _strip(a) if a else [Fraction(0)]


def _sturm_sequence(p):
    seq = [[Fraction(c) for c in p], [Fraction(c) for c in _pderiv(p)]]
    while True:
        r = _prem(seq[-2], seq[-1])
        if all(c == 0 for c in r):
            break
        seq.append([-c for c in r])
        if len(r) == 1:
            break
    return seq


def _sign_changes(seq, x):
    signs = [_sgn(_peval(s, x)) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def count_real_roots(p: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    seq = _sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def _rational_roots(p: Sequence[int]) -> list[Fraction]:
    p = _strip([int(c) for c in p])
    if p[0] == 0:
        return [Fraction(0)]
    roots = []
    c0, cd = abs(p[0]), abs(p[-1])
    nums = [d for d in range(1, c0 + 1) if c0 % d == 0]
    dens = [d for d in range(1, cd + 1) if cd % d == 0]
    for n in nums:
        for d in dens:
            for s in (1, -1):
                x = Fraction(s * n, d)
                if _peval(p, x) == 0 and x not in roots:
                    roots.append(x)
    return roots


# ---------------------------------------------------------------------------
# interval arithmetic on exact rationals


def _imul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))


def _iscale(c, a):
    return (c * a[0], c * a[1]) if c >= 0 else (c * a[1], c * a[0])


class NumberField:
    """The field Q(theta) for one real root ``theta`` of an irreducible polynomial.

    Construct through :func:`make_field`, which validates the input.  Instances
    are immutable in every observable way; the only internal state is a cache of
    progressively tighter isolating intervals and of numerically located roots.
    """

    __slots__ = ("minpoly", "interval", "degree", "_reduction", "_bracket", "_roots_cache", "__weakref__")

    def __init__(self, minpoly: Sequence[int], interval: tuple[Fraction, Fraction]):
        self.minpoly = tuple(int(c) for c in minpoly)
        self.interval = (Fraction(interval[0]), Fraction(interval[1]))
        self.degree = len(self.minpoly) - 1
        d = self.degree
        lead = Fraction(self.minpoly[-1])
        # theta**d expressed in the power basis
        top = [-Fraction(c) / lead for c in self.minpoly[:-1]]
        red = [top]
        for _ in range(d - 2):
            prev = red[-1]
            nxt = [Fraction(0)] + prev[:-1]
            carry = prev[-1]
            nxt = [x + carry * t for x, t in zip(nxt, top)]
            red.append(nxt)
        self._reduction = red  # theta**(d+k) for k = 0 .. d-2
        self._bracket = self.interval
        self._roots_cache: dict[int, list] = {}

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return self.minpoly == other.minpoly and self.interval == other.interval

    def __hash__(self):
        return hash((self.minpoly, self.interval))

    def __repr__(self):
        return f"NumberField(minpoly={list(self.minpoly)}, interval=({self.interval[0]}, {self.interval[1]}))"

    def same_root(self, other: "NumberField") -> bool:
        """True when both fields pin the same root of the same polynomial."""
        if self.minpoly != other.minpoly:
            return False
        lo = max(self.interval[0], other.interval[0])
        hi = min(self.interval[1], other.interval[1])
        if lo > hi:
            return False
        if self.degree == 1:
            return True
        return count_real_roots(self.minpoly, lo, hi) == 1 or _peval(self.minpoly, lo) == 0

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    # elements -------------------------------------------------------------
    def element(self, coords: Sequence) -> "FieldElement":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            raise ValueError(f"expected at most {self.degree} coordinates, got {len(coords)}")
        coords += [Fraction(0)] * (self.degree - len(coords))
        return FieldElement(self, tuple(coords))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.is_rational:
                return self.element([value.coords[0]])
            raise ValueError("element belongs to a different field")
        return self.element([Fraction(value)])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([Fraction(-self.minpoly[0], self.minpoly[1])])
        return self.element([0, 1])

    def zero(self) -> "FieldElement":
        return self.element([0])

    def one(self) -> "FieldElement":
        return self.element([1])

    # exact refinement -----------------------------------------------------
    def bracket(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval of width at most ``2**-bits`` containing theta."""
        if self.degree == 1:
            t = Fraction(-self.minpoly[0], self.minpoly[1])
            return (t, t)
        lo, hi = self._bracket
        target = Fraction(1, 1 << bits)
        if hi - lo <= target:
            return lo, hi
        p = self.minpoly
        s_lo = _sgn(_peval(p, lo))
        while hi - lo > target:
            mid = (lo + hi) / 2
            s = _sgn(_peval(p, mid))
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        self._bracket = (lo, hi)
        return lo, hi

    def _mul_coords(self, a, b):
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k, c in enumerate(prod[d:]):
            if c:
                for i, t in enumerate(self._reduction[k]):
                    out[i] += c * t
        return out

    # numerical roots ------------------------------------------------------
    def roots(self, bits: int) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
        """All complex roots with certified error radii at ``bits`` of precision.

        Index 0 is the distinguished real root; the remaining real roots follow in
        increasing order, then complex roots as (positive imaginary part,
        conjugate) pairs.
        """
        cached = self._roots_cache.get(bits)
        if cached is not None:
            return cached
        d = self.degree
        with mpmath.workprec(bits + 64):
            if d == 1:
                t = mpmath.mpf(-self.minpoly[0]) / self.minpoly[1]
                res = [(mpmath.mpc(t, 0), mpmath.mpf(2) ** (-(bits + 32)))]
                self._roots_cache[bits] = res
                return res
            coeffs = [mpmath.mpf(c) for c in reversed(self.minpoly)]
            raw = mpmath.polyroots(coeffs, maxsteps=400, extraprec=2 * bits + 64)
            lo, hi = self.bracket(min(bits, 200))
            mid = mpmath.mpf(lo.numerator) / lo.denominator
            mid = (mid + mpmath.mpf(hi.numerator) / hi.denominator) / 2
            vals = [mpmath.mpc(z) for z in raw]
            scale = max(abs(z) for z in vals) + 1
            tiny = scale * mpmath.mpf(2) ** (-(bits + 32))
            reals = [mpmath.mpc(z.real, 0) for z in vals if abs(z.imag) <= tiny]
            cplx = [z for z in vals if abs(z.imag) > tiny]
            main = min(reals, key=lambda z: abs(z.real - mid))
            others = sorted((z for z in reals if z is not main), key=lambda z: z.real)
            upper = sorted((z for z in cplx if z.imag > 0), key=lambda z: (z.real, z.imag))
            ordered = [main] + others
            for z in upper:
                ordered.extend([z, mpmath.conj(z)])
            fp = [mpmath.mpf(c) for c in self.minpoly]
            dp = [mpmath.mpf(c) for c in _pderiv(self.minpoly)]
            res = []
            for z in ordered:
                fz = abs(_peval(fp, z))
                dz = abs(_peval(dp, z))
                rad = 2 * d * fz / dz + mpmath.mpf(2) ** (-(bits + 32)) * (abs(z) + 1)
                res.append((z, rad))
            for i, (z, rad) in enumerate(res):
                sep = min(abs(z - w) for j, (w, _) in enumerate(res) if j != i)
                if rad * 2 >= sep:
                    raise PrecisionExhausted("roots not separated at this precision")
        self._roots_cache[bits] = res
        return res

    def embedding_kinds(self) -> list[str]:
        """'real' or 'complex' for each root index (index 0 is the real root)."""
        return ["real" if z.imag == 0 else "complex" for z, _ in self.roots(START_PRECISION)]


def make_field(minpoly: Sequence[int], interval: tuple) -> NumberField:
    """Validate ``minpoly`` and the isolating ``interval`` and build the field."""
    p = _strip([int(c) for c in minpoly])
    d = len(p) - 1
    if d < 1 or d > 3:
        raise ExactNumError(f"degree must be 1, 2 or 3 (got {d})")
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if not lo < hi:
        raise ExactNumError("isolating interval needs lo < hi")
    if d >= 2:
        rr = _rational_roots(p)
        if rr:
            raise Reducible(f"polynomial {p} has rational root {rr[0]}")
        flo, fhi = _peval(p, lo), _peval(p, hi)
        n = count_real_roots(p, lo, hi)
        if n == 0:
            raise NoRootInInterval(f"no root of {p} in [{lo}, {hi}]")
        if n > 1:
            raise MultipleRootsInInterval(f"{n} roots of {p} in [{lo}, {hi}]")
        if _sgn(flo) * _sgn(fhi) >= 0:
            # a single root of even multiplicity cannot occur for irreducible p
            raise NoRootInInterval(f"{p} does not change sign on [{lo}, {hi}]")
    else:
        t = Fraction(-p[0], p[1])
        if not lo <= t <= hi:
            raise NoRootInInterval(f"root {t} not in [{lo}, {hi}]")
    return NumberField(p, (lo, hi))


RATIONALS = NumberField((0, 1), (Fraction(-1), Fraction(1)))


# ---------------------------------------------------------------------------


def _as_element_pair(a, b):
    if isinstance(a, FieldElement) and isinstance(b, FieldElement):
        if a.field == b.field:
            return a, b
        if b.is_rational:
            return a, a.field(b)
        if a.is_rational:
            return b.field(a), b
        raise ValueError("elements live in different fields")
    if isinstance(a, FieldElement):
        return a, a.field(b)
    return b.field(a), b


@dataclass(frozen=True, eq=False)
class FieldElement:
    """``sum(coords[i] * theta**i)`` in ``field``; immutable."""

    field: NumberField
    coords: tuple

    # structure ------------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("element is irrational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coords[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.field == other.field:
            return self.coords == other.coords
        return self.is_rational and other.is_rational and self.coords[0] == other.coords[0]

    def __hash__(self):
        if self.is_rational:
            return hash(self.coords[0])
        return hash((self.field.minpoly, self.coords))

    def __repr__(self):
        return f"FieldElement({format_element(self)})"

    def __str__(self):
        if self.is_rational:
            return str(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{'*' if mono else ''}{mono}" if c != 1 or not mono else mono)
        return " + ".join(terms) or "0"

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = _as_element_pair(self, other)
        except TypeError:
            return NotImplemented
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        try:
            a, b = _as_element_pair(self, other)
        except TypeError:
            return NotImplemented
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x * other for x in self.coords))
        try:
            a, b = _as_element_pair(self, other)
        except TypeError:
            return NotImplemented
        if b.is_rational:
            k = b.coords[0]
            return FieldElement(a.field, tuple(x * k for x in a.coords))
        if a.is_rational:
            k = a.coords[0]
            return FieldElement(a.field, tuple(k * x for x in b.coords))
        return FieldElement(a.field, tuple(a.field._mul_coords(a.coords, b.coords)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.is_rational:
            return FieldElement(self.field, (1 / self.coords[0],) + self.coords[1:])
        f = self.field
        d = f.degree
        # columns of the multiplication-by-self matrix
        cols = []
        basis = [0] * d
        for j in range(d):
            e = [Fraction(0)] * d
            e[j] = Fraction(1)
            cols.append(f._mul_coords(self.coords, e))
        m = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            pv = m[c][c]
            m[c] = [x / pv for x in m[c]]
            for r in range(d):
                if r != c and m[r][c]:
                    k = m[r][c]
                    m[r] = [x - k * y for x, y in zip(m[r], m[c])]
        basis = [m[i][d] for i in range(d)]
        return FieldElement(f, tuple(basis))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, tuple(x / other for x in self.coords))
        try:
            a, b = _as_element_pair(self, other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # order ----------------------------------------------------------------
    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Exact rational interval containing the value, from a ``2**-bits`` theta bracket."""
        if self.is_rational:
            c = self.coords[0]
            return c, c
        lo, hi = self.field.bracket(bits)
        t = (lo, hi)
        acc = (self.coords[0], self.coords[0])
        power = (Fraction(1), Fraction(1))
        for c in self.coords[1:]:
            power = _imul(power, t)
            if c:
                term = _iscale(c, power)
                acc = (acc[0] + term[0], acc[1] + term[1])
        return acc

    def _bits_hint(self) -> int:
        m = max((abs(c) for c in self.coords), default=Fraction(0))
        if m == 0:
            return START_PRECISION
        return START_PRECISION + max(0, m.numerator.bit_length() - m.denominator.bit_length())

    def sign(self) -> int:
        if self.is_rational:
            return _sgn(self.coords[0])
        bits = self._bits_hint()
        while bits <= _MAX_REFINE_BITS:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise PrecisionExhausted("sign refinement did not terminate")

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        if self.is_rational:
            return math.floor(self.coords[0])
        bits = self._bits_hint()
        while bits <= _MAX_REFINE_BITS:
            lo, hi = self.enclosure(bits)
            k = math.floor(lo)
            if math.floor(hi) == k:
                return k
            bits *= 2
        raise PrecisionExhausted("floor refinement did not terminate")

    def frac(self) -> "FieldElement":
        return self - self.floor()

    def approx(self, bits: int = 64) -> mpmath.mpf:
        """Real value (distinguished embedding) to roughly ``bits`` bits."""
        if self.is_rational:
            c = self.coords[0]
            with mpmath.workprec(bits):
                return mpmath.mpf(c.numerator) / c.denominator
        hint = self._bits_hint()
        lo, hi = self.enclosure(bits + hint)
        m = (lo + hi) / 2
        with mpmath.workprec(bits):
            return mpmath.mpf(m.numerator) / m.denominator

    def __float__(self):
        return float(self.approx(64))

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial of multiplication by self (ascending, monic)."""
        f = self.field
        d = f.degree
        cols = []
        for j in range(d):
            e = [Fraction(0)] * d
            e[j] = Fraction(1)
            cols.append(f._mul_coords(self.coords, e) if d > 1 else [self.coords[0] * e[0]])
        m = [[cols[j][i] for j in range(d)] for i in range(d)]
        # Faddeev-LeVerrier on a d x d rational matrix
        n = d
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        mk = [row[:] for row in ident]
        for k in range(1, n + 1):
            am = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            c = -sum(am[i][i] for i in range(n)) / k
            coeffs[n - k] = c
            mk = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        return coeffs


def rational(value) -> FieldElement:
    """A rational number as an element of the degree-1 field."""
    return RATIONALS.element([Fraction(value)])


def field_arithmetic(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def floor_frac(x: FieldElement) -> tuple[int, FieldElement]:
    k = x.floor()
    return k, x - k


# ---------------------------------------------------------------------------
# embeddings


class Enclosure(NamedTuple):
    """A complex value together with a rigorous error radius."""

    value: mpmath.mpc
    radius: mpmath.mpf

    def real_sign(self) -> int | None:
        if self.value.real > self.radius:
            return 1
        if self.value.real < -self.radius:
            return -1
        return None

    def imag_sign(self) -> int | None:
        if self.value.imag > self.radius:
            return 1
        if self.value.imag < -self.radius:
            return -1
        return None


@dataclass(frozen=True)
class Embedding:
    """Evaluation at root number ``root_index`` of the field's minimal polynomial."""

    field: NumberField
    root_index: int
    precision_bits: int = START_PRECISION
    cap: int = field(default_factory=precision_cap)

    def __post_init__(self):
        n = self.field.degree
        if not 0 <= self.root_index < n:
            raise ValueError(f"root_index {self.root_index} out of range for degree {n}")

    @property
    def is_real(self) -> bool:
        z, _ = self.field.roots(START_PRECISION)[self.root_index]
        return z.imag == 0

    @property
    def is_identity(self) -> bool:
        return self.root_index == 0

    def with_precision(self, bits: int) -> "Embedding":
        return Embedding(self.field, self.root_index, bits, self.cap)

    def root(self) -> Enclosure:
        z, rad = self.field.roots(self.precision_bits)[self.root_index]
        return Enclosure(z, rad)

    def ladder(self):
        """Yield embeddings at doubling precision up to the cap."""
        bits = self.precision_bits
        while bits <= self.cap:
            yield self.with_precision(bits)
            bits *= 2


def embed(x: FieldElement, e: Embedding) -> Enclosure:
    """Value of ``x`` under the embedding, with a rigorous error radius."""
    if x.is_rational:
        c = x.coords[0]
        with mpmath.workprec(e.precision_bits + 32):
            v = mpmath.mpf(c.numerator) / c.denominator
            rad = mpmath.mpf(0) if c.denominator & (c.denominator - 1) == 0 else abs(v) * mpmath.mpf(2) ** (-e.precision_bits - 16)
            return Enclosure(mpmath.mpc(v, 0), rad)
    if x.field != e.field:
        raise ValueError("embedding belongs to a different field")
    z, rho = e.root()
    bits = e.precision_bits
    with mpmath.workprec(bits + 32):
        az = abs(z)
        val = mpmath.mpc(0)
        prop = mpmath.mpf(0)
        mag = mpmath.mpf(0)
        zi = mpmath.mpc(1)
        for i, c in enumerate(x.coords):
            cm = mpmath.mpf(c.numerator) / c.denominator
            if i:
                zi = zi * z
            if c:
                val += cm * zi
                prop += abs(cm) * ((az + rho) ** i - az ** i)
                mag += abs(cm) * (az + rho) ** i
        rad = prop + mag * mpmath.mpf(2) ** (-bits - 8) * (len(x.coords) + 1)
    return Enclosure(val, rad)


# ---------------------------------------------------------------------------
# textual format
#   rat:<p>/<q>
#   alg:[c0,c1,...,cd]@[lo,hi];coords=[a0,a1,a2]


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _fmt_list(xs) -> str:
    return "[" + ",".join(format_fraction(x) if isinstance(x, Fraction) else str(x) for x in xs) + "]"


def format_element(x: FieldElement) -> str:
    if x.is_rational:
        return "rat:" + format_fraction(x.coords[0])
    f = x.field
    return (
        "alg:"
        + "[" + ",".join(str(c) for c in f.minpoly) + "]"
        + "@" + _fmt_list(f.interval)
        + ";coords=" + _fmt_list(x.coords)
    )


_ALG_RE = re.compile(r"^alg:\[([^\]]*)\]@\[([^\]]*)\];coords=\[([^\]]*)\]$")


def _parse_frac(s: str) -> Fraction:
    s = s.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def parse_element(text: str, fields: list[NumberField] | None = None) -> FieldElement:
    """Parse one element.  ``fields`` lets callers reuse an already-built field."""
    text = text.strip()
    if text.startswith("rat:"):
        return rational(_parse_frac(text[4:]))
    m = _ALG_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse element {text!r}")
    try:
        poly = [int(c) for c in m.group(1).split(",")]
    except ValueError as exc:
        raise ParseError(f"bad polynomial in {text!r}") from exc
    bounds = [_parse_frac(s) for s in m.group(2).split(",")]
    if len(bounds) != 2:
        raise ParseError("interval needs two endpoints")
    coords = [_parse_frac(s) for s in m.group(3).split(",") if s.strip()]
    fld = make_field(poly, (bounds[0], bounds[1]))
    if fields is not None:
        for g in fields:
            if g.same_root(fld):
                fld = g
                break
        else:
            fields.append(fld)
    if len(coords) > fld.degree:
        raise ParseError(f"too many coordinates for degree {fld.degree}")
    return fld.element(coords)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_point(text: str) -> tuple[FieldElement, FieldElement]:
    """Parse ``"<element>,<element>"`` into two elements of one common field."""
    parts = _split_top(text)
    if len(parts) != 2:
        raise ParseError(f"a point needs exactly two elements, got {len(parts)}")
    fields: list[NumberField] = []
    a = parse_element(parts[0], fields)
    b = parse_element(parts[1], fields)
    if len(fields) > 1:
        raise ParseError("both coordinates must lie in one number field")
    if fields:
        a, b = fields[0](a), fields[0](b)
    return a, b
