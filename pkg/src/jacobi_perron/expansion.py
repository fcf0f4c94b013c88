"""The Jacobi-Perron map, expansion traces and convergent matrices.

A state ``(alpha, beta)`` lives in the closed domain ``0 <= alpha <= beta``,
``1 <= beta``.  One step emits the digit ``([alpha], [beta])`` and moves to
``({beta}/{alpha}, 1/{alpha})``; the expansion stops when ``{alpha} = 0``.

Convergent columns ``(r_n, p_n, q_n)`` obey

    x_n = b_n x_{n-1} + a_n x_{n-2} + x_{n-3}

starting from the identity matrix, read as the columns at n = -3, -2, -1.
Traces store the columns in flat lists offset by three so that index ``-3``
maps to position ``0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .exactnum import FieldElement, format_element, rational

__all__ = [
    "NotInDomain",
    "Inadmissible",
    "Digit",
    "State",
    "ConvergentMatrix",
    "Termination",
    "ExpansionTrace",
    "PeriodReport",
    "IdentityReport",
    "jp_step",
    "expand",
    "convergent_matrices",
    "convergent_columns",
    "check_admissible",
    "verify_identities",
    "detect_period",
    "trace_to_dict",
    "DEFAULT_HORIZON",
]

DEFAULT_HORIZON = 10_000


class NotInDomain(ValueError):
    pass


class Inadmissible(ValueError):
    pass


class Digit(NamedTuple):
    a: int
    b: int

    def valid(self) -> bool:
        return 0 <= self.a <= self.b and self.b >= 1


def _elem(x) -> FieldElement:
    return x if isinstance(x, FieldElement) else rational(x)


@dataclass(frozen=True)
class State:
    alpha: FieldElement
    beta: FieldElement

    def __post_init__(self):
        a, b = _elem(self.alpha), _elem(self.beta)
        if a.field != b.field:
            if a.is_rational:
                a = b.field(a)
            elif b.is_rational:
                b = a.field(b)
            else:
                raise ValueError("alpha and beta must lie in one field")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def in_domain(self) -> bool:
        return self.alpha.sign() >= 0 and self.alpha <= self.beta and self.beta >= 1

    def key(self):
        return (self.alpha.coords, self.beta.coords)

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    def __hash__(self):
        return hash((self.alpha, self.beta))


def jp_step(s: State) -> tuple[Digit, State | None]:
    """One application of the map.  ``next`` is None when ``{alpha} = 0``."""
    if not s.in_domain():
        raise NotInDomain(f"({s.alpha}, {s.beta}) is outside the domain 0<=alpha<=beta, beta>=1")
    a = s.alpha.floor()
    b = s.beta.floor()
    fa = s.alpha - a
    if fa.is_zero():
        return Digit(a, b), None
    inv = fa.inverse()
    return Digit(a, b), State((s.beta - b) * inv, inv)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergentMatrix:
    """``L_n`` stored as its three columns at indices n-2, n-1, n."""

    n: int
    r: tuple
    p: tuple
    q: tuple

    @property
    def rows(self) -> tuple:
        return (self.r, self.p, self.q)

    def column(self, j: int) -> tuple:
        return (self.r[j], self.p[j], self.q[j])

    def det(self) -> int:
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def times_digit(self, d: Digit) -> "ConvergentMatrix":
        """``L_n K_{n+1}`` by explicit matrix multiplication."""
        k = ((0, 0, 1), (1, 0, d.a), (0, 1, d.b))
        rows = []
        for row in self.rows:
            rows.append(tuple(sum(row[t] * k[t][j] for t in range(3)) for j in range(3)))
        return ConvergentMatrix(self.n + 1, *rows)


def convergent_columns(digits: Sequence[Digit]) -> tuple[list[int], list[int], list[int]]:
    """r, p, q lists for indices -3 .. len(digits)-1 (position = index + 3)."""
    r, p, q = [1, 0, 0], [0, 1, 0], [0, 0, 1]
    for a, b in digits:
        r.append(b * r[-1] + a * r[-2] + r[-3])
        p.append(b * p[-1] + a * p[-2] + p[-3])
        q.append(b * q[-1] + a * q[-2] + q[-3])
    return r, p, q


def _matrix(r, p, q, n) -> ConvergentMatrix:
    i = n + 3
    return ConvergentMatrix(n, tuple(r[i - 2:i + 1]), tuple(p[i - 2:i + 1]), tuple(q[i - 2:i + 1]))


def check_admissible(digits: Iterable) -> bool:
    prev = None
    for d in digits:
        d = Digit(*d)
        if not d.valid():
            return False
        if prev is not None and prev.a == prev.b and d.a < 1:
            return False
        prev = d
    return True


def convergent_matrices(digits: Sequence) -> list[ConvergentMatrix]:
    digits = [Digit(*d) for d in digits]
    if not check_admissible(digits):
        raise Inadmissible(f"digit sequence {digits} is not admissible")
    r, p, q = convergent_columns(digits)
    return [_matrix(r, p, q, n) for n in range(len(digits))]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Termination:
    kind: str  # "terminated" | "horizon" | "periodic"
    step: int | None = None
    u: int | None = None
    v: int | None = None

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "terminated":
            d["step"] = self.step
        if self.kind == "periodic":
            d["u"], d["v"] = self.u, self.v
        return d


@dataclass(frozen=True)
class PeriodReport:
    u: int
    v: int


@dataclass
class ExpansionTrace:
    initial: State
    digits: list
    states: list
    r: list
    p: list
    q: list
    termination: Termination
    _pi: list = field(default_factory=list, repr=False)

    @property
    def length(self) -> int:
        return len(self.digits)

    @property
    def terminated(self) -> bool:
        return self.termination.kind == "terminated"

    @property
    def steps(self) -> list:
        return list(zip(self.digits, self.states[1:]))

    def col(self, n: int) -> tuple[int, int, int]:
        i = n + 3
        if i < 0:
            raise IndexError(n)
        return self.r[i], self.p[i], self.q[i]

    def rn(self, n: int) -> int:
        return self.r[n + 3]

    def pn(self, n: int) -> int:
        return self.p[n + 3]

    def qn(self, n: int) -> int:
        return self.q[n + 3]

    def matrix(self, n: int) -> ConvergentMatrix:
        return _matrix(self.r, self.p, self.q, n)

    @property
    def matrices(self) -> list[ConvergentMatrix]:
        return [self.matrix(n) for n in range(self.length)]

    def pi(self, n: int) -> FieldElement:
        """beta_1 * ... * beta_n (1 for n = 0)."""
        if not self._pi:
            self._pi.append(self.initial.alpha.field.one())
        while len(self._pi) <= n:
            k = len(self._pi)
            self._pi.append(self._pi[-1] * self.states[k].beta)
        return self._pi[n]

    def frac_alpha(self, n: int) -> FieldElement:
        return self.states[n].alpha - self.digits[n].a

    def frac_beta(self, n: int) -> FieldElement:
        return self.states[n].beta - self.digits[n].b


def expand(p, horizon: int = DEFAULT_HORIZON) -> ExpansionTrace:
    """Expand the point ``p`` (a State or an (alpha, beta) pair) for up to ``horizon`` digits."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    s = p if isinstance(p, State) else State(*p)
    if not s.in_domain():
        raise NotInDomain(f"({s.alpha}, {s.beta}) is outside the domain 0<=alpha<=beta, beta>=1")
    states = [s]
    digits: list[Digit] = []
    seen = {s.key(): 0}
    period = None
    term = None
    while len(digits) < horizon:
        n = len(digits)
        if period is not None:
            u, v = period
            digits.append(digits[n - v])
            states.append(states[n + 1 - v])
            continue
        d, nxt = jp_step(states[n])
        digits.append(d)
        if nxt is None:
            term = Termination("terminated", step=len(digits))
            break
        states.append(nxt)
        k = nxt.key()
        if k in seen:
            u = seen[k]
            period = (u, n + 1 - u)
        else:
            seen[k] = n + 1
    if term is None:
        if period is not None:
            term = Termination("periodic", u=period[0], v=period[1])
        else:
            term = Termination("horizon", step=len(digits))
    r, pp, q = convergent_columns(digits)
    return ExpansionTrace(s, digits, states, r, pp, q, term)


def detect_period(trace: ExpansionTrace) -> PeriodReport | None:
    if trace.termination.kind == "periodic":
        return PeriodReport(trace.termination.u, trace.termination.v)
    if trace.terminated:
        return None
    seen = {}
    for n, s in enumerate(trace.states):
        k = s.key()
        if k in seen:
            return PeriodReport(seen[k], n - seen[k])
        seen[k] = n
    return None


# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    checks: list = field(default_factory=list)  # (name, n, ok)
    ties: list = field(default_factory=list)  # (name, n) degenerate betweenness sites

    def add(self, name: str, n: int, ok: bool):
        self.checks.append((name, n, bool(ok)))

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c[2]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, name: str | None = None) -> int:
        return sum(1 for c in self.checks if name is None or c[0] == name)


def _between(report, name, n, value, cands):
    """Strict betweenness of ``value`` among the positively weighted candidate ratios."""
    weighted = [c for w, c in cands if w > 0]
    lo, hi = min(weighted), max(weighted)
    if lo == hi:
        report.ties.append((name, n))
        report.add(name, n, value == lo)
        return
    allv = [c for _, c in cands]
    report.add(name, n, min(allv) < value < max(allv) and lo < value < hi)


def verify_identities(trace: ExpansionTrace) -> IdentityReport:
    """Check the matrix and state identities of a trace exactly."""
    rep = IdentityReport()
    t = trace
    digits = t.digits
    a0, b0 = t.initial.alpha, t.initial.beta
    rep.add("admissible", 0, check_admissible(digits))
    prev = ConvergentMatrix(-1, (1, 0, 0), (0, 1, 0), (0, 0, 1))
    for n, d in enumerate(digits):
        m = t.matrix(n)
        rep.add("det", n, m.det() == 1)
        rep.add("product", n, prev.times_digit(d) == m)
        prev = m
        if n >= 1:
            rep.add("growth", n, t.rn(n) >= t.rn(n - 1) + t.rn(n - 3))
    for n in range(1, len(t.states)):
        al, be = t.states[n].alpha, t.states[n].beta
        # one step: K_{n-1} (1, alpha_n, beta_n) = beta_n (1, alpha_{n-1}, beta_{n-1})
        d = digits[n - 1]
        pa, pb = t.states[n - 1].alpha, t.states[n - 1].beta
        lhs = (be, 1 + d.a * be, al + d.b * be)
        rhs = (be, be * pa, be * pb)
        rep.add("one-step", n, lhs == rhs)
        # L_{n-1} (1, alpha_n, beta_n) = pi_n (1, alpha_0, beta_0)
        r3, p3, q3 = t.col(n - 3)
        r2, p2, q2 = t.col(n - 2)
        r1, p1, q1 = t.col(n - 1)
        den = r1 * be + r2 * al + r3
        pin = t.pi(n)
        rep.add("pi", n, den == pin)
        rep.add("many-step", n, (den, p1 * be + p2 * al + p3, q1 * be + q2 * al + q3) == (pin, pin * a0, pin * b0))
        rep.add("alpha-ratio", n, (p1 * be + p2 * al + p3) == den * a0)
        rep.add("beta-ratio", n, (q1 * be + q2 * al + q3) == den * b0)
    for n in range(3, t.length):
        a, b = digits[n]
        w = (b * t.rn(n - 1), a * t.rn(n - 2), t.rn(n - 3))
        for name, x in (("between-p", t.p), ("between-q", t.q)):
            vals = [Fraction(x[n + 3 - k], t.rn(n - k)) for k in (1, 2, 3)]
            _between(rep, name, n, Fraction(x[n + 3], t.rn(n)), list(zip(w, vals)))
    if t.terminated:
        m = t.length - 1
        # the last convergent is the input exactly when the terminal beta is an integer
        hit = Fraction(t.pn(m), t.rn(m)) == a0 and Fraction(t.qn(m), t.rn(m)) == b0
        rep.add("reconstruct", m, hit == t.frac_beta(m).is_zero())
    return rep


# ---------------------------------------------------------------------------


def trace_to_dict(trace: ExpansionTrace) -> dict:
    return {
        "initial": {"alpha": format_element(trace.initial.alpha), "beta": format_element(trace.initial.beta)},
        "digits": [[d.a, d.b] for d in trace.digits],
        "states": [[format_element(s.alpha), format_element(s.beta)] for s in trace.states],
        "convergents": [
            {"r": str(trace.rn(n)), "p": str(trace.pn(n)), "q": str(trace.qn(n))} for n in range(trace.length)
        ],
        "termination": trace.termination.to_dict(),
    }
