"""Error sequences, sign patterns and convergence diagnostics.

For a trace of ``(alpha_0, beta_0)`` the errors are

    delta_n  = p_n - alpha_0 r_n        delta'_n = q_n - beta_0 r_n

kept as exact field elements.  Everything here derives from a finished
:class:`~jacobi_perron.expansion.ExpansionTrace` and never mutates it.

Inequalities between field elements are decided exactly.  Bounds that
involve real powers (``c**n``, ``r_n**(1+a)``) are decided with mpmath
interval arithmetic on a precision ladder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import iv

from .exactnum import (
    START_PRECISION,
    FieldElement,
    PrecisionExhausted,
    format_fraction,
    make_field,
    precision_cap,
    rational,
)
from .expansion import ExpansionTrace

__all__ = [
    "WindowInvalid",
    "IndexOutOfRange",
    "DeltaTrace",
    "SignAnalysis",
    "LemmaCheck",
    "BoundsReport",
    "Flag",
    "ConvergenceReport",
    "GrowthModel",
    "delta_trace",
    "sign_analysis",
    "determinant_Dkl",
    "determinant_report",
    "bounds_report",
    "classify_ideal_convergence",
    "explicit_error_bounds",
    "perron_report",
    "alternation_after_agreements",
    "growth_model",
    "minimal_r",
    "HOLDS",
    "FAILS",
    "UNDECIDABLE",
]

HOLDS = "holds-on-trace"
FAILS = "fails-on-trace"
UNDECIDABLE = "undecidable-on-finite-trace"
MIN_TRACE = 6


class WindowInvalid(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


# ---------------------------------------------------------------------------
# error sequences


class _Seq:
    """A delta sequence addressable from index -2 with cached signs."""

    def __init__(self, pre: tuple, values: list):
        self._pre = pre  # values at -2, -1
        self.values = values
        self._signs: list[int | None] = [None] * len(values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> FieldElement:
        if n < -2:
            raise IndexOutOfRange(n)
        return self._pre[n + 2] if n < 0 else self.values[n]

    def sign(self, n: int) -> int:
        if n < 0:
            return self[n].sign()
        s = self._signs[n]
        if s is None:
            s = self._signs[n] = self.values[n].sign()
        return s

    def abs(self, n: int) -> FieldElement:
        return self[n] if self.sign(n) >= 0 else -self[n]

    @property
    def signs(self) -> list[int]:
        return [self.sign(n) for n in range(len(self))]

    def first_zero(self) -> int:
        """Index of the first vanishing value, or the length if none vanish."""
        for n, v in enumerate(self.values):
            if v.is_zero():
                return n
        return len(self.values)


@dataclass
class DeltaTrace:
    trace: ExpansionTrace
    delta: _Seq
    delta_prime: _Seq
    checks: list = field(default_factory=list)  # (name, n, ok)

    @property
    def deltas(self) -> list:
        return self.delta.values

    @property
    def deltas_prime(self) -> list:
        return self.delta_prime.values

    @property
    def signs(self) -> list[int]:
        return self.delta.signs

    @property
    def signs_prime(self) -> list[int]:
        return self.delta_prime.signs

    def seq(self, which: str) -> _Seq:
        if which in ("delta", "alpha"):
            return self.delta
        if which in ("delta_prime", "beta"):
            return self.delta_prime
        raise ValueError(which)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c[2]]

    @property
    def ok(self) -> bool:
        return not self.failures


def delta_trace(trace: ExpansionTrace) -> DeltaTrace:
    """Exact error sequences plus their recurrences and closed forms."""
    t = trace
    a0, b0 = t.initial.alpha, t.initial.beta
    L = t.length
    one, zero = a0.field.one(), a0.field.zero()
    dl = [t.pn(n) - a0 * t.rn(n) for n in range(L)]
    dp = [t.qn(n) - b0 * t.rn(n) for n in range(L)]
    d = DeltaTrace(t, _Seq((one, zero), dl), _Seq((zero, one), dp))
    fa = [t.frac_alpha(n) for n in range(L)]
    fb = [t.frac_beta(n) for n in range(L)]
    for name, s in (("delta", d.delta), ("delta_prime", d.delta_prime)):
        for n in range(L):
            d.checks.append((f"three-term[{name}]", n, (s[n] + fb[n] * s[n - 1] + fa[n] * s[n - 2]).is_zero()))
        for n in range(1, L):
            expr = s[n] + (fa[n] - fb[n - 1] * fb[n]) * s[n - 2] - fa[n - 1] * fb[n] * s[n - 3]
            d.checks.append((f"skip-one[{name}]", n, expr.is_zero()))
    closed = []
    if L >= 1:
        closed += [("delta_0", dl[0], -fa[0]), ("delta'_0", dp[0], -fb[0])]
    if L >= 2:
        closed += [("delta_1", dl[1], fa[0] * fb[1]), ("delta'_1", dp[1], fb[0] * fb[1] - fa[1])]
    if L >= 3:
        closed += [
            ("delta_2", dl[2], fa[0] * (fa[2] - fb[1] * fb[2])),
            ("delta'_2", dp[2], fa[1] * fb[2] + fb[0] * (fa[2] - fb[1] * fb[2])),
        ]
    for name, got, want in closed:
        d.checks.append((f"closed-form[{name}]", 0, got == want))
    return d


# ---------------------------------------------------------------------------
# sign patterns


@dataclass
class SignAnalysis:
    which: str
    length: int  # analysed prefix; stops at the first vanishing value
    agree_indices: list
    checks: list = field(default_factory=list)

    def nstar(self, n: int) -> int | None:
        """Largest agreement index <= n, if any."""
        best = None
        for k in self.agree_indices:
            if k > n:
                break
            best = k
        return best

    @property
    def ok(self) -> bool:
        return all(c[2] for c in self.checks)


def sign_analysis(d: DeltaTrace, which: str = "delta") -> SignAnalysis:
    s = d.seq(which)
    z = s.first_zero()
    agree = [n for n in range(1, z) if s.sign(n - 1) * s.sign(n) > 0]
    sa = SignAnalysis(which, z, agree)
    for x, y in zip(agree, agree[1:]):
        sa.checks.append(("agreement-gap", y, x + 2 <= y))
    for n in range(2, z):
        sa.checks.append(("no-three-alike", n, not (s.sign(n - 2) == s.sign(n - 1) == s.sign(n))))
    return sa


def alternation_after_agreements(d: DeltaTrace) -> dict:
    """Transfer of eventual sign alternation from one error sequence to the other.

    Past the last agreement of ``delta``, ``delta'`` may agree in sign at most
    once, and only where the two sequences first disagree in sign.
    """
    sd = sign_analysis(d, "delta")
    end = min(sd.length, d.delta_prime.first_zero())
    start = (sd.agree_indices[-1] + 1) if sd.agree_indices else 0
    sp = d.delta_prime
    first_mismatch = next((n for n in range(start, end) if sp.sign(n) != d.delta.sign(n)), None)
    agreements = [n for n in range(start + 1, end) if sp.sign(n - 1) * sp.sign(n) > 0]
    ok = len(agreements) == 0 or (len(agreements) == 1 and agreements[0] == first_mismatch)
    return {"start": start, "end": end, "switch": first_mismatch, "agreements": agreements, "ok": ok}


# ---------------------------------------------------------------------------
# determinants


def determinant_Dkl(trace: ExpansionTrace, k: int, l: int) -> FieldElement:
    """det of the columns (1, alpha_0, beta_0), (r,p,q)_k, (r,p,q)_l."""
    last = trace.length - 1
    if not -3 <= k < l <= last:
        raise IndexOutOfRange(f"need -3 <= k < l <= {last}, got k={k}, l={l}")
    a0, b0 = trace.initial.alpha, trace.initial.beta
    rk, pk, qk = trace.col(k)
    rl, pl, ql = trace.col(l)
    return (pk * ql - pl * qk) - a0 * (rk * ql - rl * qk) + b0 * (rk * pl - rl * pk)


def determinant_report(trace: ExpansionTrace, d: DeltaTrace | None = None) -> list:
    """Exact checks of the determinant identities along a trace; (name, n, ok) triples."""
    t = trace
    L = t.length
    out = []
    D = {}

    def get(k, l):
        if (k, l) not in D:
            D[(k, l)] = determinant_Dkl(t, k, l)
        return D[(k, l)]

    out.append(("D(-2,-1)=1", -1, get(-2, -1) == 1))
    if L >= 1:
        out.append(("D(-1,0)=frac", 0, get(-1, 0) == t.frac_alpha(0)))
    prod = t.initial.alpha.field.one()  # {alpha_0}...{alpha_{n-1}}
    for n in range(L):
        fa, fb = t.frac_alpha(n), t.frac_beta(n)
        if n >= 1:
            out.append(("consecutive", n, get(n - 1, n) == prod * fa))
        if n >= 0 and n - 2 >= -3:
            out.append(("skip", n, get(n - 2, n) == -(prod * fb)))
        den = get(n - 2, n - 1)
        st = t.states[n]
        out.append(("alpha-ratio", n, -get(n - 3, n - 1) == den * st.alpha))
        out.append(("beta-ratio", n, get(n - 3, n - 2) == den * st.beta))
        if n >= 1:
            out.append(("frac-alpha-ratio", n, get(n - 1, n) == den * fa))
            out.append(("frac-beta-ratio", n, -get(n - 2, n) == den * fb))
        # product identity through the next state
        if n + 1 < len(t.states) and not (prod * fa).is_zero():
            nxt = t.states[n + 1]
            out.append(("partial-product", n, (prod * fa) * (t.rn(n) * nxt.beta + t.rn(n - 1) * nxt.alpha + t.rn(n - 2)) == 1))
        prod = prod * fa
    # positivity and the error-sequence form, on the non-terminated range
    stop = L if not t.terminated else L - 1
    for n in range(max(0, stop - 1)):
        v = get(n, n + 1)
        out.append(("positive", n, v.sign() > 0))
        if d is not None:
            out.append(("cross-consecutive", n, d.delta[n] * d.delta_prime[n + 1] - d.delta[n + 1] * d.delta_prime[n] == v))
    for n in range(max(0, stop - 2)):
        v = get(n, n + 2)
        # {beta_{n+2}} may vanish for rational input; the sign is then 0, not negative
        ok = v.sign() < 0 or (t.frac_beta(n + 2).is_zero() and v.is_zero())
        out.append(("negative", n, ok))
        if d is not None:
            out.append(("cross-skip", n, d.delta[n] * d.delta_prime[n + 2] - d.delta[n + 2] * d.delta_prime[n] == v))
    return out


# ---------------------------------------------------------------------------
# lemma sweep


@dataclass(frozen=True)
class LemmaCheck:
    lemma: str
    which: str
    n: int
    ok: bool
    case: str = ""


@dataclass
class BoundsReport:
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (lemma, which, n, reason)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def count(self, lemma: str | None = None) -> int:
        return sum(1 for c in self.checks if lemma is None or c.lemma == lemma)


def _max(*xs: FieldElement) -> FieldElement:
    m = xs[0]
    for x in xs[1:]:
        if x > m:
            m = x
    return m


def bounds_report(trace: ExpansionTrace, d: DeltaTrace | None = None, which: tuple = ("delta", "delta_prime")) -> BoundsReport:
    """Check every contraction inequality at the sites its hypothesis selects.

    Sites are selected from exact signs.  A site is skipped (and logged) when a
    fractional part involved in it vanishes, which only happens for rational
    input, or in the unresolved case {alpha_k} = {beta_k} of the one-after-
    agreement split.
    """
    if d is None:
        d = delta_trace(trace)
    t = trace
    rep = BoundsReport()
    L = t.length
    fa = [t.frac_alpha(n) for n in range(L)]
    fb = [t.frac_beta(n) for n in range(L)]
    half = Fraction(1, 2)
    three_q = Fraction(3, 4)

    # elementary inequality on fractional parts, independent of the errors
    for n in range(1, L):
        if n + 1 >= len(t.states) or fa[n].is_zero():
            continue
        lhs = fa[n - 1] * fb[n] + abs(fb[n - 1] * fb[n] - fa[n])
        rep.checks.append(LemmaCheck("frac-product", "-", n, lhs < 1))

    for which_name in which:
        s = d.seq(which_name)
        sa = sign_analysis(d, which_name)
        z = sa.length
        agree = sa.agree_indices
        A = s.abs

        def degenerate(lo, hi):
            return any(fb[j].is_zero() or fa[j].is_zero() for j in range(max(lo, 0), hi + 1))

        def add(lemma, n, ok, case=""):
            rep.checks.append(LemmaCheck(lemma, which_name, n, bool(ok), case))

        def skip(lemma, n, reason):
            rep.skipped.append((lemma, which_name, n, reason))

        for n in range(2, z):
            sg = s.sign
            # strictly alternating triple
            if sg(n - 2) * sg(n - 1) < 0 and sg(n - 1) * sg(n) < 0:
                if degenerate(n, n):
                    skip("alternating-contraction", n, "vanishing fractional part")
                else:
                    add("alternating-contraction", n, A(n) < fb[n] * A(n - 1))
            if sg(n - 1) * sg(n) > 0:
                if degenerate(n, n):
                    skip("agreement-contraction", n, "vanishing fractional part")
                else:
                    add("agreement-contraction", n, A(n) < fa[n] * A(n - 2))

        for n in range(3, z):
            if degenerate(n - 3, n):
                skip("three-term-max", n, "vanishing fractional part")
                continue
            bound = _max(half * (1 + fa[n]), fb[n]) * _max(A(n - 3), A(n - 2), A(n - 1))
            add("three-term-max", n, A(n) < bound)

        for k in agree:
            if k < 2:
                skip("one-after-agreement", k + 1, "agreement index below 2")
                continue
            n = k + 1
            if n < z:
                if degenerate(k - 2, n):
                    skip("one-after-agreement", n, "vanishing fractional part")
                else:
                    m2 = A(k - 2)
                    mx = _max(A(k - 2), A(k - 1))
                    g = fb[k] * fb[k + 1] - fa[k + 1]
                    cmp = (fa[k] - fb[k]).sign()
                    if g.sign() >= 0:
                        add("one-after-agreement", n, A(n) <= fa[k] * fb[k + 1] * m2, "i")
                    elif cmp < 0:
                        add("one-after-agreement", n, A(n) < fa[k + 1] * m2, "ii")
                    if cmp > 0:
                        coef = fa[k + 1] + (1 - fa[k + 1]) * fa[k] * fb[k + 1]
                        if A(k - 2) == A(k - 1):
                            # equal magnitudes force a rational coordinate; the bound is then attained
                            skip("one-after-agreement", n, "equal error magnitudes, checked non-strictly")
                            add("one-after-agreement", n, A(n) <= coef * mx, "iii-tie")
                        else:
                            add("one-after-agreement", n, A(n) < coef * mx, "iii")
                    if cmp == 0:
                        skip("one-after-agreement", n, "equal fractional parts at the agreement index")
                    add("one-after-agreement", n, A(n) < half * (1 + fa[n]) * mx, "summary")
            n = k + 2
            if n < z and n >= 4 and (agree[agree.index(k) + 1:] or [z])[0] > n:
                if degenerate(k - 2, n):
                    skip("two-after-agreement", n, "vanishing fractional part")
                else:
                    m2 = A(k - 2)
                    mx = _max(A(k - 2), A(k - 1))
                    g = fb[k] * fb[k + 1] - fa[k + 1]
                    cmp = (fa[k] - fb[k]).sign()
                    if g.sign() >= 0:
                        add("two-after-agreement", n, A(n) < half * fb[k + 2] * m2, "i")
                    elif cmp < 0:
                        add("two-after-agreement", n, A(n) < half * m2, "ii")
                    if cmp > 0:
                        add("two-after-agreement", n, A(n) < three_q * mx, "iii")
                    add("two-after-agreement", n, A(n) < three_q * mx, "summary")
            # every later index before the next agreement
            nxt = (agree[agree.index(k) + 1:] or [z])[0]
            if k + 3 >= 5:
                prod = None
                for n in range(k + 3, min(nxt, z)):
                    prod = fb[n] if prod is None else prod * fb[n]
                    if degenerate(k - 2, n):
                        skip("between-agreements", n, "vanishing fractional part")
                        continue
                    mx = _max(A(k - 2), A(k - 1))
                    add("between-agreements", n, A(n) < three_q * prod * mx)

        for prev, cur in zip(agree, agree[1:]):
            if prev < 2:
                continue
            if degenerate(prev - 2, cur):
                skip("agreement-to-agreement", cur, "vanishing fractional part")
                continue
            old = _max(A(prev - 2), A(prev - 1))
            new = _max(A(cur - 2), A(cur - 1))
            add("agreement-to-agreement", cur, new < old, "i")
            if prev + 4 <= cur:
                prod = rational(1)
                for j in range(prev + 3, cur - 1):
                    prod = prod * fb[j]
                add("agreement-to-agreement", cur, new < three_q * prod * old, "ii")
    return rep


# ---------------------------------------------------------------------------
# certified real comparisons


def _iv_frac(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def _iv_elem(x: FieldElement, bits: int):
    lo, hi = x.enclosure(bits + x._bits_hint())
    return iv.mpf([_iv_frac(lo).a, _iv_frac(hi).b])


class _ivprec:
    """Temporarily set the working precision of the interval context."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.bits

    def __exit__(self, *exc):
        iv.prec = self.saved


def _certify(test: Callable[[int], bool | None], cap: int | None = None) -> bool:
    """Run ``test(bits)`` on the precision ladder until it returns a verdict."""
    cap = precision_cap(cap)
    bits = START_PRECISION
    while bits <= cap:
        with _ivprec(bits):
            res = test(bits)
        if res is not None:
            return res
        bits *= 2
    raise PrecisionExhausted(f"comparison undecided at {cap} bits")


def _lt(lhs, rhs) -> bool | None:
    if lhs.b < rhs.a:
        return True
    if lhs.a >= rhs.b:
        return False
    return None


# ---------------------------------------------------------------------------
# theorem-level diagnostics


@dataclass
class Flag:
    verdict: str
    monotone: bool
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "monotone": self.monotone, "evidence": self.evidence}


@dataclass
class ConvergenceReport:
    window: Fraction
    window_range: tuple
    flags: dict
    eps: FieldElement | None = None
    c: mpmath.mpf | None = None
    N: int | None = None
    M: int | None = None
    a: mpmath.mpf | None = None
    bound_checks: list = field(default_factory=list)  # (name, n, ok)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "window": format_fraction(self.window),
            "window_range": list(self.window_range),
            "flags": {k: v.to_dict() for k, v in self.flags.items()},
            "explicit_bounds": {
                "eps": None if self.eps is None else mpmath.nstr(self.eps.approx(80), 15),
                "c": None if self.c is None else mpmath.nstr(self.c, 15),
                "N": self.N,
                "M": self.M,
                "a": None if self.a is None else mpmath.nstr(self.a, 15),
                "checked": len(self.bound_checks),
                "failures": [[name, n] for name, n, ok in self.bound_checks if not ok],
            },
            "notes": list(self.notes),
        }


def explicit_error_bounds(trace: ExpansionTrace, d: DeltaTrace, cap: int | None = None, upto: int | None = None) -> dict:
    """Geometric and power-law error bounds with the greedy finite-trace witness.

    eps is the maximum over n >= N of max((1+{alpha_n})/2, {beta_n}), c is its
    cube root and N the least index after which every term is below one.  M is
    the least integer bounding every beta_n on the trace and
    ``a = -log c / log(3M)``.
    """
    t = trace
    L = t.length if upto is None else min(t.length, upto + 1)
    z = min(d.delta.first_zero(), d.delta_prime.first_zero(), L)
    terms = []
    for n in range(z):
        fa, fb = t.frac_alpha(n), t.frac_beta(n)
        terms.append(_max((1 + fa) * Fraction(1, 2), fb))
    N = 0
    for n in range(len(terms) - 1, -1, -1):
        if terms[n] >= 1:
            N = n + 1
            break
    if N >= len(terms):
        return {"eps": None, "N": None, "checks": [], "c": None, "M": None, "a": None}
    eps = _max(*terms[N:])
    M = max(s.beta.floor() + 1 if not (s.beta - s.beta.floor()).is_zero() else s.beta.floor() for s in t.states[:L])
    a0f = t.frac_alpha(0)
    checks = []
    with _ivprec(128):
        e_iv = _iv_elem(eps, 128)
        c_iv = iv.exp(iv.log(e_iv) / 3)
        c_mid = mpmath.mpf(c_iv.mid)
        a_iv = -iv.log(c_iv) / iv.log(3 * M)
        a_mid = mpmath.mpf(a_iv.mid)

    def geometric(n, seq, scale):
        def test(bits):
            e = _iv_elem(eps, bits)
            c = iv.exp(iv.log(e) / 3)
            lhs = _iv_elem(seq.abs(n), bits)
            rhs = (_iv_elem(scale, bits) if scale is not None else iv.mpf(1)) * c ** (n - N)
            return _lt(lhs, rhs)
        return test

    for n in range(N + 3, z):
        checks.append(("geometric-delta", n, _certify(geometric(n, d.delta, a0f), cap)))
        checks.append(("geometric-delta-prime", n, _certify(geometric(n, d.delta_prime, None), cap)))

    def power(n, seq, scale):
        r = t.rn(n)

        def test(bits):
            e = _iv_elem(eps, bits)
            c = iv.exp(iv.log(e) / 3)
            a = -iv.log(c) / iv.log(iv.mpf(3 * M))
            lhs = _iv_elem(seq.abs(n), bits) / r  # |p_n/r_n - alpha_0| = |delta_n| / r_n
            rhs = (_iv_elem(scale, bits) if scale is not None else iv.mpf(1)) * c ** (-N) / iv.mpf(r) ** (1 + a)
            return _lt(lhs, rhs)
        return test

    for n in range(3, z):
        checks.append(("power-delta", n, _certify(power(n, d.delta, a0f), cap)))
        checks.append(("power-delta-prime", n, _certify(power(n, d.delta_prime, None), cap)))
    return {"eps": eps, "N": N, "c": c_mid, "M": M, "a": a_mid, "checks": checks}


def classify_ideal_convergence(trace: ExpansionTrace, d: DeltaTrace | None = None, window=Fraction(1, 2), cap: int | None = None) -> ConvergenceReport:
    """Finite-trace surrogates for the sufficient conditions of ideal convergence.

    Limit hypotheses are read over the trailing ``window`` fraction of the trace.
    They are never monotone under extension of the trace.  The explicit bounds
    are certified at every index; a failing bound stays failed on extension.
    """
    window = Fraction(window)
    if not 0 < window <= 1:
        raise WindowInvalid(f"window must lie in (0, 1], got {window}")
    if d is None:
        d = delta_trace(trace)
    t = trace
    sa = sign_analysis(d, "delta")
    L = sa.length
    w0 = L - math.ceil(window * L)
    wr = (w0, L)
    flags: dict = {}
    rep = ConvergenceReport(window, wr, flags)
    names = ("thm21", "thm22", "thm23_I", "thm23_II", "thm24", "thm25", "perron_satzV")
    if L < MIN_TRACE:
        for k in names:
            flags[k] = Flag(UNDECIDABLE, False, {"length": L})
        rep.notes.append(f"trace shorter than {MIN_TRACE} usable steps")
        return rep

    win = [n for n in sa.agree_indices if n >= w0]
    gaps = [y - x for x, y in zip(sa.agree_indices, sa.agree_indices[1:]) if x >= w0]
    big = sum(1 for g in gaps if g >= 4)
    flags["thm21"] = Flag(HOLDS if big > 0 else FAILS, False, {"gaps_ge_4_in_window": big, "agreements_in_window": len(win)})

    betas = [t.states[n].beta for n in range(w0, L)]
    min_beta = min(betas)
    liminf_ok = min_beta > 1
    flags["thm22"] = Flag(
        HOLDS if liminf_ok and len(win) >= 2 else FAILS,
        False,
        {"min_beta_in_window": mpmath.nstr(min_beta.approx(80), 12), "agreements_in_window": len(win)},
    )

    prod = rational(1)
    for n in range(w0, L):
        prod = prod * t.frac_beta(n)
    big_prod = prod >= Fraction(1, 2)
    pe = mpmath.nstr(prod.approx(80), 12) if not prod.is_zero() else "0"
    flags["thm24"] = Flag(HOLDS if win and big_prod else FAILS, False, {"frac_beta_product_in_window": pe, "agreements_in_window": len(win)})
    flags["thm25"] = Flag(HOLDS if not win and not big_prod else FAILS, False, {"frac_beta_product_in_window": pe, "agreements_in_window": len(win)})

    theta = max(Fraction(2 + t.digits[n].a, t.digits[n].b) for n in range(w0, L))
    flags["perron_satzV"] = Flag(HOLDS if theta < 1 else FAILS, False, {"theta": format_fraction(theta)})

    b = explicit_error_bounds(t, d, cap)
    rep.eps, rep.c, rep.N, rep.M, rep.a = b["eps"], b["c"], b["N"], b["M"], b["a"]
    rep.bound_checks = b["checks"]
    geo = [ok for name, _, ok in b["checks"] if name.startswith("geometric")]
    pw = [ok for name, _, ok in b["checks"] if name.startswith("power")]
    v1 = HOLDS if all(geo) else FAILS
    v2 = HOLDS if all(pw) else FAILS
    flags["thm23_I"] = Flag(v1, v1 == FAILS, {"N": b["N"], "checked": len(geo)})
    flags["thm23_II"] = Flag(v2, v2 == FAILS, {"M": b["M"], "checked": len(pw)})
    rep.notes.append("N is the greedy finite-trace witness and need not match an asymptotic choice")
    if b["M"] is not None and b["M"] <= 2:
        rep.notes.append("M <= 2: the boundedness lemma assumes M > 2")
    return rep


# ---------------------------------------------------------------------------
# minimal growth


@dataclass(frozen=True)
class GrowthModel:
    lam: FieldElement
    delta_abs: mpmath.mpf
    limit_const: FieldElement

    @property
    def lam_value(self) -> mpmath.mpf:
        return self.lam.approx(80)

    @property
    def limit_value(self) -> mpmath.mpf:
        return self.limit_const.approx(80)

    def power(self, k: int) -> FieldElement:
        return self.lam ** k

    def ratio(self, n: int, r: int | None = None) -> mpmath.mpf:
        """r_n / lambda**(n-2), evaluated numerically."""
        r = minimal_r(n) if r is None else r
        with mpmath.workprec(256):
            return mpmath.mpf(r) / self.lam.approx(256) ** (n - 2)


_GROWTH: GrowthModel | None = None


def growth_model() -> GrowthModel:
    global _GROWTH
    if _GROWTH is None:
        F = make_field([-1, 0, -1, 1], (1, 2))
        lam = F.gen
        with mpmath.workprec(256):
            lv = lam.approx(256)
            dabs = mpmath.sqrt(lv * (lv - 1))
        _GROWTH = GrowthModel(lam, +dabs, lam ** 3 / (3 * lam - 2))
    return _GROWTH


def minimal_r(n: int) -> int:
    """Denominators for the all-(0,1) digit sequence: 1, 1, 1, 2, 3, 4, 6, ..."""
    if n < 0:
        raise ValueError("n must be non-negative")
    r = [1, 1, 1]
    while len(r) <= n:
        r.append(r[-1] + r[-3])
    return r[n]


def perron_report(trace: ExpansionTrace, d: DeltaTrace | None = None, upto: int = 200, cap: int | None = None) -> list:
    """Lower growth bound ``lambda**(n-2) < r_n`` (exact) and the induced error bound (certified)."""
    g = growth_model()
    out = []
    last = min(trace.length - 1, upto)
    lam_pow = g.power(1)
    for n in range(3, last + 1):
        lam_pow = g.power(n - 2) if n == 3 else lam_pow * g.lam
        out.append(("growth", n, lam_pow < trace.rn(n)))
    if d is not None:
        a0f = trace.frac_alpha(0)
        for n in range(3, min(last + 1, d.delta.first_zero())):
            r = trace.rn(n)

            def test(bits, n=n, r=r):
                lam = _iv_elem(g.lam, bits)
                lhs = _iv_elem(d.delta.abs(n), bits) / r
                rhs = _iv_elem(a0f, bits) / lam ** (n - 2)
                return _lt(lhs, rhs)

            out.append(("error", n, _certify(test, cap)))
    return out
