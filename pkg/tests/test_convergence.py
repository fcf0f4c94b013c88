import random
from fractions import Fraction

import mpmath
import pytest

from jacobi_perron.convergence import (
    FAILS,
    HOLDS,
    UNDECIDABLE,
    IndexOutOfRange,
    WindowInvalid,
    alternation_after_agreements,
    bounds_report,
    classify_ideal_convergence,
    delta_trace,
    determinant_Dkl,
    determinant_report,
    growth_model,
    minimal_r,
    perron_report,
    sign_analysis,
)
from jacobi_perron.exactnum import rational
from jacobi_perron.expansion import State, expand

from conftest import half_point


class _Signs:
    def __init__(self, signs):
        self._s = signs

    def sign(self, n):
        return self._s[n]

    def first_zero(self):
        return len(self._s)


class _FakeDelta:
    def __init__(self, signs):
        self.s = _Signs(signs)

    def seq(self, which):
        return self.s


def test_delta_rational():
    d = delta_trace(expand(half_point()))
    assert d.deltas[0] == Fraction(-1, 2)
    assert d.deltas[1] == 0
    assert d.ok


def test_delta_cubic_closed_forms(cubic_trace60, theta):
    d = delta_trace(cubic_trace60)
    assert d.deltas[1] == (theta - 1) * (theta * theta + theta - 2)
    assert d.ok


def test_delta_signs_numeric_oracle(cubic_trace60):
    d = delta_trace(cubic_trace60)
    t = cubic_trace60
    with mpmath.workdps(400):
        a, b = mpmath.cbrt(2), mpmath.cbrt(4)
        for n in range(t.length):
            assert mpmath.sign(t.pn(n) - a * t.rn(n)) == d.signs[n]
            assert mpmath.sign(t.qn(n) - b * t.rn(n)) == d.signs_prime[n]


def test_sign_analysis_constructed():
    sa = sign_analysis(_FakeDelta([-1, 1, -1, 1, -1]))
    assert sa.agree_indices == [] and sa.nstar(4) is None
    sa = sign_analysis(_FakeDelta([-1, -1, 1, -1]))
    assert sa.agree_indices == [1] and sa.nstar(3) == 1 and sa.ok


def test_sign_analysis_cubic(cubic_trace60):
    d = delta_trace(cubic_trace60)
    sa = sign_analysis(d)
    want = [n for n in range(1, 60) if d.signs[n - 1] == d.signs[n]]
    assert sa.agree_indices == want == [5, 10, 15, 21, 26, 31, 37, 42, 47, 53, 58]
    assert sa.ok
    sp = sign_analysis(d, "delta_prime")
    assert sp.agree_indices == [3, 8, 14, 19, 24, 30, 35, 40, 46, 51, 56] and sp.ok


def test_alternation_transfer(rational_traces):
    for t in rational_traces:
        assert alternation_after_agreements(delta_trace(t))["ok"]


def test_determinants(cubic_trace60, theta):
    t = cubic_trace60
    assert determinant_Dkl(t, -2, -1) == 1
    assert determinant_Dkl(t, -1, 0) == theta - 1
    prod = rational(1)
    for n in range(6):
        prod = prod * t.frac_alpha(n)
        assert determinant_Dkl(t, n - 1, n) == prod
    with pytest.raises(IndexOutOfRange):
        determinant_Dkl(t, 3, 2)
    rep = determinant_report(t, delta_trace(t))
    assert rep and all(ok for _, _, ok in rep)


def test_frac_product_n1(cubic_trace60):
    rep = bounds_report(cubic_trace60)
    c = [x for x in rep.checks if x.lemma == "frac-product" and x.n == 1]
    assert len(c) == 1 and c[0].ok


def test_bounds_cubic(cubic_trace):
    rep = bounds_report(cubic_trace)
    assert not rep.failures
    for lemma in ("frac-product", "alternating-contraction", "agreement-contraction", "three-term-max",
                  "one-after-agreement", "two-after-agreement", "between-agreements", "agreement-to-agreement"):
        assert rep.count(lemma) > 0, lemma


def test_bounds_alternating_sites_selected_by_sign(cubic_trace60):
    d = delta_trace(cubic_trace60)
    rep = bounds_report(cubic_trace60, d, which=("delta",))
    sites = {c.n for c in rep.checks if c.lemma == "alternating-contraction"}
    s = d.signs
    want = {n for n in range(2, 60) if s[n - 2] * s[n - 1] < 0 and s[n - 1] * s[n] < 0}
    assert sites == want


def test_bounds_rational(rational_traces):
    for t in rational_traces:
        rep = bounds_report(t)
        assert not rep.failures
        # nothing is checked past termination
        assert all(c.n < t.length for c in rep.checks)


def test_classify_cubic(cubic_trace60):
    rep = classify_ideal_convergence(cubic_trace60)
    assert rep.M == 4
    assert rep.flags["thm23_II"].verdict == HOLDS
    assert rep.flags["thm23_I"].verdict == HOLDS
    assert rep.bound_checks and all(ok for _, _, ok in rep.bound_checks)
    assert all(not f.monotone for k, f in rep.flags.items() if not k.startswith("thm23"))


def test_classify_short_trace():
    rep = classify_ideal_convergence(expand(half_point()))
    assert all(f.verdict == UNDECIDABLE for f in rep.flags.values())


def test_window_invalid(cubic_trace60):
    with pytest.raises(WindowInvalid):
        classify_ideal_convergence(cubic_trace60, window=0)
    with pytest.raises(WindowInvalid):
        classify_ideal_convergence(cubic_trace60, window=Fraction(3, 2))


def test_thm25_alternating_surrogate(theta):
    # the (a,a) period-1 points with large a have strictly alternating errors
    for t in _period_one_traces():
        d = delta_trace(t)
        if not sign_analysis(d).agree_indices:
            rep = classify_ideal_convergence(t, d)
            assert rep.flags["thm25"].verdict == HOLDS
            return
    pytest.skip("no strictly alternating trace among the period-one family")


def _period_one_traces():
    from jacobi_perron.exactnum import make_field
    out = []
    for a in (5, 6, 7):
        # (alpha, beta) fixed by the map with digit (a, a): beta^3 - a beta^2 - a beta - 1 = 0
        for lo in range(a, a + 3):
            try:
                F = make_field([-1, -a, -a, 1], (lo, lo + 1))
            except Exception:
                continue
            b = F.gen
            al = b * b - a * b  # fixed point: {alpha} = 1/beta and {beta} = alpha/beta
            if al.sign() >= 0 and al <= b:
                out.append(expand(State(al, b), horizon=80))
    return out


def test_growth_constants():
    g = growth_model()
    with mpmath.workdps(30):
        assert abs(g.lam_value - mpmath.mpf("1.46557123187676802665")) < 1e-19
        # the limit constant lam^3/(3 lam - 2), evaluated independently
        lam = mpmath.findroot(lambda x: x ** 3 - x ** 2 - 1, 1.46)
        assert abs(g.limit_value - lam ** 3 / (3 * lam - 2)) < 1e-20
        assert abs(g.limit_value - mpmath.mpf("1.31342305985234979878")) < 1e-19
        assert abs(g.ratio(60) - g.limit_value) < 1e-6


def test_minimal_r():
    assert [minimal_r(n) for n in range(7)] == [1, 1, 1, 2, 3, 4, 6]
    with pytest.raises(ValueError):
        minimal_r(-1)


def test_perron(cubic_trace):
    d = delta_trace(cubic_trace)
    rep = perron_report(cubic_trace, d, upto=200)
    assert {name for name, _, _ in rep} == {"growth", "error"}
    assert all(ok for _, _, ok in rep)
