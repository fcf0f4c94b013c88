import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from jacobi_perron.exactnum import rational
from jacobi_perron.expansion import (
    Digit,
    Inadmissible,
    NotInDomain,
    State,
    check_admissible,
    convergent_matrices,
    detect_period,
    expand,
    jp_step,
    trace_to_dict,
    verify_identities,
)

from conftest import half_point


def jp_fraction_oracle(a, b, horizon):
    """Independent rational implementation of the map."""
    digits = []
    while len(digits) < horizon:
        ia, ib = math.floor(a), math.floor(b)
        digits.append((ia, ib))
        fa = a - ia
        if fa == 0:
            break
        a, b = (b - ib) / fa, 1 / fa
    return digits


def test_step_rational():
    d, nxt = jp_step(half_point())
    assert d == (0, 1) and nxt == State(rational(1), rational(2))
    d, nxt = jp_step(State(rational(1), rational(2)))
    assert d == (1, 2) and nxt is None


def test_step_cubic(theta):
    d, nxt = jp_step(State(theta, theta * theta))
    assert d == (1, 1)
    assert nxt.alpha == 1 + theta and nxt.beta == 1 + theta + theta * theta


def test_expand_terminating():
    t = expand(half_point(), horizon=10)
    assert t.digits == [(0, 1), (1, 2)]
    assert t.termination.kind == "terminated" and t.termination.step == 2
    assert Fraction(t.pn(1), t.rn(1)) == Fraction(1, 2)
    assert Fraction(t.qn(1), t.rn(1)) == Fraction(3, 2)
    assert (t.rn(1), t.pn(1), t.qn(1)) == (2, 1, 3)


def test_expand_zero_alpha():
    t = expand(State(rational(0), rational(1)), horizon=5)
    assert t.digits == [(0, 1)] and t.termination.step == 1


def test_expand_cubic_periodic(cubic_trace60, theta):
    t = cubic_trace60
    assert t.digits[:4] == [(1, 1), (2, 3), (3, 3), (3, 3)]
    assert all(d == (3, 3) for d in t.digits[2:])
    assert (t.termination.kind, t.termination.u, t.termination.v) == ("periodic", 2, 1)
    s2 = t.states[2]
    assert s2.alpha == theta + 2 and s2.beta == theta * theta + theta + 1
    d, nxt = jp_step(s2)
    assert nxt == s2


def test_purely_periodic(theta):
    t = expand(State(theta + 2, theta * theta + theta + 1), horizon=10)
    p = detect_period(t)
    assert (p.u, p.v) == (0, 1)


def test_detect_period_none():
    assert detect_period(expand(half_point())) is None


def test_cubic_digits_numeric_oracle(cubic_trace60):
    # high-precision float iteration is an independent witness for the first digits
    with mpmath.workdps(300):
        a, b = mpmath.cbrt(2), mpmath.cbrt(4)
        got = []
        for _ in range(40):
            ia, ib = int(mpmath.floor(a)), int(mpmath.floor(b))
            got.append((ia, ib))
            fa = a - ia
            a, b = (b - ib) / fa, 1 / fa
    assert [tuple(d) for d in cubic_trace60.digits[:40]] == got


def test_domain_errors():
    with pytest.raises(NotInDomain):
        expand(State(rational(2), rational(1)))
    with pytest.raises(NotInDomain):
        expand(State(rational(Fraction(1, 2)), rational(Fraction(2, 3))))


def test_admissibility():
    assert check_admissible([(1, 1), (2, 3)])
    assert not check_admissible([(1, 1), (0, 2)])
    assert check_admissible([(0, 1), (0, 1)])
    assert not check_admissible([(2, 1)])
    with pytest.raises(Inadmissible):
        convergent_matrices([(1, 1), (0, 2)])


def test_minimal_digit_denominators():
    ms = convergent_matrices([(0, 1)] * 10)
    assert [m.r[2] for m in ms] == [1, 1, 1, 2, 3, 4, 6, 9, 13, 19]
    assert all(m.det() == 1 for m in ms)


def test_first_pi(cubic_trace60, theta):
    t = cubic_trace60
    assert t.pi(1) == theta * theta + theta + 1 == t.states[1].beta


def test_cubic_betweenness_n5(cubic_trace60):
    rep = verify_identities(cubic_trace60)
    between = [c for c in rep.checks if c[0].startswith("between") and c[1] == 5]
    assert between and all(ok for _, _, ok in between)


def test_trace_to_dict_lossless(cubic_trace60):
    d = trace_to_dict(cubic_trace60)
    assert d["termination"] == {"kind": "periodic", "u": 2, "v": 1}
    assert all(isinstance(c["r"], str) for c in d["convergents"])
    assert int(d["convergents"][-1]["r"]) == cubic_trace60.rn(59)


points = st.tuples(
    st.fractions(min_value=0, max_value=30, max_denominator=10**4),
    st.fractions(min_value=1, max_value=30, max_denominator=10**4),
).filter(lambda ab: ab[0] <= ab[1])


@settings(max_examples=120, deadline=None)
@given(points)
def test_rational_expansion_matches_oracle(ab):
    a, b = ab
    t = expand(State(rational(a), rational(b)), horizon=400)
    assert [tuple(d) for d in t.digits] == jp_fraction_oracle(a, b, 400)
    assert t.terminated
    rep = verify_identities(t)
    assert rep.ok, rep.failures


def test_rational_reconstruction_when_integral_tail():
    # (1/2, 3/2) ends on beta = 2, so the last convergent is the input
    t = expand(half_point())
    assert verify_identities(t).count("reconstruct") == 1


def test_random_points_identities(rational_traces):
    for t in rational_traces:
        assert verify_identities(t).ok
