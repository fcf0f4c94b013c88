"""The eleven acceptance criteria, each at its stated tolerance.

Every criterion records one PASS/FAIL line; the lines are printed as each test
runs and again in the terminal summary.  Run this file directly to print only
the lines.  Where a criterion is not attainable as worded the line says FAIL,
and the corresponding test is a strict xfail naming the reason, while the
attainable part is asserted separately.
"""
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from jacobi_perron.conjugates import NoValidN, cf_trace, embedding_pair, jp_conjugate_trace, theorem3_report
from jacobi_perron.convergence import (
    bounds_report,
    classify_ideal_convergence,
    delta_trace,
    determinant_report,
    growth_model,
    minimal_r,
    perron_report,
)
from jacobi_perron.exactnum import Embedding, make_field, rational
from jacobi_perron.expansion import State, convergent_columns, expand, jp_step, verify_identities
from jacobi_perron.geometry import admissible_words, cell, cell_measure, enumerate_and_decay, polygon_area, strip_ratio_exceeds
from jacobi_perron.selftest import cube_root_field, random_rational_point

RESULTS: dict = {}


def record(k: int, ok: bool, detail: str) -> bool:
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    return ok


_cache: dict = {}


def cubic(horizon):
    key = ("cubic", horizon)
    if key not in _cache:
        th = cube_root_field().gen
        _cache[key] = expand(State(th, th * th), horizon=horizon)
    return _cache[key]


def rational_points():
    if "rat" not in _cache:
        rng = random.Random(2024)
        _cache["rat"] = [expand(random_rational_point(rng, 10**4)) for _ in range(100)]
    return _cache["rat"]


def all_traces():
    return rational_points() + [cubic(200)]


# ---------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    t = expand(State(rational(Fraction(1, 2)), rational(Fraction(3, 2))))
    ok = (
        [tuple(d) for d in t.digits] == [(0, 1), (1, 2)]
        and Fraction(t.pn(1), t.rn(1)) == Fraction(1, 2)
        and Fraction(t.qn(1), t.rn(1)) == Fraction(3, 2)
    )
    dt = time.perf_counter() - t0
    return record(1, ok and dt < 1, f"terminating reconstruction of (1/2, 3/2): digits {[tuple(d) for d in t.digits]}, {dt:.3f}s")


def criterion_2():
    t0 = time.perf_counter()
    K = cube_root_field()
    th = K.gen
    t = expand(State(th, th * th), horizon=60)
    term = t.termination
    s2 = t.states[2]
    d, nxt = jp_step(s2)
    ok = (
        (term.kind, term.u, term.v) == ("periodic", 2, 1)
        and tuple(d) == (3, 3)
        and s2.alpha == th + 2
        and s2.beta == th * th + th + 1
        and nxt == s2
    )
    dt = time.perf_counter() - t0
    return record(2, ok and dt < 1, f"cubic period u={term.u} v={term.v}, digit {tuple(d)}, exact fixed point, {dt:.3f}s")


def criterion_3():
    t0 = time.perf_counter()
    bad = []
    n_checks = 0
    for t in all_traces():
        ids = verify_identities(t)
        d = delta_trace(t)
        dets = determinant_report(t, d)
        n_checks += len(ids.checks) + len(d.checks) + len(dets)
        if not ids.ok or not d.ok or not all(ok for _, _, ok in dets):
            bad.append(t)
    dt = time.perf_counter() - t0
    ok = not bad and cubic(200).length == 200 and len(rational_points()) == 100
    return record(3, ok and dt < 60, f"{n_checks} exact identity checks on 100 rational traces + cubic depth 200, {len(bad)} failing traces, {dt:.1f}s")


def _envelope():
    """Strict |Delta_n| < {alpha_0}, |Delta'_n| < 1 per index; returns violations split by index."""
    at0, later = [], []
    for t in all_traces():
        d = delta_trace(t)
        fa0 = t.frac_alpha(0)
        for n in range(t.length):
            ok = d.delta.abs(n) < fa0 and d.delta_prime.abs(n) < 1
            if not ok:
                (at0 if n == 0 else later).append(n)
    return at0, later


def _growth_checks():
    g = growth_model()
    bad = 0
    for t in all_traces():
        rep = perron_report(t, None, upto=200)
        bad += sum(1 for _, _, ok in rep if not ok)
    minimal = 0
    for n in range(3, 201):
        r = minimal_r(n)
        if not (g.power(n - 2) < r < g.power(n - 1)):
            minimal += 1
    return bad, minimal


def criterion_4():
    at0, later = _envelope()
    bad, minimal = _growth_checks()
    ok = not at0 and not later and bad == 0 and minimal == 0
    detail = (
        f"strict envelope violated at n=0 on {len(at0)} traces (|Delta_0| = {{alpha_0}} by definition), "
        f"{len(later)} violations at n>=1; Perron lower bound failures {bad}; minimal-digit two-sided failures {minimal}"
    )
    return record(4, ok, detail)


def criterion_5():
    g = growth_model()
    with mpmath.workdps(30):
        lam_ok = str(g.lam_value).startswith("1.4655712")
        const = g.limit_value
        const_ok = str(const).startswith("1.0739")
        conv = abs(g.ratio(60, minimal_r(60)) - const)
    conv_ok = conv < 1e-6
    detail = (
        f"lambda = {mpmath.nstr(g.lam_value, 12)}; lambda^3/(3 lambda-2) = {mpmath.nstr(const, 12)} (stated 1.0739...); "
        f"|r_60/lambda^58 - limit| = {mpmath.nstr(conv, 3)}"
    )
    return record(5, lam_ok and const_ok and conv_ok, detail), (lam_ok, const_ok, conv_ok)


def criterion_6():
    t0 = time.perf_counter()
    t = cubic(200)
    rep = classify_ideal_convergence(t, delta_trace(t))
    checks = rep.bound_checks
    geo = [(n, ok) for name, n, ok in checks if name.startswith("geometric")]
    pw = [(n, ok) for name, n, ok in checks if name.startswith("power")]
    cover_geo = {n for n, _ in geo} == set(range(rep.N + 3, 200))
    cover_pw = {n for n, _ in pw} == set(range(3, 200))
    ok = all(ok for _, ok in geo + pw) and cover_geo and cover_pw and rep.M == 4
    dt = time.perf_counter() - t0
    return record(6, ok and dt < 30, f"N={rep.N} M={rep.M} c={mpmath.nstr(rep.c, 8)} a={mpmath.nstr(rep.a, 6)}; {len(checks)} certified bound checks, {dt:.1f}s")


def criterion_7():
    total, fails, lemmas = 0, 0, set()
    for t in all_traces():
        rep = bounds_report(t)
        total += len(rep.checks)
        fails += len(rep.failures)
        lemmas |= {c.lemma for c in rep.checks}
    return record(7, fails == 0 and len(lemmas) == 8, f"{total} inequality checks over {len(lemmas)} lemma families, {fails} failures")


def criterion_8():
    t = cubic(60)
    K = t.initial.alpha.field
    d = delta_trace(t)
    worst = {}
    abstain = []
    for kind in ("complex", "complex-conj"):
        c = jp_conjugate_trace(t, *embedding_pair(K, kind))
        worst[kind] = max(abs(c.quantity[n]) for n in range(50, 61)) if c.ok else mpmath.inf
        try:
            theorem3_report(t, d, c)
        except NoValidN:
            abstain.append(kind)
    Q = make_field([-2, 0, 1], (1, 2))
    cf = cf_trace(Q.gen, Embedding(Q, 1, 128), 20)
    cf_ok = cf.ok and abs(cf.quantity[20]) < 1e-8 and all(-1 < cf.conjugate_track[k].real < 0 for k in range(2, 21))
    ok = all(v < 1e-6 for v in worst.values()) and cf_ok
    detail = (
        f"max |quantity| on [50,60]: complex {mpmath.nstr(worst['complex'], 3)}, complex-conj {mpmath.nstr(worst['complex-conj'], 3)} "
        f"(bound holds for every complex embedding; the hypothesis check abstains for {', '.join(abstain) or 'none'}); "
        f"sqrt2 |quantity_20| = {mpmath.nstr(abs(cf.quantity[20]), 3)}"
    )
    return record(8, ok, detail)


def _random_word(rng, max_len=6, max_b=8):
    w = []
    for _ in range(rng.randint(1, max_len)):
        b = rng.randint(1, max_b)
        lo = 1 if w and w[-1][0] == w[-1][1] else 0
        w.append((rng.randint(lo, b), b))
    return w


def criterion_9():
    t0 = time.perf_counter()
    n_words = mism = 0
    for n in range(1, 5):
        for w in admissible_words(3, n):
            n_words += 1
            if polygon_area(cell(w)).value != cell_measure(w, 1)[1].value:
                mism += 1
    rng = random.Random(99)
    ratio_fail = 0
    for _ in range(500):
        w = _random_word(rng)
        ratio_fail += sum(not strip_ratio_exceeds(w, t) for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)))
    dt = time.perf_counter() - t0
    return record(9, mism == 0 and ratio_fail == 0 and dt < 60, f"{n_words} words exact area match ({mism} mismatches); strip ratio on 500 random words, {ratio_fail} failures, {dt:.1f}s")


def criterion_10():
    t0 = time.perf_counter()
    r2 = enumerate_and_decay(2, 9)
    r3 = enumerate_and_decay(3, 7)
    ok = r2.measures[0] == Fraction(3, 2) and r2.measures[1] == Fraction(5, 8) and all(r2.passes) and all(r3.passes)
    dt = time.perf_counter() - t0
    return record(10, ok and dt < 300, f"|D_2(0)|={r2.measures[0]}, |D_2(1)|={r2.measures[1]}; strict decay m=2 n<=8 and m=3 n<=6, {dt:.1f}s")


def criterion_11():
    runs = [subprocess.run([sys.executable, "-m", "jacobi_perron.cli", "selftest"], capture_output=True, timeout=600) for _ in range(2)]
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout and runs[0].stdout
    return record(11, bool(ok), f"selftest exit codes {[r.returncode for r in runs]}, outputs byte-identical: {runs[0].stdout == runs[1].stdout}")


# ---------------------------------------------------------------------------


def test_criterion_1_terminating_reconstruction():
    assert criterion_1()


def test_criterion_2_cubic_periodicity():
    assert criterion_2()


def test_criterion_3_identity_suite():
    assert criterion_3()


@pytest.mark.xfail(strict=True, reason="|Delta_0| = {alpha_0} exactly, so the strict bound cannot hold at n = 0")
def test_criterion_4_error_envelope():
    assert criterion_4()


def test_criterion_4_attainable_part():
    _, later = _envelope()
    bad, minimal = _growth_checks()
    assert later == [] and bad == 0 and minimal == 0


@pytest.mark.xfail(strict=True, reason="lambda^3/(3 lambda - 2) evaluates to 1.3134..., not the quoted 1.0739...")
def test_criterion_5_growth_constants():
    assert criterion_5()[0]


def test_criterion_5_attainable_part():
    _, (lam_ok, const_ok, conv_ok) = criterion_5()
    assert lam_ok and conv_ok


def test_criterion_6_explicit_bounds():
    assert criterion_6()


def test_criterion_7_lemma_sweep():
    assert criterion_7()


def test_criterion_8_conjugate_limit():
    assert criterion_8()


def test_criterion_9_geometry_exactness():
    assert criterion_9()


@pytest.mark.slow
def test_criterion_10_measure_decay():
    assert criterion_10()


def test_criterion_11_cli_determinism():
    assert criterion_11()


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


if __name__ == "__main__":
    import contextlib
    import io

    for fn in CRITERIA:
        with contextlib.redirect_stdout(io.StringIO()):
            fn()
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if all("PASS" in RESULTS[k].split()[2] for k in RESULTS) else 1)
