"""Built-in invariant suite behind ``jp selftest``.

Every check is deterministic (seeded inputs, no timings) so the report is
byte-identical across runs.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

import mpmath

from . import kernels
from .conjugates import NoValidN, cf_trace, embedding_pair, jp_conjugate_trace, theorem3_report
from .convergence import (
    bounds_report,
    classify_ideal_convergence,
    delta_trace,
    determinant_report,
    growth_model,
    minimal_r,
    perron_report,
)
from .exactnum import Embedding, Reducible, make_field, rational
from .expansion import State, expand, verify_identities
from .geometry import (
    admissible_words,
    cell,
    cell_measure,
    enumerate_and_decay,
    polygon_area,
    strip_ratio_exceeds,
    subdivision_check,
)


def cube_root_field():
    return make_field([-2, 0, 0, 1], (Fraction(1), Fraction(2)))


def cubic_point():
    K = cube_root_field()
    th = K.gen
    return State(th, th * th)


def random_rational_point(rng: random.Random, max_den: int = 10**4) -> State:
    """A point of the domain 0 <= alpha <= beta, 1 <= beta with bounded denominators."""
    while True:
        b = Fraction(rng.randint(1, 5 * max_den), rng.randint(1, max_den))
        a = Fraction(rng.randint(0, 5 * max_den), rng.randint(1, max_den))
        if b >= 1 and 0 <= a <= b:
            return State(rational(a), rational(b))


def _field_checks() -> list:
    K = cube_root_field()
    th = K.gen
    out = [
        ("exactnum", "cube-root-floor", th.floor() == 1),
        ("exactnum", "inverse-identity", 1 / (th - 1) == th * th + th + 1),
        ("exactnum", "charpoly", (th * th).charpoly() == [Fraction(-4), Fraction(0), Fraction(0), Fraction(1)]),
    ]
    try:
        make_field([-1, 0, 0, 1], (Fraction(0), Fraction(2)))
        out.append(("exactnum", "reducible-rejected", False))
    except Reducible:
        out.append(("exactnum", "reducible-rejected", True))
    z = Embedding(K, 1, 128).root().value
    out.append(("exactnum", "complex-root", abs(z - mpmath.mpc(-0.6299605249474366, 1.0911236359717214)) < 1e-12))
    return out


def _expansion_checks() -> list:
    out = []
    t = expand(State(rational(Fraction(1, 2)), rational(Fraction(3, 2))), horizon=10)
    out.append(("expansion", "terminating-digits", [tuple(d) for d in t.digits] == [(0, 1), (1, 2)]))
    out.append(("expansion", "terminating-convergent", Fraction(t.pn(1), t.rn(1)) == Fraction(1, 2) and Fraction(t.qn(1), t.rn(1)) == Fraction(3, 2)))
    c = expand(cubic_point(), horizon=60)
    th = c.initial.alpha
    out.append(("expansion", "cubic-period", (c.termination.kind, c.termination.u, c.termination.v) == ("periodic", 2, 1)))
    out.append(("expansion", "cubic-fixed-state", c.states[2].alpha == th + 2 and c.states[2].beta == th * th + th + 1))
    out.append(("expansion", "cubic-identities", verify_identities(c).ok))
    rng = random.Random(20240601)
    ok = all(verify_identities(expand(random_rational_point(rng))).ok for _ in range(20))
    out.append(("expansion", "rational-identities", ok))
    return out


def _convergence_checks() -> list:
    out = []
    c = expand(cubic_point(), horizon=60)
    d = delta_trace(c)
    out.append(("convergence", "delta-closed-forms", d.ok))
    out.append(("convergence", "determinants", all(ok for _, _, ok in determinant_report(c, d))))
    out.append(("convergence", "contraction-inequalities", not bounds_report(c, d).failures))
    rep = classify_ideal_convergence(c, d)
    out.append(("convergence", "explicit-bounds", bool(rep.bound_checks) and all(ok for _, _, ok in rep.bound_checks)))
    out.append(("convergence", "perron-growth", all(ok for _, _, ok in perron_report(c, d, upto=60))))
    rng = random.Random(7)
    good = True
    for _ in range(10):
        t = expand(random_rational_point(rng))
        dt = delta_trace(t)
        good &= dt.ok and not bounds_report(t, dt).failures
    out.append(("convergence", "rational-inequalities", good))
    g = growth_model()
    out.append(("convergence", "perron-root", g.lam ** 3 == g.lam ** 2 + 1 and abs(g.lam_value - mpmath.mpf("1.4655712318767680267")) < 1e-15))
    out.append(("convergence", "minimal-growth-limit", abs(g.ratio(60, minimal_r(60)) - g.limit_value) < 1e-6))
    return out


def _conjugate_checks() -> list:
    out = []
    Q = make_field([-2, 0, 1], (Fraction(1), Fraction(2)))
    cf = cf_trace(Q.gen, Embedding(Q, 1, 128), 20)
    out.append(("conjugates", "quadratic-track", cf.ok and abs(cf.quantity[20]) < 1e-8))
    out.append(("conjugates", "quadratic-interval", all(-1 < cf.conjugate_track[k].real < 0 for k in range(2, 21))))
    c = expand(cubic_point(), horizon=60)
    d = delta_trace(c)
    for kind in ("complex", "complex-conj"):
        ea, eb = embedding_pair(c.initial.alpha.field, kind)
        ct = jp_conjugate_trace(c, ea, eb)
        tail = max(abs(ct.quantity[n]) for n in range(50, 61))
        out.append(("conjugates", f"{kind}-limit", ct.ok and tail < 1e-6))
    try:
        theorem3_report(c, d, ct)
        out.append(("conjugates", "persistent-agreements-abstain", False))
    except NoValidN:
        out.append(("conjugates", "persistent-agreements-abstain", True))
    return out


def _geometry_checks() -> list:
    out = [
        ("geometry", "unit-cells", polygon_area(cell([(0, 1)])).value == 1 and polygon_area(cell([(1, 1)])).value == Fraction(1, 2)),
        ("geometry", "two-digit-cell", polygon_area(cell([(0, 1), (1, 2)])).value == Fraction(5, 72)),
    ]
    ok = all(polygon_area(cell(w)).value == cell_measure(w, 1)[1].value for n in (1, 2, 3) for w in admissible_words(3, n))
    out.append(("geometry", "area-formula", ok))
    rng = random.Random(11)
    words = [w for w in admissible_words(4, 3)]
    ok = all(strip_ratio_exceeds(rng.choice(words), t) for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)) for _ in range(50))
    out.append(("geometry", "strip-ratio", ok))
    out.append(("geometry", "subdivision", all(subdivision_check(w, 50).ok for w in ([(0, 1)], [(1, 1)], [(0, 1), (1, 2)]))))
    r2 = enumerate_and_decay(2, 6)
    r3 = enumerate_and_decay(3, 4)
    out.append(("geometry", "decay-m2", r2.ok and r2.measures[:2] == [Fraction(3, 2), Fraction(5, 8)]))
    out.append(("geometry", "decay-m3", r3.ok and r3.measures[0] == 4))
    return out


SUITES: list[tuple[str, Callable[[], list]]] = [
    ("exactnum", _field_checks),
    ("expansion", _expansion_checks),
    ("convergence", _convergence_checks),
    ("conjugates", _conjugate_checks),
    ("geometry", _geometry_checks),
]


def run() -> tuple[bool, list[str]]:
    """All suites; returns (all passed, report lines)."""
    lines = [f"kernel backend: {kernels.BACKEND}"]
    passed = True
    for name, fn in SUITES:
        try:
            results = fn()
        except Exception as exc:  # a crash is a failure of the suite, reported in line
            results = [(name, "suite-error", False)]
            lines.append(f"FAIL {name} suite raised {type(exc).__name__}: {exc}")
        for mod, check, ok in results:
            lines.append(f"{'PASS' if ok else 'FAIL'} {mod} {check}")
            passed &= bool(ok)
    lines.append(f"{'ALL PASS' if passed else 'FAILURES'}: {sum(l.startswith('PASS') for l in lines)} passed, {sum(l.startswith('FAIL ') for l in lines)} failed")
    return passed, lines
