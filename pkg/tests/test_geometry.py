import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from jacobi_perron.expansion import Inadmissible
from jacobi_perron.geometry import (
    EnumerationTooLarge,
    OutOfParameterDomain,
    RegionSpec,
    TOutOfRange,
    admissible_words,
    cell,
    cell_map_eval,
    cell_measure,
    decay_census,
    edge_collinearity,
    enumerate_and_decay,
    polygon_area,
    pullback_area_bounds,
    pullback_area_identity,
    region_measure,
    strip_ratio_exceeds,
    subdivision_check,
)


def oracle_map(word, X, Y):
    """Compose the inverse branches directly: (alpha, beta) = (a + 1/beta', b + alpha'/beta')."""
    x, y = Fraction(X), Fraction(Y)
    a, b = word[-1]
    x, y = a + x, b + y
    for a, b in reversed(word[:-1]):
        x, y = a + 1 / y, b + x / y
    return x, y


def oracle_area(pts):
    s = sum(pts[i][0] * pts[(i + 1) % len(pts)][1] - pts[(i + 1) % len(pts)][0] * pts[i][1] for i in range(len(pts)))
    return abs(Fraction(s, 2))


def test_cell_map_examples():
    assert cell_map_eval([(0, 1)], 0, 0) == (0, 1)
    assert cell_map_eval([(0, 1)], Fraction(1, 3), Fraction(2, 5)) == (Fraction(1, 3), Fraction(7, 5))
    assert cell_map_eval([(0, 1), (1, 2)], 0, 0) == (Fraction(1, 2), Fraction(3, 2))


def test_cell_map_domain():
    with pytest.raises(OutOfParameterDomain):
        cell_map_eval([(0, 1)], 2, 0)
    with pytest.raises(OutOfParameterDomain):
        cell_map_eval([(1, 1)], Fraction(1, 2), Fraction(1, 3))
    with pytest.raises(Inadmissible):
        cell([(1, 1), (0, 2)])


def test_unit_cells():
    c = cell([(0, 1)])
    assert c.kind == "quadrangle" and set(c.vertices) == {(0, 1), (1, 1), (1, 2), (0, 2)}
    assert polygon_area(c).value == 1
    t = cell([(1, 1)])
    assert t.kind == "triangle" and polygon_area(t).value == Fraction(1, 2)


def test_two_digit_cell_area():
    c = cell([(0, 1), (1, 2)])
    assert oracle_area(list(c.vertices)) == Fraction(5, 72)
    assert polygon_area(c).value == Fraction(5, 72)
    assert cell_measure([(0, 1), (1, 2)], 1)[1].value == Fraction(5, 72)


def test_measure_examples():
    assert cell_measure([(0, 1)], Fraction(1, 2))[0].value == Fraction(1, 2)
    assert cell_measure([(0, 1), (1, 1)], 1)[1].value == Fraction(1, 8)
    assert cell_measure([(0, 1)], 0)[0].value == 0
    with pytest.raises(TOutOfRange):
        cell_measure([(0, 1)], Fraction(3, 2))


def test_polygon_matches_formula_and_oracle():
    for n in (1, 2, 3):
        for w in admissible_words(3, n):
            c = cell(w)
            corners = ((0, 0), (1, 1), (0, 1)) if c.kind == "triangle" else ((0, 0), (1, 0), (1, 1), (0, 1))
            verts = [oracle_map(list(w), x, y) for x, y in corners]
            assert list(c.vertices) == verts
            assert polygon_area(c).value == oracle_area(verts) == cell_measure(w, 1)[1].value


@pytest.mark.parametrize("t", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(2, 7)])
def test_region_images_match_strip(t):
    for w in admissible_words(3, 2):
        tri = w[-1][0] == w[-1][1]
        s, full = cell_measure(w, t)
        sel = "DtPrime" if tri else "Dt"
        comp = region_measure(w, RegionSpec(sel + "-complement", t)).value
        rest = region_measure(w, RegionSpec(sel, t)).value
        assert comp == s.value
        assert comp + rest == full.value
        with pytest.raises(OutOfParameterDomain):
            region_measure(w, RegionSpec(("Dt" if tri else "DtPrime"), t))


def test_admissible_words_count():
    words = list(admissible_words(2, 3))
    digits = [(a, b) for b in (1, 2) for a in range(b + 1)]
    brute = [w for w in itertools.product(digits, repeat=3)
             if all(not (x[0] == x[1] and y[0] < 1) for x, y in zip(w, w[1:]))]
    assert [tuple(tuple(d) for d in w) for w in words] == brute


def brute_decay(m, depth):
    out = []
    for n in range(depth + 1):
        out.append(sum(polygon_area(cell(w)).value for w in admissible_words(m - 1, n + 1)))
    return out


@pytest.mark.parametrize("m, depth", [(2, 5), (3, 3), (4, 2)])
def test_decay_against_brute_force(m, depth):
    rep = enumerate_and_decay(m, depth)
    assert rep.measures == brute_decay(m, depth)
    assert rep.ok
    assert rep.word_counts == [len(list(admissible_words(m - 1, n + 1))) for n in range(depth + 1)]


def test_decay_examples():
    r2 = enumerate_and_decay(2, 2)
    assert r2.measures == [Fraction(3, 2), Fraction(5, 8), Fraction(11, 48)]
    assert r2.measures[1] < Fraction(3, 4) * r2.measures[0]
    r3 = enumerate_and_decay(3, 2)
    assert r3.measures == [4, Fraction(22, 9), Fraction(2089, 1512)]


def test_decay_cap():
    with pytest.raises(EnumerationTooLarge):
        decay_census(3, 20, cap=1000)
    with pytest.raises(ValueError):
        decay_census(1, 2)


@pytest.mark.parametrize("word", [[(0, 1)], [(1, 1)], [(0, 1), (1, 2)], [(1, 1), (1, 3)], [(2, 2), (1, 1), (1, 2)]])
def test_subdivision(word):
    rep = subdivision_check(word, 200)
    assert rep.ok
    # the uncovered part is exactly the thin strip of children with b > 200
    assert rep.defect == rep.tail > 0


def test_subdivision_brute():
    w = [(0, 1), (1, 2)]
    rep = subdivision_check(w, 6)
    brute = Fraction(0)
    for b in range(1, 7):
        for a in range(0, b + 1):
            brute += polygon_area(cell(w + [(a, b)])).value
    assert rep.partial_sums[-1] == brute


def test_collinearity():
    for w in admissible_words(3, 3):
        for t in (Fraction(1, 3), Fraction(5, 7)):
            assert all(edge_collinearity(w, t).values())


def test_strip_ratio_random():
    rng = random.Random(5)
    pool = [w for n in (1, 2, 3, 4) for w in admissible_words(3, n)]
    for _ in range(300):
        w = rng.choice(pool)
        for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            assert strip_ratio_exceeds(w, t)
    with pytest.raises(TOutOfRange):
        strip_ratio_exceeds([(0, 1)], 1)


interior = st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda x: 0 < x < 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 3), st.integers(1, 4), st.integers(1, 4), st.lists(st.tuples(interior, interior), min_size=3, max_size=3))
def test_pullback(a, b, d, xy):
    a = min(a, b)
    c = 1
    c = min(c, d)
    area = oracle_area([(c + x, d + y) for x, y in xy])
    if c == d and not all(x < y for x, y in xy):
        return
    assert pullback_area_identity(a, b, c, d, xy)
    if area:
        assert pullback_area_bounds(a, b, c, d, xy)
