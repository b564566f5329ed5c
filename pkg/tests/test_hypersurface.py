from fractions import Fraction
from math import comb
import random
import time

import pytest

from badproj.hypersurface import (Closure, Pencil, components, eliminate_critical, eliminate_slice,
                                  grid_points, make_predicate, resultant2, resultant_formula,
                                  scan_pencil, symbolic_n2_system)
from badproj.instances import FOUR_BY_FOUR_BASE
from badproj.pataki import Decision, decide, pataki_range
from badproj.poly import Budget, PolyRing
from badproj.symspace import Subspace, SymMatrix

from helpers import random_invertible, random_subspace, span


def test_resultant2_examples():
    r = resultant2(span(2, "x1^2", "2*x1*x2"))
    assert r.R == 0 and r.classification is Closure.NOT_CLOSED
    r = resultant2(span(2, "x1^2", "x2^2"))
    assert r.R == 1 and r.classification is Closure.CLOSED_POINTED
    r = resultant2(span(2, "x1^2 - x2^2", "2*x1*x2"))
    assert r.R == -4 and r.classification is Closure.FULL_PLANE
    with pytest.raises(ValueError):
        resultant2(span(3, "x1^2", "x2^2"))


def test_resultant2_basis_change_scales_by_square():
    rng = random.Random(41)
    for _ in range(20):
        L = random_subspace(rng, 2, 2)
        M = random_invertible(rng, 2)
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        assert resultant2(L.change_basis(M)).R == det ** 2 * resultant2(L).R


def test_resultant_formula_is_the_pencil_discriminant():
    # R vanishes exactly when some a + lambda b is a (real or complex) square
    a = SymMatrix([[1, 0], [0, 0]])
    b = SymMatrix([[0, 1], [1, 0]])
    assert resultant_formula(a[0, 0], a[0, 1], a[1, 1], b[0, 0], b[0, 1], b[1, 1]) == 0


def test_component_catalog():
    def table(n, k):
        return {c.s: c.degree for c in components(n, k)}
    assert table(4, 4) == {3: 8, 2: 30}
    assert table(4, 7) == {2: 10, 1: 16}
    assert table(3, 3) == {2: 4}
    assert table(3, 2) == {2: 6}
    assert table(3, 5) == {1: 3}
    assert table(4, 5) == {2: 42}
    assert [c.s for c in components(4, 4)] == [3, 2]
    assert components(4, 4)[1].label == "Ch_1(X_2)"
    assert components(4, 4)[0].label == "Ch_3(X_3)"
    assert table(5, 6) and all(d is None for d in table(5, 6).values())


def test_components_satisfy_range_inequalities():
    for n in range(2, 6):
        for k in range(1, comb(n + 1, 2) + 1):
            for c in components(n, k):
                assert comb(n - c.s + 1, 2) < k <= comb(n + 1, 2) - comb(c.s + 1, 2)
                assert c.c == comb(n - c.s + 1, 2) and c.index == k - c.c
            assert {c.s for c in components(n, k)} == pataki_range(n, k)


def test_pencil_validation_and_evaluation():
    P = Pencil(2, [[[1, 0], [0, 2]], [["t", 1], [1, "t - 3"]]])
    assert P.k == 2
    assert P.matrices_at(2)[1] == SymMatrix([[2, 1], [1, -1]])
    with pytest.raises(ValueError):
        Pencil(2, [[["t", 1], [0, 1]]])


def test_pencil_dependent_samples_are_skipped():
    P = Pencil(2, [[[1, 0], [0, 0]], [[1, 0], [0, "t"]]])
    assert P.at(0) is None
    res = scan_pencil(P, [-1, 0, 1], "decide")
    assert res.skipped == (Fraction(0),)
    assert [t for t, _ in res.samples] == [-1, 1]


def member_pencil():
    return Pencil(3, [[[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                      [[0, 0, "1/2*t"], [0, 1, 0], ["1/2*t", 0, 0]]])


def test_scan_pencil_members():
    res = scan_pencil(member_pencil(), [-1, Fraction(-1, 2), 0, Fraction(1, 2), 1], "decide")
    assert [o for _, o in res.samples] == ["Bad", "Bad", "Good", "Bad", "Bad"]
    assert len(res.transitions) == 2


def test_scan_bisection_narrows_flips():
    res = scan_pencil(member_pencil(), [-1, 1], "decide")
    assert res.transitions == ()
    res = scan_pencil(member_pencil(), [0, 1], "decide", bisect=Fraction(1, 16))
    (tr,) = res.transitions
    assert tr.before == "Good" and tr.after == "Bad"
    assert tr.hi - tr.lo <= Fraction(1, 16) and tr.lo == 0


def test_scan_nc_consistent_with_decide():
    P = member_pencil()
    grid = grid_points(-1, 1, 5)
    a = scan_pencil(P, grid, "decide").samples
    b = scan_pencil(P, grid, "nc_test").samples
    for (t, d), (_, nc) in zip(a, b):
        if d == "Bad":
            assert nc == "intersects"


def test_scan_constant_pencil():
    L = span(2, "x1^2", "2*x1*x2")
    res = scan_pencil(Pencil.constant(L), grid_points(-2, 2, 4), "decide")
    assert {o for _, o in res.samples} == {"Bad"} and not res.transitions


def test_scan_four_pencil_critical_predicate():
    a4 = [[320, "t", 380, 254], ["t", 140, 258, 166], [380, 258, 448, 342], [254, 166, 342, 208]]
    P = Pencil(4, [[list(r) for r in m] for m in FOUR_BY_FOUR_BASE] + [a4])
    res = scan_pencil(P, [193, 194, 195], make_predicate("critical_empty", 2))
    assert [o for _, o in res.samples] == ["empty", "nonempty", "empty"]


def test_grid_points():
    assert grid_points(0, 1, 3) == [0, Fraction(1, 2), 1]
    with pytest.raises(ValueError):
        scan_pencil(member_pencil(), [1, 0], "decide")
    with pytest.raises(ValueError):
        scan_pencil(member_pencil(), [], "decide")


def test_slice_n2_matches_resultant():
    P = Pencil(2, [[[1, 0], [0, 2]], [["t", 1], [1, "t - 3"]]])
    res = eliminate_slice(P, 1, Budget(max_seconds=60))
    assert res.status == "ok"
    f = res.polynomial
    assert f == PolyRing(["t"]).parse("t^2 + 6*t + 17")
    values = []
    for t in range(-2, 3):
        R = resultant2(P.at(t)).R
        values.append((R, f.evaluate({"t": t})))
    ratio = values[0][0] / values[0][1]
    assert ratio != 0 and all(R == ratio * v for R, v in values)


def test_slice_root_consistent_with_critical_emptiness():
    # the resultant of span(x1^2, 2*x1*x2 + t*x2^2) is t^2
    P = Pencil(2, [[[1, 0], [0, 0]], [[0, 1], [1, "t"]]])
    assert resultant2(P.at(3)).R == 9
    res = eliminate_slice(P, 1, Budget(max_seconds=60))
    assert res.status == "ok"
    f = res.polynomial
    assert f.evaluate({"t": 0}) == 0
    pred = make_predicate("critical_empty", 1)
    assert pred(P.at(0)) == "nonempty"
    assert decide(P.at(0)).decision is Decision.BAD
    assert f.evaluate({"t": 2}) != 0 and pred(P.at(2)) == "empty"


def test_symbolic_n2_elimination():
    res = eliminate_critical(symbolic_n2_system(), Budget(max_seconds=60))
    assert res.status == "ok" and len(res.generators) == 1
    f = res.polynomial
    names = ["a11", "a12", "a22", "b11", "b12", "b22"]
    expected = resultant_formula(*[f.ring.gen(v) for v in names])
    assert f == expected.primitive() or f == (-expected).primitive()
    assert len(f.terms) == 7


def test_slice_budget():
    a4 = [[320, "t", 380, 254], ["t", 140, 258, 166], [380, 258, 448, 342], [254, 166, 342, 208]]
    P = Pencil(4, [[list(r) for r in m] for m in FOUR_BY_FOUR_BASE] + [a4])
    t0 = time.monotonic()
    res = eliminate_slice(P, 2, Budget(max_seconds=0.5))
    assert res.status == "Budget" and res.polynomial is None
    assert time.monotonic() - t0 < 10
