from fractions import Fraction
import random

import numpy as np
import pytest

from badproj.hypersurface import resultant2
from badproj.instances import (FIVE_PLANE, FIVE_X, FOUR_PENCIL_X, five_instance, four_pencil,
                               four_pencil_y, pencil_member, rank_gap_example, three_quadrics,
                               zero_rank_example)
from badproj.critical import (Mode, Outcome, build_system, check, check_point, nc_test,
                              point_ideal, projection_contains, verify_point)
from badproj.pataki import Decision, decide
from badproj.poly import Budget, PolyRing
from badproj.symspace import Subspace, SymMatrix, psd_rank_exact, rank, svec_index

from helpers import random_invertible, random_subspace, random_sym, span

PRINTED_IDEAL = [
    "x1 - 14*x4", "x2 + 18*x4", "x3 - 24*x4",
    "314*y11 - 197*y44", "314*y12 - 11*y44", "314*y13 + 213*y44", "314*y14 - 53*y44",
    "157*y22 - 313*y44", "157*y23 + 30*y44", "157*y24 + 215*y44",
    "157*y33 - 117*y44", "157*y34 + 12*y44",
]


def linear_span_rows(polys, names):
    ring = PolyRing(names)
    rows = []
    for p in polys:
        f = ring.parse(p)
        rows.append([f.evaluate({u: Fraction(int(u == v)) for u in names}) for v in names])
    return rows


def same_linear_span(a, b, names):
    ra, rb = linear_span_rows(a, names), linear_span_rows(b, names)
    return rank(ra) == rank(rb) == rank(ra + rb)


def test_build_system_shapes_ambient_n2():
    L = span(2, "x1^2", "x2^2")
    S = build_system(L, 1, mode="ambient")
    assert S.mode is Mode.AMBIENT_Y
    assert S.x_vars == ("x1", "x2") and S.y_vars == ("y11", "y12", "y22")
    assert len(S.membership) == 2
    assert len(S.complementarity) == 4
    assert len(S.rank_x_minors) == 1 and len(S.rank_y_minors) == 1


def test_build_system_shapes_coordinate():
    S = build_system(four_pencil(194), 1, mode="coordinate")
    assert S.y_vars == ("y1", "y2", "y3", "y4", "y5", "y6")
    S = build_system(Subspace(3, list(three_quadrics().basis)[:2] + [SymMatrix.identity(3)]), 1)
    assert S.mode is Mode.COORDINATE_Y
    assert len(S.y_vars) == 3
    S = build_system(span(3, "x1^2", "x2^2", "x3^2", "x1*x2"), 1, mode="coordinate")
    assert S.y_vars == ("y1", "y2")
    assert all(g.is_zero() is False for g in S.generators)


def test_build_system_without_rank():
    S = build_system(span(2, "x1^2", "x2^2"))
    assert S.s is None and not S.rank_x_minors and not S.rank_y_minors
    with pytest.raises(ValueError):
        build_system(span(2, "x1^2", "x2^2"), 2)


def test_macaulay2_text():
    text = build_system(span(2, "x1^2", "x2^2"), 1, mode="ambient").to_macaulay2()
    assert text.startswith("R = QQ[x1,x2,y11,y12,y22];")
    assert "ideal(" in text


def test_tangency_point_is_unique():
    S = build_system(four_pencil(194), 2)
    r = check(S)
    assert r.outcome is Outcome.FINITE and r.count == 1
    p = r.points[0]
    names = [f"x{i}" for i in range(1, 5)] + [f"y{i + 1}{j + 1}" for i, j in svec_index(4)]
    assert same_linear_span(point_ideal(p), PRINTED_IDEAL, names)
    assert verify_point(four_pencil(194), p.x, p.Y, 2)


@pytest.mark.parametrize("t", [193, 195])
def test_neighbouring_members_are_empty(t):
    r = check(build_system(four_pencil(t), 2))
    assert r.outcome is Outcome.EMPTY


def test_printed_point_verifies():
    L = four_pencil(194)
    c = check_point(L, FOUR_PENCIL_X, four_pencil_y(), 2)
    assert c.valid and c.x_rank == 2 and c.y_rank == 2 and c.x_psd and c.y_psd


def test_check_point_failures():
    L = four_pencil(194)
    c = check_point(L, FOUR_PENCIL_X, four_pencil_y().scale(2) + SymMatrix.identity(4), 2)
    assert not c.valid
    c = check_point(L, (1, 0, 0, 0), four_pencil_y(), 2)
    assert not c.valid and any("X Y" in f or "rank" in f for f in c.failures)
    with pytest.raises(ValueError):
        check_point(L, (1, 2), four_pencil_y(), 2)


def test_five_instance_positive_dimensional():
    L = five_instance()
    X = L.combination(FIVE_X)
    assert X == SymMatrix.diag([1, 1, 0, 0])
    S = build_system(L, 2)
    r = check(S)
    assert r.outcome is Outcome.POSITIVE_DIMENSIONAL
    for f in FIVE_PLANE:
        assert projection_contains(S, S.ring.parse(f))
    assert not projection_contains(S, S.ring.parse("x1"))


def test_empty_systems_reject_random_points():
    for t in (193,):
        L = four_pencil(t)
        rng = random.Random(31)
        for _ in range(100):
            x = [Fraction(rng.randint(-20, 20)) for _ in range(4)]
            Y = random_sym(rng, 4)
            assert not verify_point(L, x, Y, 2)


def test_n2_emptiness_matches_resultant():
    rng = random.Random(32)
    for _ in range(12):
        L = random_subspace(rng, 2, 2)
        r = check(build_system(L, 1), Budget(max_seconds=30))
        R = resultant2(L).R
        assert (r.outcome is Outcome.EMPTY) == (R != 0)
    v = [Fraction(2), Fraction(-3)]
    from badproj.symspace import orthogonal_complement
    L = orthogonal_complement(Subspace(2, [SymMatrix.outer(v)]))
    assert resultant2(L).R == 0
    assert check(build_system(L, 1)).outcome is not Outcome.EMPTY


def test_budget_outcome():
    r = check(build_system(four_pencil(194), 2), Budget(max_seconds=0.001))
    assert r.outcome is Outcome.BUDGET


def test_nc_test_examples():
    assert nc_test(rank_gap_example()).intersects is True
    assert nc_test(zero_rank_example()).intersects is False
    assert nc_test(span(2, "x1^2", "x2^2")).intersects is False
    assert nc_test(pencil_member(0)).intersects is True


def test_nc_test_invariance_and_badness():
    rng = random.Random(33)
    for L in (rank_gap_example(), three_quadrics(), pencil_member(1), span(2, "x1^2", "2*x1*x2")):
        base = nc_test(L).intersects
        assert base is True
        assert decide(L).decision is Decision.BAD
        for _ in range(3):
            T = L.congruence(random_invertible(rng, L.n, -2, 2))
            assert nc_test(T).intersects is base
