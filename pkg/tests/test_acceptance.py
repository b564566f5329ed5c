"""End-to-end acceptance checks, one test per criterion, each printing PASS or FAIL."""

from fractions import Fraction
import io
import json
import os
import random
import time

import pytest

from badproj.cli import run
from badproj.critical import build_system, check, projection_contains
from badproj.hypersurface import (Pencil, components, eliminate_critical, eliminate_slice,
                                  resultant2, resultant_formula, scan_pencil, symbolic_n2_system)
from badproj.instances import (FIVE_PLANE, FIVE_X, FOUR_BY_FOUR_BASE, five_instance, four_pencil,
                               four_pencil_matrices)
from badproj.pataki import BadLatticeWitness, BadRankGap, Decision, GoodFullRank, GoodZero, decide
from badproj.poly import Budget, PolyRing, recording_bases, s_polynomials_reduce_to_zero
from badproj.sdp import complementary_pair
from badproj.symspace import (Subspace, SymMatrix, orthogonal_complement, psd_rank_exact, rank,
                              svec_index)

from helpers import random_invertible, random_subspace, span

STRETCH_SECONDS = float(os.environ.get("BADPROJ_STRETCH_SECONDS", "60"))

TANGENCY_IDEAL = [
    "x1 - 14*x4", "x2 + 18*x4", "x3 - 24*x4",
    "314*y11 - 197*y44", "314*y12 - 11*y44", "314*y13 + 213*y44", "314*y14 - 53*y44",
    "157*y22 - 313*y44", "157*y23 + 30*y44", "157*y24 + 215*y44",
    "157*y33 - 117*y44", "157*y34 + 12*y44",
]


@pytest.fixture
def verdict_line(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'}{' (' + detail + ')' if detail else ''}")
        return ok
    return emit


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def subspace_file(tmp_path, name, mats):
    path = tmp_path / name
    path.write_text(json.dumps({"n": mats[0].n, "k": len(mats),
                                "matrices": [[[str(v) for v in r] for r in m.rows()] for m in mats]}))
    return str(path)


def linear_rows(polys, names):
    ring = PolyRing(names)
    return [[ring.parse(p).evaluate({u: Fraction(int(u == v)) for u in names}) for v in names]
            for p in polys]


def same_linear_span(a, b, names):
    ra, rb = linear_rows(a, names), linear_rows(b, names)
    return rank(ra) == rank(rb) == rank(ra + rb)


def test_criterion_1_symbolic_resultant(verdict_line):
    t0 = time.monotonic()
    res = eliminate_critical(symbolic_n2_system(), Budget(max_seconds=60))
    elapsed = time.monotonic() - t0
    ok = res.status == "ok" and len(res.generators) == 1
    if ok:
        f = res.polynomial
        expected = resultant_formula(*[f.ring.gen(v) for v in ("a11", "a12", "a22", "b11", "b12", "b22")])
        ok = f in (expected.primitive(), (-expected).primitive()) and len(f.terms) == 7
    ok = ok and elapsed < 60
    assert verdict_line(1, ok, f"{elapsed:.2f}s")


def test_criterion_2_plane_lattice_witness(verdict_line):
    L = span(2, "x1^2", "2*x1*x2")
    t0 = time.monotonic()
    v = decide(L)
    elapsed = time.monotonic() - t0
    vn = v.blocks.normalized_witness if v.blocks else None
    s = v.blocks.s if v.blocks else 0
    ok = (v.decision is Decision.BAD and v.certified_exact and isinstance(v.certificate, BadLatticeWitness)
          and vn is not None
          and all(vn[i, j] == 0 for i in range(s, 2) for j in range(s, 2))
          and any(vn[i, j] != 0 for i in range(s) for j in range(s, 2))
          and elapsed < 1)
    assert verdict_line(2, ok, f"{elapsed:.3f}s")


def test_criterion_3_three_quadrics(verdict_line):
    L = span(3, "-52*x1^2+412*x1*x2+472*x1*x3+462*x2^2+1164*x2*x3+750*x3^2",
             "-101*x1^2+435*x1*x2+480*x1*x3+518*x2^2+1307*x2*x3+853*x3^2",
             "-55*x1^2+362*x1*x2+482*x1*x3+434*x2^2+1166*x2*x3+772*x3^2")
    t0 = time.monotonic()
    v = decide(L)
    elapsed = time.monotonic() - t0
    gens = v.blocks.generators if v.blocks else ()
    ok = (v.decision is Decision.BAD and v.certified_exact and len(gens) == 1
          and rank([list(gens[0]), [5, 7, 7]]) == 1 and v.blocks.dims == (1, 2) and elapsed < 5)
    assert verdict_line(3, ok, f"{elapsed:.3f}s")


def test_criterion_4_rank_gap(verdict_line):
    L = span(3, "x1^2", "x2^2 + 2*x1*x3", "2*x2*x3")
    t0 = time.monotonic()
    v = decide(L)
    elapsed = time.monotonic() - t0
    c = v.certificate
    ok = (v.decision is Decision.BAD and isinstance(c, BadRankGap) and v.sL.exact and v.sLperp.exact
          and (c.s, c.s_perp) == (1, 1)
          and L.contains(c.q) and psd_rank_exact(c.q).rank == 1 and psd_rank_exact(c.q).is_psd
          and orthogonal_complement(L).contains(c.y) and psd_rank_exact(c.y).rank == 1
          and psd_rank_exact(c.y).is_psd and elapsed < 5)
    assert verdict_line(4, ok, f"{elapsed:.3f}s")


def test_criterion_5_pencil_scan(verdict_line):
    P = Pencil(3, [[[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                   [[0, 0, "t/2"], [0, 1, 0], ["t/2", 0, 0]]])
    res = scan_pencil(P, [-1, Fraction(-1, 2), 0, Fraction(1, 2), 1], "decide")
    got = [o for _, o in res.samples]
    ok = got == ["Bad", "Bad", "Good", "Bad", "Bad"] and not res.skipped
    assert verdict_line(5, ok, ", ".join(got))


def test_criterion_6_component_catalog(verdict_line):
    expected = {(4, 4): {2: 30, 3: 8}, (7, 4): {1: 16, 2: 10}, (3, 3): {2: 4},
                (2, 3): {2: 6}, (5, 3): {1: 3}, (5, 4): {2: 42}}
    got = {(k, n): {c.s: c.degree for c in components(n, k)} for (k, n) in expected}
    assert verdict_line(6, got == expected)


def test_criterion_7_tangency_point(tmp_path, verdict_line):
    path = subspace_file(tmp_path, "t194.json", four_pencil_matrices(194))
    t0 = time.monotonic()
    code, out = invoke("critical", path, "--rank", "2", "--check", "--json")
    elapsed_a = time.monotonic() - t0
    doc = json.loads(out)
    names = [f"x{i}" for i in range(1, 5)] + [f"y{i + 1}{j + 1}" for i, j in svec_index(4)]
    ok_a = (code == 0 and doc["outcome"] == "Finite" and doc["count"] == 1
            and same_linear_span(doc["points"][0]["ideal"], TANGENCY_IDEAL, names) and elapsed_a < 600)

    # Y read off the printed ideal with y44 = 314
    y = {"y44": Fraction(314)}
    for g in TANGENCY_IDEAL[3:]:
        row = dict(zip(names, linear_rows([g], names)[0]))
        var = next(v for v in names[4:] if v != "y44" and row[v] != 0)
        y[var] = -row["y44"] * y["y44"] / row[var]
    Y = [[y[f"y{min(i, j) + 1}{max(i, j) + 1}"] for j in range(4)] for i in range(4)]
    point = tmp_path / "point.json"
    point.write_text(json.dumps({"x": [14, -18, 24, 1], "Y": [[str(v) for v in r] for r in Y]}))
    t0 = time.monotonic()
    code, out = invoke("critical", path, "--rank", "2", "--verify", str(point), "--json")
    elapsed_b = time.monotonic() - t0
    vdoc = json.loads(out)
    ok_b = (code == 0 and vdoc["valid"] and vdoc["x_rank"] == 2 and vdoc["y_rank"] == 2
            and vdoc["x_psd"] and vdoc["y_psd"] and elapsed_b < 1)

    outcomes = []
    for t in (193, 195):
        p = subspace_file(tmp_path, f"t{t}.json", four_pencil_matrices(t))
        code, out = invoke("critical", p, "--rank", "2", "--check", "--json")
        outcomes.append(json.loads(out)["outcome"])
    ok_c = outcomes == ["Empty", "Empty"]
    detail = f"a={ok_a} {elapsed_a:.1f}s, b={ok_b} {elapsed_b:.3f}s, c={outcomes}"
    assert verdict_line(7, ok_a and ok_b and ok_c, detail)


def test_criterion_8_complementary_pairs(verdict_line):
    details, ok = [], True
    for name, L, pattern in (("t194", four_pencil(194), (2, 2)), ("five", five_instance(), (2, 1))):
        t0 = time.monotonic()
        p = complementary_pair(L)
        elapsed = time.monotonic() - t0
        good = (p.rank_x, p.rank_y) == pattern and p.gap <= 1e-7 and elapsed < 10
        ok = ok and good
        details.append(f"{name} ({p.rank_x},{p.rank_y}) gap={p.gap:.1e} {elapsed:.2f}s")
    assert verdict_line(8, ok, "; ".join(details))


def test_criterion_9_positive_dimensional(verdict_line):
    L = five_instance()
    X = L.combination(FIVE_X)
    rep = psd_rank_exact(X)
    t0 = time.monotonic()
    S = build_system(L, 2)
    r = check(S)
    contains = [projection_contains(S, S.ring.parse(f)) for f in FIVE_PLANE]
    elapsed = time.monotonic() - t0
    ok = (X == SymMatrix.diag([1, 1, 0, 0]) and rep.is_psd and rep.rank == 2
          and r.outcome.value == "PositiveDimensional" and all(contains) and elapsed < 600)
    assert verdict_line(9, ok, f"{r.outcome.value}, {elapsed:.1f}s")


def _trichotomy_agrees(L) -> bool:
    R = resultant2(L).R
    v = decide(L)
    if R == 0:
        return v.decision is Decision.BAD
    if R > 0:
        return isinstance(v.certificate, GoodFullRank)
    return isinstance(v.certificate, GoodZero)


def test_criterion_10_property_suites(verdict_line):
    rng = random.Random(1010)
    agree = total = 0
    while total < 200:
        L = random_subspace(rng, 2, 2)
        agree += _trichotomy_agrees(L)
        total += 1
    for _ in range(20):
        v = [Fraction(rng.randint(-5, 5)) for _ in range(2)]
        if not any(v):
            v[0] = Fraction(1)
        M = SymMatrix.outer(v).scale(rng.choice([1, -1, Fraction(1, 3)]))
        L = orthogonal_complement(Subspace(2, [M])).change_basis(random_invertible(rng, 2))
        agree += resultant2(L).R == 0 and _trichotomy_agrees(L)
        total += 1
    ok_i = agree == total

    bases = [span(2, "x1^2", "2*x1*x2"),
             span(3, "-52*x1^2+412*x1*x2+472*x1*x3+462*x2^2+1164*x2*x3+750*x3^2",
                  "-101*x1^2+435*x1*x2+480*x1*x3+518*x2^2+1307*x2*x3+853*x3^2",
                  "-55*x1^2+362*x1*x2+482*x1*x3+434*x2^2+1166*x2*x3+772*x3^2"),
             span(3, "x1^2", "x2^2 + 2*x1*x3", "2*x2*x3")]
    ranks = [decide(L).sL.s for L in bases]
    invariant = 0
    for i in range(50):
        L = bases[i % 3]
        T = L.congruence(random_invertible(rng, L.n, -2, 2)).change_basis(random_invertible(rng, L.k, -2, 2))
        v = decide(T)
        invariant += v.decision is Decision.BAD and v.sL.s == ranks[i % 3]
    ok_ii = invariant == 50

    with recording_bases() as bases_seen:
        eliminate_critical(symbolic_n2_system(), Budget(max_seconds=60))
        for _ in range(6):
            check(build_system(random_subspace(rng, 2, 2), 1))
        S = build_system(five_instance(), 2)
        check(S)
        projection_contains(S, S.ring.parse(FIVE_PLANE[0]))
        bad_pencil = Pencil(2, [[[1, 0], [0, 0]], [[0, 1], [1, "t"]]])
        eliminate_slice(bad_pencil, 1)
    checked = [g for g in bases_seen if len(g.generators) <= 200]
    ok_iii = bool(checked) and all(s_polynomials_reduce_to_zero(g) for g in checked)

    pairs = [complementary_pair(random_subspace(rng, n, rng.randint(1, n * (n + 1) // 2 - 1)))
             for n in (2, 3, 4) for _ in range(8)]
    pairs += [complementary_pair(L) for L in bases + [four_pencil(194), five_instance()]]
    ok_iv = all(p.rank_x + p.rank_y <= p.X.shape[0] for p in pairs)
    detail = (f"i {agree}/{total}, ii {invariant}/50, iii {len(checked)}/{len(bases_seen)} bases, "
              f"iv {len(pairs)} pairs")
    assert verdict_line(10, ok_i and ok_ii and ok_iii and ok_iv, detail)


def test_criterion_11_stretch_slice(verdict_line):
    a4 = [[320, "t", 380, 254], ["t", 140, 258, 166], [380, 258, 448, 342], [254, 166, 342, 208]]
    P = Pencil(4, [[list(r) for r in m] for m in FOUR_BY_FOUR_BASE] + [a4])
    t0 = time.monotonic()
    res = eliminate_slice(P, 2, Budget(max_seconds=STRETCH_SECONDS))
    elapsed = time.monotonic() - t0
    if res.status == "Budget":
        # stretch target: reporting Budget is the documented outcome at desk scale
        verdict_line(11, False, f"Budget after {elapsed:.0f}s; stretch target, not required")
        return
    f = res.polynomial
    ok = f is not None and f.degree("t") == 30 and f.evaluate({"t": 194}) == 0
    assert verdict_line(11, ok, f"status {res.status}, {elapsed:.0f}s")
