"""Critical equations of a subspace and their analysis.

For a subspace L with basis A_1..A_k the unknowns are the coordinates x of
``X = sum x_i A_i`` and a symmetric Y constrained to the orthogonal
complement.  The system asks for ``X Y = 0`` and optionally the rank bounds
``rank X <= s`` and ``rank Y <= n - s`` (as vanishing minors).

Points live in ``P(L) x P(L^perp)``.  Instead of saturating by the two
irrelevant ideals, :func:`check` covers the product of projective spaces by
stratified affine charts: for the x side chart ``i`` sets ``x_i = 1`` and
``x_j = 0`` for ``j < i`` (likewise for y).  These charts are pairwise
disjoint, so point counts add up, and dehomogenizing a chart is exactly what
saturation would do on it.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import (Budget, BudgetExceeded, DEGREVLEX, Ideal, Poly, PolyRing, UNLIMITED,
                   groebner, quotient_dimension, substitute)
from .symspace import (SymMatrix, Subspace, as_fraction, matmul, orthogonal_complement,
                       psd_rank_exact, rank, svec_dim, svec_index, trace_inner)


class Mode(enum.Enum):
    AMBIENT_Y = "ambient"
    COORDINATE_Y = "coordinate"


PolyMatrix = list[list[Poly]]


def _poly_det(m: PolyMatrix, ring: PolyRing) -> Poly:
    size = len(m)
    if size == 1:
        return m[0][0]
    if size == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    out = ring.zero()
    for j in range(size):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _poly_det(minor, ring)
        out = out + term if j % 2 == 0 else out - term
    return out


def poly_minors(m: PolyMatrix, size: int, ring: PolyRing) -> list[Poly]:
    """All ``size x size`` minors, rows and columns in lexicographic order."""
    n = len(m)
    out = []
    for rows in itertools.combinations(range(n), size):
        for cols in itertools.combinations(range(n), size):
            out.append(_poly_det([[m[i][j] for j in cols] for i in rows], ring))
    return out


def _linear_matrix(ring: PolyRing, names: Sequence[str], mats: Sequence[SymMatrix]) -> PolyMatrix:
    n = mats[0].n
    out = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for name, a in zip(names, mats):
        v = ring.gen(name)
        for i in range(n):
            for j in range(n):
                if a[i, j]:
                    out[i][j] = out[i][j] + v * a[i, j]
    return out


def _poly_matmul(a: PolyMatrix, b: PolyMatrix, ring: PolyRing) -> PolyMatrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero()
            for t in range(n):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True)
class CriticalSystem:
    L: Subspace
    s: int | None
    mode: Mode
    ring: PolyRing
    x_vars: tuple[str, ...]
    y_vars: tuple[str, ...]
    y_basis: tuple[SymMatrix, ...] | None     # basis of L^perp in coordinate mode
    X: tuple[tuple[Poly, ...], ...]
    Y: tuple[tuple[Poly, ...], ...]
    complementarity: tuple[Poly, ...]
    rank_x_minors: tuple[Poly, ...]
    rank_y_minors: tuple[Poly, ...]
    membership: tuple[Poly, ...]

    @property
    def generators(self) -> list[Poly]:
        seen, out = set(), []
        for g in (self.membership + self.complementarity
                  + self.rank_x_minors + self.rank_y_minors):
            if g.is_zero():
                continue
            key = g.primitive()
            if key in seen:
                continue
            seen.add(key)
            out.append(g)
        return out

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.generators)

    def y_matrix_at(self, values: Sequence[Fraction]) -> SymMatrix:
        """Ambient matrix Y for given values of the y variables."""
        n = self.L.n
        if self.mode is Mode.COORDINATE_Y:
            out = SymMatrix.zeros(n)
            for c, b in zip(values, self.y_basis):
                if c:
                    out = out + b.scale(c)
            return out
        return SymMatrix.from_svec(n, values)

    def to_macaulay2(self) -> str:
        """Ring declaration and generator list in Macaulay2 syntax."""
        names = ",".join(self.ring.variables)
        gens = ",\n  ".join(str(g).replace("^", "^") for g in self.generators)
        return f"R = QQ[{names}];\nI = ideal(\n  {gens}\n);\n"


def default_mode(L: Subspace) -> Mode:
    # a basis of L^perp never has more variables than the ambient Y
    return Mode.COORDINATE_Y


def build_system(L: Subspace, s: int | None = None, mode: Mode | str | None = None) -> CriticalSystem:
    n = L.n
    if s is not None and not (0 < s < n):
        raise ValueError(f"rank parameter must satisfy 0 < s < {n}, got {s}")
    if mode is None:
        mode = default_mode(L)
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    x_vars = tuple(f"x{i + 1}" for i in range(L.k))
    if mode is Mode.COORDINATE_Y:
        comp = orthogonal_complement(L)
        y_basis = comp.basis
        y_vars = tuple(f"y{i + 1}" for i in range(len(y_basis)))
    else:
        y_basis = None
        y_vars = tuple(f"y{i + 1}{j + 1}" for i, j in svec_index(n))
    ring = PolyRing(x_vars + y_vars)
    X = _linear_matrix(ring, x_vars, L.basis)
    if mode is Mode.COORDINATE_Y:
        Y = _linear_matrix(ring, y_vars, y_basis) if y_basis else [[ring.zero()] * n for _ in range(n)]
        membership: list[Poly] = []
    else:
        Y = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for (i, j), name in zip(svec_index(n), y_vars):
            Y[i][j] = Y[j][i] = ring.gen(name)
        membership = []
        for a in L.basis:
            f = ring.zero()
            for (i, j), name in zip(svec_index(n), y_vars):
                c = a[i, j] * (1 if i == j else 2)
                if c:
                    f = f + ring.gen(name) * c
            membership.append(f)
    XY = _poly_matmul(X, Y, ring)
    comp_gens = [XY[i][j] for i in range(n) for j in range(n)]
    if s is None:
        mx, my = [], []
    else:
        mx = poly_minors(X, s + 1, ring)
        my = poly_minors(Y, n - s + 1, ring)
    return CriticalSystem(
        L=L, s=s, mode=mode, ring=ring, x_vars=x_vars, y_vars=y_vars, y_basis=y_basis,
        X=tuple(tuple(r) for r in X), Y=tuple(tuple(r) for r in Y),
        complementarity=tuple(comp_gens), rank_x_minors=tuple(mx),
        rank_y_minors=tuple(my), membership=tuple(membership))


# --------------------------------------------------------------------------
# chart analysis


class Outcome(enum.Enum):
    EMPTY = "Empty"
    FINITE = "Finite"
    POSITIVE_DIMENSIONAL = "PositiveDimensional"
    BUDGET = "Budget"


@dataclass(frozen=True)
class CriticalPoint:
    x: tuple[Fraction, ...]
    Y: SymMatrix
    y: tuple[Fraction, ...]


@dataclass(frozen=True)
class ChartResult:
    x_chart: int
    y_chart: int
    count: int | None
    krull_dimension: int
    free_variables: tuple[str, ...]


@dataclass(frozen=True)
class CriticalReport:
    outcome: Outcome
    saturated: bool
    count: int | None = None
    points: tuple[CriticalPoint, ...] = ()
    witness: ChartResult | None = None
    charts: tuple[ChartResult, ...] = ()
    reason: str = ""


def _chart_bindings(vars_: Sequence[str], i: int) -> dict:
    b = {v: Fraction(0) for v in vars_[:i]}
    b[vars_[i]] = Fraction(1)
    return b


def _restrict(gens: Sequence[Poly], bind: dict, free: Sequence[str]):
    """Substitute a chart; returns (ring or None, polys, contradiction)."""
    sub = PolyRing(free) if free else None
    out = []
    for g in gens:
        used = g.variables()
        h = substitute(g, {v: c for v, c in bind.items() if v in used}) if used & set(bind) else g
        if h.is_constant():
            if h.is_zero():
                continue
            return sub, [sub.one()] if sub else [], True
        out.append(h.to_ring(sub))
    return sub, out, False


def _linear_point(gb, ring: PolyRing) -> dict | None:
    """Read the unique point off a reduced GB made of linear polynomials."""
    point = {}
    for g in gb.generators:
        if g.total_degree() != 1:
            return None
        lead, c = g.leading_term(DEGREVLEX)
        var = ring.variables[lead.index(1)]
        rest = g - ring.gen(var) * c
        if rest.variables():
            return None
        point[var] = -rest.constant_value() / c
    if len(point) != ring.nvars:
        return None
    return point


class _Clock:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.deadline = budget.deadline()

    def sub(self) -> Budget:
        if self.deadline is None:
            return self.budget
        left = self.deadline - time.monotonic()
        if left <= 0:
            raise BudgetExceeded("time budget exhausted")
        return Budget(self.budget.max_degree, self.budget.max_basis, left)


def _side_bases(sys: CriticalSystem, side: str, clock: _Clock):
    """Per chart GB of the rank minors of one side, in that side's variables only."""
    vars_ = sys.x_vars if side == "x" else sys.y_vars
    minors = sys.rank_x_minors if side == "x" else sys.rank_y_minors
    minors = [g for g in minors if not g.is_zero()]
    out = []
    for i in range(len(vars_)):
        bind = _chart_bindings(vars_, i)
        free = [v for v in vars_ if v not in bind]
        ring, gens, bad = _restrict(minors, bind, free)
        if bad:
            out.append(None)
        elif ring is None or not gens:
            out.append([])
        else:
            gb = groebner(Ideal(ring, gens), DEGREVLEX, clock.sub())
            out.append(None if gb.is_unit() else list(gb.generators))
    return out


def chart_ideal(sys: CriticalSystem, xi: int, yj: int, extra: Sequence[Poly] = ()):
    """The full system restricted to chart (xi, yj): (ideal or None, bindings, contradiction)."""
    bind = _chart_bindings(sys.x_vars, xi)
    bind.update(_chart_bindings(sys.y_vars, yj))
    free = [v for v in sys.ring.variables if v not in bind]
    ring, gens, bad = _restrict(list(sys.generators) + list(extra), bind, free)
    return (Ideal(ring, gens) if ring is not None else None), bind, bad


def check(sys: CriticalSystem, budget: Budget = UNLIMITED, early_exit: bool = False) -> CriticalReport:
    """Decide whether the critical variety is empty, finite or positive dimensional.

    Each side's rank minors are first solved on their own (they only involve
    that side's variables); a chart pair is examined with the full system only
    when neither side is already empty on it.
    """
    clock = _Clock(budget)
    charts: list[ChartResult] = []
    points: list[CriticalPoint] = []
    total = 0
    try:
        xs = _side_bases(sys, "x", clock)
        ys = _side_bases(sys, "y", clock)
        for xi in range(len(sys.x_vars)):
            if xs[xi] is None:
                continue
            for yj in range(len(sys.y_vars)):
                if ys[yj] is None:
                    continue
                bind = _chart_bindings(sys.x_vars, xi)
                bind.update(_chart_bindings(sys.y_vars, yj))
                free = [v for v in sys.ring.variables if v not in bind]
                bilinear = [g for g in sys.complementarity + sys.membership if not g.is_zero()]
                ring, gens, bad = _restrict(bilinear, bind, free)
                if bad:
                    continue
                if ring is None:
                    # every variable fixed: the chart is a single candidate point
                    ok = all(g.evaluate(bind) == 0 for g in sys.generators)
                    if ok:
                        total += 1
                        points.append(_make_point(sys, dict(bind)))
                        charts.append(ChartResult(xi, yj, 1, 0, ()))
                    continue
                seeded = [p.to_ring(ring) for p in xs[xi] + ys[yj]] + gens
                gb = groebner(Ideal(ring, seeded), DEGREVLEX, clock.sub())
                dim = quotient_dimension(gb)
                if dim.unit:
                    continue
                res = ChartResult(xi, yj, dim.count, dim.krull_dimension, dim.free_variables)
                charts.append(res)
                if not dim.zero_dimensional:
                    return CriticalReport(Outcome.POSITIVE_DIMENSIONAL, True, witness=res,
                                          charts=tuple(charts))
                total += dim.count
                lp = _linear_point(gb, ring)
                if lp is not None:
                    vals = dict(bind)
                    vals.update(lp)
                    points.append(_make_point(sys, vals))
                if early_exit:
                    return CriticalReport(Outcome.FINITE, True, None, tuple(points), None,
                                          tuple(charts), "stopped at first nonempty chart")
    except BudgetExceeded as exc:
        return CriticalReport(Outcome.BUDGET, False, charts=tuple(charts), reason=exc.reason)
    if total == 0:
        return CriticalReport(Outcome.EMPTY, True, count=0, charts=tuple(charts))
    return CriticalReport(Outcome.FINITE, True, count=total, points=tuple(points), charts=tuple(charts))


def _make_point(sys: CriticalSystem, vals: dict) -> CriticalPoint:
    x = tuple(Fraction(vals[v]) for v in sys.x_vars)
    y = tuple(Fraction(vals[v]) for v in sys.y_vars)
    return CriticalPoint(x, sys.y_matrix_at(y), y)


def projection_contains(sys: CriticalSystem, form: Poly, budget: Budget = UNLIMITED) -> bool:
    """True when ``form`` (in the x variables) vanishes on the whole critical variety.

    Checked chart by chart: ``form`` lies in the radical of a chart ideal I
    iff ``I + <1 - w form>`` is the unit ideal.
    """
    if form.variables() - set(sys.x_vars):
        raise ValueError("form must only involve x variables")
    clock = _Clock(budget)
    xs = _side_bases(sys, "x", clock)
    ys = _side_bases(sys, "y", clock)
    bilinear = [g for g in sys.complementarity + sys.membership if not g.is_zero()]
    for xi in range(len(sys.x_vars)):
        if xs[xi] is None:
            continue
        for yj in range(len(sys.y_vars)):
            if ys[yj] is None:
                continue
            bind = _chart_bindings(sys.x_vars, xi)
            bind.update(_chart_bindings(sys.y_vars, yj))
            free = ["_w"] + [v for v in sys.ring.variables if v not in bind]
            ring, gens, bad = _restrict(bilinear, bind, free)
            if bad:
                continue
            f = substitute(form, {v: c for v, c in bind.items() if v in form.variables()})
            seeded = [p.to_ring(ring) for p in xs[xi] + ys[yj]] + gens
            seeded.append(ring.one() - ring.gen("_w") * f.to_ring(ring))
            gb = groebner(Ideal(ring, seeded), DEGREVLEX, clock.sub())
            if not gb.is_unit():
                return False
    return True


def point_ideal(point: CriticalPoint, x_names: Sequence[str] | None = None) -> list[str]:
    """Linear generators of the bihomogeneous maximal ideal of a point.

    The x part uses the last nonzero coordinate as reference; Y is written in
    ambient entries ``y_ij`` with reference ``y_nn`` (or the last nonzero entry).
    """
    from .poly import PolyRing as _R
    k = len(point.x)
    x_names = list(x_names or [f"x{i + 1}" for i in range(k)])
    n = point.Y.n
    y_names = [f"y{i + 1}{j + 1}" for i, j in svec_index(n)]
    ring = _R(x_names + y_names)
    out = []
    for names, values in ((x_names, list(point.x)), (y_names, point.Y.svec())):
        ref = max(i for i, v in enumerate(values) if v != 0)
        for i, v in enumerate(values):
            if i == ref:
                continue
            # values[ref] * z_i - v * z_ref, made primitive
            f = ring.gen(names[i]) * values[ref] - ring.gen(names[ref]) * v
            out.append(str(f.primitive()))
    return out


# --------------------------------------------------------------------------
# exact point verification


@dataclass(frozen=True)
class PointCheck:
    valid: bool
    x_rank: int
    y_rank: int
    x_psd: bool
    y_psd: bool
    failures: tuple[str, ...] = ()


def check_point(L: Subspace, x: Sequence[object], Y: SymMatrix, s: int) -> PointCheck:
    """Exact verification of a candidate critical point, with PSD flags reported separately."""
    n = L.n
    fails = []
    x = [as_fraction(v) for v in x]
    if len(x) != L.k:
        raise ValueError("x has the wrong length")
    if Y.n != n:
        raise ValueError("Y has the wrong size")
    X = L.combination(x)
    if X.is_zero():
        fails.append("X is zero")
    if Y.is_zero():
        fails.append("Y is zero")
    rx = psd_rank_exact(X)
    ry = psd_rank_exact(Y)
    if rx.rank > s:
        fails.append(f"rank X = {rx.rank} > {s}")
    if ry.rank > n - s:
        fails.append(f"rank Y = {ry.rank} > {n - s}")
    prod = X.matmul(Y)
    if any(v != 0 for r in prod for v in r):
        fails.append("X Y != 0")
    if any(trace_inner(a, Y) != 0 for a in L.basis):
        fails.append("Y not orthogonal to L")
    return PointCheck(not fails, rx.rank, ry.rank, rx.is_psd, ry.is_psd, tuple(fails))


def verify_point(L: Subspace, x: Sequence[object], Y: SymMatrix, s: int) -> bool:
    return check_point(L, x, Y, s).valid


# --------------------------------------------------------------------------
# normal cycle test


@dataclass(frozen=True)
class NcResult:
    intersects: bool | None       # None when undetermined
    evidence: object = None
    reason: str = ""


def nc_test(L: Subspace, **options) -> NcResult:
    """Does ``L x L^perp`` meet the normal cycle away from zero?

    Equivalent to both L and its complement containing nonzero PSD matrices.
    """
    from .pataki import RankCertainty, spectrahedral_rank
    comp = orthogonal_complement(L)
    left = spectrahedral_rank(L, **options)
    right = spectrahedral_rank(comp, **options)
    reps = (left, right)
    if any(r.certainty is RankCertainty.EXACT and r.value == 0 for r in reps):
        return NcResult(False, reps)
    if all(r.certainty is RankCertainty.EXACT for r in reps):
        return NcResult(True, reps)
    return NcResult(None, reps, reason="a rank is only numeric")
