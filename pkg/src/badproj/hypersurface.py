"""The bad hypersurface: n = 2 resultant, component catalog, pencils and slices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence
import time

from .critical import (Mode, Outcome, _chart_bindings, _poly_matmul, _restrict, build_system,
                       check, nc_test, poly_minors)
from .pataki import Decision, decide, pataki_range
from .poly import (Budget, BudgetExceeded, Ideal, Poly, PolyRing, UNLIMITED, eliminate,
                   groebner, intersect, substitute)
from .symspace import SymMatrix, Subspace, as_fraction, rank, svec_index


# --------------------------------------------------------------------------
# n = 2


class Closure(enum.Enum):
    CLOSED_POINTED = "closed-pointed"
    FULL_PLANE = "full-plane"
    NOT_CLOSED = "not-closed"


@dataclass(frozen=True)
class Resultant2Report:
    R: Fraction
    classification: Closure
    basis: tuple[SymMatrix, SymMatrix]


def resultant_formula(a11, a12, a22, b11, b12, b22):
    """The seven-term discriminant of the pencil of binary forms a + b."""
    return (a11 ** 2 * b22 ** 2 - 4 * a11 * a12 * b12 * b22 - 2 * a11 * a22 * b11 * b22
            + 4 * a11 * a22 * b12 ** 2 + 4 * a12 ** 2 * b11 * b22
            - 4 * a12 * a22 * b11 * b12 + a22 ** 2 * b11 ** 2)


def resultant2(L: Subspace) -> Resultant2Report:
    if L.n != 2 or L.k != 2:
        raise ValueError("resultant2 needs a two-dimensional subspace of S^2")
    a, b = L.basis
    R = resultant_formula(a[0, 0], a[0, 1], a[1, 1], b[0, 0], b[0, 1], b[1, 1])
    if R > 0:
        cls = Closure.CLOSED_POINTED
    elif R < 0:
        cls = Closure.FULL_PLANE
    else:
        cls = Closure.NOT_CLOSED
    return Resultant2Report(Fraction(R), cls, (a, b))


# --------------------------------------------------------------------------
# component catalog

DEGREE_TABLE: dict[tuple[int, int, int], int] = {
    (2, 2, 1): 2,
    (2, 3, 2): 6,
    (3, 3, 2): 4,
    (4, 3, 1): 6,
    (5, 3, 1): 3,
    (4, 4, 3): 8,
    (4, 4, 2): 30,
    (7, 4, 2): 10,
    (7, 4, 1): 16,
    (5, 4, 2): 42,
}


@dataclass(frozen=True)
class ComponentInfo:
    s: int
    c: int
    index: int
    label: str
    degree: int | None   # None means not in the table


def components(n: int, k: int) -> list[ComponentInfo]:
    """Components of the bad locus in Gr(k, S^n), highest rank first."""
    out = []
    for s in sorted(pataki_range(n, k), reverse=True):
        c = comb(n - s + 1, 2)
        i = k - c
        out.append(ComponentInfo(s, c, i, f"Ch_{i}(X_{s})", DEGREE_TABLE.get((k, n, s))))
    return out


# --------------------------------------------------------------------------
# pencils

PARAM = "t"


class Pencil:
    """Basis matrices whose entries are polynomials in one parameter."""

    def __init__(self, n: int, matrices: Sequence[Sequence[Sequence[object]]], param: str = PARAM):
        self.n = n
        self.param = param
        self.ring = PolyRing([param])
        mats = []
        for m in matrices:
            if len(m) != n or any(len(r) != n for r in m):
                raise ValueError("pencil matrix of the wrong size")
            rows = [[self._entry(v) for v in r] for r in m]
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise ValueError("pencil matrix is not symmetric")
            mats.append(rows)
        self.matrices = mats

    @property
    def k(self) -> int:
        return len(self.matrices)

    def _entry(self, v) -> Poly:
        if isinstance(v, Poly):
            return v.to_ring(self.ring)
        if isinstance(v, str):
            return self.ring.parse(v)
        return self.ring.const(as_fraction(v))

    @classmethod
    def constant(cls, L: Subspace) -> "Pencil":
        return cls(L.n, [b.rows() for b in L.basis])

    def matrices_at(self, t) -> list[SymMatrix]:
        t = as_fraction(t)
        return [SymMatrix([[e.evaluate({self.param: t}) for e in r] for r in m]) for m in self.matrices]

    def at(self, t) -> Subspace | None:
        """The subspace at t, or None when the evaluated basis is dependent."""
        mats = self.matrices_at(t)
        if rank([m.svec() for m in mats]) < len(mats):
            return None
        return Subspace(self.n, mats)


@dataclass(frozen=True)
class Transition:
    lo: Fraction
    hi: Fraction
    before: str
    after: str


@dataclass(frozen=True)
class ScanResult:
    samples: tuple[tuple[Fraction, str], ...]
    skipped: tuple[Fraction, ...]
    transitions: tuple[Transition, ...]


def _decide_outcome(L: Subspace) -> str:
    v = decide(L)
    return v.decision.value


def _nc_outcome(L: Subspace) -> str:
    r = nc_test(L)
    return {True: "intersects", False: "disjoint", None: "Undetermined"}[r.intersects]


def make_predicate(name: str, s: int | None = None, budget: Budget = UNLIMITED,
                   mode: Mode | str | None = None) -> Callable[[Subspace], str]:
    if name == "decide":
        return _decide_outcome
    if name in ("nc_test", "nc"):
        return _nc_outcome
    if name in ("critical_empty", "critical"):
        if s is None:
            raise ValueError("critical_empty needs a rank s")

        def pred(L: Subspace) -> str:
            rep = check(build_system(L, s, mode), budget)
            if rep.outcome is Outcome.BUDGET:
                return "Budget"
            return "empty" if rep.outcome is Outcome.EMPTY else "nonempty"
        return pred
    raise ValueError(f"unknown predicate {name!r}")


def _outcome(P: Pencil, t: Fraction, predicate) -> str | None:
    L = P.at(t)
    if L is None:
        return None
    try:
        return predicate(L)
    except BudgetExceeded:
        return "Budget"


def scan_pencil(P: Pencil, grid: Iterable[object], predicate: Callable[[Subspace], str] | str,
                bisect: object | None = None) -> ScanResult:
    """Evaluate a predicate along the pencil; optionally narrow each flip to width <= bisect."""
    if isinstance(predicate, str):
        predicate = make_predicate(predicate)
    ts = [as_fraction(t) for t in grid]
    if not ts:
        raise ValueError("grid is empty")
    if ts != sorted(ts):
        raise ValueError("grid must be sorted")
    samples, skipped = [], []
    for t in ts:
        out = _outcome(P, t, predicate)
        if out is None:
            skipped.append(t)
        else:
            samples.append((t, out))
    transitions = []
    eps = as_fraction(bisect) if bisect is not None else None
    for (t0, o0), (t1, o1) in zip(samples, samples[1:]):
        if o0 == o1:
            continue
        lo, hi = t0, t1
        if eps is not None:
            while hi - lo > eps:
                mid = (lo + hi) / 2
                om = _outcome(P, mid, predicate)
                if om is None:
                    break
                if om == o0:
                    lo = mid
                else:
                    hi = mid
                    if om != o1:
                        o1 = om
        transitions.append(Transition(lo, hi, o0, o1))
    return ScanResult(tuple(samples), tuple(skipped), tuple(transitions))


def grid_points(a, b, steps: int) -> list[Fraction]:
    """``steps`` equally spaced rationals from a to b inclusive."""
    a, b = as_fraction(a), as_fraction(b)
    if steps < 1:
        raise ValueError("need at least one step")
    if steps == 1:
        return [a]
    return [a + (b - a) * i / (steps - 1) for i in range(steps)]


# --------------------------------------------------------------------------
# symbolic slices


@dataclass(frozen=True)
class ParametricSystem:
    ring: PolyRing
    x_vars: tuple[str, ...]
    y_vars: tuple[str, ...]
    params: tuple[str, ...]
    bilinear: tuple[Poly, ...]      # trace conditions and entries of X Y
    minors: tuple[Poly, ...]


def parametric_system(matrices: Sequence[Sequence[Sequence[Poly]]], params: Sequence[str],
                      s: int | None) -> ParametricSystem:
    """Critical system over a parameter ring with Y in ambient coordinates."""
    n = len(matrices[0])
    k = len(matrices)
    x_vars = tuple(f"x{i + 1}" for i in range(k))
    y_vars = tuple(f"y{i + 1}{j + 1}" for i, j in svec_index(n))
    ring = PolyRing(x_vars + y_vars + tuple(params))
    X = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for name, m in zip(x_vars, matrices):
        for i in range(n):
            for j in range(n):
                X[i][j] = X[i][j] + ring.gen(name) * m[i][j].to_ring(ring)
    Y = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for (i, j), name in zip(svec_index(n), y_vars):
        Y[i][j] = Y[j][i] = ring.gen(name)
    traces = []
    for m in matrices:
        f = ring.zero()
        for (i, j), name in zip(svec_index(n), y_vars):
            f = f + ring.gen(name) * m[i][j].to_ring(ring) * (1 if i == j else 2)
        traces.append(f)
    XY = _poly_matmul(X, Y, ring)
    bil = traces + [XY[i][j] for i in range(n) for j in range(n)]
    mins = []
    if s is not None:
        mins = poly_minors(X, s + 1, ring) + poly_minors(Y, n - s + 1, ring)
    return ParametricSystem(ring, x_vars, y_vars, tuple(params),
                            tuple(g for g in bil if not g.is_zero()),
                            tuple(g for g in mins if not g.is_zero()))


@dataclass(frozen=True)
class SliceResult:
    status: str                      # "ok", "non-principal", "Budget"
    generators: tuple[Poly, ...]
    reason: str = ""

    @property
    def polynomial(self) -> Poly | None:
        return self.generators[0] if self.status == "ok" else None


def _normalize_generator(f: Poly) -> Poly:
    p = f.primitive()
    lead, c = p.leading_term()
    return p if c > 0 else -p


def eliminate_critical(system: ParametricSystem, budget: Budget = UNLIMITED) -> SliceResult:
    """Ideal of the projection of the critical variety to parameter space.

    The product of projective spaces is covered by stratified charts; the
    projection's ideal is the intersection of the per-chart elimination ideals.
    """
    deadline = budget.deadline()

    def sub_budget():
        if deadline is None:
            return budget
        left = deadline - time.monotonic()
        if left <= 0:
            raise BudgetExceeded("time budget exhausted")
        return Budget(budget.max_degree, budget.max_basis, left)

    gens = list(system.bilinear) + list(system.minors)
    pring = PolyRing(system.params)
    acc: Ideal | None = None
    try:
        for xi in range(len(system.x_vars)):
            for yj in range(len(system.y_vars)):
                bind = _chart_bindings(system.x_vars, xi)
                bind.update(_chart_bindings(system.y_vars, yj))
                free = [v for v in system.ring.variables if v not in bind]
                ring, chart_gens, bad = _restrict(gens, bind, free)
                if bad:
                    continue
                drop = [v for v in free if v not in system.params]
                if not drop:
                    part = Ideal(pring, [g.to_ring(pring) for g in chart_gens])
                else:
                    part = eliminate(Ideal(ring, chart_gens), drop, sub_budget())
                    part = Ideal(pring, [g.to_ring(pring) for g in part.generators])
                if part.is_unit():
                    continue
                acc = part if acc is None else intersect(acc, part, sub_budget())
        if acc is None:
            return SliceResult("ok", (pring.one(),), "critical variety is empty")
        gb = groebner(acc, budget=sub_budget())
        out = tuple(_normalize_generator(g) for g in gb.generators)
    except BudgetExceeded as exc:
        return SliceResult("Budget", (), exc.reason)
    if len(out) == 1:
        return SliceResult("ok", out)
    return SliceResult("non-principal", out)


def eliminate_slice(P: Pencil, s: int, budget: Budget = UNLIMITED) -> SliceResult:
    """Univariate f(t) cutting out the parameters where the rank-s critical system is nonempty."""
    if not (0 < s < P.n):
        raise ValueError("rank parameter out of range")
    return eliminate_critical(parametric_system(P.matrices, [P.param], s), budget)


def symbolic_n2_system() -> ParametricSystem:
    """n = k = 2 with symbolic basis entries a11..a22, b11..b22."""
    names = ["a11", "a12", "a22", "b11", "b12", "b22"]
    ring = PolyRing(names)
    g = {v: ring.gen(v) for v in names}
    A = [[g["a11"], g["a12"]], [g["a12"], g["a22"]]]
    B = [[g["b11"], g["b12"]], [g["b12"], g["b22"]]]
    return parametric_system([A, B], names, 1)
