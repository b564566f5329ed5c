"""Small constructors shared by the test modules."""

from fractions import Fraction
import random

from badproj.symspace import Subspace, SymMatrix, rank


def sym(rows):
    return SymMatrix(rows)


def random_sym(rng: random.Random, n: int, lo: int = -5, hi: int = 5) -> SymMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = Fraction(rng.randint(lo, hi))
    return SymMatrix(rows)


def random_invertible(rng: random.Random, n: int, lo: int = -3, hi: int = 3):
    while True:
        g = [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        if rank(g) == n:
            return g


def random_subspace(rng: random.Random, n: int, k: int) -> Subspace:
    while True:
        mats = [random_sym(rng, n) for _ in range(k)]
        if rank([m.svec() for m in mats]) == k:
            return Subspace(n, mats)


def quad(expr: str, n: int) -> SymMatrix:
    from badproj.cli import parse_quadratic
    return parse_quadratic(expr, n)


def span(n: int, *exprs: str) -> Subspace:
    return Subspace(n, [quad(e, n) for e in exprs])
