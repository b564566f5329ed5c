"""Worked example subspaces used by the tests, the README and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .symspace import SymMatrix, Subspace


def _quadric3(c: tuple[int, ...]) -> SymMatrix:
    """Coefficients of x1^2, x1x2, x1x3, x2^2, x2x3, x3^2."""
    a11, a12, a13, a22, a23, a33 = (Fraction(v) for v in c)
    return SymMatrix([[a11, a12 / 2, a13 / 2],
                      [a12 / 2, a22, a23 / 2],
                      [a13 / 2, a23 / 2, a33]])


def closedness_example() -> Subspace:
    """span(x1^2 + x2^2, x1 x3): a bad subspace of S^3 with s = 1."""
    return Subspace(3, [SymMatrix.diag([1, 1, 0]),
                        SymMatrix([[0, 0, Fraction(1, 2)], [0, 0, 0], [Fraction(1, 2), 0, 0]])])


def three_quadrics() -> Subspace:
    """Three ternary quadrics whose span contains the square of 5x1 + 7x2 + 7x3."""
    return Subspace(3, [
        _quadric3((-52, 412, 472, 462, 1164, 750)),
        _quadric3((-101, 435, 480, 518, 1307, 853)),
        _quadric3((-55, 362, 482, 434, 1166, 772)),
    ])


def rank_gap_example() -> Subspace:
    """span(x1^2, x2^2 + 2x1x3, 2x2x3): s(L) = s(L^perp) = 1 in S^3."""
    return Subspace(3, [SymMatrix.unit(3, 0, 0),
                        SymMatrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
                        SymMatrix.unit(3, 1, 2)])


def spanning_disagreement() -> Subspace:
    """span(x1^2 + x2^2, x1 x3) viewed as a counterexample to a spanning heuristic."""
    return closedness_example()


def zero_rank_example() -> Subspace:
    """span(x1x2, x1x3, x2x3): contains no nonzero PSD matrix."""
    return Subspace(3, [SymMatrix.unit(3, 0, 1), SymMatrix.unit(3, 0, 2), SymMatrix.unit(3, 1, 2)])


def pencil_member(t) -> Subspace:
    """span(x1^2, x2^2 + t x1x3); bad exactly when t != 0."""
    t = Fraction(t)
    return Subspace(3, [SymMatrix.unit(3, 0, 0),
                        SymMatrix([[0, 0, t / 2], [0, 1, 0], [t / 2, 0, 0]])])


FOUR_BY_FOUR_BASE = (
    ((180, 112, 205, 131), (112, 88, 131, 96), (205, 131, 228, 152), (131, 96, 152, 104)),
    ((428, 253, 473, 288), (253, 238, 262, 227), (473, 262, 516, 307), (288, 227, 307, 168)),
    ((216, 123, 234, 137), (123, 128, 118, 116), (234, 118, 252, 138), (137, 116, 138, 68)),
)


def four_pencil_matrices(t) -> list[SymMatrix]:
    t = Fraction(t)
    a4 = ((320, t, 380, 254), (t, 140, 258, 166), (380, 258, 448, 342), (254, 166, 342, 208))
    return [SymMatrix(m) for m in FOUR_BY_FOUR_BASE] + [SymMatrix(a4)]


def four_pencil(t=194) -> Subspace:
    """The n = k = 4 pencil; bad at t = 194 with a rank-2 tangency."""
    return Subspace(4, four_pencil_matrices(t))


FOUR_PENCIL_X = (14, -18, 24, 1)
# Y at t = 194 scaled so that y44 = 314
FOUR_PENCIL_Y = ((197, 11, -213, 53), (11, 626, -60, -430),
                 (-213, -60, 234, -24), (53, -430, -24, 314))


def four_pencil_y() -> SymMatrix:
    return SymMatrix(FOUR_PENCIL_Y)


# --------------------------------------------------------------------------
# n = 4, k = 5 instance with a rank gap and a positive dimensional critical variety

def _sym(n, entries) -> SymMatrix:
    rows = [[0] * n for _ in range(n)]
    for (i, j), v in entries.items():
        rows[i][j] = rows[j][i] = v
    return SymMatrix(rows)


CANONICAL_FIVE = (
    _sym(4, {(0, 0): 1}),
    _sym(4, {(1, 1): 1}),
    _sym(4, {(0, 1): 1}),
    _sym(4, {(2, 2): 1, (0, 3): 1}),
    _sym(4, {(2, 3): 1}),
)

# A_i = sum_j FIVE_CHANGE[i][j] * CANONICAL_FIVE[j]
FIVE_CHANGE = (
    (-1, 0, 0, 3, 0),
    (0, -1, 0, 0, 3),
    (0, 0, 1, 2, -1),
    (0, 0, 0, 3, 0),
    (0, 0, 0, 9, 3),
)

FIVE_X = (-1, -1, 0, -2, 1)          # gives diag(1, 1, 0, 0)
FIVE_PLANE = ("3*x1 + 2*x3 + 3*x4 + 9*x5", "3*x2 - x3 + 3*x5")


def five_instance() -> Subspace:
    """Bad subspace of S^4 of dimension 5 with s(L) = 2 and s(L^perp) = 1."""
    return Subspace(4, CANONICAL_FIVE).change_basis(FIVE_CHANGE)


def generic_pair_n2(a: tuple, b: tuple) -> Subspace:
    """span of [[a11,a12],[a12,a22]] and the same for b."""
    return Subspace(2, [SymMatrix([[a[0], a[1]], [a[1], a[2]]]),
                        SymMatrix([[b[0], b[1]], [b[1], b[2]]])])
