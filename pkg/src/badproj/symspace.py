"""Exact rational linear algebra on the space S^n of symmetric matrices.

The svec convention stores the raw matrix entry in every slot
``(0,0), (0,1), ..., (0,n-1), (1,1), ...``; the weight 2 carried by the
off-diagonal slots is applied inside :func:`trace_inner`, so every object in
this module stays rational.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction or ``"p/q"`` string (floats rejected)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal literal {value!r} not allowed; use p/q")
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def svec_index(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def svec_dim(n: int) -> int:
    return n * (n + 1) // 2


# --------------------------------------------------------------------------
# dense exact helpers


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : rows . v = 0}`` (one vector per free column)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of ``rows . v = rhs`` or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        v[p] = row[ncols]
    return v


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(r) for r in zip(*a)]


# --------------------------------------------------------------------------
# symmetric matrices


class SymMatrix:
    """Immutable exact symmetric matrix."""

    __slots__ = ("n", "_rows", "_hash")

    def __init__(self, rows: Sequence[Sequence[object]]):
        n = len(rows)
        if n < 1:
            raise ValueError("matrix size must be at least 1")
        conv = [[as_fraction(x) for x in r] for r in rows]
        if any(len(r) != n for r in conv):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if conv[i][j] != conv[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i},{j})")
        self.n = n
        self._rows = tuple(tuple(r) for r in conv)
        self._hash = None

    # -- constructors
    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values: Sequence[object]) -> "SymMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "SymMatrix":
        """``E_ij + E_ji`` for i != j (the form 2 x_i x_j), ``E_ii`` otherwise."""
        rows = [[0] * n for _ in range(n)]
        rows[i][j] = rows[j][i] = 1
        return cls(rows)

    @classmethod
    def from_svec(cls, n: int, vec: Sequence[object]) -> "SymMatrix":
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(svec_index(n), vec):
            rows[i][j] = rows[j][i] = as_fraction(v)
        return cls(rows)

    @classmethod
    def outer(cls, v: Sequence[object]) -> "SymMatrix":
        v = [as_fraction(x) for x in v]
        return cls([[a * b for b in v] for a in v])

    # -- access
    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def rows(self) -> Matrix:
        return [list(r) for r in self._rows]

    def svec(self) -> list[Fraction]:
        return [self._rows[i][j] for i, j in svec_index(self.n)]

    def to_numpy(self):
        import numpy as np
        return np.array([[float(x) for x in r] for r in self._rows])

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    # -- arithmetic
    def __eq__(self, other):
        return isinstance(other, SymMatrix) and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def _check(self, other: "SymMatrix"):
        if not isinstance(other, SymMatrix) or other.n != self.n:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        self._check(other)
        return SymMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        self._check(other)
        return SymMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "SymMatrix":
        return self.scale(-1)

    def scale(self, c) -> "SymMatrix":
        c = as_fraction(c)
        return SymMatrix([[c * a for a in r] for r in self._rows])

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def matmul(self, other: "SymMatrix") -> Matrix:
        self._check(other)
        return matmul(self._rows, other._rows)

    def apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._rows]

    def congruence(self, g: Sequence[Sequence[Fraction]]) -> "SymMatrix":
        """``G^T A G`` for an n x m matrix G."""
        return SymMatrix(matmul(transpose(g), matmul(self._rows, g)))

    def block(self, rows_idx: Sequence[int], cols_idx: Sequence[int]) -> Matrix:
        return [[self._rows[i][j] for j in cols_idx] for i in rows_idx]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"SymMatrix([{body}])"

    def as_quadratic(self, names: Sequence[str] | None = None) -> str:
        """The form x^T A x written with ``x1..xn`` (or given names)."""
        names = names or [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for i, j in svec_index(self.n):
            c = self._rows[i][j] * (1 if i == j else 2)
            if c == 0:
                continue
            mono = f"{names[i]}^2" if i == j else f"{names[i]}*{names[j]}"
            mag = abs(c)
            body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out


def trace_inner(a: SymMatrix, b: SymMatrix) -> Fraction:
    """``trace(A B)`` computed on the upper triangle."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    n = a.n
    total = Fraction(0)
    for i in range(n):
        total += a[i, i] * b[i, i]
        for j in range(i + 1, n):
            total += 2 * a[i, j] * b[i, j]
    return total


def _weighted_svec(a: SymMatrix) -> list[Fraction]:
    return [a[i, j] * (1 if i == j else 2) for i, j in svec_index(a.n)]


# --------------------------------------------------------------------------
# subspaces


class Subspace:
    """An ordered rational basis A_1..A_k of a linear subspace of S^n.

    ``k = 0`` is permitted so that complements of all of S^n are representable.
    """

    __slots__ = ("n", "basis")

    def __init__(self, n: int, basis: Iterable[SymMatrix]):
        basis = tuple(basis)
        if n < 1:
            raise ValueError("n must be at least 1")
        for b in basis:
            if b.n != n:
                raise ValueError("basis matrix of the wrong size")
        if len(basis) > svec_dim(n):
            raise ValueError("too many basis elements")
        if basis and rank([b.svec() for b in basis]) != len(basis):
            raise ValueError("basis is linearly dependent")
        self.n = n
        self.basis = basis

    @property
    def k(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"Subspace(n={self.n}, k={self.k})"

    @classmethod
    def spanned_by(cls, n: int, mats: Iterable[SymMatrix]) -> "Subspace":
        """Subspace spanned by possibly dependent matrices (an independent subset is kept)."""
        keep: list[SymMatrix] = []
        for m in mats:
            if m.is_zero():
                continue
            if rank([b.svec() for b in keep + [m]]) == len(keep) + 1:
                keep.append(m)
        return cls(n, keep)

    def combination(self, coeffs: Sequence[object]) -> SymMatrix:
        if len(coeffs) != self.k:
            raise ValueError("wrong number of coefficients")
        out = SymMatrix.zeros(self.n)
        for c, b in zip(coeffs, self.basis):
            c = as_fraction(c)
            if c:
                out = out + b.scale(c)
        return out

    def coordinates(self, m: SymMatrix) -> list[Fraction] | None:
        """Exact coefficients of ``m`` in the basis, or None if ``m`` is not in the span."""
        if m.n != self.n:
            raise ValueError("dimension mismatch")
        if self.k == 0:
            return [] if m.is_zero() else None
        cols = [b.svec() for b in self.basis]
        rows = [list(r) for r in zip(*cols)]
        return solve(rows, m.svec())

    def contains(self, m: SymMatrix) -> bool:
        return self.coordinates(m) is not None

    def same_span(self, other: "Subspace") -> bool:
        return (self.n == other.n and self.k == other.k
                and all(self.contains(b) for b in other.basis))

    def congruence(self, g: Sequence[Sequence[Fraction]]) -> "Subspace":
        return Subspace(self.n, [b.congruence(g) for b in self.basis])

    def change_basis(self, m: Sequence[Sequence[object]]) -> "Subspace":
        """New basis ``B_i = sum_j M_ij A_j``."""
        return Subspace(self.n, [self.combination(row) for row in m])


def orthogonal_complement(space: Subspace) -> Subspace:
    """Basis of ``{Y : trace(A_i Y) = 0 for all i}``."""
    n = space.n
    rows = [_weighted_svec(b) for b in space.basis]
    null = nullspace(rows, svec_dim(n))
    return Subspace(n, [SymMatrix.from_svec(n, v) for v in null])


# --------------------------------------------------------------------------
# exact PSD test


class PsdStatus(enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    POSITIVE_SEMIDEFINITE = "positive-semidefinite"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class Factorization:
    """``A[perm[a], perm[b]] = (T D T^T)[a, b]`` with T unit lower triangular.

    ``blocks`` lists the diagonal blocks of D in order as 1x1 or 2x2 matrices;
    the remaining trailing block of D is zero.
    """

    perm: tuple[int, ...]
    lower: tuple[tuple[Fraction, ...], ...]
    blocks: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def d_matrix(self) -> Matrix:
        n = len(self.perm)
        d = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for blk in self.blocks:
            for a, row in enumerate(blk):
                for b, v in enumerate(row):
                    d[k + a][k + b] = v
            k += len(blk)
        return d

    def reconstruct(self) -> Matrix:
        t = [list(r) for r in self.lower]
        pap = matmul(matmul(t, self.d_matrix()), transpose(t))
        n = len(self.perm)
        out = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                out[self.perm[a]][self.perm[b]] = pap[a][b]
        return out

    def pivot_size(self) -> int:
        return sum(len(b) for b in self.blocks)


@dataclass(frozen=True)
class PsdReport:
    status: PsdStatus
    rank: int
    kernel_basis: tuple[tuple[Fraction, ...], ...]
    factorization: Factorization

    @property
    def is_psd(self) -> bool:
        return self.status is not PsdStatus.INDEFINITE


def _ldl(a: SymMatrix) -> tuple[Factorization, bool]:
    n = a.n
    w = a.rows()
    perm = list(range(n))
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    blocks = []
    psd = True
    k = 0

    def swap(i, j):
        if i == j:
            return
        w[i], w[j] = w[j], w[i]
        for r in w:
            r[i], r[j] = r[j], r[i]
        perm[i], perm[j] = perm[j], perm[i]
        # permute the already computed multiplier columns
        for c in range(k):
            t[i][c], t[j][c] = t[j][c], t[i][c]

    while k < n:
        diag = [(w[i][i], i) for i in range(k, n)]
        pos = [d for d in diag if d[0] > 0]
        neg = [d for d in diag if d[0] < 0]
        if pos or neg:
            if pos:
                _, p = max(pos)
            else:
                psd = False
                _, p = min(neg)
            swap(k, p)
            d = w[k][k]
            col = [w[i][k] for i in range(n)]
            for i in range(k + 1, n):
                t[i][k] = col[i] / d
            for i in range(k + 1, n):
                if col[i]:
                    li = col[i] / d
                    for j in range(k + 1, n):
                        if col[j]:
                            w[i][j] -= li * col[j]
            for i in range(k, n):
                w[i][k] = w[k][i] = Fraction(0)
            blocks.append(((d,),))
            k += 1
            continue
        off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if w[i][j] != 0), None)
        if off is None:
            break
        psd = False
        i0, j0 = off
        swap(k, i0)
        swap(k + 1, j0)
        e = [[w[k][k], w[k][k + 1]], [w[k + 1][k], w[k + 1][k + 1]]]
        det = e[0][0] * e[1][1] - e[0][1] * e[1][0]
        inv = [[e[1][1] / det, -e[0][1] / det], [-e[1][0] / det, e[0][0] / det]]
        cols = [[w[i][k], w[i][k + 1]] for i in range(n)]
        mult = {}
        for i in range(k + 2, n):
            u, v = cols[i]
            mult[i] = (u * inv[0][0] + v * inv[1][0], u * inv[0][1] + v * inv[1][1])
            t[i][k], t[i][k + 1] = mult[i]
        for i in range(k + 2, n):
            for j in range(k + 2, n):
                w[i][j] -= mult[i][0] * cols[j][0] + mult[i][1] * cols[j][1]
        for i in range(k, n):
            for c in (k, k + 1):
                if i not in (k, k + 1):
                    w[i][c] = w[c][i] = Fraction(0)
        blocks.append(((e[0][0], e[0][1]), (e[1][0], e[1][1])))
        k += 2
    fac = Factorization(tuple(perm), tuple(tuple(r) for r in t), tuple(blocks))
    return fac, psd


def psd_rank_exact(a: SymMatrix) -> PsdReport:
    """Exact PSD status, rank and kernel of a rational symmetric matrix."""
    fac, psd = _ldl(a)
    n = a.n
    r = fac.pivot_size()
    # kernel: columns r.. of P^T T^{-T}
    t = fac.lower
    kernel = []
    for j in range(r, n):
        z = [Fraction(0)] * n
        z[j] = Fraction(1)
        for i in range(n - 1, -1, -1):
            if i == j:
                continue
            z[i] = -sum((t[m][i] * z[m] for m in range(i + 1, n)), Fraction(0)) if i < j else Fraction(0)
        v = [Fraction(0)] * n
        for idx, p in enumerate(fac.perm):
            v[p] = z[idx]
        kernel.append(tuple(v))
    if not psd:
        status = PsdStatus.INDEFINITE
    elif r == n:
        status = PsdStatus.POSITIVE_DEFINITE
    else:
        status = PsdStatus.POSITIVE_SEMIDEFINITE
    return PsdReport(status, r, tuple(kernel), fac)


def congruence_frame(a: SymMatrix) -> tuple[Matrix, PsdReport]:
    """Invertible G with ``G^T A G`` block diagonal (D of the factorization)."""
    rep = psd_rank_exact(a)
    n = a.n
    t = rep.factorization.lower
    # solve T^T Z = I column by column, then undo the permutation
    g = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        z = [Fraction(0)] * n
        z[j] = Fraction(1)
        for i in range(j - 1, -1, -1):
            z[i] = -sum((t[m][i] * z[m] for m in range(i + 1, j + 1)), Fraction(0))
        for idx, p in enumerate(rep.factorization.perm):
            g[p][j] = z[idx]
    return g, rep


@dataclass(frozen=True)
class Normalization:
    frame: tuple[tuple[Fraction, ...], ...]   # G, columns are the new coordinates
    space: Subspace                           # basis G^T A_i G
    rank: int                                 # s
    pivots: tuple[Fraction, ...]              # d_1..d_s > 0


def congruence_normalize(space: Subspace, q: SymMatrix) -> Normalization:
    """Move the PSD element ``q`` of ``space`` to ``diag(d_1..d_s, 0..0)``."""
    if space.coordinates(q) is None:
        raise ValueError("q is not in the span of the subspace")
    g, rep = congruence_frame(q)
    if not rep.is_psd:
        raise ValueError("q is not positive semidefinite")
    pivots = tuple(b[0][0] for b in rep.factorization.blocks)
    return Normalization(tuple(tuple(r) for r in g), space.congruence(g), rep.rank, pivots)


# --------------------------------------------------------------------------
# Pluecker coordinates


@dataclass(frozen=True)
class PluckerVector:
    subsets: tuple[tuple[int, ...], ...]     # k-subsets of svec slots, lexicographic
    coordinates: tuple[Fraction, ...]
    slots: tuple[tuple[int, int], ...]

    def proportional_to(self, other: "PluckerVector") -> bool:
        if self.subsets != other.subsets:
            return False
        ratio = None
        for a, b in zip(self.coordinates, other.coordinates):
            if (a == 0) != (b == 0):
                return False
            if a:
                r = a / b
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return False
        return ratio is not None


def plucker(space: Subspace) -> PluckerVector:
    """All k x k minors of the k x n(n+1)/2 svec matrix of the basis."""
    slots = svec_index(space.n)
    rows = [b.svec() for b in space.basis]
    subsets = tuple(itertools.combinations(range(len(slots)), space.k))
    coords = tuple(determinant([[r[c] for c in sub] for r in rows]) for sub in subsets)
    return PluckerVector(subsets, coords, tuple(slots))
