"""Good/bad decisions for subspaces of S^n with exact certificates.

The spectrahedral rank s(L) is found by facial reduction.  Every step is
driven by the numeric solver and then rebuilt in exact arithmetic: reducing
certificates Y are rationalized inside the exact subspace cut out by their
rationalized kernel, faces are restricted by exact congruence, and the final
witness is checked with the exact LDL^T test.  A rank is reported as exact
only when a witness of rank m sits on a face of size m reached by exact
reducers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import sdp
from .symspace import (Matrix, PsdStatus, SymMatrix, Subspace, congruence_normalize, matmul,
                       nullspace, orthogonal_complement, psd_rank_exact, rank, solve,
                       svec_index, trace_inner, transpose)


class RankCertainty(enum.Enum):
    EXACT = "Exact"
    NUMERIC_ONLY = "NumericOnly"


@dataclass(frozen=True)
class ReductionStep:
    frame: tuple[tuple[Fraction, ...], ...]      # n x m, columns span the face before the step
    Y: SymMatrix                                  # PSD, nonzero, orthogonal to the face subspace
    kernel: tuple[tuple[Fraction, ...], ...]      # m x m', columns span ker Y

    @property
    def size_before(self) -> int:
        return self.Y.n

    @property
    def size_after(self) -> int:
        return len(self.kernel[0]) if self.kernel else 0


@dataclass(frozen=True)
class RankReport:
    s: int
    witness: SymMatrix | None
    chain: tuple[ReductionStep, ...]
    certainty: RankCertainty
    zero_certificate: SymMatrix | None = None     # PD matrix in the complement of the last face
    numeric_estimate: int | None = None
    notes: tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        return self.certainty is RankCertainty.EXACT

    @property
    def value(self) -> int:
        return self.s


@dataclass(frozen=True)
class RankOptions:
    denominator_bound: int = 10 ** 4
    max_denominator: int = 10 ** 8
    rel_tol: float = 1e-6
    slice_tol: float = 1e-7
    max_steps: int = 20


# --------------------------------------------------------------------------
# rationalization helpers


def _bounds(opts: RankOptions) -> list[int]:
    """Denominator bounds tried in turn: small ones first, then the default, escalating."""
    out = [10, 100, 1000]
    out = [d for d in out if d < opts.denominator_bound]
    d = opts.denominator_bound
    while d < opts.max_denominator:
        out.append(d)
        d *= 100
    out.append(opts.max_denominator)
    return out


def rationalize(values: Sequence[float], bound: int) -> list[Fraction]:
    """Continued-fraction rounding of each entry with denominators at most ``bound``."""
    return [Fraction(float(v)).limit_denominator(bound) for v in values]


def common_denominators(values: np.ndarray, tol: float, max_den: int, limit: int = 8) -> list[list[Fraction]]:
    """Roundings of all entries to a shared denominator d, smallest d first.

    Kept when every entry moves by at most ``tol`` (absolute).  Kernel rows of
    interior-point reducers are only accurate to about sqrt(gap), so a small
    common denominator is a better guess than rounding each entry on its own.
    """
    flat = np.asarray(values, dtype=float).ravel()
    if flat.size == 0:
        return []
    ds = np.arange(1, max_den + 1, dtype=float)
    scaled = np.outer(ds, flat)
    err = np.abs(scaled - np.round(scaled)).max(axis=1) / ds
    out = []
    for idx in np.nonzero(err <= tol)[0][:limit]:
        d = int(ds[idx])
        out.append([Fraction(int(round(d * v)), d) for v in flat])
    return out


def _numeric_rref(rows: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Row-reduced basis of the row space with complete pivoting.

    Pivot columns are picked by magnitude, so tiny perturbations of zero
    entries never become pivots; the result has an identity in its pivot
    columns.
    """
    a = np.array(rows, dtype=float)
    nrows, ncols = a.shape
    pivots = []
    used_rows = []
    for _ in range(nrows):
        mask = np.ones_like(a, dtype=bool)
        mask[used_rows, :] = False
        mask[:, pivots] = False
        sub = np.where(mask, np.abs(a), -1.0)
        i, c = np.unravel_index(int(np.argmax(sub)), a.shape)
        if sub[i, c] < tol:
            break
        a[i] /= a[i, c]
        for r in range(nrows):
            if r != i:
                a[r] -= a[r, c] * a[i]
        pivots.append(int(c))
        used_rows.append(int(i))
    order = sorted(range(len(pivots)), key=lambda t: pivots[t])
    return a[[used_rows[t] for t in order]]


def _exact_projection(c: Sequence[Fraction], basis: list[list[Fraction]]) -> list[Fraction]:
    """Orthogonal projection of c onto span(basis) in exact arithmetic."""
    if not basis:
        return [Fraction(0)] * len(c)
    gram = [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in basis] for u in basis]
    rhs = [sum((a * b for a, b in zip(u, c)), Fraction(0)) for u in basis]
    coef = solve(gram, rhs)
    out = [Fraction(0)] * len(c)
    for k, u in zip(coef, basis):
        for i, v in enumerate(u):
            out[i] += k * v
    return out


def _numeric_coordinates(target: np.ndarray, mats: Sequence[SymMatrix]) -> np.ndarray:
    n = target.shape[0]
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    S = np.array([m.to_numpy()[iu] * w for m in mats]).T
    c, *_ = np.linalg.lstsq(S, target[iu] * w, rcond=None)
    return c


def _combine(mats: Sequence[SymMatrix], coeffs: Sequence[Fraction], n: int) -> SymMatrix:
    out = SymMatrix.zeros(n)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


def _kernel_candidates(numeric: np.ndarray, rel_tol: float):
    """Candidate kernels of a nearly singular PSD matrix, most plausible first.

    The thresholded rank comes first, then the other ranks ordered by the
    size of the eigenvalue gap that separates them.
    """
    w, V = np.linalg.eigh((numeric + numeric.T) / 2)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    m = len(w)
    est = sdp.estimate_rank(numeric, rel_tol)
    floor = max(abs(w[0]), 1.0) * 1e-15
    ranks = [est.rank]
    gaps = []
    for r in range(1, m):
        if r == est.rank:
            continue
        gaps.append((max(w[r - 1], floor) / max(w[r], floor), r))
    ranks += [r for _, r in sorted(gaps, reverse=True)]
    return [(r, V[:, r:]) for r in ranks if r > 0]


def rational_psd_near(numeric: np.ndarray, mats: Sequence[SymMatrix], opts: RankOptions,
                      require_pd: bool = False) -> SymMatrix | None:
    """An exact PSD nonzero combination of ``mats`` close to ``numeric``.

    A candidate kernel is rationalized first; coefficients are then rounded
    and projected exactly onto the combinations whose kernel contains it, so
    the exact matrix keeps the numeric rank.  Every candidate is checked with
    the exact PSD test before it is returned.
    """
    if not mats:
        return None
    n = mats[0].n
    scale = np.abs(numeric).max()
    if scale == 0:
        return None
    numeric = numeric / scale
    coeffs = _numeric_coordinates(numeric, mats)
    coeffs = coeffs / np.abs(coeffs).max()
    cands = [(n, np.zeros((n, 0)))] if require_pd else _kernel_candidates(numeric, opts.rel_tol)
    for r, kern in cands:
        rr = _numeric_rref(kern.T) if kern.shape[1] else np.zeros((0, n))
        if rr.shape[0] != kern.shape[1]:
            continue
        guesses: list[tuple[list[list[Fraction]] | None, int]] = []
        if kern.shape[1]:
            for tol in (1e-9, 1e-6, 1e-3):
                for flat in common_denominators(rr, tol, 10 ** 4):
                    rows_k = [flat[i * n:(i + 1) * n] for i in range(rr.shape[0])]
                    guesses += [(rows_k, b) for b in _bounds(opts)[:4]]
            guesses += [([rationalize(row, b) for row in rr], b) for b in _bounds(opts)]
        else:
            guesses = [(None, b) for b in _bounds(opts)]
        tried = set()
        for K, bound in guesses:
            key = (None if K is None else tuple(map(tuple, K)), bound)
            if key in tried:
                continue
            tried.add(key)
            basis = None
            if K is not None:
                eqs = []
                for i in range(n):
                    for kv in K:
                        eqs.append([sum((m[i, j] * kv[j] for j in range(n) if kv[j]), Fraction(0))
                                    for m in mats])
                basis = nullspace(eqs, len(mats))
                if not basis:
                    continue
                c = _exact_projection(rationalize(coeffs, bound), basis)
            else:
                c = rationalize(coeffs, bound)
            cand = _combine(mats, c, n)
            if cand.is_zero():
                continue
            rep = psd_rank_exact(cand)
            if rep.status is PsdStatus.INDEFINITE:
                continue
            if require_pd and rep.status is not PsdStatus.POSITIVE_DEFINITE:
                continue
            return cand
    return None


# --------------------------------------------------------------------------
# faces


def _frame_product(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return matmul(a, b)


def _congruence_rect(m: SymMatrix, k: Sequence[Sequence[Fraction]]) -> SymMatrix:
    """K^T M K for an n x m' matrix K."""
    return SymMatrix(matmul(transpose(k), matmul(m.rows(), k)))


def face_subspace(perp: Sequence[SymMatrix], frame: Sequence[Sequence[Fraction]]) -> tuple[list[SymMatrix], list[SymMatrix]]:
    """Basis of ``{M : F M F^T in L}`` and of its complement, from a basis of L^perp."""
    m = len(frame[0])
    restricted = [_congruence_rect(b, frame) for b in perp]
    comp = Subspace.spanned_by(m, restricted)
    face = orthogonal_complement(comp)
    return list(face.basis), list(comp.basis)


def _lift(frame: Sequence[Sequence[Fraction]], m: SymMatrix) -> SymMatrix:
    return SymMatrix(matmul(frame, matmul(m.rows(), transpose(frame))))


def _float(mats: Sequence[SymMatrix]) -> list[np.ndarray]:
    return [m.to_numpy() for m in mats]


def spectrahedral_rank(L: Subspace, options: RankOptions = RankOptions(), **kw) -> RankReport:
    """Maximal rank of a PSD matrix in L, certified from both sides when possible."""
    if kw:
        options = RankOptions(**{**options.__dict__, **kw})
    n = L.n
    identity = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if L.k == 0:
        return RankReport(0, None, (), RankCertainty.EXACT, None, 0, ("zero subspace",))
    perp = list(orthogonal_complement(L).basis)
    frame: Matrix = identity
    face = list(L.basis)
    face_perp = perp
    chain: list[ReductionStep] = []
    notes: list[str] = []
    m = n
    for _ in range(options.max_steps):
        if not face:
            # the face subspace is zero: L meets the PSD cone only at 0
            return RankReport(0, None, tuple(chain), RankCertainty.EXACT, None, 0,
                              tuple(notes + ["face subspace is zero"]))
        sl = sdp.max_min_eigenvalue(_float(face), m)
        if sl.trace_free:
            ident = SymMatrix.identity(m)
            return RankReport(0, None, tuple(chain), RankCertainty.EXACT, ident, 0,
                              tuple(notes + ["identity is orthogonal to the face"]))
        if sl.t < -options.slice_tol:
            cert = rational_psd_near(sl.dual - sl.t * np.eye(m), face_perp, options, require_pd=True)
            if cert is not None:
                return RankReport(0, None, tuple(chain), RankCertainty.EXACT, cert, 0, tuple(notes))
            notes.append("could not rationalize the positive definite certificate")
            break
        if sl.t > options.slice_tol:
            X, _, _ = sdp.zero_objective_center(_float(face), m)
            wit = rational_psd_near(X, face, options, require_pd=True)
            if wit is None:
                wit = rational_psd_near(_combine_float(face, sl.coefficients), face, options,
                                        require_pd=True)
            if wit is not None:
                full = _lift(frame, wit)
                if psd_rank_exact(full).rank == m and L.coordinates(full) is not None:
                    return RankReport(m, full, tuple(chain), RankCertainty.EXACT, None, m, tuple(notes))
            notes.append("could not rationalize a positive definite point of the face")
            break
        # boundary: reduce the face
        Y = rational_psd_near(sl.dual - sl.t * np.eye(m), face_perp, options)
        if Y is None:
            notes.append("could not rationalize a reducing certificate")
            break
        rep = psd_rank_exact(Y)
        kernel_cols = transpose([list(v) for v in rep.kernel_basis]) if rep.kernel_basis else []
        if not kernel_cols:
            # Y is positive definite: the face meets the cone only at 0
            return RankReport(0, None, tuple(chain), RankCertainty.EXACT, Y, 0, tuple(notes))
        chain.append(ReductionStep(tuple(tuple(r) for r in frame), Y,
                                   tuple(tuple(r) for r in kernel_cols)))
        frame = _frame_product(frame, kernel_cols)
        m = len(kernel_cols[0])
        face, face_perp = face_subspace(perp, frame)
    # numeric fallback
    est = sdp.analytic_center(L)
    r = est.rank.rank if est.rank is not None else 0
    if est.rank_unstable:
        notes.append("rank-unstable")
    return RankReport(r, None, tuple(chain), RankCertainty.NUMERIC_ONLY, None, r, tuple(notes))


def _combine_float(face: Sequence[SymMatrix], coeffs) -> np.ndarray:
    out = np.zeros_like(face[0].to_numpy())
    for c, m in zip(coeffs, face):
        out += c * m.to_numpy()
    return out


# --------------------------------------------------------------------------
# the I_L lattice test


@dataclass(frozen=True)
class BlockData:
    frame: tuple[tuple[Fraction, ...], ...]
    s: int
    dims: tuple[int, int]                   # (dim L cap I_L^2, dim L cap I_L)
    witness: SymMatrix | None               # in L cap I_L but not in L cap I_L^2
    generators: tuple[tuple[Fraction, ...], ...]   # linear forms spanning I_L (integer rows)
    normalized_witness: SymMatrix | None = None


def _primitive_row(row: Sequence[Fraction]) -> tuple[Fraction, ...]:
    from math import gcd, lcm
    den = lcm(*(x.denominator for x in row)) if row else 1
    ints = [int(x * den) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    first = next((v for v in ints if v), 1)
    sign = -1 if first < 0 else 1
    return tuple(Fraction(sign * v // g) for v in ints)


def il_generators(q: SymMatrix) -> list[tuple[Fraction, ...]]:
    """Linear forms (coefficient rows) generating the ideal of a PSD form q."""
    from .symspace import rref
    red, _ = rref(q.rows())
    return [_primitive_row(r) for r in red]


def lattice_dims(L: Subspace, report: RankReport) -> BlockData:
    if report.witness is None or not report.exact:
        raise ValueError("an exact maximal rank witness is required")
    q = report.witness
    norm = congruence_normalize(L, q)
    s = norm.rank
    n = L.n
    low = [(i, j) for i, j in svec_index(n) if i >= s]
    mixed = [(i, j) for i, j in svec_index(n) if i < s <= j]
    basis = norm.space.basis
    eq22 = [[b[i, j] for b in basis] for i, j in low]
    eq12 = [[b[i, j] for b in basis] for i, j in mixed]
    n1 = nullspace(eq22, L.k) if eq22 else nullspace([], L.k)
    n2 = nullspace(eq22 + eq12, L.k) if (eq22 + eq12) else nullspace([], L.k)
    dims = (len(n2), len(n1))
    witness = None
    nw = None
    if dims[0] != dims[1]:
        for c in n1:
            if rank(n2 + [c]) > len(n2):
                witness = L.combination(c)
                nw = norm.space.combination(c)
                break
    return BlockData(norm.frame, s, dims, witness, tuple(il_generators(q)), nw)


# --------------------------------------------------------------------------
# verdicts


class Decision(enum.Enum):
    GOOD = "Good"
    BAD = "Bad"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class BadLatticeWitness:
    v: SymMatrix
    q: SymMatrix
    frame: tuple[tuple[Fraction, ...], ...]
    dims: tuple[int, int]
    kind: str = "BadLatticeWitness"


@dataclass(frozen=True)
class BadRankGap:
    q: SymMatrix
    y: SymMatrix
    s: int
    s_perp: int
    kind: str = "BadRankGap"


@dataclass(frozen=True)
class GoodComplementary:
    q: SymMatrix | None
    y: SymMatrix | None
    s: int
    dims: tuple[int, int] | None
    kind: str = "GoodComplementary"


@dataclass(frozen=True)
class GoodZero:
    certificate: SymMatrix | None
    kind: str = "GoodZero"


@dataclass(frozen=True)
class GoodFullRank:
    witness: SymMatrix
    kind: str = "GoodFullRank"


@dataclass(frozen=True)
class GoodK1:
    kind: str = "GoodK1"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    sL: RankReport | None
    sLperp: RankReport | None
    certificate: object
    certified_exact: bool
    blocks: BlockData | None = None
    notes: tuple[str, ...] = ()


def decide(L: Subspace, options: RankOptions = RankOptions()) -> Verdict:
    """Good / Bad / Undetermined with a certificate.

    Order of tests: one-dimensional spans, extreme ranks, the lattice test,
    then the rank sum against n.
    """
    n = L.n
    if L.k == 1:
        return Verdict(Decision.GOOD, None, None, GoodK1(), True)
    rl = spectrahedral_rank(L, options)
    if rl.exact and rl.s == 0:
        return Verdict(Decision.GOOD, rl, None, GoodZero(rl.zero_certificate), True)
    if rl.exact and rl.s == n:
        return Verdict(Decision.GOOD, rl, None, GoodFullRank(rl.witness), True)
    comp = orthogonal_complement(L)
    rp = spectrahedral_rank(comp, options)
    if not rl.exact:
        return Verdict(Decision.UNDETERMINED, rl, rp, None, False,
                       notes=("spectrahedral rank of L is only numeric",) + rl.notes)
    blocks = lattice_dims(L, rl)
    if blocks.witness is not None:
        cert = BadLatticeWitness(blocks.witness, rl.witness, blocks.frame, blocks.dims)
        return Verdict(Decision.BAD, rl, rp, cert, True, blocks)
    s = rl.s
    if rp.witness is not None and rp.s == n - s and psd_rank_exact(rp.witness).rank == n - s:
        cert = GoodComplementary(rl.witness, rp.witness, s, blocks.dims)
        return Verdict(Decision.GOOD, rl, rp, cert, True, blocks)
    if rp.exact and s + rp.s < n:
        y = rp.witness
        cert = BadRankGap(rl.witness, y, s, rp.s)
        return Verdict(Decision.BAD, rl, rp, cert, True, blocks)
    return Verdict(Decision.UNDETERMINED, rl, rp, None, False, blocks,
                   ("no exact complementary witness and no certified rank gap",) + rp.notes)


def pataki_range(n: int, k: int) -> set[int]:
    """Ranks s with C(n-s+1, 2) < k <= C(n+1, 2) - C(s+1, 2)."""
    if not (1 <= k <= comb(n + 1, 2)):
        raise ValueError("need 1 <= k <= n(n+1)/2")
    return {s for s in range(0, n + 1)
            if comb(n - s + 1, 2) < k <= comb(n + 1, 2) - comb(s + 1, 2)}
