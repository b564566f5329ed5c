"""Dense primal-dual interior point solver for small semidefinite programs.

Primal:  min <C, X>  s.t. <A_i, X> = b_i,  X PSD.
Dual:    max b.y     s.t. C - sum y_i A_i = Z,  Z PSD.

The iteration is an infeasible-start Mehrotra predictor-corrector using the
Nesterov-Todd scaling.  On top of it sit the numeric facial reduction loop
that finds analytic centers of spectrahedral cones and the complementary
pair of a subspace and its orthogonal complement.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .symspace import SymMatrix, Subspace, orthogonal_complement, svec_index


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    DUAL_INFEASIBLE = "DualInfeasible"
    MAX_ITER = "MaxIter"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass
class SdpProblem:
    n: int
    C: np.ndarray
    A: list[np.ndarray]
    b: np.ndarray

    def __post_init__(self):
        self.C = _as_sym(self.C, self.n)
        self.A = [_as_sym(a, self.n) for a in self.A]
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if len(self.A) != len(self.b):
            raise ValueError("need one right-hand side per constraint")
        if not (np.all(np.isfinite(self.C)) and np.all(np.isfinite(self.b))
                and all(np.all(np.isfinite(a)) for a in self.A)):
            raise ValueError("problem data must be finite")

    @classmethod
    def from_exact(cls, C: SymMatrix, constraints: Sequence[tuple[SymMatrix, object]]) -> "SdpProblem":
        return cls(C.n, C.to_numpy(), [a.to_numpy() for a, _ in constraints],
                   np.array([float(b) for _, b in constraints]))


def _as_sym(a, n: int) -> np.ndarray:
    if isinstance(a, SymMatrix):
        a = a.to_numpy()
    a = np.asarray(a, dtype=float)
    if a.shape != (n, n):
        raise ValueError("matrix has the wrong shape")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    return (a + a.T) / 2


@dataclass
class Residuals:
    primal: float
    dual: float
    gap: float


@dataclass
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    status: Status
    mu: float
    residuals: Residuals
    iterations: int
    message: str = ""

    @property
    def primal_objective(self) -> float:
        return float("nan")


@dataclass(frozen=True)
class SolverOptions:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-9
    max_iter: int = 100
    step_fraction: float = 0.98
    divergence: float = 1e10


def _svec_matrix(mats: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Rows are weighted svec vectors, so row dot products are trace inner products."""
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, math.sqrt(2.0))
    return np.array([m[iu] * w for m in mats]) if mats else np.zeros((0, len(iu[0])))


def _from_weighted_svec(v: np.ndarray, n: int) -> np.ndarray:
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, 1 / math.sqrt(2.0))
    m = np.zeros((n, n))
    m[iu] = v * w
    return m + np.triu(m, 1).T


def _filter_constraints(A: list[np.ndarray], b: np.ndarray, n: int, tol: float = 1e-10):
    """Drop dependent constraints; return None when the dependent ones are inconsistent."""
    if not A:
        return A, b
    S = _svec_matrix(A, n)
    rows = np.hstack([S, b.reshape(-1, 1)])
    keep: list[int] = []
    basis = np.zeros((0, S.shape[1]))
    scale = max(1.0, np.abs(S).max())
    for i in range(len(A)):
        v = S[i]
        if basis.shape[0]:
            coef, *_ = np.linalg.lstsq(basis.T, v, rcond=None)
            resid = v - basis.T @ coef
        else:
            resid = v
        if np.linalg.norm(resid) > tol * scale * max(1.0, np.linalg.norm(v)):
            keep.append(i)
            basis = S[keep]
        else:
            # dependent row: rhs must agree with the same combination
            coef, *_ = np.linalg.lstsq(S[keep].T, v, rcond=None) if keep else (np.zeros(0),)
            pred = float(coef @ b[keep]) if keep else 0.0
            if abs(pred - b[i]) > 1e-8 * max(1.0, abs(b[i])):
                return None
    return [A[i] for i in keep], b[keep]


def _chol_or_none(m: np.ndarray):
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None


def _max_step(L: np.ndarray, d: np.ndarray) -> float:
    """Largest alpha with L L^T + alpha d PSD."""
    Li = np.linalg.solve(L, np.eye(L.shape[0]))
    m = Li @ d @ Li.T
    lam = np.linalg.eigvalsh((m + m.T) / 2)[0]
    return math.inf if lam >= 0 else -1.0 / lam


def solve(problem: SdpProblem, options: SolverOptions = SolverOptions()) -> SdpSolution:
    """Mehrotra predictor-corrector with Nesterov-Todd scaling."""
    n = problem.n
    filt = _filter_constraints(problem.A, problem.b, n)
    if filt is None:
        z = np.zeros((n, n))
        return SdpSolution(z, np.zeros(len(problem.b)), z, Status.INFEASIBLE, 0.0,
                           Residuals(math.inf, math.inf, math.inf), 0,
                           "dependent constraints with inconsistent right-hand sides")
    A, b = filt
    C = problem.C
    m = len(A)
    Smat = _svec_matrix(A, n)

    def Aop(X):
        return np.array([np.sum(a * X) for a in A])

    def Aadj(y):
        out = np.zeros((n, n))
        for yi, a in zip(y, A):
            out += yi * a
        return out

    scale = max(1.0, np.abs(C).max(), np.abs(b).max() if m else 1.0)
    X = np.eye(n) * scale
    Z = np.eye(n) * scale
    y = np.zeros(m)
    bnorm = 1.0 + np.linalg.norm(b)
    cnorm = 1.0 + np.linalg.norm(C)
    status = Status.MAX_ITER
    message = ""
    it = 0
    for it in range(1, options.max_iter + 1):
        rp = b - Aop(X)
        Rd = C - Aadj(y) - Z
        mu = np.sum(X * Z) / n
        pres = np.linalg.norm(rp) / bnorm
        dres = np.linalg.norm(Rd) / cnorm
        gap = abs(np.sum(X * Z))
        pobj = np.sum(C * X)
        dobj = b @ y
        if pres <= options.feas_tol and dres <= options.feas_tol and \
                gap <= options.gap_tol * max(1.0, abs(pobj), abs(dobj)):
            status = Status.OPTIMAL
            break
        # infeasibility detection from diverging iterates
        if np.abs(y).max(initial=0) > options.divergence and dobj > 0 and dres < 1e-6:
            status = Status.INFEASIBLE
            message = "dual objective diverges"
            break
        if np.abs(X).max() > options.divergence and pobj < 0 and pres < 1e-6:
            status = Status.DUAL_INFEASIBLE
            message = "primal objective diverges"
            break
        LX = _chol_or_none(X)
        LZ = _chol_or_none(Z)
        if LX is None or LZ is None:
            status = Status.NUMERICAL_FAILURE
            message = "iterate lost positive definiteness"
            break
        U, D, Vt = np.linalg.svd(LZ.T @ LX)
        G = LX @ Vt.T @ np.diag(D ** -0.5)
        W = G @ G.T
        Ginv = np.linalg.solve(G, np.eye(n))
        # Schur complement
        WA = [W @ a @ W for a in A]
        M = np.array([[np.sum(A[i] * WA[j]) for j in range(m)] for i in range(m)])
        M = (M + M.T) / 2
        try:
            cho = np.linalg.cholesky(M) if m else None
        except np.linalg.LinAlgError:
            cho = None
            if m:
                status = Status.NUMERICAL_FAILURE
                message = "Schur complement not positive definite"
                break

        def direction(Rc_scaled):
            Rc = G @ Rc_scaled @ G.T
            rhs = rp - Aop(Rc) + Aop(W @ Rd @ W)
            if m:
                dy = np.linalg.solve(cho.T, np.linalg.solve(cho, rhs))
            else:
                dy = np.zeros(0)
            dZ = Rd - Aadj(dy)
            dX = Rc - W @ dZ @ W
            return (dX + dX.T) / 2, dy, (dZ + dZ.T) / 2

        vsum = D[:, None] + D[None, :]

        def lyap(R):
            return 2 * R / vsum

        # predictor
        dX, dy, dZ = direction(lyap(-np.diag(D) @ np.diag(D)))
        ap = min(1.0, options.step_fraction * _max_step(LX, dX))
        ad = min(1.0, options.step_fraction * _max_step(LZ, dZ))
        mu_aff = np.sum((X + ap * dX) * (Z + ad * dZ)) / n
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
        # corrector in the scaled space
        dXs = Ginv @ dX @ Ginv.T
        dZs = G.T @ dZ @ G
        cross = (dXs @ dZs + dZs @ dXs) / 2
        R = sigma * mu * np.eye(n) - np.diag(D ** 2) - cross
        dX, dy, dZ = direction(lyap(R))
        ap = min(1.0, options.step_fraction * _max_step(LX, dX))
        ad = min(1.0, options.step_fraction * _max_step(LZ, dZ))
        X = X + ap * dX
        y = y + ad * dy
        Z = Z + ad * dZ
        X = (X + X.T) / 2
        Z = (Z + Z.T) / 2
    rp = b - Aop(X)
    Rd = C - Aadj(y) - Z
    res = Residuals(float(np.linalg.norm(rp) / bnorm), float(np.linalg.norm(Rd) / cnorm),
                    float(abs(np.sum(X * Z))))
    # report multipliers for the original constraint list
    full_y = np.zeros(len(problem.b))
    if m:
        S_all = _svec_matrix(problem.A, n)
        for j, row in enumerate(Smat):
            idx = int(np.argmin(np.linalg.norm(S_all - row, axis=1)))
            full_y[idx] = y[j]
    return SdpSolution(X, full_y, Z, status, float(np.sum(X * Z) / n), res, it, message)


# --------------------------------------------------------------------------
# rank reading


@dataclass(frozen=True)
class RankEstimate:
    rank: int
    eigenvalues: tuple[float, ...]     # descending
    threshold: float
    unstable: bool


def estimate_rank(M: np.ndarray, rel_tol: float = 1e-6) -> RankEstimate:
    ev = np.sort(np.linalg.eigvalsh((M + M.T) / 2))[::-1]
    lam_max = float(ev[0]) if len(ev) else 0.0
    thr = rel_tol * max(1.0, lam_max)
    r = int(np.sum(ev > thr))
    unstable = bool(np.any((ev > 0.1 * thr) & (ev < 10 * thr)))
    return RankEstimate(r, tuple(float(v) for v in ev), thr, unstable)


# --------------------------------------------------------------------------
# slice problems used by facial reduction


def _orthonormal_basis(mats: Sequence[np.ndarray], n: int):
    """Orthonormal (trace inner product) basis of span(mats) and the change of coordinates.

    Returns (Q, T) with Q[j] = sum_i T[i, j] mats[i].
    """
    if not mats:
        return [], np.zeros((0, 0))
    S = _svec_matrix(mats, n)
    U, sv, Vt = np.linalg.svd(S.T, full_matrices=False)
    r = int(np.sum(sv > 1e-12 * sv[0])) if len(sv) else 0
    # S.T = U diag(sv) Vt  so  U[:, :r] = S.T @ Vt.T[:, :r] / sv[:r]
    T = Vt.T[:, :r] / sv[:r]
    Q = [_from_weighted_svec(U[:, j], n) for j in range(r)]
    return Q, T


@dataclass
class SliceResult:
    t: float                       # value of max min-eigenvalue over the trace-one slice
    coefficients: np.ndarray | None       # x in the given basis attaining t
    dual: np.ndarray | None        # Y PSD, trace 1; at optimum Y - t I is orthogonal to the span
    solution: SdpSolution | None
    trace_free: bool = False       # every matrix in the span has trace zero


def max_min_eigenvalue(mats: Sequence[np.ndarray], n: int,
                       options: SolverOptions = SolverOptions()) -> SliceResult:
    """max t such that X - t I is PSD for some X in span(mats) with trace X = 1.

    Solved as the conic problem: min <F0, Y> s.t. <F_j, Y> = 0, trace Y = 1,
    where F0 is a trace-one element and F_j span the trace-zero part.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    Q, T = _orthonormal_basis(mats, n)
    if not Q:
        return SliceResult(-math.inf, None, np.eye(n) / n, None, trace_free=True)
    traces = np.array([np.trace(q) for q in Q])
    if np.linalg.norm(traces) < 1e-12:
        return SliceResult(-math.inf, None, np.eye(n) / n, None, trace_free=True)
    # x0: trace-one element closest to the origin; F: trace-zero directions
    u0 = traces / (traces @ traces)
    F0 = sum(c * q for c, q in zip(u0, Q))
    # orthonormal complement of traces inside R^r
    r = len(Q)
    proj = np.eye(r) - np.outer(traces, traces) / (traces @ traces)
    U, sv, _ = np.linalg.svd(proj)
    dirs = U[:, :r - 1]
    F = [sum(c * q for c, q in zip(dirs[:, j], Q)) for j in range(r - 1)]
    A = F + [np.eye(n)]
    b = np.zeros(len(A))
    b[-1] = 1.0
    sol = solve(SdpProblem(n, F0, A, b), options)
    # dual variables: y_j on F_j, y_t on identity; slack Z = F0 - sum y_j F_j - y_t I
    yj = sol.y[:-1]
    t = float(sol.y[-1])
    u = u0 - dirs @ yj
    coeffs = T @ u
    return SliceResult(t, coeffs, sol.X, sol)


def zero_objective_center(mats: Sequence[np.ndarray], n: int,
                          options: SolverOptions = SolverOptions()):
    """Central-path limit of min 0 s.t. X in span(mats), trace X = 1, X PSD.

    Returns (X, coefficients in the given basis, solution).
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    Q, T = _orthonormal_basis(mats, n)
    S = _svec_matrix(Q, n) if Q else np.zeros((0, n * (n + 1) // 2))
    # constraints: X orthogonal to the complement of span(Q), trace X = 1
    full = n * (n + 1) // 2
    if S.shape[0]:
        _, sv, Vt = np.linalg.svd(S, full_matrices=True)
        comp = Vt[S.shape[0]:]
    else:
        comp = np.eye(full)
    A = [_from_weighted_svec(v, n) for v in comp] + [np.eye(n)]
    b = np.zeros(len(A))
    b[-1] = 1.0
    sol = solve(SdpProblem(n, np.zeros((n, n)), A, b), options)
    X = sol.X
    u = S @ _svec_matrix([X], n)[0] if Q else np.zeros(0)
    coeffs = T @ u if Q else np.zeros(0)
    return X, coeffs, sol


def restrict_to_kernel(mats_perp: Sequence[np.ndarray], K: np.ndarray) -> list[np.ndarray]:
    """Complement data for the face: face subspace is span{K^T B K}^perp inside S^m."""
    return [K.T @ b @ K for b in mats_perp]


def complement_numeric(mats: Sequence[np.ndarray], n: int, rel_tol: float = 1e-12) -> list[np.ndarray]:
    full = n * (n + 1) // 2
    S = _svec_matrix(list(mats), n)
    if S.shape[0] == 0:
        return [_from_weighted_svec(v, n) for v in np.eye(full)]
    _, sv, Vt = np.linalg.svd(S, full_matrices=True)
    r = int(np.sum(sv > rel_tol * max(1.0, sv[0])))
    return [_from_weighted_svec(v, n) for v in Vt[r:]]


# --------------------------------------------------------------------------
# analytic center with numeric facial reduction


@dataclass
class Reduction:
    Y: np.ndarray          # PSD reducer in the current face coordinates
    frame: np.ndarray      # n x m matrix whose columns span the face before this step
    t: float


@dataclass
class AnalyticCenter:
    feasible: bool                       # L contains a nonzero PSD matrix
    point: np.ndarray | None             # trace-one analytic center in S^n
    rank: RankEstimate | None
    certificate: np.ndarray | None       # PSD nonzero Y in L^perp when infeasible
    reductions: list[Reduction] = field(default_factory=list)
    frame: np.ndarray | None = None      # columns span the final face
    solution: SdpSolution | None = None
    flags: tuple[str, ...] = ()
    residual: float = 0.0                # distance of the point from the span of L

    @property
    def rank_unstable(self) -> bool:
        return "rank-unstable" in self.flags


@dataclass(frozen=True)
class CenterOptions:
    rel_tol: float = 1e-6
    slice_tol: float = 1e-7
    reducer_tol: float = 1e-3      # reducer kernels and restricted faces: IPM noise is ~sqrt(gap)
    solver: SolverOptions = SolverOptions()


def _project(M: np.ndarray, mats: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Trace-inner-product projection of M onto span(mats)."""
    Q, _ = _orthonormal_basis(list(mats), n)
    out = np.zeros_like(M)
    for q in Q:
        out += np.sum(q * M) * q
    return (out + out.T) / 2


def polish_reducer(Y: np.ndarray, perp: Sequence[np.ndarray], corank: int, iters: int = 200,
                   tol: float = 1e-13) -> np.ndarray:
    """Alternate between span(perp) and matrices with a ``corank``-dimensional kernel.

    Interior-point reducers carry a sqrt(gap) error on their kernel; this sharpens
    them so that the next face is computed from an (almost) exact frame.
    """
    m = Y.shape[0]
    if not perp or corank <= 0 or corank >= m:
        return Y
    Q, _ = _orthonormal_basis(list(perp), m)
    if not Q:
        return Y
    scale = np.linalg.norm(Y)
    for _ in range(iters):
        w, V = np.linalg.eigh((Y + Y.T) / 2)
        K = V[:, :corank]
        M = np.stack([(q @ K).ravel() for q in Q], axis=1)
        c = np.array([np.sum(q * Y) for q in Q])
        if np.linalg.norm(M @ c) <= tol * max(scale, 1e-300):
            break
        _, sv, Vt = np.linalg.svd(M, full_matrices=True)
        sv = np.concatenate([sv, np.zeros(Vt.shape[0] - len(sv))])
        null = Vt[sv <= 1e-8 * max(sv[0], 1e-300)] if sv[0] > 0 else Vt
        if len(null) == 0:
            null = Vt[-1:]
        c = null.T @ (null @ c)
        Y = sum(ci * q for ci, q in zip(c, Q))
        Y = (Y + Y.T) / 2
    return Y


def _kernel_frame(Y: np.ndarray, rel_tol: float):
    est = estimate_rank(Y, rel_tol)
    w, V = np.linalg.eigh((Y + Y.T) / 2)
    order = np.argsort(w)[::-1]
    V = V[:, order]
    return V[:, est.rank:], est


def analytic_center(space: Subspace | Sequence[np.ndarray], n: int | None = None,
                    options: CenterOptions = CenterOptions()) -> AnalyticCenter:
    """Maximum rank trace-one PSD point of a subspace, or a certificate of its absence."""
    if isinstance(space, Subspace):
        n = space.n
        mats = [b.to_numpy() for b in space.basis]
    else:
        mats = [np.asarray(m, dtype=float) for m in space]
        if n is None:
            raise ValueError("matrix size required")
    flags: list[str] = []
    reductions: list[Reduction] = []
    frame = np.eye(n)
    perp = complement_numeric(mats, n)
    face_mats = mats
    face_perp = perp
    m = n
    while True:
        sl = max_min_eigenvalue(face_mats, m, options.solver)
        if sl.solution is not None and sl.solution.status is not Status.OPTIMAL:
            flags.append(f"slice solve: {sl.solution.status.value}")
        if sl.trace_free or sl.t < -options.slice_tol:
            if reductions:
                # cannot happen in exact arithmetic: after a reduction L meets the PSD cone
                flags.append("rank-unstable")
                return AnalyticCenter(True, None, None, None, reductions, frame, sl.solution,
                                      tuple(flags))
            Y = sl.dual - (0 if sl.trace_free else sl.t) * np.eye(m)
            return AnalyticCenter(False, None, None, Y, reductions, frame, sl.solution, tuple(flags))
        # after a reduction the face carries the frame's error, so small t is noise
        tol = options.reducer_tol if reductions else options.slice_tol
        if sl.t > tol:
            X, coeffs, sol = zero_objective_center(face_mats, m, options.solver)
            if sol.status is not Status.OPTIMAL:
                flags.append(f"center solve: {sol.status.value}")
            point = frame @ X @ frame.T
            est = estimate_rank(point, options.rel_tol)
            if est.unstable:
                flags.append("rank-unstable")
            residual = float(np.linalg.norm(point - _project(point, mats, n)))
            return AnalyticCenter(True, point, est, None, reductions, frame, sol, tuple(flags), residual)
        # boundary: the dual point is a reducer
        Y = sl.dual - sl.t * np.eye(m)
        _, est0 = _kernel_frame(Y, options.reducer_tol)
        Y = polish_reducer(Y, face_perp, m - est0.rank)
        K, est = _kernel_frame(Y, options.reducer_tol)
        if est.unstable:
            flags.append("rank-unstable")
        reductions.append(Reduction(Y, frame, sl.t))
        if K.shape[1] == 0 or K.shape[1] == m:
            flags.append("rank-unstable")
            return AnalyticCenter(True, None, None, None, reductions, frame, sl.solution, tuple(flags))
        frame = frame @ K
        m = K.shape[1]
        perp = complement_numeric(mats, n)
        face_perp = [frame.T @ b @ frame for b in perp]
        face_mats = complement_numeric(face_perp, m, options.reducer_tol)


@dataclass
class ComplementaryPair:
    X: np.ndarray
    Y: np.ndarray
    rank_x: int
    rank_y: int
    product_norm: float
    left: AnalyticCenter
    right: AnalyticCenter

    @property
    def gap(self) -> float:
        vals = [c.solution.residuals.gap for c in (self.left, self.right) if c.solution is not None]
        return max(vals) if vals else 0.0


def complementary_pair(space: Subspace, options: CenterOptions = CenterOptions()) -> ComplementaryPair:
    n = space.n
    comp = orthogonal_complement(space)
    left = analytic_center(space, options=options)
    right = analytic_center(comp, options=options) if comp.k else AnalyticCenter(
        False, None, None, np.eye(n) / n)
    X = left.point if left.point is not None else np.zeros((n, n))
    Y = right.point if right.point is not None else np.zeros((n, n))
    rx = left.rank.rank if left.rank is not None else 0
    ry = right.rank.rank if right.rank is not None else 0
    prod = float(np.abs(X @ Y).max())
    return ComplementaryPair(X, Y, rx, ry, prod, left, right)
