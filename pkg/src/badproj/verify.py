"""Independent re-check of verdict certificates.

Works from the serialized certificate and the subspace alone, using only the
exact linear algebra in ``symspace``; nothing from the decision path is reused.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .symspace import (Subspace, SymMatrix, matmul, nullspace, orthogonal_complement,
                       psd_rank_exact, rank, svec_dim, transpose)

Matrix = list[list[Fraction]]


def parse_rational(x) -> Fraction:
    """Integers or "p/q" strings; floats are refused."""
    if isinstance(x, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        t = x.strip()
        if any(ch in t for ch in ".eE"):
            raise ValueError(f"decimal literal {x!r} not allowed")
        return Fraction(t)
    raise ValueError(f"expected an integer or 'p/q' string, got {x!r}")


def parse_matrix(doc) -> SymMatrix:
    return SymMatrix([[parse_rational(v) for v in r] for r in doc])


def parse_rows(doc) -> list[list[Fraction]]:
    return [[parse_rational(v) for v in r] for r in doc]


@dataclass
class VerifyResult:
    accepted: bool
    verdict: str | None
    checks: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


class _Reject(Exception):
    pass


def _require(cond: bool, msg: str, log: list[str]):
    if not cond:
        raise _Reject(msg)
    log.append(msg)


def _rect_congruence(b: SymMatrix, f: Matrix) -> SymMatrix:
    return SymMatrix(matmul(transpose(f), matmul(b.rows(), f)))


def _identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _is_zero(rows: Matrix) -> bool:
    return all(v == 0 for r in rows for v in r)


def check_rank_proof(space: Subspace, proof: dict, log: list[str]) -> tuple[int, SymMatrix | None]:
    """Verify a claimed maximal PSD rank of ``space``; returns (rank, witness)."""
    n = space.n
    claimed = int(proof["rank"])
    perp = list(orthogonal_complement(space).basis)
    frame = _identity(n)
    m = n
    for idx, step in enumerate(proof.get("chain", [])):
        Y = parse_matrix(step["Y"])
        K = parse_rows(step["kernel"])
        _require(Y.n == m, f"step {idx}: reducer has the face size {m}", log)
        rep = psd_rank_exact(Y)
        _require(rep.is_psd and rep.rank > 0, f"step {idx}: reducer is PSD and nonzero", log)
        restricted = Subspace.spanned_by(m, [_rect_congruence(b, frame) for b in perp])
        _require(restricted.contains(Y), f"step {idx}: reducer is orthogonal to the face subspace", log)
        _require(len(K) == m and _is_zero(matmul(Y.rows(), K)), f"step {idx}: kernel columns annihilate Y", log)
        width = len(K[0]) if K and K[0] else 0
        _require(width == m - rep.rank and rank(transpose(K)) == width,
                 f"step {idx}: kernel columns span ker Y", log)
        if width == 0:
            frame, m = [], 0
            break
        frame = matmul(frame, K)
        m = width
    witness = None
    if proof.get("witness") is not None:
        witness = parse_matrix(proof["witness"])
        _require(space.contains(witness), "witness lies in the subspace", log)
        rep = psd_rank_exact(witness)
        _require(rep.is_psd and rep.rank == claimed, f"witness is PSD of rank {claimed}", log)
        _require(m == claimed, f"reduced face size equals {claimed}", log)
        return claimed, witness
    _require(claimed == 0, "a positive rank needs a witness", log)
    if m == 0:
        log.append("faces reduced to zero")
        return 0, None
    restricted = Subspace.spanned_by(m, [_rect_congruence(b, frame) for b in perp])
    if proof.get("zero_certificate") is not None:
        Z = parse_matrix(proof["zero_certificate"])
        rep = psd_rank_exact(Z)
        _require(Z.n == m and rep.is_psd and rep.rank == m, "zero certificate is positive definite", log)
        _require(restricted.contains(Z), "zero certificate is orthogonal to the face subspace", log)
    else:
        _require(restricted.k == svec_dim(m), "face subspace is zero", log)
    return 0, None


def lattice_dimensions(space: Subspace, q: SymMatrix) -> tuple[int, int]:
    """(dim L cap I^2, dim L cap I) for the ideal I of linear forms of q."""
    n = space.n
    kern = nullspace(q.rows(), n)
    if not kern:
        return space.k, space.k
    K = transpose(kern)                     # n x r, columns span ker q
    w = len(kern)
    mats = [b.rows() for b in space.basis]
    vk = [matmul(a, K) for a in mats]
    kvk = [matmul(transpose(K), x) for x in vk]
    rows_i = [[kvk[c][i][j] for c in range(space.k)] for i in range(w) for j in range(i, w)]
    rows_i2 = [[vk[c][i][j] for c in range(space.k)] for i in range(n) for j in range(w)]
    d1 = space.k - rank(rows_i)
    d2 = space.k - rank(rows_i2)
    return d2, d1


def _verify(space: Subspace, cert: dict, log: list[str]) -> str:
    n = space.n
    kind = cert.get("type")
    if kind == "k1-rule":
        _require(space.k == 1, "the subspace is one-dimensional", log)
        return "good"
    if kind == "full-rank":
        w = parse_matrix(cert["witness"])
        rep = psd_rank_exact(w)
        _require(space.contains(w) and rep.is_psd and rep.rank == n,
                 "a positive definite matrix lies in the subspace", log)
        return "good"
    if kind == "zero":
        s, _ = check_rank_proof(space, cert["rank_proof"], log)
        _require(s == 0, "the subspace meets the PSD cone only at zero", log)
        return "good"
    if kind == "lattice-witness":
        s, q = check_rank_proof(space, cert["rank_proof"], log)
        _require(q is not None and s >= 1, "maximal rank witness present", log)
        v = parse_matrix(cert["v"])
        _require(space.contains(v) and not v.is_zero(), "v is a nonzero element of the subspace", log)
        kern = nullspace(q.rows(), n)
        _require(bool(kern), "the witness has a kernel", log)
        K = transpose(kern)
        vk = matmul(v.rows(), K)
        _require(_is_zero(matmul(transpose(K), vk)), "v vanishes on ker q (v in I)", log)
        _require(not _is_zero(vk), "v is singular to first order only (v not in I^2)", log)
        return "bad"
    if kind == "rank-gap":
        s, _ = check_rank_proof(space, cert["rank_proof"], log)
        sp, _ = check_rank_proof(orthogonal_complement(space), cert["perp_rank_proof"], log)
        _require(s >= 1, "s(L) >= 1", log)
        _require(s + sp < n, f"s(L) + s(L^perp) = {s + sp} < {n}", log)
        return "bad"
    if kind == "complementary":
        s, q = check_rank_proof(space, cert["rank_proof"], log)
        y = parse_matrix(cert["y"])
        comp = orthogonal_complement(space)
        rep = psd_rank_exact(y)
        _require(comp.contains(y) and rep.is_psd and rep.rank == n - s,
                 f"complement holds a PSD matrix of rank {n - s}", log)
        if q is not None:
            d2, d1 = lattice_dimensions(space, q)
            _require(d1 == d2, f"L cap I equals L cap I^2 (dimension {d1})", log)
        return "good"
    raise _Reject(f"unknown certificate type {kind!r}")


def verify_certificate(space: Subspace, document: dict) -> VerifyResult:
    """Accepts either a full report (with "certificate" and "verdict") or a bare certificate."""
    cert = document.get("certificate", document) if "type" not in document else document
    claimed = document.get("verdict")
    log: list[str] = []
    if not isinstance(cert, dict):
        return VerifyResult(False, None, log, ["no certificate"])
    try:
        verdict = _verify(space, cert, log)
    except _Reject as exc:
        return VerifyResult(False, None, log, [str(exc)])
    except (KeyError, ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
        return VerifyResult(False, None, log, [f"malformed certificate: {exc}"])
    if claimed is not None and claimed != verdict:
        return VerifyResult(False, verdict, log, [f"certificate proves {verdict}, report says {claimed}"])
    return VerifyResult(True, verdict, log)
