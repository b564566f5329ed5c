"""JSON-ready documents for verdicts and certificates.

Rationals become "p/q" strings (plain integers print without a denominator).
Floats only appear under diagnostics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .pataki import (BadLatticeWitness, BadRankGap, GoodComplementary, GoodFullRank, GoodK1,
                     GoodZero, RankReport, Verdict)
from .symspace import SymMatrix
from .verify import parse_matrix, parse_rational, parse_rows  # re-exported

SCHEMA = "badproj.report/1"


def q(x) -> str:
    return str(Fraction(x))


def matrix_doc(m: SymMatrix | Sequence[Sequence[Fraction]] | None):
    if m is None:
        return None
    rows = m.rows() if isinstance(m, SymMatrix) else m
    return [[q(v) for v in r] for r in rows]


def rows_doc(rows: Sequence[Sequence[Fraction]]):
    return [[q(v) for v in r] for r in rows]


def rank_proof_doc(rep: RankReport) -> dict:
    """Witness plus the reduction chain bounding the rank from above."""
    return {
        "rank": rep.s,
        "witness": matrix_doc(rep.witness),
        "chain": [{"Y": matrix_doc(st.Y), "kernel": rows_doc(st.kernel)} for st in rep.chain],
        "zero_certificate": matrix_doc(rep.zero_certificate),
    }


def certificate_doc(v: Verdict) -> dict | None:
    c = v.certificate
    if c is None:
        return None
    if isinstance(c, GoodK1):
        return {"type": "k1-rule"}
    if isinstance(c, GoodZero):
        return {"type": "zero", "rank_proof": rank_proof_doc(v.sL)}
    if isinstance(c, GoodFullRank):
        return {"type": "full-rank", "witness": matrix_doc(c.witness)}
    if isinstance(c, BadLatticeWitness):
        return {
            "type": "lattice-witness",
            "v": matrix_doc(c.v),
            "v_normalized": matrix_doc(v.blocks.normalized_witness) if v.blocks else None,
            "q": matrix_doc(c.q),
            "il_generators": rows_doc(v.blocks.generators) if v.blocks else [],
            "frame": rows_doc(c.frame),
            "dims": list(c.dims),
            "rank_proof": rank_proof_doc(v.sL),
        }
    if isinstance(c, BadRankGap):
        return {
            "type": "rank-gap",
            "s": c.s,
            "s_perp": c.s_perp,
            "rank_proof": rank_proof_doc(v.sL),
            "perp_rank_proof": rank_proof_doc(v.sLperp),
        }
    if isinstance(c, GoodComplementary):
        return {
            "type": "complementary",
            "s": c.s,
            "q": matrix_doc(c.q),
            "y": matrix_doc(c.y),
            "dims": list(c.dims) if c.dims else None,
            "rank_proof": rank_proof_doc(v.sL),
        }
    raise TypeError(f"unknown certificate {type(c).__name__}")


def _rank_diag(rep: RankReport | None) -> dict | None:
    if rep is None:
        return None
    return {
        "value": rep.s,
        "certainty": rep.certainty.value,
        "numeric_estimate": rep.numeric_estimate,
        "rank_unstable": "rank-unstable" in rep.notes,
        "notes": list(rep.notes),
    }


def verdict_doc(v: Verdict, tolerances: dict | None = None) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "verdict": v.decision.value.lower(),
        "s_L": v.sL.s if v.sL is not None else None,
        "s_Lperp": v.sLperp.s if v.sLperp is not None else None,
        "certified": v.certified_exact,
        "certificate": certificate_doc(v),
        "diagnostics": {
            "rank_L": _rank_diag(v.sL),
            "rank_Lperp": _rank_diag(v.sLperp),
            "lattice_dims": list(v.blocks.dims) if v.blocks else None,
            "notes": list(v.notes),
            "tolerances": tolerances or {},
        },
    }


def text_lines(doc: dict, indent: int = 0) -> list[str]:
    """Plain rendering of a report document, one key per line."""
    pad = "  " * indent
    out = []
    for key, val in doc.items():
        if isinstance(val, dict):
            out.append(f"{pad}{key}:")
            out.extend(text_lines(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(r, dict) for r in val):
            out.append(f"{pad}{key}:")
            for idx, r in enumerate(val):
                out.append(f"{pad}  [{idx}]")
                out.extend(text_lines(r, indent + 2))
        elif isinstance(val, list) and val and all(isinstance(r, list) for r in val):
            out.append(f"{pad}{key}:")
            for r in val:
                out.append(f"{pad}  " + " ".join(str(x) for x in r))
        else:
            out.append(f"{pad}{key}: {val}")
    return out
