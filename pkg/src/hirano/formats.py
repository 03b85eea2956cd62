"""JSON file formats: single matrices, block instances and reports.

A matrix file is ``{"rows": [["1", "-2/3"], ...]}``; every entry is an
integer or ``p/q`` string so nothing ever passes through a float.  A block
file maps block names to row lists and may carry generator metadata under
``"meta"``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .blockthm import BlockInstance, HypothesisReport, TheoremReport, WitnessSplit
from .errors import ParseError
from .gendrazin import HiranoCert, StrongDrazinCert
from .ratmat import Matrix

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")
BLOCK_NAMES = ("A", "B", "C", "D", "P", "Q")


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"matrix entries must be integer or 'p/q' strings, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if not _RATIONAL.fullmatch(s):
        raise ParseError(f"not an exact rational: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def parse_rows(rows: Any) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'rows' must be a list of lists")
    return Matrix([[parse_rational(x) for x in row] for row in rows])


def render_rows(m: Matrix) -> list[list[str]]:
    return m.to_strings()


def parse_matrix(obj: Any) -> Matrix:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ParseError("matrix file must be an object with a 'rows' key")
    return parse_rows(obj["rows"])


def render_matrix(m: Matrix) -> dict:
    return {"rows": render_rows(m)}


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_matrix(path: str | Path) -> Matrix:
    return parse_matrix(_read_json(path))


def parse_blocks(obj: Any) -> tuple[BlockInstance, dict]:
    """Block instance and metadata from a parsed block file."""
    if not isinstance(obj, dict):
        raise ParseError("block file must be a JSON object")
    unknown = set(obj) - set(BLOCK_NAMES) - {"meta"}
    if unknown:
        raise ParseError(f"unknown keys in block file: {sorted(unknown)}")
    blocks = {}
    for name in BLOCK_NAMES:
        if name in obj:
            value = obj[name]
            if isinstance(value, dict):
                value = value.get("rows")
            blocks[name] = parse_rows(value)
    if not blocks:
        raise ParseError("block file contains no blocks")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("'meta' must be an object")
    return BlockInstance(blocks), meta


def render_blocks(inst: BlockInstance, meta: dict | None = None) -> dict:
    out: dict[str, Any] = {name: render_rows(m) for name, m in inst.blocks.items()}
    if meta:
        out["meta"] = meta
    return out


def load_blocks(path: str | Path) -> tuple[BlockInstance, dict]:
    return parse_blocks(_read_json(path))


def dump_json(obj: Any, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


# -- reports ---------------------------------------------------------------------


def hypothesis_report_json(rep: HypothesisReport) -> dict:
    return {
        "theorem": rep.theorem.value,
        "profile": rep.profile,
        "all_hold": rep.all_hold,
        "hypotheses": [
            {
                "name": h.name,
                "formula": h.formula,
                "kind": h.kind,
                "holds": h.holds,
                "exponent": h.exponent,
                "residual": render_rows(h.residual),
            }
            for h in rep.hypotheses
        ],
    }


def witness_json(w: WitnessSplit) -> dict:
    return {
        "note": w.note,
        "target": render_rows(w.target),
        "summands": {name: render_rows(m) for name, m in w.summands},
        "side_conditions": [
            {"name": s.name, "kind": s.kind, "holds": s.holds, "residual": render_rows(s.residual)}
            for s in w.side_conditions
        ],
    }


def certificate_json(cert: HiranoCert | StrongDrazinCert) -> dict:
    if isinstance(cert, HiranoCert):
        return {
            "kind": "hirano",
            "inverse": render_rows(cert.z),
            "tripotent": render_rows(cert.tripotent),
            "nilpart": render_rows(cert.nilpart),
            "nil_exponent": cert.nil_exponent,
        }
    return {
        "kind": "strongly-drazin",
        "inverse": render_rows(cert.z),
        "idempotent": render_rows(cert.idem),
        "nilpart": render_rows(cert.nilpart),
        "nil_exponent": cert.nil_exponent,
    }


def theorem_report_json(rep: TheoremReport) -> dict:
    return {
        "theorem": rep.theorem.value,
        "verdict": str(rep.verdict),
        "hypotheses": hypothesis_report_json(rep.hypothesis_report),
        "target": render_rows(rep.target),
        "target_class": rep.target_class,
        "conclusion_holds": rep.conclusion_holds,
        "class_residual": render_rows(rep.class_residual),
        "class_exponent": rep.class_exponent,
        "certificate": certificate_json(rep.conclusion) if rep.conclusion is not None else None,
        "witness": witness_json(rep.witness) if rep.witness is not None else None,
        "notes": list(rep.notes),
    }

