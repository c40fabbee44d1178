"""JSON brane documents.

    {"n": 2, "label": "O_H",
     "terms": {"-1": [-1], "0": [0]},
     "diffs": {"-1": [["x0"]]}}

Positions are decimal strings; ``diffs[p]`` is the matrix of the map from
position ``p`` to ``p + 1`` with one row per summand of the target.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .complexes import BraneComplex, validate
from .poly import PolySyntaxError, format_poly, parse_poly

__all__ = ["DocumentError", "brane_to_document", "digest", "dumps", "load", "parse_document"]


class DocumentError(ValueError):
    pass


def _position(key: Any, where: str) -> int:
    try:
        if isinstance(key, bool):
            raise ValueError
        return int(str(key).strip())
    except ValueError:
        raise DocumentError(f"{where}: position {key!r} is not an integer") from None


def parse_document(doc: Dict[str, Any]) -> BraneComplex:
    """Build a validated BraneComplex from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError("n: must be an integer >= 1")
    raw_terms = doc.get("terms", {})
    if not isinstance(raw_terms, dict):
        raise DocumentError("terms: must be an object")
    terms = {}
    for key, twists in raw_terms.items():
        p = _position(key, "terms")
        if not isinstance(twists, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in twists):
            raise DocumentError(f"terms[{key!r}]: must be a list of integers")
        terms[p] = tuple(twists)
    raw_diffs = doc.get("diffs", {})
    if not isinstance(raw_diffs, dict):
        raise DocumentError("diffs: must be an object")
    diffs = {}
    for key, rows in raw_diffs.items():
        p = _position(key, "diffs")
        src, tgt = terms.get(p, ()), terms.get(p + 1, ())
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise DocumentError(f"diffs[{key!r}]: must be a list of rows")
        if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
            raise DocumentError(f"diffs[{key!r}]: expected {len(tgt)}x{len(src)} matrix")
        mat = []
        for j, row in enumerate(rows):
            out_row = []
            for i, text in enumerate(row):
                if isinstance(text, int) and not isinstance(text, bool):
                    text = str(text)
                if not isinstance(text, str):
                    raise DocumentError(f"diffs[{key!r}][{j}][{i}]: polynomial must be a string")
                try:
                    out_row.append(parse_poly(text, n))
                except PolySyntaxError as exc:
                    raise DocumentError(f"diffs[{key!r}][{j}][{i}]: {exc}") from None
            mat.append(tuple(out_row))
        if src and tgt:
            diffs[p] = tuple(mat)
    try:
        c = BraneComplex(n, terms, diffs)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    rep = validate(c)
    if not rep.valid:
        raise DocumentError(rep.summary())
    return c


def load(path: Union[str, Path]) -> BraneComplex:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    return parse_document(doc)


def brane_to_document(c: BraneComplex, label: Optional[str] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"n": c.n}
    if label is not None:
        doc["label"] = label
    doc["terms"] = {str(p): list(t) for p, t in c.terms.items()}
    doc["diffs"] = {str(p): [[format_poly(e) for e in row] for row in m] for p, m in c.diffs.items()}
    return doc


def dumps(c: BraneComplex, label: Optional[str] = None) -> str:
    return json.dumps(brane_to_document(c, label), indent=2) + "\n"


def digest(*branes: BraneComplex) -> str:
    h = hashlib.sha256()
    for c in branes:
        h.update(json.dumps(brane_to_document(c), sort_keys=True, separators=(",", ":")).encode())
        h.update(b"\0")
    return h.hexdigest()
