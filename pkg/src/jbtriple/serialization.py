"""Element files and inline element expressions.

File schema (JSON):

    {
      "schema_version": 1,
      "space": [[rows, cols], ...],
      "blocks": [ [ [[re, im], ...row...], ...rows... ], ...factors... ]
    }

Entries are [real, imaginary] pairs in row-major order.  Inline expressions
accept per-factor terms joined by ";": ``diag(2,1)``, ``eye(2)``,
``zeros(2x3)``, or a nested list literal such as ``[[1, 0.5], [0, "1+2j"]]``
(strings are parsed as Python complex literals).
"""

from __future__ import annotations

import ast
import hashlib
import json
import re
from pathlib import Path

import numpy as np

from .elements import SpaceDescriptor, TripleElement

__all__ = [
    "SCHEMA_VERSION",
    "element_to_dict",
    "element_from_dict",
    "save_element",
    "load_element",
    "parse_inline",
    "element_digest",
]

SCHEMA_VERSION = 1

_DIAG = re.compile(r"^diag\((?P<body>.*)\)$")
_EYE = re.compile(r"^eye\((?P<n>\d+)\)$")
_ZEROS = re.compile(r"^zeros\((?P<m>\d+)\s*(?:x|,)\s*(?P<n>\d+)\)$")


def element_to_dict(el: TripleElement) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "space": [list(shape) for shape in el.space.factors],
        "blocks": [
            [[[float(v.real), float(v.imag)] for v in row] for row in block]
            for block in el.blocks
        ],
    }


def element_from_dict(data: dict) -> TripleElement:
    if not isinstance(data, dict) or "space" not in data or "blocks" not in data:
        raise ValueError("element document needs 'space' and 'blocks' keys")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported element schema version {version!r}")
    space = SpaceDescriptor(tuple(tuple(int(d) for d in shape) for shape in data["space"]))
    raw = data["blocks"]
    if len(raw) != space.n_factors:
        raise ValueError(f"{len(raw)} blocks for {space.n_factors} factors")
    blocks = []
    for block, (m, n) in zip(raw, space.factors):
        arr = np.asarray(block, dtype=float)
        if arr.shape != (m, n, 2):
            raise ValueError(f"block shaped {arr.shape}, expected {(m, n, 2)}")
        blocks.append(arr[..., 0] + 1j * arr[..., 1])
    return TripleElement(space, tuple(blocks))


def save_element(el: TripleElement, path: str | Path) -> None:
    Path(path).write_text(json.dumps(element_to_dict(el), sort_keys=True))


def load_element(path: str | Path) -> TripleElement:
    return element_from_dict(json.loads(Path(path).read_text()))


def _parse_scalar(token) -> complex:
    if isinstance(token, str):
        return complex(token.replace(" ", ""))
    if isinstance(token, (int, float, complex)):
        return complex(token)
    raise ValueError(f"cannot read scalar {token!r}")


def _parse_block(term: str) -> np.ndarray:
    term = term.strip()
    if (match := _DIAG.match(term)) is not None:
        vals = [_parse_scalar(v.strip()) for v in match.group("body").split(",") if v.strip()]
        if not vals:
            raise ValueError("diag() needs at least one entry")
        return np.diag(np.asarray(vals, dtype=np.complex128))
    if (match := _EYE.match(term)) is not None:
        return np.eye(int(match.group("n")), dtype=np.complex128)
    if (match := _ZEROS.match(term)) is not None:
        return np.zeros((int(match.group("m")), int(match.group("n"))), dtype=np.complex128)
    try:
        rows = ast.literal_eval(term)
    except (SyntaxError, ValueError) as exc:
        raise ValueError(f"cannot parse block expression {term!r}") from exc
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ValueError(f"block literal must be a nested list, got {term!r}")
    mat = [[_parse_scalar(v) for v in row] for row in rows]
    widths = {len(row) for row in mat}
    if len(widths) != 1:
        raise ValueError("rows have inconsistent lengths")
    return np.asarray(mat, dtype=np.complex128)


def parse_inline(expr: str) -> TripleElement:
    """Parse an inline element expression; factors separated by ';'."""
    terms = [t for t in expr.split(";") if t.strip()]
    if not terms:
        raise ValueError("empty element expression")
    return TripleElement.from_blocks([_parse_block(t) for t in terms])


def element_digest(el: TripleElement) -> str:
    """Short stable identifier for report records."""
    payload = json.dumps(element_to_dict(el), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]
