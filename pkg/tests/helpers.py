"""Small constructors shared by the test modules."""

import numpy as np

from jbtriple import SpaceDescriptor, TripleElement


def el(*blocks) -> TripleElement:
    """Element from raw per-factor arrays; the space is inferred."""
    mats = tuple(np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks)
    return TripleElement(SpaceDescriptor(tuple(m.shape for m in mats)), mats)


def diag(*entries) -> TripleElement:
    """Single square-factor element with the given diagonal."""
    return el(np.diag([complex(v) for v in entries]))


def matrix_unit(m: int, n: int, i: int, j: int) -> TripleElement:
    block = np.zeros((m, n), dtype=complex)
    block[i, j] = 1.0
    return el(block)
