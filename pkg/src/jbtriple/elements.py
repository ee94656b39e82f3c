"""Spaces and elements.

The ambient model is a finite l-infinity sum of rectangular complex matrix
factors.  An element is one complex matrix per factor; the norm is the maximum
of the blockwise spectral norms, which makes the sum again a space of the same
kind.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import SpaceMismatchError

__all__ = ["SpaceDescriptor", "TripleElement", "zero_element", "canonical_basis"]

_SPACE_TOKEN = re.compile(r"^\s*(\d+)\s*x\s*(\d+)\s*$")


@dataclass(frozen=True)
class SpaceDescriptor:
    """Ordered list of factor shapes ``(rows, cols)`` making up the sum."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a space needs at least one factor")
        for shape in self.factors:
            if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
                raise ValueError(f"factor shape {shape!r} is not a positive pair")
        object.__setattr__(self, "factors", tuple((int(m), int(n)) for m, n in self.factors))

    @classmethod
    def parse(cls, text: str) -> "SpaceDescriptor":
        """Parse ``"2x2"`` or ``"2x2,3x2"`` into a descriptor."""
        factors = []
        for token in text.split(","):
            match = _SPACE_TOKEN.match(token)
            if match is None:
                raise ValueError(f"cannot parse factor {token!r}; expected like '2x3'")
            factors.append((int(match.group(1)), int(match.group(2))))
        return cls(tuple(factors))

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def complex_dim(self) -> int:
        return sum(m * n for m, n in self.factors)

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def __str__(self) -> str:
        return ",".join(f"{m}x{n}" for m, n in self.factors)


def _as_space(space: SpaceDescriptor | str | Sequence[tuple[int, int]]) -> SpaceDescriptor:
    if isinstance(space, SpaceDescriptor):
        return space
    if isinstance(space, str):
        return SpaceDescriptor.parse(space)
    return SpaceDescriptor(tuple(space))


@dataclass(frozen=True, eq=False)
class TripleElement:
    """One complex matrix per factor; immutable once constructed."""

    space: SpaceDescriptor
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.blocks) != self.space.n_factors:
            raise SpaceMismatchError(
                f"got {len(self.blocks)} blocks for space {self.space}"
            )
        frozen = []
        for block, shape in zip(self.blocks, self.space.factors):
            arr = np.array(block, dtype=np.complex128, copy=True)
            if arr.shape != shape:
                raise SpaceMismatchError(f"block shape {arr.shape} != factor {shape}")
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "blocks", tuple(frozen))

    @classmethod
    def from_blocks(
        cls,
        blocks: Iterable[np.ndarray],
        space: SpaceDescriptor | str | None = None,
    ) -> "TripleElement":
        mats = [np.atleast_2d(np.asarray(b, dtype=np.complex128)) for b in blocks]
        if space is None:
            space = SpaceDescriptor(tuple(m.shape for m in mats))
        return cls(_as_space(space), tuple(mats))

    @classmethod
    def single(cls, matrix: np.ndarray) -> "TripleElement":
        """Element of a one-factor space."""
        return cls.from_blocks([matrix])

    @cached_property
    def norm(self) -> float:
        """Maximum of blockwise spectral norms (exact, via SVD)."""
        return max(float(np.linalg.norm(b, 2)) for b in self.blocks)

    def block(self, j: int) -> np.ndarray:
        return self.blocks[j]

    def require_same_space(self, other: "TripleElement") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    # Pointwise linear structure.  Triple-specific operations live elsewhere.
    def __add__(self, other: "TripleElement") -> "TripleElement":
        self.require_same_space(other)
        return TripleElement(self.space, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "TripleElement") -> "TripleElement":
        self.require_same_space(other)
        return TripleElement(self.space, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "TripleElement":
        return TripleElement(self.space, tuple(-a for a in self.blocks))

    def __mul__(self, scalar: complex) -> "TripleElement":
        return TripleElement(self.space, tuple(scalar * a for a in self.blocks))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "TripleElement":
        return self * (1.0 / scalar)

    def distance_to(self, other: "TripleElement") -> float:
        return (self - other).norm

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(np.abs(b).max(initial=0.0) <= atol for b in self.blocks)

    def realify(self) -> np.ndarray:
        """Coordinates in R^(2N): all real parts (row-major), then all imaginary."""
        re = np.concatenate([b.real.ravel() for b in self.blocks])
        im = np.concatenate([b.imag.ravel() for b in self.blocks])
        return np.concatenate([re, im])

    @classmethod
    def unrealify(cls, space: SpaceDescriptor, vec: np.ndarray) -> "TripleElement":
        n = space.complex_dim
        if vec.shape != (2 * n,):
            raise ValueError(f"expected vector of length {2 * n}, got {vec.shape}")
        re, im = vec[:n], vec[n:]
        blocks, off = [], 0
        for m, k in space.factors:
            size = m * k
            blocks.append(
                (re[off : off + size] + 1j * im[off : off + size]).reshape(m, k)
            )
            off += size
        return cls(space, tuple(blocks))

    def __repr__(self) -> str:
        return f"TripleElement(space={self.space}, norm={self.norm:.6g})"


def zero_element(space: SpaceDescriptor | str) -> TripleElement:
    desc = _as_space(space)
    return TripleElement(desc, tuple(np.zeros(shape, dtype=np.complex128) for shape in desc.factors))


def canonical_basis(space: SpaceDescriptor) -> list[TripleElement]:
    """Real basis of the realified space, in realify() coordinate order."""
    out = []
    eye = np.eye(space.real_dim)
    for k in range(space.real_dim):
        out.append(TripleElement.unrealify(space, eye[k]))
    return out
