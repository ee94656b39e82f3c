"""Triple product, the operator calculus built from it, and Peirce machinery.

Conventions, fixed once for the whole toolkit:

* triple product, blockwise:  {x, y, z} = (x y* z + z y* x) / 2
* quadratic operator:         Q(x, y) z = {x, z, y}   (conjugate linear in z)
* multiplication operator:    L(x, y) z = {x, y, z}   (complex linear in z)
* Bergman operator:           B(x, y) = Id - 2 L(x, y) + Q(x) Q(y),
  which collapses blockwise to  z -> (1 - x y*) z (1 - y* x).

A tripotent is an element with {e, e, e} = e, i.e. a blockwise partial
isometry.  Its Peirce projections are P2 = Q(e)^2, P1 = 2(L(e,e) - Q(e)^2),
P0 = Id - 2 L(e,e) + Q(e)^2, with eigenvalues k/2 for L(e,e) on the k-space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .elements import SpaceDescriptor, TripleElement, canonical_basis
from .errors import InvalidTripotentError, PeirceMembershipError

__all__ = [
    "DEFAULT_RTOL",
    "triple_product",
    "LinearMap",
    "ConjugateLinearMap",
    "q_operator",
    "l_operator",
    "bergman_operator",
    "Tripotent",
    "as_tripotent",
    "is_tripotent",
    "is_complete",
    "PeirceDecomposition",
    "peirce_decompose",
    "jordan_product_at",
    "involution_at",
    "peirce_two_representation",
]

# Default relative tolerance for predicates; scaled by max(1, norm of input).
DEFAULT_RTOL = 1e-9


def _tol(rtol: float | None, *norms: float) -> float:
    r = DEFAULT_RTOL if rtol is None else float(rtol)
    return r * max(1.0, *norms) if norms else r


def triple_product(x: TripleElement, y: TripleElement, z: TripleElement) -> TripleElement:
    """{x, y, z}, computed blockwise."""
    x.require_same_space(y)
    x.require_same_space(z)
    blocks = tuple(
        0.5 * (bx @ by.conj().T @ bz + bz @ by.conj().T @ bx)
        for bx, by, bz in zip(x.blocks, y.blocks, z.blocks)
    )
    return TripleElement(x.space, blocks)


class _RealLinearMap:
    """A map on elements that is linear over the reals.

    Carries both the exact blockwise action (``__call__``) and, on demand, the
    matrix of the map on realified coordinates, which is what kernel, range
    and operator-norm questions are asked of.
    """

    conjugate_linear = False

    def __init__(self, space: SpaceDescriptor, apply: Callable[[TripleElement], TripleElement]):
        self.space = space
        self._apply = apply

    def __call__(self, z: TripleElement) -> TripleElement:
        if z.space != self.space:
            raise PeirceMembershipError(f"operand space {z.space} != operator space {self.space}")
        return self._apply(z)

    @cached_property
    def matrix(self) -> np.ndarray:
        cols = [self(b).realify() for b in canonical_basis(self.space)]
        return np.column_stack(cols)

    @cached_property
    def _singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)

    def operator_norm(self) -> float:
        return float(self._singular_values[0]) if self._singular_values.size else 0.0

    def rank(self, rtol: float = DEFAULT_RTOL) -> int:
        s = self._singular_values
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > rtol * max(1.0, s[0])))

    def kernel_dimension(self, rtol: float = DEFAULT_RTOL) -> int:
        return self.matrix.shape[1] - self.rank(rtol)

    def is_injective(self, rtol: float = DEFAULT_RTOL) -> bool:
        return self.kernel_dimension(rtol) == 0

    def is_surjective(self, rtol: float = DEFAULT_RTOL) -> bool:
        return self.rank(rtol) == self.matrix.shape[0]

    def kernel_basis(self, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        """Orthonormal basis (columns) of the kernel in realified coordinates."""
        _, s, vt = np.linalg.svd(self.matrix)
        r = 0 if s.size == 0 or s[0] == 0.0 else int(np.count_nonzero(s > rtol * max(1.0, s[0])))
        return vt[r:].T

    def symmetric_spectrum(self, atol: float = 1e-10) -> np.ndarray:
        """Eigenvalues, requiring the realified matrix to be symmetric."""
        m = self.matrix
        skew = float(np.abs(m - m.T).max(initial=0.0))
        if skew > atol * max(1.0, float(np.abs(m).max(initial=0.0))):
            raise ValueError(f"realified matrix is not symmetric (skew {skew:.3e})")
        return np.linalg.eigvalsh(0.5 * (m + m.T))


class LinearMap(_RealLinearMap):
    conjugate_linear = False


class ConjugateLinearMap(_RealLinearMap):
    conjugate_linear = True


def q_operator(x: TripleElement, y: TripleElement | None = None) -> ConjugateLinearMap:
    """Q(x, y): z -> {x, z, y}; Q(x) := Q(x, x)."""
    if y is None:
        y = x
    x.require_same_space(y)
    return ConjugateLinearMap(x.space, lambda z: triple_product(x, z, y))


def l_operator(x: TripleElement, y: TripleElement) -> LinearMap:
    """L(x, y): z -> {x, y, z}."""
    x.require_same_space(y)
    return LinearMap(x.space, lambda z: triple_product(x, y, z))


def bergman_operator(x: TripleElement, y: TripleElement) -> LinearMap:
    """B(x, y): z -> (1 - x y*) z (1 - y* x), blockwise."""
    x.require_same_space(y)

    def apply(z: TripleElement) -> TripleElement:
        blocks = []
        for bx, by, bz in zip(x.blocks, y.blocks, z.blocks):
            m, n = bz.shape
            left = np.eye(m) - bx @ by.conj().T
            right = np.eye(n) - by.conj().T @ bx
            blocks.append(left @ bz @ right)
        return TripleElement(x.space, tuple(blocks))

    return LinearMap(x.space, apply)


def is_tripotent(x: TripleElement, rtol: float | None = None) -> bool:
    """Whether {x, x, x} = x within tolerance (blockwise partial isometry)."""
    residual = (triple_product(x, x, x) - x).norm
    return residual <= _tol(rtol, x.norm)


@dataclass(frozen=True, eq=False)
class Tripotent:
    """A validated tripotent with per-factor ranks and completeness flag.

    Use :func:`as_tripotent` to build one from a raw element; the constructor
    itself re-validates, so an invalid element cannot sneak through either way.
    """

    element: TripleElement
    rank_per_block: tuple[int, ...]
    complete: bool

    def __post_init__(self) -> None:
        if not is_tripotent(self.element):
            residual = (triple_product(self.element, self.element, self.element) - self.element).norm
            raise InvalidTripotentError(f"cube residual {residual:.3e}")

    @property
    def space(self) -> SpaceDescriptor:
        return self.element.space

    def is_unitary(self, rtol: float | None = None) -> bool:
        """Whether L(e, e) = Id, i.e. every block is a square unitary."""
        return all(
            m == n and r == m
            for (m, n), r in zip(self.space.factors, self.rank_per_block)
        )


def as_tripotent(x: TripleElement | Tripotent, rtol: float | None = None) -> Tripotent:
    """Validate an element as a tripotent and record ranks and completeness."""
    if isinstance(x, Tripotent):
        return x
    if not is_tripotent(x, rtol):
        residual = (triple_product(x, x, x) - x).norm
        raise InvalidTripotentError(f"cube residual {residual:.3e}")
    # Singular values of a partial isometry are 0 or 1; 1/2 splits them safely.
    ranks = tuple(
        int(np.count_nonzero(np.linalg.svd(b, compute_uv=False) > 0.5)) for b in x.blocks
    )
    complete = all(r == min(m, n) for r, (m, n) in zip(ranks, x.space.factors))
    return Tripotent(x, ranks, complete)


def is_complete(e: TripleElement | Tripotent, rtol: float | None = None) -> bool:
    """Whether the zero Peirce space vanishes (every block has full rank)."""
    return as_tripotent(e, rtol).complete


@dataclass(frozen=True, eq=False)
class PeirceDecomposition:
    """Components a = p2 + p1 + p0 relative to a tripotent."""

    tripotent: Tripotent
    p2: TripleElement
    p1: TripleElement
    p0: TripleElement

    def reconstruct(self) -> TripleElement:
        return self.p2 + self.p1 + self.p0

    def component(self, k: int) -> TripleElement:
        return {2: self.p2, 1: self.p1, 0: self.p0}[k]


def peirce_decompose(a: TripleElement, e: TripleElement | Tripotent,
                     rtol: float | None = None) -> PeirceDecomposition:
    """Split a into Peirce components via P2 = Q(e)^2 and L(e, e)."""
    tri = as_tripotent(e, rtol)
    ee = tri.element
    a.require_same_space(ee)
    qa = triple_product(ee, a, ee)
    p2 = triple_product(ee, qa, ee)
    la = triple_product(ee, ee, a)
    p1 = 2.0 * (la - p2)
    p0 = a - 2.0 * la + p2
    return PeirceDecomposition(tri, p2, p1, p0)


def _require_peirce_two(a: TripleElement, tri: Tripotent, rtol: float | None) -> None:
    gap = (peirce_decompose(a, tri).p2 - a).norm
    if gap > _tol(rtol, a.norm):
        raise PeirceMembershipError(f"element is {gap:.3e} away from the 2-space")


def jordan_product_at(e: TripleElement | Tripotent, x: TripleElement, y: TripleElement,
                      rtol: float | None = None) -> TripleElement:
    """Product x o y = {x, e, y} of the unital algebra on the 2-space of e."""
    tri = as_tripotent(e, rtol)
    _require_peirce_two(x, tri, rtol)
    _require_peirce_two(y, tri, rtol)
    return triple_product(x, tri.element, y)


def involution_at(e: TripleElement | Tripotent, x: TripleElement,
                  rtol: float | None = None) -> TripleElement:
    """Involution x* = {e, x, e} of the unital algebra on the 2-space of e."""
    tri = as_tripotent(e, rtol)
    _require_peirce_two(x, tri, rtol)
    return triple_product(tri.element, x, tri.element)


def peirce_two_representation(e: TripleElement | Tripotent, x: TripleElement) -> list[np.ndarray]:
    """Concrete *-algebra picture of the 2-space of e, applied to x.

    For each factor, with e = U V* on its retained singular directions, the map
    x -> U* (x e*) U is a Jordan *-isomorphism from the 2-space onto square
    matrices of size rank(e); e itself goes to the identity.  Blocks where e
    has rank 0 contribute an empty 0x0 matrix.
    """
    tri = as_tripotent(e, None)
    x.require_same_space(tri.element)
    out = []
    for be, bx, r in zip(tri.element.blocks, x.blocks, tri.rank_per_block):
        if r == 0:
            out.append(np.zeros((0, 0), dtype=np.complex128))
            continue
        u, s, _ = np.linalg.svd(be)
        ur = u[:, :r]
        out.append(ur.conj().T @ (bx @ be.conj().T) @ ur)
    return out
