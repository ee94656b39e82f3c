"""Deterministic sampling utilities.

All randomness flows through counter-based Philox generators keyed by
(seed, *stream), so any trial of any suite can be reproduced in isolation and
trials could be computed in any order or in parallel without changing output.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import Tripotent, as_tripotent
from .elements import SpaceDescriptor, TripleElement, zero_element

__all__ = [
    "rng_for",
    "rank_profiles",
    "full_rank_profile",
    "gaussian_element",
    "draw_element",
    "sample_element",
    "random_tripotent",
    "random_maximal_partial_isometries",
    "batched_spectral_norms",
]


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for a (seed, stream...) address; order-independent."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def rank_profiles(space: SpaceDescriptor) -> list[tuple[int, ...]]:
    """All rank tuples for the space, lexicographically ordered."""
    ranges = [range(min(m, n) + 1) for m, n in space.factors]
    return list(itertools.product(*ranges))


def full_rank_profile(space: SpaceDescriptor) -> tuple[int, ...]:
    return tuple(min(m, n) for m, n in space.factors)


def _gaussian(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def gaussian_element(
    space: SpaceDescriptor, rng: np.random.Generator, scale: float | None = None
) -> TripleElement:
    """Raw complex-Gaussian element, optionally rescaled to a spectral norm."""
    el = TripleElement(space, tuple(_gaussian(rng, sh) for sh in space.factors))
    if scale is not None and el.norm > 0.0:
        el = el * (scale / el.norm)
    return el


def draw_element(
    space: SpaceDescriptor,
    rank_profile: tuple[int, ...],
    scale: float,
    rng: np.random.Generator,
    sv_floor: float | None = None,
) -> TripleElement:
    """Gaussian draw, SVD-truncated to the rank profile, rescaled to `scale`.

    With ``sv_floor`` set, retained singular values ending up below the floor
    (after rescaling) are lifted to it; the spectral norm stays `scale` as
    long as ``sv_floor <= scale``.  An all-zero rank profile yields the zero
    element regardless of `scale`.
    """
    if len(rank_profile) != space.n_factors:
        raise ValueError(f"rank profile {rank_profile} does not match {space}")
    for r, (m, n) in zip(rank_profile, space.factors):
        if not 0 <= r <= min(m, n):
            raise ValueError(f"rank {r} out of range for factor {m}x{n}")
    if scale < 0.0:
        raise ValueError("scale must be non-negative")
    if sv_floor is not None and sv_floor > scale:
        raise ValueError("sv_floor cannot exceed the requested norm")

    svds = []
    for shape, r in zip(space.factors, rank_profile):
        u, s, vh = np.linalg.svd(_gaussian(rng, shape), full_matrices=False)
        s[r:] = 0.0
        svds.append((u, s, vh))
    peak = max((s[0] if s.size else 0.0) for _, s, _ in svds)
    if peak == 0.0 or scale == 0.0:
        return zero_element(space)
    factor = scale / peak
    blocks = []
    for (u, s, vh), r in zip(svds, rank_profile):
        s = s * factor
        if sv_floor is not None and r > 0:
            s[:r] = np.maximum(s[:r], sv_floor)
        blocks.append((u * s) @ vh)
    return TripleElement(space, tuple(blocks))


def sample_element(
    space: SpaceDescriptor | str,
    rank_profile: tuple[int, ...],
    scale: float,
    trial: int,
    seed: int,
    sv_floor: float | None = None,
) -> TripleElement:
    """Reproducible draw: identical (seed, trial) give identical bytes."""
    desc = SpaceDescriptor.parse(space) if isinstance(space, str) else space
    return draw_element(desc, rank_profile, scale, rng_for(seed, trial), sv_floor)


def _unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(_gaussian(rng, (n, n)))
    # Fix the gauge so the diagonal of R is positive; q stays Haar-like.
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_tripotent(
    space: SpaceDescriptor,
    rank_profile: tuple[int, ...],
    rng: np.random.Generator,
) -> Tripotent:
    """Random partial isometry of the given blockwise ranks."""
    blocks = []
    for (m, n), r in zip(space.factors, rank_profile):
        if not 0 <= r <= min(m, n):
            raise ValueError(f"rank {r} out of range for factor {m}x{n}")
        u = _unitary(rng, m)
        v = _unitary(rng, n)
        blocks.append(u[:, :r] @ v[:, :r].conj().T)
    return as_tripotent(TripleElement(space, tuple(blocks)))


def _batched_unitaries(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """(count, n, n) unitaries via twice-iterated Gram-Schmidt on Gaussians."""
    g = _gaussian(rng, (count, n * n)).reshape(count, n, n)
    for _ in range(2):  # second pass keeps orthogonality loss near round-off
        for j in range(n):
            col = g[:, :, j]
            for i in range(j):
                prev = g[:, :, i]
                col = col - np.einsum("bi,bi->b", prev.conj(), col)[:, None] * prev
            g[:, :, j] = col / np.linalg.norm(col, axis=1)[:, None]
    return g


def random_maximal_partial_isometries(
    shape: tuple[int, int], count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, m, n) batch of rank-min(m, n) partial isometries.

    Each entry is validated (||W W* W - W||_F <= 1e-8) so downstream
    one-sided distance checks are sound, not just probable.
    """
    m, n = shape
    if m <= n:
        u = _batched_unitaries(rng, count, m)
        v = _batched_unitaries(rng, count, n)
        w = u @ np.conj(np.swapaxes(v[:, :, :m], -1, -2))
    else:
        u = _batched_unitaries(rng, count, m)
        v = _batched_unitaries(rng, count, n)
        w = u[:, :, :n] @ np.conj(np.swapaxes(v, -1, -2))
    wh = np.conj(np.swapaxes(w, -1, -2))
    defect = np.abs(w @ wh @ w - w).max()
    if defect > 1e-8:
        raise RuntimeError(f"partial-isometry batch failed validation ({defect:.3e})")
    return w


def _hermitian_eig_range(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(min, max) eigenvalues of batched Hermitian h of size 1, 2 or 3."""
    k = h.shape[-1]
    if k == 1:
        v = np.real(h[..., 0, 0])
        return v, v
    if k == 2:
        t = np.real(h[..., 0, 0] + h[..., 1, 1])
        det = np.real(h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] * h[..., 1, 0])
        disc = np.sqrt(np.clip(t * t - 4.0 * det, 0.0, None))
        return 0.5 * (t - disc), 0.5 * (t + disc)
    if k == 3:
        q = np.real(np.trace(h, axis1=-2, axis2=-1)) / 3.0
        a = h - q[..., None, None] * np.eye(3)
        p = np.sqrt(np.clip(np.real(np.einsum("...ij,...ji->...", a, a)) / 6.0, 0.0, None))
        denom = np.where(p > 0.0, p, 1.0)
        b = a / denom[..., None, None]
        r = np.clip(np.real(np.linalg.det(b)) / 2.0, -1.0, 1.0)
        phi = np.arccos(r) / 3.0
        lmax = q + 2.0 * p * np.cos(phi)
        lmin = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
        return lmin, lmax
    ev = np.linalg.eigvalsh(h)
    return ev[..., 0], ev[..., -1]


def batched_spectral_norms(x: np.ndarray) -> np.ndarray:
    """Spectral norms over the leading batch axes of (..., m, n)."""
    m, n = x.shape[-2:]
    if m <= n:
        h = x @ np.conj(np.swapaxes(x, -1, -2))
    else:
        h = np.conj(np.swapaxes(x, -1, -2)) @ x
    _, lmax = _hermitian_eig_range(h)
    return np.sqrt(np.clip(lmax, 0.0, None))
