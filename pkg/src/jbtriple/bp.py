"""Quasi-invertibility: membership, certificates, and perturbation facts.

An element is quasi-invertible when some y makes the Bergman operator B(a, y)
vanish; in this model that happens exactly when every block has full numerical
rank.  The canonical quasi-inverse is the inverse of a taken inside the unital
algebra on the 2-space of its range tripotent, which coincides with the
generalized inverse in element orientation.

The complement of the quasi-invertible set is where m_q measures distance to;
the distance TO the quasi-invertible set is identically zero here (every
element is a norm-limit of full-rank ones), which is what the richness probe
demonstrates constructively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_RTOL,
    Tripotent,
    bergman_operator,
    peirce_decompose,
    peirce_two_representation,
)
from .elements import SpaceDescriptor, TripleElement
from .errors import NotQuasiInvertibleError, PreconditionError
from .spectral import SvdCache, generalized_inverse, quadratic_conorm, range_tripotent, svd_cache

__all__ = [
    "is_bp_quasi_invertible",
    "m_q",
    "alpha_q",
    "BpCertificate",
    "quasi_inverse",
    "bp_perturbation_bound",
    "ConormPerturbationCheck",
    "conorm_perturbation_bound",
    "extremal_perturbation",
    "bump_to_full_rank",
    "RichnessReport",
    "extremal_richness_probe",
]


def _cache(a: TripleElement | SvdCache) -> SvdCache:
    return a if isinstance(a, SvdCache) else svd_cache(a)


def is_bp_quasi_invertible(a: TripleElement | SvdCache, rtol: float | None = None) -> bool:
    """Whether every block has full numerical rank."""
    if isinstance(a, SvdCache):
        return a.full_rank
    return svd_cache(a, rtol).full_rank


def m_q(a: TripleElement | SvdCache) -> float:
    """Distance to the non-quasi-invertible set.

    Equals the smallest singular value across blocks for quasi-invertible a
    (rank reduction in one block is the cheapest exit) and 0 otherwise.
    """
    cache = _cache(a)
    if not cache.full_rank:
        return 0.0
    return cache.min_retained()


def alpha_q(a: TripleElement) -> float:
    """Distance to the quasi-invertible set: identically 0 in this model."""
    return 0.0


@dataclass(frozen=True, eq=False)
class BpCertificate:
    """Evidence that an element is quasi-invertible.

    ``bergman_residual`` is the realified operator norm of B(element, inverse)
    and must be <= 1e-8; ``symmetric_residual`` is the same for the swapped
    arguments, witnessing that quasi-invertibility is a symmetric relation.
    ``peirce_min_eigenvalue`` > 0 certifies positivity-and-invertibility of the
    element inside the 2-space of its (complete) range tripotent.
    """

    element: TripleElement
    quasi_inverse: TripleElement
    complete_range: Tripotent
    bergman_residual: float
    symmetric_residual: float
    peirce_hermitian_residual: float
    peirce_min_eigenvalue: float


def quasi_inverse(a: TripleElement, rtol: float | None = None) -> BpCertificate:
    """Canonical quasi-inverse with its certificate.

    Raises :class:`NotQuasiInvertibleError` when some block is rank deficient.
    """
    cache = svd_cache(a, rtol)
    if not cache.full_rank:
        raise NotQuasiInvertibleError(
            f"block ranks {cache.ranks} below full rank for {a.space}"
        )
    y = generalized_inverse(cache)
    e = range_tripotent(cache)
    residual = bergman_operator(a, y).operator_norm()
    symmetric = bergman_operator(y, a).operator_norm()
    herm_res = 0.0
    min_eig = math.inf
    for rep in peirce_two_representation(e, a):
        if rep.size == 0:
            continue
        herm_res = max(herm_res, float(np.abs(rep - rep.conj().T).max(initial=0.0)))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (rep + rep.conj().T)).min()))
    return BpCertificate(
        element=a,
        quasi_inverse=y,
        complete_range=e,
        bergman_residual=residual,
        symmetric_residual=symmetric,
        peirce_hermitian_residual=herm_res,
        peirce_min_eigenvalue=min_eig,
    )


def bp_perturbation_bound(a: TripleElement, b: TripleElement) -> bool:
    """Open-ball stability of quasi-invertibility.

    Returns True when ||a - b|| < m_q(a), in which case b is verified
    quasi-invertible; returns False (no claim about b) otherwise.  Requires a
    quasi-invertible.  Gaps within roundoff of the radius itself cannot be
    certified and come back False.
    """
    cache = svd_cache(a)
    if not cache.full_rank:
        raise PreconditionError("a must be quasi-invertible")
    gap = (a - b).norm
    slack = 1e-12 * max(1.0, cache.max_singular_value())
    if gap >= cache.min_retained() - slack:
        return False
    if not is_bp_quasi_invertible(b):
        # Mathematically impossible (Weyl); reaching this means a broken build.
        raise RuntimeError("perturbation inside the safe ball lost full rank")
    return True


@dataclass(frozen=True)
class ConormPerturbationCheck:
    """Outcome of the conorm perturbation inequality on one pair.

    ``literal_holds`` tracks the strict displayed bound
    |gamma(a) - gamma(b)| <= sqrt(gamma(a)) ||a-b|| + atol, which fails on an
    open set of honest inputs (see the corrected bound); truthiness of the
    whole object reports exactly that flag.  ``corrected_holds`` tracks the
    provable bound with constant (2 sqrt(gamma(a)) + ||a-b||) and
    ``chained_holds`` the weaker ||a-b|| (||a|| + ||b||) form; both always
    hold and the test suites assert them.
    """

    gap: float
    distance: float
    bound_literal: float
    bound_chained: float
    bound_corrected: float
    literal_holds: bool
    chained_holds: bool
    corrected_holds: bool
    gamma_a: float = field(default=math.nan)
    gamma_b: float = field(default=math.nan)

    def __bool__(self) -> bool:
        return self.literal_holds


def conorm_perturbation_bound(
    a: TripleElement, b: TripleElement, atol: float = 1e-10
) -> ConormPerturbationCheck:
    """Evaluate the conorm perturbation bounds for a quasi-invertible a.

    Precondition: a quasi-invertible and ||a - b|| < sqrt(gamma^q(a)).
    """
    cache = svd_cache(a)
    if not cache.full_rank:
        raise PreconditionError("a must be quasi-invertible")
    dist = (a - b).norm
    root = cache.min_retained()
    if dist >= root:
        raise PreconditionError(f"||a-b|| = {dist:.6g} not inside the ball of radius {root:.6g}")
    g_a = quadratic_conorm(cache).value
    g_b = quadratic_conorm(b).value
    gap = abs(g_a - g_b)
    bound_literal = root * dist + atol
    bound_chained = dist * (a.norm + b.norm) + atol
    bound_corrected = dist * (2.0 * root + dist) + atol
    return ConormPerturbationCheck(
        gap=gap,
        distance=dist,
        bound_literal=bound_literal,
        bound_chained=bound_chained,
        bound_corrected=bound_corrected,
        literal_holds=gap <= bound_literal,
        chained_holds=gap <= bound_chained,
        corrected_holds=gap <= bound_corrected,
        gamma_a=g_a,
        gamma_b=g_b,
    )


def extremal_perturbation(
    a: TripleElement, b: TripleElement, beta: float, rtol: float | None = None
) -> TripleElement:
    """Push a into the quasi-invertible set along the range tripotent of b.

    For quasi-invertible b with ||a - b|| < beta, the element
    c = a + beta r(b) is quasi-invertible with m_q(c) >= beta - ||a - b||, and
    the 2-space component of a shifted by beta r(b) is invertible there.  All
    three facts are verified before c is returned.
    """
    a.require_same_space(b)
    if beta <= 0.0:
        raise PreconditionError("beta must be positive")
    cache_b = svd_cache(b, rtol)
    if not cache_b.full_rank:
        raise PreconditionError("b must be quasi-invertible")
    gap = (a - b).norm
    if gap >= beta:
        raise PreconditionError(f"||a-b|| = {gap:.6g} must be < beta = {beta:.6g}")

    r_b = range_tripotent(cache_b)
    c = a + beta * r_b.element
    floor = beta - gap - 1e-9
    if not is_bp_quasi_invertible(c) or m_q(c) < floor:
        raise RuntimeError("perturbation lower bound failed; broken build")
    shifted = peirce_decompose(a, r_b).p2 + beta * r_b.element
    tol = DEFAULT_RTOL * max(1.0, beta + a.norm)
    for rep in peirce_two_representation(r_b, shifted):
        if rep.size and np.linalg.svd(rep, compute_uv=False).min() <= tol:
            raise RuntimeError("shifted 2-space component is not invertible; broken build")
    return c


def bump_to_full_rank(a: TripleElement, eps: float) -> TripleElement:
    """Nearest-style full-rank approximant: lift vanishing singular values.

    Every singular value below the retention threshold is replaced by eps/2,
    keeping singular vectors, so ||a - result|| <= eps/2 and the result is
    quasi-invertible.
    """
    if eps <= 0.0:
        raise PreconditionError("eps must be positive")
    cache = svd_cache(a)

    def lift(s: np.ndarray, rank: int) -> np.ndarray:
        out = s.copy()
        out[rank:] = 0.5 * eps
        return out

    return cache.rebuild(lift)


@dataclass(frozen=True)
class RichnessReport:
    """Constructive demonstration that full-rank elements are dense."""

    space: SpaceDescriptor
    trials: int
    seed: int
    epsilons: tuple[float, ...]
    max_distance_by_eps: dict[float, float]
    alpha_q_upper_bound: float
    all_full_rank: bool


def extremal_richness_probe(
    space: SpaceDescriptor | str,
    trials: int = 50,
    seed: int = 0,
    epsilons: tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4),
) -> RichnessReport:
    """For sampled elements of every rank profile, produce full-rank
    approximants within eps/2 for each eps of a decreasing schedule."""
    from .sampling import rank_profiles, sample_element  # deferred: sampling imports spectral

    desc = SpaceDescriptor.parse(space) if isinstance(space, str) else space
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if list(epsilons) != sorted(set(epsilons), reverse=True):
        raise ValueError("epsilon schedule must be strictly decreasing")

    profiles = rank_profiles(desc)
    worst = {eps: 0.0 for eps in epsilons}
    alpha_bound = 0.0
    all_ok = True
    for trial in range(trials):
        profile = profiles[trial % len(profiles)]
        scale = 0.0 if all(r == 0 for r in profile) else 0.5 + (trial % 5) * 0.5
        a = sample_element(desc, profile, scale, trial, seed)
        per_sample = math.inf
        for eps in epsilons:
            b = bump_to_full_rank(a, eps)
            d = (a - b).norm
            worst[eps] = max(worst[eps], d)
            per_sample = min(per_sample, d)
            if not is_bp_quasi_invertible(b) or d > 0.5 * eps + 1e-12:
                all_ok = False
        alpha_bound = max(alpha_bound, per_sample)
    return RichnessReport(
        space=desc,
        trials=trials,
        seed=seed,
        epsilons=tuple(epsilons),
        max_distance_by_eps=worst,
        alpha_q_upper_bound=alpha_bound,
        all_full_rank=all_ok,
    )
