"""Extreme-point geometry of the unit ball and continuity of the conorm.

Extreme points of the unit ball are exactly the complete tripotents (blockwise
maximal partial isometries).  Two routes to the distance from an arbitrary
element are kept deliberately separate:

* closed formula: max(1 - m_q(a), ||a|| - 1) for quasi-invertible a and
  max(1, ||a|| - 1) otherwise;
* constructive oracle: set every singular value to 1 keeping singular vectors,
  then measure.  No random maximal partial isometry can do better, which the
  suites check by search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, NamedTuple

import numpy as np

from .algebra import DEFAULT_RTOL, Tripotent, as_tripotent, q_operator
from .bp import ConormPerturbationCheck, conorm_perturbation_bound, m_q
from .elements import TripleElement
from .errors import DecompositionError, PreconditionError
from .sampling import gaussian_element, rng_for
from .spectral import (
    INFINITY,
    SvdCache,
    cstar_conorm,
    generalized_inverse,
    is_von_neumann_regular,
    quadratic_conorm,
    svd_cache,
)

__all__ = [
    "ContinuityClass",
    "DistanceResult",
    "nearest_extreme_point",
    "dist_to_extreme_points",
    "LambdaValue",
    "lambda_value",
    "convex_decompose",
    "continuity_classify",
    "WitnessReport",
    "continuity_witness",
    "TripotentContinuityReport",
    "tripotent_conorm_continuity_case",
    "GeometryReport",
    "geometry_report",
]


class ContinuityClass(Enum):
    """Continuity status of the quadratic conorm at an element."""

    CONTINUOUS_BP = "continuous-quasi-invertible"
    CONTINUOUS_NONREGULAR = "continuous-non-regular"  # unreachable here except at 0
    DISCONTINUOUS = "discontinuous"
    ZERO_SPECIAL = "zero-special"


class DistanceResult(NamedTuple):
    formula: float
    oracle: float


def _cache(a: TripleElement | SvdCache) -> SvdCache:
    return a if isinstance(a, SvdCache) else svd_cache(a)


def nearest_extreme_point(a: TripleElement | SvdCache) -> Tripotent:
    """Closest complete tripotent: every singular value replaced by 1.

    For singular values at zero the singular vectors are an arbitrary
    orthonormal completion, so the point (not the distance) is gauge
    dependent; callers must not rely on the vector choice.
    """
    cache = _cache(a)
    blocks = [(b.u * np.ones_like(b.s)) @ b.vh for b in cache.blocks]
    return as_tripotent(TripleElement(cache.element.space, tuple(blocks)))


def dist_to_extreme_points(a: TripleElement | SvdCache) -> DistanceResult:
    """Distance to the extreme points of the unit ball, both routes."""
    cache = _cache(a)
    norm = cache.element.norm
    if cache.full_rank:
        formula = max(1.0 - cache.min_retained(), norm - 1.0)
    else:
        formula = max(1.0, norm - 1.0)
    oracle = (cache.element - nearest_extreme_point(cache).element).norm
    return DistanceResult(formula=formula, oracle=oracle)


@dataclass(frozen=True)
class LambdaValue:
    """Largest weight of an extreme point in convex splittings of a.

    ``kind`` is "exact" where the closed form provably holds
    (quasi-invertible elements of the closed ball; non-quasi-invertible
    elements of the open ball) and "upper_bound" on the sphere outside the
    quasi-invertible set, where only lambda <= 1/2 is known.
    """

    kind: Literal["exact", "upper_bound"]
    value: float


def lambda_value(a: TripleElement | SvdCache, rtol: float | None = None) -> LambdaValue:
    """Lambda function of an element of the closed unit ball."""
    cache = _cache(a)
    tol = DEFAULT_RTOL if rtol is None else float(rtol)
    norm = cache.element.norm
    if norm > 1.0 + tol:
        raise PreconditionError(f"lambda is defined on the unit ball; ||a|| = {norm:.6g}")
    if cache.full_rank:
        return LambdaValue("exact", 0.5 * (1.0 + min(cache.min_retained(), 1.0)))
    if norm < 1.0 - tol:
        return LambdaValue("exact", 0.5)
    return LambdaValue("upper_bound", 0.5)


def convex_decompose(
    a: TripleElement, t: float, rtol: float | None = None
) -> tuple[Tripotent, TripleElement]:
    """Write a = t e + (1 - t) y with e a complete tripotent and ||y|| <= 1.

    Valid for non-quasi-invertible a in the open unit ball and any weight
    t in (0, 1/2): e is the nearest extreme point to a / t, whose distance
    max(1, ||a||/t - 1) stays below 1/t - 1 precisely because ||a|| < 1 and
    t < 1/2.
    """
    if not 0.0 < t < 0.5:
        raise ValueError(f"t must be in (0, 1/2), got {t}")
    cache = svd_cache(a, rtol)
    if cache.full_rank:
        raise DecompositionError("input is quasi-invertible; this splitting targets the complement")
    if a.norm >= 1.0:
        raise DecompositionError(f"need ||a|| < 1, got {a.norm:.6g}")
    beta = 1.0 / t
    scaled = beta * a
    e = nearest_extreme_point(scaled)
    gap = (scaled - e.element).norm
    if gap >= beta - 1.0:
        raise DecompositionError(
            f"nearest extreme point at distance {gap:.6g} >= beta - 1 = {beta - 1.0:.6g}"
        )
    y = (scaled - e.element) / (beta - 1.0)
    residual = (t * e.element + (1.0 - t) * y - a).norm
    if residual > 1e-10 or y.norm > 1.0 + 1e-12:
        raise RuntimeError("decomposition failed its own certificate; broken build")
    return e, y


def continuity_classify(a: TripleElement | SvdCache) -> ContinuityClass:
    """Where the quadratic conorm is continuous.

    Zero is split out as its own class (conorm jumps from INFINITY), full-rank
    elements are continuity points, and every other element is a genuine
    discontinuity; the "continuous non-regular" class is empty in finite
    dimension since nonzero elements are all regular.
    """
    cache = _cache(a)
    if cache.is_zero:
        return ContinuityClass.ZERO_SPECIAL
    if cache.full_rank:
        return ContinuityClass.CONTINUOUS_BP
    return ContinuityClass.DISCONTINUOUS


@dataclass(frozen=True)
class WitnessReport:
    """A sequence a_n -> a with the conorm values along it.

    For the discontinuity branch the sequence lifts one vanishing singular
    direction by scale/n, so gamma^q(a_n) collapses like 1/n^2 while
    gamma^q(a) stays put.  For the convergence branch the steps are random of
    size ~1/n inside the safe ball and gamma^q(a_n) -> gamma^q(a); the gaps
    ||a_n^ - a^|| between generalized inverses are recorded as well.
    """

    branch: Literal["discontinuity", "convergence"]
    gamma_at_a: float
    steps: tuple[int, ...]
    step_norms: tuple[float, ...]
    gamma_values: tuple[float, ...]
    inverse_gaps: tuple[float, ...] | None
    final_gap: float


def _step_ladder(n_steps: int) -> list[int]:
    ladder = []
    k = 1
    while k < n_steps:
        ladder.append(k)
        k *= 2
    ladder.append(n_steps)
    return ladder


def continuity_witness(
    a: TripleElement,
    n_steps: int = 1000,
    branch: Literal["auto", "discontinuity", "convergence"] = "auto",
    rng: np.random.Generator | None = None,
) -> WitnessReport:
    """Build the witness sequence for the continuity classification of a."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    cache = svd_cache(a)
    if cache.is_zero:
        raise PreconditionError("continuity witness needs a nonzero element")
    resolved = branch
    if branch == "auto":
        resolved = "convergence" if cache.full_rank else "discontinuity"
    elif branch == "discontinuity" and cache.full_rank:
        raise PreconditionError("discontinuity branch needs a rank-deficient element")
    elif branch == "convergence" and not cache.full_rank:
        raise PreconditionError("convergence branch needs a quasi-invertible element")

    gamma_a = quadratic_conorm(cache).value
    scale = cache.min_retained()
    ns = _step_ladder(n_steps)

    if resolved == "discontinuity":
        space = a.space
        for j, b in enumerate(cache.blocks):
            k = min(space.factors[j])
            if b.rank < k:
                direction_blocks = [np.zeros(sh, np.complex128) for sh in space.factors]
                direction_blocks[j] = np.outer(b.u[:, b.rank], b.vh[b.rank, :])
                break
        w = TripleElement(space, tuple(direction_blocks))
        gammas, steps = [], []
        for n in ns:
            a_n = a + (scale / n) * w
            gammas.append(quadratic_conorm(a_n).value)
            steps.append(scale / n)
        return WitnessReport(
            branch="discontinuity",
            gamma_at_a=gamma_a,
            steps=tuple(ns),
            step_norms=tuple(steps),
            gamma_values=tuple(gammas),
            inverse_gaps=None,
            final_gap=gammas[-1],
        )

    if rng is None:
        rng = rng_for(1347)
    w = gaussian_element(a.space, rng, scale=1.0)
    c = 0.5 * scale
    inv_a = generalized_inverse(cache)
    gammas, gaps, steps = [], [], []
    for n in ns:
        a_n = a + (c / n) * w
        gammas.append(quadratic_conorm(a_n).value)
        gaps.append((generalized_inverse(a_n) - inv_a).norm)
        steps.append(c / n)
    return WitnessReport(
        branch="convergence",
        gamma_at_a=gamma_a,
        steps=tuple(ns),
        step_norms=tuple(steps),
        gamma_values=tuple(gammas),
        inverse_gaps=tuple(gaps),
        final_gap=abs(gammas[-1] - gamma_a),
    )


@dataclass(frozen=True)
class TripotentContinuityReport:
    """Conorm behavior at a complete tripotent with a nonzero 1-space.

    Such a point shows that continuity of the conorm does not require the
    quadratic operator to be injective or surjective: both flags below are
    False for any complete tripotent of a non-square factor, yet the conorm
    is continuous there (it is a quasi-invertibility point).
    """

    gamma_at_e: float
    q_kernel_dimension: int
    q_injective: bool
    q_surjective: bool
    samples: int
    corrected_bound_ok: bool
    literal_violations: int
    checks: tuple[ConormPerturbationCheck, ...]


def tripotent_conorm_continuity_case(
    e: TripleElement | Tripotent,
    samples: int = 100,
    delta_scale: float = 0.1,
    rng: np.random.Generator | None = None,
) -> TripotentContinuityReport:
    """Probe conorm continuity at a complete tripotent with 1-space present."""
    tri = as_tripotent(e)
    if not tri.complete:
        raise PreconditionError("needs a complete tripotent")
    if all(m == n for m, n in tri.space.factors):
        raise PreconditionError(
            "the 1-space of a complete tripotent vanishes when every factor is square"
        )
    if not 0.0 < delta_scale < 1.0:
        raise ValueError("delta_scale must sit in (0, 1) to stay inside the safe ball")
    if rng is None:
        rng = rng_for(2718)
    q = q_operator(tri.element, tri.element)
    kernel_dim = q.kernel_dimension()
    checks = []
    violations = 0
    corrected_ok = True
    for _ in range(samples):
        delta = gaussian_element(
            tri.space, rng, scale=delta_scale * float(rng.uniform(0.1, 1.0))
        )
        check = conorm_perturbation_bound(tri.element, tri.element + delta)
        checks.append(check)
        if not check.literal_holds:
            violations += 1
        corrected_ok = corrected_ok and check.corrected_holds
    return TripotentContinuityReport(
        gamma_at_e=quadratic_conorm(tri.element).value,
        q_kernel_dimension=kernel_dim,
        q_injective=q.is_injective(),
        q_surjective=q.is_surjective(),
        samples=samples,
        corrected_bound_ok=corrected_ok,
        literal_violations=violations,
        checks=tuple(checks),
    )


@dataclass(frozen=True)
class GeometryReport:
    """Everything the inspectors report about one element."""

    space: str
    element_norm: float
    rank_per_block: tuple[int, ...]
    regular: bool
    bp_quasi_invertible: bool
    m_q: float
    alpha_q: float
    gamma_q: float
    gamma_cstar_squared: float
    dist_extreme_formula: float
    dist_extreme_oracle: float
    dist_agreement: float
    lambda_kind: str | None
    lambda_value: float | None
    lambda_note: str | None
    continuity_class: str

    def to_dict(self) -> dict:
        def enc(v: float) -> float | str:
            return "inf" if isinstance(v, float) and math.isinf(v) else v

        return {
            "space": self.space,
            "element_norm": self.element_norm,
            "rank_per_block": list(self.rank_per_block),
            "regular": self.regular,
            "bp_quasi_invertible": self.bp_quasi_invertible,
            "m_q": self.m_q,
            "alpha_q": self.alpha_q,
            "gamma_q": enc(self.gamma_q),
            "gamma_cstar_squared": enc(self.gamma_cstar_squared),
            "dist_extreme_formula": self.dist_extreme_formula,
            "dist_extreme_oracle": self.dist_extreme_oracle,
            "dist_agreement": self.dist_agreement,
            "lambda_kind": self.lambda_kind,
            "lambda_value": self.lambda_value,
            "lambda_note": self.lambda_note,
            "continuity_class": self.continuity_class.split(".")[-1],
        }


def geometry_report(a: TripleElement) -> GeometryReport:
    """Compute the full per-element report used by the inspector."""
    cache = svd_cache(a)
    dist = dist_to_extreme_points(cache)
    gamma = quadratic_conorm(cache)
    cstar = cstar_conorm(a)
    lam_kind: str | None
    lam_val: float | None
    lam_note: str | None
    try:
        lam = lambda_value(cache)
        lam_kind, lam_val, lam_note = lam.kind, lam.value, None
    except PreconditionError:
        lam_kind, lam_val = None, None
        lam_note = "undefined: element norm exceeds 1"
    cls = continuity_classify(cache)
    return GeometryReport(
        space=str(a.space),
        element_norm=a.norm,
        rank_per_block=cache.ranks,
        regular=is_von_neumann_regular(cache),
        bp_quasi_invertible=cache.full_rank,
        m_q=m_q(cache),
        alpha_q=0.0,
        gamma_q=gamma.value,
        gamma_cstar_squared=(
            cstar.value**2 if not math.isinf(cstar.value) else INFINITY
        ),
        dist_extreme_formula=dist.formula,
        dist_extreme_oracle=dist.oracle,
        dist_agreement=abs(dist.formula - dist.oracle),
        lambda_kind=lam_kind,
        lambda_value=lam_val,
        lambda_note=lam_note,
        continuity_class=cls.name,
    )
