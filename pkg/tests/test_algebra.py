import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from jbtriple import (
    InvalidTripotentError,
    PeirceMembershipError,
    SpaceDescriptor,
    Tripotent,
    TripleElement,
    as_tripotent,
    bergman_operator,
    involution_at,
    is_complete,
    is_tripotent,
    jordan_product_at,
    l_operator,
    peirce_decompose,
    q_operator,
    triple_product,
    zero_element,
)
from jbtriple.algebra import peirce_two_representation
from jbtriple.sampling import random_tripotent, rng_for

from helpers import el, matrix_unit

AXIOM_TOL = 1e-10
PROJ_TOL = 1e-12

M2 = SpaceDescriptor.parse("2x2")
M23 = SpaceDescriptor.parse("2x3")
SUM_SPACE = SpaceDescriptor.parse("2x2,3x2")


def _element_strategy(space: SpaceDescriptor, bound: float = 1.0):
    finite = st.floats(min_value=-bound, max_value=bound, allow_nan=False)
    parts = [arrays(np.float64, (2, m, n), elements=finite) for m, n in space.factors]
    return st.tuples(*parts).map(
        lambda ps: TripleElement(space, tuple(p[0] + 1j * p[1] for p in ps))
    )


# ---------------------------------------------------------------------------
# triple product
# ---------------------------------------------------------------------------


def test_triple_product_matrix_units():
    e11 = matrix_unit(2, 2, 0, 0)
    e12 = matrix_unit(2, 2, 0, 1)
    e21 = matrix_unit(2, 2, 1, 0)
    assert (triple_product(e11, e11, e11) - e11).norm == 0.0
    # {e11, e12, e22} = (e11 e21 e22 + e22 e21 e11) / 2 = e21 / 2
    e22 = matrix_unit(2, 2, 1, 1)
    assert (triple_product(e11, e12, e22) - 0.5 * e21).norm == 0.0


def test_triple_product_cube_of_scaled_unit():
    x = 2.0 * matrix_unit(2, 2, 0, 0)
    cube = triple_product(x, x, x)
    assert (cube - 8.0 * matrix_unit(2, 2, 0, 0)).norm == 0.0
    assert cube.norm == pytest.approx(x.norm**3, rel=1e-15)


def test_triple_product_against_direct_formula():
    rng = rng_for(101)
    for _ in range(20):
        mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3)]
        x, y, z = (el(m) for m in mats)
        direct = 0.5 * (mats[0] @ mats[1].conj().T @ mats[2] + mats[2] @ mats[1].conj().T @ mats[0])
        np.testing.assert_allclose(triple_product(x, y, z).blocks[0], direct, atol=1e-14)


@pytest.mark.parametrize("space", [M2, M23], ids=str)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_jordan_identity(space, data):
    draw = lambda: data.draw(_element_strategy(space))
    x, y, a, b, c = (draw() for _ in range(5))
    lhs = triple_product(x, y, triple_product(a, b, c))
    rhs = (
        triple_product(triple_product(x, y, a), b, c)
        - triple_product(a, triple_product(y, x, b), c)
        + triple_product(a, b, triple_product(x, y, c))
    )
    assert (lhs - rhs).norm <= AXIOM_TOL


@pytest.mark.parametrize("space", [M2, M23], ids=str)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_cube_identity_and_l_positivity(space, data):
    x = data.draw(_element_strategy(space))
    assert abs(triple_product(x, x, x).norm - x.norm**3) <= AXIOM_TOL * max(1.0, x.norm**3)
    spectrum = l_operator(x, x).symmetric_spectrum()
    assert spectrum.min(initial=0.0) >= -AXIOM_TOL


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def test_q_operator_is_conjugate_linear():
    rng = rng_for(102)
    x = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    z = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    q = q_operator(x)
    assert q.conjugate_linear
    lhs = q((2.0 + 1.5j) * z)
    rhs = np.conj(2.0 + 1.5j) * q(z)
    assert (lhs - rhs).norm <= 1e-12


def test_q_operator_single_argument_form():
    rng = rng_for(103)
    mat = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    zed = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    got = q_operator(el(mat))(el(zed))
    np.testing.assert_allclose(got.blocks[0], mat @ zed.conj().T @ mat, atol=1e-13)


def test_q_of_zero_is_zero_map():
    z = zero_element("2x2")
    assert q_operator(z).operator_norm() == 0.0


def test_l_operator_unitary_is_identity():
    u = el(np.array([[0, 1], [1, 0]], dtype=complex))
    assert l_operator(u, u).operator_norm() == pytest.approx(1.0, abs=1e-12)
    rng = rng_for(104)
    z = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    assert (l_operator(u, u)(z) - z).norm <= 1e-12


def test_bergman_matches_factored_form():
    rng = rng_for(105)
    for _ in range(20):
        bx, by, bz = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
        got = bergman_operator(el(bx), el(by))(el(bz)).blocks[0]
        want = (np.eye(2) - bx @ by.conj().T) @ bz @ (np.eye(2) - by.conj().T @ bx)
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_bergman_expands_through_l_and_q():
    rng = rng_for(106)
    x = el(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)))
    y = el(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)))
    z = el(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)))
    direct = bergman_operator(x, y)(z)
    expanded = z - 2.0 * triple_product(x, y, z) + q_operator(x)(q_operator(y)(z))
    assert (direct - expanded).norm <= 1e-12


def test_bergman_at_tripotent_is_zero_projection():
    e = as_tripotent(matrix_unit(2, 2, 0, 0))
    rng = rng_for(107)
    a = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    p0 = peirce_decompose(a, e).p0
    assert (bergman_operator(e.element, e.element)(a) - p0).norm <= 1e-12


def test_bergman_vanishes_at_unitary():
    u = el(np.eye(2))
    assert bergman_operator(u, u).operator_norm() <= 1e-12


# ---------------------------------------------------------------------------
# tripotents
# ---------------------------------------------------------------------------


def test_is_tripotent_basics():
    assert is_tripotent(el(np.eye(2)))
    assert not is_tripotent(2.0 * matrix_unit(2, 2, 0, 0))
    rng = rng_for(108)
    tri = random_tripotent(M23, (1,), rng)
    assert is_tripotent(tri.element)


def test_as_tripotent_ranks_and_completeness():
    e = as_tripotent(el(np.eye(2), np.vstack([np.eye(2), np.zeros((1, 2))])))
    assert e.rank_per_block == (2, 2)
    assert e.complete
    assert not e.is_unitary()  # second factor is 3x2
    partial = as_tripotent(matrix_unit(2, 2, 0, 0))
    assert partial.rank_per_block == (1,)
    assert not partial.complete
    assert is_complete(el(np.eye(2)))


def test_as_tripotent_rejects_non_tripotent():
    with pytest.raises(InvalidTripotentError):
        as_tripotent(el(np.diag([1.0, 0.5])))
    with pytest.raises(InvalidTripotentError):
        Tripotent(el(np.diag([1.0, 0.5])), (2,), True)


# ---------------------------------------------------------------------------
# Peirce machinery
# ---------------------------------------------------------------------------


def test_peirce_of_ones_matrix_at_corner_unit():
    pd = peirce_decompose(el(np.ones((2, 2))), matrix_unit(2, 2, 0, 0))
    np.testing.assert_allclose(pd.p2.blocks[0], [[1, 0], [0, 0]], atol=1e-14)
    np.testing.assert_allclose(pd.p1.blocks[0], [[0, 1], [1, 0]], atol=1e-14)
    np.testing.assert_allclose(pd.p0.blocks[0], [[0, 0], [0, 1]], atol=1e-14)


def test_peirce_of_tripotent_itself():
    e = matrix_unit(2, 2, 0, 0)
    pd = peirce_decompose(e, e)
    assert (pd.p2 - e).norm <= 1e-14
    assert pd.p1.norm <= 1e-14
    assert pd.p0.norm <= 1e-14


@pytest.mark.parametrize("space,profile", [(M2, (1,)), (M23, (1,)), (SUM_SPACE, (1, 1))], ids=str)
def test_peirce_projection_algebra(space, profile):
    rng = rng_for(109)
    e = random_tripotent(space, profile, rng)
    for trial in range(10):
        a = el(*(rng.standard_normal(sh) + 1j * rng.standard_normal(sh) for sh in space.factors))
        pd = peirce_decompose(a, e)
        assert (pd.reconstruct() - a).norm <= PROJ_TOL * max(1.0, a.norm)
        for k in (0, 1, 2):
            pk = pd.component(k)
            assert pk.norm <= a.norm + PROJ_TOL  # contractive
            again = peirce_decompose(pk, e).component(k)
            assert (again - pk).norm <= PROJ_TOL * max(1.0, a.norm)  # idempotent
            for j in (0, 1, 2):
                if j != k:
                    cross = peirce_decompose(pk, e).component(j)
                    assert cross.norm <= PROJ_TOL * max(1.0, a.norm)


def test_peirce_multiplication_rules():
    rng = rng_for(110)
    e = random_tripotent(M2, (1,), rng)
    draws = [el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) for _ in range(3)]
    parts = [peirce_decompose(d, e) for d in draws]
    for i in (0, 1, 2):
        for j in (0, 1, 2):
            for k in (0, 1, 2):
                prod = triple_product(parts[0].component(i), parts[1].component(j), parts[2].component(k))
                target = i - j + k
                back = peirce_decompose(prod, e)
                for m in (0, 1, 2):
                    if m != target:
                        assert back.component(m).norm <= AXIOM_TOL
                if target not in (0, 1, 2):
                    assert prod.norm <= AXIOM_TOL


def test_peirce_two_zero_annihilation():
    # {P2 x, P0 y, anything} vanishes identically
    rng = rng_for(111)
    e = random_tripotent(M2, (1,), rng)
    for _ in range(10):
        x, y, z = (el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) for _ in range(3))
        p2x = peirce_decompose(x, e).p2
        p0y = peirce_decompose(y, e).p0
        assert triple_product(p2x, p0y, z).norm <= AXIOM_TOL


def test_l_spectrum_of_tripotent():
    rng = rng_for(112)
    for space, profile in [(M2, (1,)), (M23, (2,)), (SUM_SPACE, (2, 1))]:
        e = random_tripotent(space, profile, rng)
        spectrum = l_operator(e.element, e.element).symmetric_spectrum()
        dist = np.min(np.abs(spectrum[:, None] - np.array([0.0, 0.5, 1.0])[None, :]), axis=1)
        assert dist.max(initial=0.0) <= 1e-10


def test_peirce_rejects_invalid_tripotent():
    with pytest.raises(InvalidTripotentError):
        peirce_decompose(el(np.eye(2)), el(np.diag([1.0, 0.5])))


# ---------------------------------------------------------------------------
# the unital algebra on a 2-space
# ---------------------------------------------------------------------------


def test_jordan_product_at_identity_matches_anticommutator():
    rng = rng_for(113)
    unit = el(np.eye(2))
    x = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    y = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    got = jordan_product_at(unit, x, y)
    want = 0.5 * (x.blocks[0] @ y.blocks[0] + y.blocks[0] @ x.blocks[0])
    np.testing.assert_allclose(got.blocks[0], want, atol=1e-12)
    assert (jordan_product_at(unit, unit, x) - x).norm <= 1e-12  # e is the unit


def test_involution_at_identity_is_adjoint():
    rng = rng_for(114)
    unit = el(np.eye(2))
    x = el(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    got = involution_at(unit, x)
    np.testing.assert_allclose(got.blocks[0], x.blocks[0].conj().T, atol=1e-13)
    twice = involution_at(unit, got)
    assert (twice - x).norm <= 1e-12


def test_involution_fixes_the_tripotent():
    e = matrix_unit(2, 2, 0, 0)
    assert (involution_at(e, e) - e).norm == 0.0


def test_peirce_membership_guard():
    e = matrix_unit(2, 2, 0, 0)
    outside = matrix_unit(2, 2, 1, 1)  # lives in the 0-space of e
    with pytest.raises(PeirceMembershipError):
        jordan_product_at(e, outside, outside)
    with pytest.raises(PeirceMembershipError):
        involution_at(e, outside)


def test_peirce_two_representation_is_multiplicative():
    rng = rng_for(115)
    e = random_tripotent(M23, (2,), rng)
    raw = [el(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))) for _ in range(2)]
    x, y = (peirce_decompose(r, e).p2 for r in raw)
    rep_e = peirce_two_representation(e, e.element)
    np.testing.assert_allclose(rep_e[0], np.eye(2), atol=1e-12)
    rep_prod = peirce_two_representation(e, jordan_product_at(e, x, y))
    rx, ry = peirce_two_representation(e, x)[0], peirce_two_representation(e, y)[0]
    np.testing.assert_allclose(rep_prod[0], 0.5 * (rx @ ry + ry @ rx), atol=1e-12)
    rep_inv = peirce_two_representation(e, involution_at(e, x))
    np.testing.assert_allclose(rep_inv[0], rx.conj().T, atol=1e-12)


def test_peirce_two_representation_skips_rank_zero_blocks():
    e = as_tripotent(el(np.eye(2), np.zeros((3, 2))))
    reps = peirce_two_representation(e, el(np.eye(2), np.zeros((3, 2))))
    assert reps[0].shape == (2, 2)
    assert reps[1].shape == (0, 0)
