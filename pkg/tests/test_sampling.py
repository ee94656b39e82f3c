import numpy as np
import pytest

from jbtriple import SpaceDescriptor, is_tripotent
from jbtriple.sampling import (
    batched_spectral_norms,
    draw_element,
    full_rank_profile,
    gaussian_element,
    random_maximal_partial_isometries,
    random_tripotent,
    rank_profiles,
    rng_for,
    sample_element,
)
from jbtriple.spectral import svd_cache

M23 = SpaceDescriptor.parse("2x3")
SUM_SPACE = SpaceDescriptor.parse("2x2,2x3")


def test_rng_for_is_reproducible_and_stream_separated():
    a = rng_for(7).standard_normal(8)
    b = rng_for(7).standard_normal(8)
    np.testing.assert_array_equal(a, b)
    c = rng_for(7, 1).standard_normal(8)
    assert not np.array_equal(a, c)
    d = rng_for(8).standard_normal(8)
    assert not np.array_equal(a, d)


def test_rank_profiles_enumeration():
    profiles = rank_profiles(SUM_SPACE)
    assert len(profiles) == 9  # ranks 0..2 in each factor
    assert profiles[0] == (0, 0)
    assert profiles[-1] == (2, 2)
    assert full_rank_profile(SUM_SPACE) == (2, 2)
    assert all(len(p) == 2 for p in profiles)
    assert len(set(profiles)) == len(profiles)


def test_gaussian_element_shape_and_scale():
    rng = rng_for(11)
    a = gaussian_element(SUM_SPACE, rng, scale=2.0)
    assert a.space == SUM_SPACE
    assert a.norm == pytest.approx(2.0, abs=1e-12)
    b = gaussian_element(M23, rng)
    assert b.space == M23 and b.norm > 0.0


def test_draw_element_rank_and_scale():
    rng = rng_for(12)
    for profile in rank_profiles(SUM_SPACE):
        a = draw_element(SUM_SPACE, profile, 1.5, rng)
        cache = svd_cache(a)
        assert cache.ranks == profile
        if any(profile):
            assert a.norm == pytest.approx(1.5, abs=1e-12)
        else:
            assert a.is_zero()


def test_draw_element_sv_floor():
    rng = rng_for(13)
    a = draw_element(SUM_SPACE, (2, 2), 1.0, rng, sv_floor=0.3)
    cache = svd_cache(a)
    assert cache.min_retained() >= 0.3 - 1e-12
    assert a.norm == pytest.approx(1.0, abs=1e-12)


def test_draw_element_validation():
    rng = rng_for(14)
    with pytest.raises(ValueError):
        draw_element(SUM_SPACE, (3, 0), 1.0, rng)  # rank above min(2, 2)
    with pytest.raises(ValueError):
        draw_element(SUM_SPACE, (1,), 1.0, rng)  # profile length mismatch
    with pytest.raises(ValueError):
        draw_element(SUM_SPACE, (1, 1), -1.0, rng)
    with pytest.raises(ValueError):
        draw_element(SUM_SPACE, (2, 2), 1.0, rng, sv_floor=2.0)  # floor above scale


def test_sample_element_is_a_pure_function_of_its_arguments():
    a = sample_element("2x2,2x3", (1, 2), 1.0, trial=5, seed=99)
    b = sample_element(SUM_SPACE, (1, 2), 1.0, trial=5, seed=99)
    assert all(np.array_equal(x, y) for x, y in zip(a.blocks, b.blocks))
    c = sample_element(SUM_SPACE, (1, 2), 1.0, trial=6, seed=99)
    assert not all(np.array_equal(x, y) for x, y in zip(a.blocks, c.blocks))


def test_random_tripotent_validity():
    rng = rng_for(15)
    for profile in [(0, 0), (1, 0), (1, 2), (2, 2)]:
        e = random_tripotent(SUM_SPACE, profile, rng)
        assert is_tripotent(e.element)
        assert svd_cache(e.element).ranks == profile


def test_random_maximal_partial_isometries():
    rng = rng_for(16)
    batch = random_maximal_partial_isometries((2, 3), 50, rng)
    assert batch.shape == (50, 2, 3)
    # v v* = identity on the short side makes each slice maximal
    prods = batch @ batch.conj().transpose(0, 2, 1)
    assert np.max(np.abs(prods - np.eye(2))) <= 1e-8
    tall = random_maximal_partial_isometries((3, 2), 8, rng)
    prods = tall.conj().transpose(0, 2, 1) @ tall
    assert np.max(np.abs(prods - np.eye(2))) <= 1e-8


def test_batched_spectral_norms_matches_numpy():
    rng = rng_for(17)
    batch = rng.standard_normal((20, 3, 2)) + 1j * rng.standard_normal((20, 3, 2))
    expected = np.array([np.linalg.norm(m, ord=2) for m in batch])
    np.testing.assert_allclose(batched_spectral_norms(batch), expected, rtol=1e-12)
    single = batch[:1]
    np.testing.assert_allclose(batched_spectral_norms(single), expected[:1], rtol=1e-12)
