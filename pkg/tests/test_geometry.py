import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obslab.errors import ContainmentError, ResolutionError
from obslab.geometry import (SpaceTimeSet, TimeSet, ball_volume,
                             certificate_holds, density_proxy,
                             find_density_point, good_time_set, mu_from_beta,
                             sequence_terms, telescoping_sequence)
from obslab.spectral import interval, rectangle

PI = math.pi
DOMAIN = interval(PI, n_modes=4, n_cells=128)
BALL = (np.array([PI / 2.0]), PI / 2.0)


def test_ball_volume():
    assert ball_volume(1, 2.0) == 4.0
    assert ball_volume(2, 1.0) == pytest.approx(PI)
    with pytest.raises(ValueError):
        ball_volume(3, 1.0)


def test_time_set_measure_in_fractional_cells():
    E = TimeSet.full(10, 1.0)
    assert E.measure() == pytest.approx(1.0)
    assert E.measure_in(0.1, 0.35) == pytest.approx(0.25)
    assert E.measure_in(0.05, 0.07) == pytest.approx(0.02)
    assert E.measure_in(0.5, 0.4) == 0.0


def test_time_set_from_intervals_and_contains():
    E = TimeSet.from_intervals([(0.2, 0.4)], 100, 1.0)
    assert E.contains_time(0.3)
    assert not E.contains_time(0.8)
    assert E.measure() == pytest.approx(0.2, abs=0.02)


def test_space_time_set_measure_and_slices():
    D = SpaceTimeSet.full_cylinder(DOMAIN, 2.0, 16)
    assert D.measure() == pytest.approx(2.0 * PI)
    mask, m = D.slice_at(1.0)
    assert m == pytest.approx(PI)
    assert mask.all()
    with pytest.raises(ValueError):
        D.slice_at(2.5)


def test_space_time_set_shape_validation():
    with pytest.raises(ValueError):
        SpaceTimeSet(np.ones((4, 7), dtype=bool), 1.0, DOMAIN)
    with pytest.raises(ValueError):
        SpaceTimeSet(np.ones((4, DOMAIN.n_cells), dtype=bool), -1.0, DOMAIN)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_good_time_set_bounds_random(seed):
    rng = np.random.default_rng(seed)
    D = SpaceTimeSet.random(DOMAIN, 1.0, 32, rng, fill=0.2)
    gts = good_time_set(D, *BALL)
    # |E| >= |D| / (2 |B_R|), and E-slices stay inside D (asserted on call,
    # re-checked here explicitly)
    assert gts.times.measure() >= D.measure() / (2.0 * gts.ball_volume) - 1e-12
    assert gts.threshold == pytest.approx(D.measure() / 2.0)
    on_E = D.slice_measures[gts.times.mask]
    assert np.all(on_E >= gts.threshold)


def test_good_time_set_rectangle():
    dom = rectangle(PI, PI, n_modes=4, cells=(24, 24))
    rng = np.random.default_rng(0)
    D = SpaceTimeSet.random(dom, 1.0, 16, rng, fill=0.3)
    center = np.array([PI / 2.0, PI / 2.0])
    radius = math.hypot(PI, PI) / 2.0
    gts = good_time_set(D, center, radius)
    assert gts.times.measure() >= D.measure() / (2.0 * gts.ball_volume) - 1e-12


def test_good_time_set_rejects_small_ball():
    D = SpaceTimeSet.full_cylinder(DOMAIN, 1.0, 8)
    with pytest.raises(ContainmentError):
        good_time_set(D, np.array([PI / 2.0]), 0.1)


def test_density_point_of_full_set():
    E = TimeSet.full(256, 1.0)
    ell = find_density_point(E)
    assert density_proxy(E, ell) >= 0.5
    assert E.contains_time(ell)


def test_density_point_prefers_the_bulk():
    # a fat block plus one isolated cell: the point lands in the block
    mask = np.zeros(256, dtype=bool)
    mask[40:120] = True
    mask[200] = True
    ell = find_density_point(TimeSet(mask, 1.0))
    assert 40 / 256 <= ell <= 120 / 256


def test_density_point_needs_positive_measure():
    with pytest.raises(ValueError):
        find_density_point(TimeSet(np.zeros(16, dtype=bool), 1.0))


def test_sparse_set_fails_density_resolution():
    mask = np.zeros(256, dtype=bool)
    mask[::16] = True
    with pytest.raises(ResolutionError):
        find_density_point(TimeSet(mask, 1.0))


def test_mu_from_beta():
    assert mu_from_beta(1.0) == pytest.approx(math.sqrt(1.5))
    assert mu_from_beta(2.0) == pytest.approx(math.sqrt(4.0 / 3.0))


def test_sequence_terms_geometry():
    terms = sequence_terms(0.2, 0.8, 2.0, 5)
    assert terms[0] == pytest.approx(0.8)
    # ell_{m+1} - ell = mu^-m (ell_1 - ell)
    assert np.allclose(terms - 0.2, 0.6 * 2.0 ** -np.arange(5))
    assert np.all(np.diff(terms) < 0)


def test_telescoping_sequence_certificate():
    E = TimeSet.full(512, 1.0)
    ell = find_density_point(E)
    seq = telescoping_sequence(E, ell, beta=1.0, depth=6)
    assert seq.mu == pytest.approx(mu_from_beta(1.0))
    assert certificate_holds(E, seq.terms)
    assert seq.terms[0] == seq.ell1
    assert np.all(seq.terms > ell)
    # gaps between consecutive terms are covered by E up to the factor 3
    for hi, lo in zip(seq.terms[:-1], seq.terms[1:]):
        assert hi - lo <= 3.0 * E.measure_in(lo, hi) + 1e-12


def test_telescoping_sequence_accepts_mu_override():
    E = TimeSet.full(512, 1.0)
    ell = find_density_point(E)
    seq = telescoping_sequence(E, ell, beta=2.0, depth=4, mu=2.0)
    assert seq.mu == 2.0
    assert certificate_holds(E, seq.terms)


def test_telescoping_sequence_rejects_non_density_point():
    mask = np.zeros(512, dtype=bool)
    mask[:256] = True
    E = TimeSet(mask, 1.0)
    with pytest.raises(ValueError):
        telescoping_sequence(E, 0.9, beta=1.0, depth=4)


def test_rle_round_trip():
    rng = np.random.default_rng(11)
    D = SpaceTimeSet.random(DOMAIN, 1.5, 24, rng, fill=0.25)
    back = SpaceTimeSet.from_rle(D.to_rle(), DOMAIN)
    assert np.array_equal(back.mask, D.mask)
    assert back.horizon == D.horizon


def test_random_set_respects_minimum_measure():
    rng = np.random.default_rng(2)
    D = SpaceTimeSet.random(DOMAIN, 1.0, 32, rng, fill=0.3,
                            min_measure_fraction=0.25)
    assert D.measure() >= 0.25 * PI
