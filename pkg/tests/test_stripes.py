import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nonlocal_stripes import (
    Cube,
    DomainError,
    GridSet,
    PeriodicSet1D,
    StripePattern,
    column_profile,
    cube_at,
    distance_to_stripes,
    distance_to_stripes_dir,
    is_admissible,
    lipschitz_probe,
    rasterize_stripes,
    two_direction_probe,
)
from nonlocal_stripes.stripes import distance_by_enumeration, min_run


def balanced(n=8, axis=1):
    occ = np.zeros((n, n), bool)
    idx = [slice(None)] * 2
    idx[axis] = slice(0, n // 2)
    occ[tuple(idx)] = True
    return GridSet(float(n), occ)


def test_rasterize_profile():
    prof = PeriodicSet1D(8.0, (1.0, 5.0), False)
    S, rounding = rasterize_stripes(StripePattern(0, prof, 2), 8, return_rounding=True)
    assert rounding == 0.0
    np.testing.assert_array_equal(S.occupancy[:, 0], [0, 1, 1, 1, 1, 0, 0, 0])
    assert np.all(S.occupancy == S.occupancy[:, :1])


def test_rasterize_rounding_reported():
    prof = PeriodicSet1D(8.0, (1.2, 5.0), False)
    _, rounding = rasterize_stripes(StripePattern(1, prof, 2), 8, return_rounding=True)
    assert rounding == pytest.approx(0.2)


def test_rasterize_collision():
    with pytest.raises(DomainError):
        rasterize_stripes(StripePattern(0, PeriodicSet1D(8.0, (1.0, 1.1), False), 2), 8)


def test_admissibility():
    P = StripePattern(0, PeriodicSet1D(8.0, (0.0, 2.0), True), 2)
    assert is_admissible(P, 2.0)
    assert not is_admissible(P, 2.5)
    assert is_admissible(StripePattern(0, PeriodicSet1D(8.0), 2), 100.0)


def test_cube_at_alignment():
    S = GridSet(8.0, np.zeros((8, 8), bool))
    assert cube_at(S, (2.0, 2.0), 4.0) == Cube((0, 0), 4)
    assert cube_at(S, (0.0, 0.0), 2.0) == Cube((7, 7), 2)
    with pytest.raises(DomainError):
        cube_at(S, (2.5, 2.0), 4.0)
    with pytest.raises(DomainError):
        cube_at(S, (2.0, 2.0), 3.5)


def test_distance_zero_on_stripes_and_half_orthogonal():
    S = balanced(axis=0)
    cube = Cube((0, 0), 8)
    assert distance_to_stripes_dir(S, cube, 0, 1.0) == 0.0
    assert distance_to_stripes_dir(S, cube, 1, 1.0) == pytest.approx(0.5, abs=1e-12)
    assert distance_to_stripes(S, cube, 1.0) == (0.0, 0)


def test_empty_and_full_are_stripes():
    for fill in (False, True):
        S = GridSet(4.0, np.full((4, 4), fill))
        assert distance_to_stripes(S, Cube((0, 0), 4), 3.0)[0] == 0.0


def test_eta_forces_coarse_stripes():
    occ = np.zeros(12, bool)
    occ[::2] = True  # alternating single cells
    S = GridSet(12.0, occ)
    assert distance_to_stripes_dir(S, Cube((0,), 12), 0, 1.0) == 0.0
    assert distance_to_stripes_dir(S, Cube((0,), 12), 0, 2.0) > 0.0


def test_min_run():
    assert min_run(1.0, 1.0) == 1
    assert min_run(1.01, 1.0) == 2
    assert min_run(0.1, 1.0) == 1


@given(st.integers(1, 3).flatmap(lambda d: st.integers(2, 7).flatmap(lambda n: st.tuples(
    arrays(bool, (n,) * d), st.integers(1, n), st.lists(st.integers(0, n - 1), min_size=d, max_size=d),
    st.floats(0.3, n / 2.0), st.integers(0, d - 1)))))
def test_dp_equals_enumeration(case):
    occ, m, lo, eta, axis = case
    S = GridSet(float(occ.shape[0]), occ)
    cube = Cube(tuple(lo), m)
    assert distance_to_stripes_dir(S, cube, axis, eta) == distance_by_enumeration(S, cube, axis, eta)


@given(arrays(bool, (6, 6)), st.floats(0.5, 3.0))
def test_distance_monotone_in_eta(occ, eta):
    S = GridSet(6.0, occ)
    cube = Cube((1, 2), 5)
    for axis in range(2):
        assert distance_to_stripes_dir(S, cube, axis, eta) <= distance_to_stripes_dir(S, cube, axis, eta + 0.7)


@given(arrays(bool, (6, 6)))
def test_distance_bounds_and_complement(occ):
    S = GridSet(6.0, occ)
    cube = Cube((0, 0), 6)
    for axis in range(2):
        v = distance_to_stripes_dir(S, cube, axis, 1.0)
        assert 0.0 <= v <= 0.5
        assert v == distance_to_stripes_dir(S.complement(), cube, axis, 1.0)


def test_column_profile():
    S = balanced(axis=0)
    np.testing.assert_allclose(column_profile(S, Cube((0, 0), 8), 0), [1, 1, 1, 1, 0, 0, 0, 0])
    np.testing.assert_allclose(column_profile(S, Cube((0, 0), 8), 1), 0.5)


def test_lipschitz_probe_bounded():
    rng = np.random.default_rng(3)
    S = GridSet(8.0, rng.random((8, 8)) < 0.5)
    pairs = [(tuple(rng.integers(0, 8, 2)), tuple(rng.integers(0, 8, 2))) for _ in range(30)]
    # moving a cube of side l by t changes at most a fraction ~ d t / l of its volume
    assert lipschitz_probe(S, 1.0, 4.0, pairs) <= 2 * 2


def test_two_direction_probe_on_checkerboard_block():
    occ = np.zeros((8, 8), bool)
    occ[:2, :2] = True
    res = two_direction_probe(GridSet(8.0, occ), Cube((4, 4), 4), 1.0, 0.1)
    assert res.applicable and res.min_volume == 0.0
    res = two_direction_probe(balanced(), Cube((0, 0), 8), 1.0, 0.1)
    assert not res.applicable
