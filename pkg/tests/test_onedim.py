import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from nonlocal_stripes import (
    DomainError,
    PeriodicSet1D,
    PreconditionError,
    StripeSpec,
    brute_force_min_1d,
    constants,
    eta0_threshold,
    eta0_threshold_exact,
    f1d_energy,
    make_params,
    make_stripes_1d,
    optimal_width,
    r_lower_bound,
    r_interval_sum,
    r_lower_bound_exact,
    r_term_1d,
    r_terms_1d,
    stripe_energy,
    stripe_energy_slope,
)
from nonlocal_stripes.onedim import optimal_width_closed_form

from oracles import f1d_by_pairs, r_term_by_quadrature, r_term_monte_carlo, stripe_energy_direct


@st.composite
def periodic_sets(draw, L=10.0, max_pairs=4, min_gap=0.05):
    m = 2 * draw(st.integers(1, max_pairs))
    pts = sorted(draw(st.lists(st.floats(0.0, L - 1e-6), min_size=m, max_size=m, unique=True)))
    gaps = np.diff(np.append(pts, pts[0] + L))
    assume(gaps.min() >= min_gap)
    return PeriodicSet1D(L, tuple(pts), draw(st.booleans()))


def test_set_basics():
    S = PeriodicSet1D(10.0, (0.0, 3.0, 5.0, 9.0), True)
    np.testing.assert_array_equal(S.signs(), [1, -1, 1, -1])
    np.testing.assert_allclose(S.gaps(), [3, 2, 4, 1])
    assert S.measure() == pytest.approx(7.0)
    assert S.complement().measure() == pytest.approx(3.0)
    assert list(S.indicator([1.0, 4.0, 6.0, 9.5])) == [True, False, True, False]


def test_set_validation():
    with pytest.raises(DomainError):
        PeriodicSet1D(1.0, (0.1,))
    with pytest.raises(DomainError):
        PeriodicSet1D(1.0, (0.5, 0.2))
    with pytest.raises(DomainError):
        PeriodicSet1D(1.0, (0.1, 1.0))


@given(periodic_sets(), st.floats(0.0, 10.0))
def test_shift_preserves_energy(S, shift):
    p = make_params(1, 0.25, 0.2)
    assert f1d_energy(p, S.shifted(shift)) == pytest.approx(f1d_energy(p, S), abs=1e-10)


@given(periodic_sets())
def test_complement_has_same_energy(S):
    p = make_params(1, 0.0, 0.3)
    assert f1d_energy(p, S.complement()) == pytest.approx(f1d_energy(p, S), abs=1e-12)


def test_empty_and_full_have_zero_energy():
    p = make_params(1, 0.0, 0.1)
    assert f1d_energy(p, PeriodicSet1D(5.0)) == 0.0
    assert f1d_energy(p, PeriodicSet1D(5.0, (), True)) == 0.0


@pytest.mark.parametrize("alpha, tau", [(0.0, 0.5), (0.5, 0.3), (0.25, 0.0), (0.8, 0.2)])
def test_f1d_against_pair_sum_oracle(alpha, tau):
    p = make_params(1, alpha, tau)
    k = constants(p)
    S = PeriodicSet1D(10.0, (0.0, 3.0, 5.0, 9.0), False)
    assert f1d_energy(p, S) == pytest.approx(f1d_by_pairs(k.c1, k.c2, p.beta, p.tau_pow, S), rel=1e-8)


@given(st.sampled_from([1, 2, 3]), st.floats(0.0, 0.9), st.floats(0.0, 1.0), st.floats(0.2, 8.0))
def test_stripe_energy_equals_f1d_of_stripes(d, alpha, tau, h):
    p = make_params(d, alpha, tau)
    S = make_stripes_1d(StripeSpec(h, 0.0, 1))
    assert stripe_energy(p, h) == pytest.approx(f1d_energy(p, S), rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("h", [0.3, 1.0, 2.5, 7.0])
def test_stripe_energy_direct_series(h):
    p = make_params(1, 0.0, 0.4)
    k = constants(p)
    assert stripe_energy(p, h) == pytest.approx(stripe_energy_direct(k.c1, k.c2, p.beta, p.tau_pow, h), abs=1e-9)


def test_stripe_energy_value_at_tau0():
    # -1/h + c1 c2 4 eta(1) / h^2 at d=1, alpha=0
    assert stripe_energy(make_params(1, 0.0, 0.0), 2.0) == pytest.approx(-0.5 + 2 * math.log(2) / 4, abs=1e-14)


def test_stripe_energy_rejects_nonpositive_width():
    with pytest.raises(DomainError):
        stripe_energy(make_params(1, 0.0, 0.0), 0.0)


@given(st.floats(0.0, 0.9), st.floats(0.0, 1.0), st.floats(0.3, 20.0))
def test_slope_matches_finite_difference(alpha, tau, h):
    p = make_params(1, alpha, tau)
    dh = 1e-5 * h
    fd = (stripe_energy(p, h + dh) - stripe_energy(p, h - dh)) / (2 * dh)
    assert stripe_energy_slope(p, h) == pytest.approx(fd, rel=1e-5, abs=1e-9)


def test_optimal_width_tau0_closed_form():
    h, c = optimal_width(make_params(1, 0.0, 0.0))
    assert h == pytest.approx(4 * math.log(2), rel=1e-14)
    assert c == pytest.approx(-1 / (8 * math.log(2)), rel=1e-14)


@pytest.mark.parametrize("alpha, tau", [(0.0, 0.3), (0.3, 0.5), (0.5, 1.0)])
def test_optimal_width_is_grid_minimum(alpha, tau):
    p = make_params(1, alpha, tau)
    h, c = optimal_width(p)
    assert c < 0
    assert stripe_energy_slope(p, h) == pytest.approx(0.0, abs=1e-12)
    for x in np.geomspace(h / 3, 3 * h, 100):
        assert stripe_energy(p, x) >= c - 1e-15


def test_optimal_width_alpha_cap():
    with pytest.raises(PreconditionError):
        optimal_width(make_params(1, 0.97, 0.0))


def test_optimal_width_shrinks_with_tau():
    hs = [optimal_width(make_params(1, 0.0, t))[0] for t in (0.0, 0.2, 0.4, 0.6)]
    assert all(b < a for a, b in zip(hs, hs[1:]))
    assert hs[0] == pytest.approx(optimal_width_closed_form(make_params(1, 0.0, 0.0))[0])


def test_r_needs_two_boundaries():
    with pytest.raises(PreconditionError):
        r_terms_1d(make_params(1, 0.0, 0.1), PeriodicSet1D(5.0))


def test_r_rejects_non_boundary_point():
    with pytest.raises(DomainError):
        r_term_1d(make_params(1, 0.0, 0.1), PeriodicSet1D(10.0, (0.0, 3.0)), 1.0)


@pytest.mark.parametrize("alpha, tau, rel", [(0.0, 0.5, 1e-8), (0.25, 0.1, 1e-6), (0.5, 0.3, 1e-6)])
def test_r_against_quadrature_oracle(alpha, tau, rel):
    p = make_params(1, alpha, tau)
    k = constants(p)
    S = PeriodicSet1D(10.0, (0.0, 3.0, 5.0, 9.0), False)
    for i, s in enumerate(S.boundaries):
        ref = r_term_by_quadrature(k.c1, k.c2, p.q, p.beta, p.tau_pow, S, i)
        assert r_term_1d(p, S, s) == pytest.approx(ref, rel=rel, abs=rel)


def test_r_against_monte_carlo_oracle():
    p = make_params(1, 0.0, 0.5)
    k = constants(p)
    S = PeriodicSet1D(10.0, (0.0, 3.0, 5.0, 9.0), False)
    r = r_term_1d(p, S, 3.0)
    mc, se = r_term_monte_carlo(k.c1, k.c2, p.q, p.beta, p.tau_pow, S, 1)
    assert abs(r - mc) <= 3 * se
    assert r == pytest.approx(-0.5348023605, abs=1e-9)


@given(periodic_sets(), st.sampled_from([0.0, 0.25, 0.5]), st.floats(0.0, 0.5))
def test_r_terms_sum_to_energy(S, alpha, tau):
    p = make_params(1, alpha, tau)
    assert np.sum(r_terms_1d(p, S)) / S.period == pytest.approx(f1d_energy(p, S), rel=1e-9, abs=1e-11)


def test_r_interval_sum():
    p = make_params(1, 0.0, 0.2)
    S = PeriodicSet1D(10.0, (0.0, 3.0, 5.0, 9.0), False)
    r = r_terms_1d(p, S)
    assert r_interval_sum(p, S, 0.0, 10.0) == pytest.approx(r.sum())
    assert r_interval_sum(p, S, 2.0, 6.0) == pytest.approx(r[1] + r[2])
    assert r_interval_sum(p, S, -1.5, 20.0) == pytest.approx(r[3] + 2 * r.sum())
    assert r_interval_sum(p, PeriodicSet1D(10.0), 0.0, 5.0) == 0.0


def test_multistart_agrees_on_unimodal_energy(recwarn):
    optimal_width(make_params(1, 0.5, 0.7))
    assert not [w for w in recwarn if "local minima" in str(w.message)]


def test_r_equal_on_periodic_stripes():
    r = r_terms_1d(make_params(1, 0.3, 0.2), make_stripes_1d(StripeSpec(1.7, 0.4, 3)))
    np.testing.assert_allclose(r, r[0], rtol=1e-11)


@given(periodic_sets(), st.sampled_from([0.0, 0.25, 0.5]), st.floats(0.0, 0.5))
def test_r_at_least_exact_bound(S, alpha, tau):
    p = make_params(1, alpha, tau)
    r = r_terms_1d(p, S)
    g = S.gaps()
    for ri, gm, gp in zip(r, np.roll(g, 1), g):
        assert ri >= r_lower_bound_exact(p, gm, gp) - 1e-8


def test_min_form_bound_coincides_with_exact_at_tau0():
    p = make_params(1, 0.25, 0.0)
    assert r_lower_bound(p, 0.7, 1.3) == pytest.approx(r_lower_bound_exact(p, 0.7, 1.3), rel=1e-14)
    assert eta0_threshold(p) == pytest.approx(eta0_threshold_exact(p), rel=1e-14)


def test_min_form_bound_can_exceed_r():
    # the bound written with min(gap^-beta, 1/tau) fails for tau > 0; the exact one holds
    p = make_params(1, 0.0, 0.26529946288173234)
    S = PeriodicSet1D(10.0, (0.34999835519125, 0.865894454350512, 2.1056193154758738, 4.193651158331191,
                             6.3715809506506185, 7.766258254535384, 8.294772095971256, 9.20128210234253))
    r = r_terms_1d(p, S)
    g = S.gaps()
    assert r[1] < r_lower_bound(p, g[0], g[1]) - 1e-8
    assert r[1] >= r_lower_bound_exact(p, g[0], g[1])


def test_eta0_threshold_needs_tau_below_cap():
    p = make_params(1, 0.0, 0.6)
    with pytest.raises(PreconditionError):
        eta0_threshold(p)


def test_brute_force_recovers_stripes():
    p = make_params(1, 0.0, 0.1)
    h, _ = optimal_width(p)
    res = brute_force_min_1d(p, 2 * h, 16, 4)
    b = res.best.boundaries
    assert len(b) == 2
    assert abs((b[1] - b[0]) - h) <= 2 * h / 16
    assert res.energy == pytest.approx(f1d_energy(p, res.best))


def test_brute_force_budget():
    with pytest.raises(PreconditionError):
        brute_force_min_1d(make_params(1, 0.0, 0.1), 4.0, 32, 8, budget=100)
