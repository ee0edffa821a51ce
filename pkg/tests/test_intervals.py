import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ndtr, ndtri

from bootdilate.intervals import (
    IntervalCorrespondence,
    RegionResult,
    cara_identified_set,
    cara_portfolio_model,
    cara_scan_interval,
    compose_dilation,
    confidence_region_scan,
    membership_test,
    unit_interval_normal_model,
    voting_radius_multiparty,
    voting_radius_two_party,
)


@pytest.fixture
def benchmark():
    return unit_interval_normal_model()


class TestComposeDilation:
    def test_zero_is_identity(self, benchmark):
        c = compose_dilation(benchmark, 0.0)
        us = np.linspace(-2, 2, 9)
        assert np.array_equal(c.lower_at(us, 0.3), benchmark.lower_at(us, 0.3))
        assert np.array_equal(c.upper_at(us, 0.3), benchmark.upper_at(us, 0.3))

    def test_additive_widening(self, benchmark):
        c = compose_dilation(benchmark, 0.25)
        us = np.array([-1.0, 0.0, 2.0])
        assert np.array_equal(c.lower_at(us, 0.0), us - 1.25)
        assert np.array_equal(c.upper_at(us, 0.0), us + 1.25)

    def test_semigroup_is_exact(self, benchmark):
        # radii accumulate before touching the endpoints, so split and
        # combined dilations agree bitwise even for awkward floats
        e1, e2 = 0.1, 0.2
        twice = compose_dilation(compose_dilation(benchmark, e1), e2)
        once = compose_dilation(benchmark, e1 + e2)
        assert twice.dilation == once.dilation
        us = np.linspace(-3, 3, 13)
        assert np.array_equal(twice.lower_at(us, 1.0), once.lower_at(us, 1.0))
        assert np.array_equal(twice.upper_at(us, 1.0), once.upper_at(us, 1.0))

    def test_portfolio_endpoints(self):
        c = compose_dilation(cara_portfolio_model(0.5, 2.0), 0.1)
        us = np.array([0.5, 1.0, 4.0])
        assert np.allclose(c.lower_at(us, 1.0), 0.5 / us - 0.1)
        assert np.allclose(c.upper_at(us, 1.0), 2.0 / us + 0.1)

    def test_negative_radius_rejected(self, benchmark):
        with pytest.raises(ValueError):
            compose_dilation(benchmark, -0.01)


class TestMembership:
    def test_full_coverage_always_member(self, benchmark):
        sample = np.random.default_rng(0).standard_normal(40)
        assert membership_test(0.0, sample, benchmark, 50.0)

    def test_distant_theta_rejected(self, benchmark):
        sample = np.random.default_rng(1).standard_normal(100)
        assert not membership_test(10.0, sample, benchmark, 0.0)

    def test_two_point_sample_at_origin(self, benchmark):
        # the raw one-sided conditions at the extremes are unsatisfiable for
        # a full-support latent; the continuity-corrected form accepts the
        # centered parameter
        assert membership_test(0.0, [-0.5, 0.5], benchmark, 0.0)
        assert membership_test(0.0, [-0.5, 0.5], benchmark, 0.2)

    def test_dilation_on_correspondence_equals_eta_argument(self, benchmark):
        sample = np.random.default_rng(2).standard_normal(30)
        widened = compose_dilation(benchmark, 0.17)
        for th in (-1.2, 0.0, 0.9, 1.4):
            assert membership_test(th, sample, widened, 0.0) == membership_test(
                th, sample, benchmark, 0.17
            )

    def test_monotone_in_radius(self, benchmark):
        sample = np.random.default_rng(3).standard_normal(60)
        for th in np.linspace(-2.0, 2.0, 17):
            inner = membership_test(th, sample, benchmark, 0.05)
            outer = membership_test(th, sample, benchmark, 0.35)
            assert (not inner) or outer

    def test_translation_consistency(self, benchmark):
        # dyadic data and shift keep every float operation exact
        rng = np.random.default_rng(4)
        sample = rng.integers(-8, 9, 25) / 4.0
        shift = 3.5
        for th in (-1.0, -0.25, 0.5, 1.25):
            assert membership_test(th, sample, benchmark, 0.1) == membership_test(
                th + shift, sample + shift, benchmark, 0.1
            )

    def test_rejects_non_monotone(self):
        with pytest.raises(ValueError):
            membership_test(1.0, [1.0, 2.0], cara_portfolio_model(0.5, 2.0), 0.0)

    def test_rejects_negative_eta(self, benchmark):
        with pytest.raises(ValueError):
            membership_test(0.0, [0.0], benchmark, -0.1)

    def test_rejects_empty_sample(self, benchmark):
        with pytest.raises(ValueError):
            membership_test(0.0, [], benchmark, 0.1)

    def test_bisection_fallback_agrees_with_analytic_inverses(self):
        with_inv = unit_interval_normal_model()
        without_inv = IntervalCorrespondence(
            lower=with_inv.lower,
            upper=with_inv.upper,
            latent_cdf=with_inv.latent_cdf,
            monotone=True,
        )
        sample = np.random.default_rng(5).standard_normal(20)
        for th in np.linspace(-2.5, 2.5, 21):
            for eta in (0.0, 0.05, 0.4):
                assert membership_test(th, sample, with_inv, eta) == membership_test(
                    th, sample, without_inv, eta
                )


@settings(max_examples=120, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**31),
    st.integers(min_value=2, max_value=80),
    st.floats(min_value=0.0, max_value=0.5),
    st.floats(min_value=0.0, max_value=0.5),
)
def test_property_membership_monotone_in_eta(seed, n, eta, bump):
    corr = unit_interval_normal_model()
    rng = np.random.default_rng(seed)
    sample = rng.standard_normal(n)
    theta = float(rng.uniform(-1.6, 1.6))
    if membership_test(theta, sample, corr, eta):
        assert membership_test(theta, sample, corr, eta + bump)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**31), st.floats(min_value=0.0, max_value=0.6))
def test_property_region_is_contiguous(seed, eta):
    corr = unit_interval_normal_model()
    sample = np.random.default_rng(seed).standard_normal(35)
    grid = np.linspace(-3.0, 3.0, 121)
    res = confidence_region_scan(sample, eta, grid, corr, 0.05)
    idx = np.flatnonzero(res.member)
    if idx.size:
        assert idx[-1] - idx[0] + 1 == idx.size


class TestRegionScan:
    def test_huge_radius_everything_member(self, benchmark):
        sample = np.random.default_rng(6).standard_normal(15)
        grid = np.linspace(-2, 2, 41)
        res = confidence_region_scan(sample, 100.0, grid, benchmark, 0.05)
        assert res.member.all()

    def test_empty_region_is_allowed(self, benchmark):
        res = confidence_region_scan([-40.0, 40.0], 0.0, np.linspace(-3, 3, 25), benchmark, 0.05)
        assert not res.member.any()

    def test_flags_match_pointwise_membership(self, benchmark):
        sample = np.random.default_rng(7).standard_normal(50)
        grid = np.linspace(-2, 2, 81)
        res = confidence_region_scan(sample, 0.12, grid, benchmark, 0.05)
        for th, flag in zip(grid, res.member):
            assert flag == membership_test(float(th), sample, benchmark, 0.12)

    def test_region_result_validation(self):
        with pytest.raises(ValueError):
            RegionResult(theta_grid=[1.0, 1.0], member=[True, True], radius=0.0, alpha=0.05)
        with pytest.raises(ValueError):
            RegionResult(theta_grid=[1.0, 2.0], member=[True], radius=0.0, alpha=0.05)


class TestCara:
    def test_identified_set_is_reciprocal_pair(self):
        for eta in (0.0, 0.1):
            lo, hi = cara_identified_set(0.5, 2.0, eta)
            assert lo == 0.5 and hi == 2.0

    def test_point_identification(self):
        assert cara_identified_set(1.0, 1.0) == (1.0, 1.0)

    def test_products_are_exactly_one(self):
        lo, hi = cara_identified_set(0.25, 4.0)
        assert 0.25 * hi == 1.0 and 4.0 * lo == 1.0

    def test_scan_cross_check(self):
        step = 1e-3
        for eta in (0.0, 0.1):
            lo, hi = cara_scan_interval(0.5, 2.0, eta, theta_step=step)
            alo, ahi = cara_identified_set(0.5, 2.0, eta)
            assert abs(lo - alo) <= step + 1e-12
            assert abs(hi - ahi) <= step + 1e-12

    def test_input_validation(self):
        with pytest.raises(ValueError):
            cara_identified_set(-0.5, 2.0)
        with pytest.raises(ValueError):
            cara_identified_set(2.0, 0.5)
        with pytest.raises(ValueError):
            cara_scan_interval(0.5, 2.0, 0.1, theta_step=0.0)

    def test_portfolio_model_is_flagged_non_monotone(self):
        assert not cara_portfolio_model(0.5, 2.0).monotone


class TestVotingRadius:
    def test_two_party_closed_form(self):
        got = voting_radius_two_party(0.5, 100, 0.05)
        assert abs(got - float(ndtri(0.975)) * 0.05) < 1e-12
        assert abs(got - 0.0980) < 1e-4

    def test_share_symmetry(self):
        # dyadic shares so p and 1-p are exact doubles
        assert voting_radius_two_party(0.25, 50, 0.1) == voting_radius_two_party(0.75, 50, 0.1)
        assert abs(voting_radius_two_party(0.3, 50, 0.1)
                   - voting_radius_two_party(0.7, 50, 0.1)) < 1e-15

    def test_quadrupling_n_halves_radius(self):
        r1 = voting_radius_two_party(0.4, 100, 0.05)
        r4 = voting_radius_two_party(0.4, 400, 0.05)
        assert abs(r4 - r1 / 2.0) < 1e-12

    def test_two_party_validation(self):
        for bad in (0.0, 1.0, -0.1):
            with pytest.raises(ValueError):
                voting_radius_two_party(bad, 100, 0.05)

    def test_multiparty_matches_two_party_closed_form(self):
        # with K=2 the sup-norm of the Gaussian share vector is the absolute
        # scalar fluctuation, so the Monte Carlo radius must approach the
        # closed form
        exact = voting_radius_two_party(0.5, 100, 0.05)
        mc = voting_radius_multiparty([0.5, 0.5], 100, 0.05, mc_draws=200_000, seed=4)
        assert abs(mc - exact) < 0.02 * exact

    def test_multiparty_deterministic(self):
        a = voting_radius_multiparty([1 / 3, 1 / 3, 1 / 3], 900, 0.05, mc_draws=50_000, seed=9)
        b = voting_radius_multiparty([1 / 3, 1 / 3, 1 / 3], 900, 0.05, mc_draws=50_000, seed=9)
        c = voting_radius_multiparty([1 / 3, 1 / 3, 1 / 3], 900, 0.05, mc_draws=50_000, seed=10)
        assert a == b
        assert a != c

    def test_multiparty_monotone_in_alpha(self):
        shares = [0.2, 0.3, 0.5]
        r05 = voting_radius_multiparty(shares, 400, 0.05, mc_draws=50_000, seed=2)
        r20 = voting_radius_multiparty(shares, 400, 0.20, mc_draws=50_000, seed=2)
        assert r20 < r05

    def test_multiparty_validation(self):
        with pytest.raises(ValueError):
            voting_radius_multiparty([0.5, 0.6], 100, 0.05)
        with pytest.raises(ValueError):
            voting_radius_multiparty([1.0], 100, 0.05)
        with pytest.raises(ValueError):
            voting_radius_multiparty([0.0, 1.0], 100, 0.05)


def test_benchmark_model_cdf_and_inverses_are_consistent(benchmark):
    us = np.linspace(-3, 3, 25)
    assert np.allclose(benchmark.latent_cdf(us, 0.7), ndtr(us - 0.7))
    ys = np.linspace(-2, 2, 9)
    # lower(u) = u - 1 <= y iff u <= y + 1; upper(u) = u + 1 < y iff u < y - 1
    assert np.array_equal(benchmark.lower_inv(ys, 0.0), ys + 1.0)
    assert np.array_equal(benchmark.upper_inv(ys, 0.0), ys - 1.0)
