import math

import pytest

from bounds.barrier import (
    CNS_UPPER_BOUND,
    BarrierCertificate,
    BarrierConfig,
    CnsConvention,
    barrier_annulus,
    barrier_prefactor,
    check_hypotheses,
    compute_bands,
    compute_S,
    epsilon_limit,
    max_epsilon,
    mu_lower_bound,
    probability_lower_bound,
    tail_bound,
)
from bounds.checklist import Target
from numerics.rootfind import ExtremumKind, Interval, bessel_zero, interval_max, level_band
from reporting import reference_values as ref
from utils.errors import EnvelopeError, HypothesisError

J01 = 2.404825557695773
J02 = 5.520078110286311


@pytest.fixture(scope="module")
def mu0_certificate():
    return mu_lower_bound(BarrierConfig(target=Target.MU0, delta=0.5))


@pytest.fixture(scope="module")
def mu1_certificate():
    return mu_lower_bound(BarrierConfig(target=Target.MU1, delta=0.5))


class TestEpsilon:
    def test_mu0_epsilon(self):
        assert max_epsilon(0.5, 1) == pytest.approx(ref.MU0_EPSILON, abs=1e-5)

    def test_mu1_epsilon(self):
        assert max_epsilon(0.5, 2) == pytest.approx(ref.MU1_EPSILON, abs=1e-5)
        assert epsilon_limit(Target.MU1, 0.5) == pytest.approx(ref.MU1_EPSILON, abs=1e-5)

    def test_vanishes_with_delta(self):
        values = [max_epsilon(d, 1) for d in (0.4, 0.1, 1e-3, 1e-6)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < 1e-6

    @pytest.mark.parametrize("delta", [0.0, 1.5, -0.1])
    def test_delta_out_of_range(self, delta):
        with pytest.raises(EnvelopeError):
            max_epsilon(delta, 1)

    def test_root_index_out_of_range(self):
        with pytest.raises(EnvelopeError):
            max_epsilon(0.5, 3)


class TestBands:
    def test_mu0_band(self):
        band = level_band(ref.MU0_EPSILON, 1)
        assert band.lo == pytest.approx(2.243784, abs=1e-5)
        assert band.hi == pytest.approx(2.577540, abs=1e-5)

    def test_mu1_bands(self):
        bands = compute_bands(Target.MU1, ref.MU1_EPSILON)
        assert bands.bands[1].lo == pytest.approx(2.284353, abs=1e-5)
        assert bands.bands[1].hi == pytest.approx(2.531685, abs=1e-5)
        assert bands.bands[2].lo == pytest.approx(5.334081, abs=1e-5)
        assert bands.bands[2].hi == pytest.approx(5.712642, abs=1e-5)
        assert J02 < bands.third_lower_edge < bessel_zero(0, 3)

    def test_mu0_band_inside_annulus(self):
        band = level_band(ref.MU0_EPSILON, 1)
        annulus = barrier_annulus(Target.MU0, 0.5)
        assert annulus.lo < band.lo and band.hi < annulus.hi


class TestHypotheses:
    def test_mu1_passes(self):
        config = BarrierConfig(target=Target.MU1, delta=0.5, epsilon=ref.MU1_EPSILON)
        checklist = check_hypotheses(config, compute_bands(Target.MU1, ref.MU1_EPSILON))
        assert checklist.passed, checklist.failed()
        area = checklist.get("first_band_area")
        assert area.lhs == pytest.approx(2.531685 ** 2 - 2.284353 ** 2, abs=1e-4)
        assert area.rhs == pytest.approx(J01 ** 2)

    def test_delta_beyond_gap(self):
        config = BarrierConfig(target=Target.MU0, delta=1.5, epsilon=0.01)
        checklist = check_hypotheses(config, compute_bands(Target.MU0, 0.01))
        assert "delta_below_critical_gap" in checklist.failed()

    def test_epsilon_above_capture_bound(self):
        config = BarrierConfig(target=Target.MU0, delta=0.5, epsilon=0.09)
        checklist = check_hypotheses(config, compute_bands(Target.MU0, 0.09))
        assert checklist.failed() == ["epsilon_within_capture_bound"]

    def test_missing_bands_fail_without_raising(self):
        config = BarrierConfig(target=Target.MU1, delta=0.5, epsilon=0.35)
        checklist = check_hypotheses(config, None)
        assert "delta_below_first_band_gap" in checklist.failed()
        assert "first_band_area" in checklist.failed()

    def test_mu_lower_bound_raises_with_checklist(self):
        with pytest.raises(HypothesisError) as info:
            mu_lower_bound(BarrierConfig(target=Target.MU0, delta=0.5, epsilon=0.09))
        assert info.value.failed == ["epsilon_within_capture_bound"]
        assert info.value.checklist is not None


class TestS:
    def test_table_entries(self):
        interval = Interval(J01 - 0.5, J02 + 0.5)
        record = interval_max(ExtremumKind.ABS_OVER_R, 2, interval)
        assert record.argmax == pytest.approx(2.299910, abs=1e-4)
        assert record.max_value == pytest.approx(0.179962, abs=1e-5)
        first = interval_max(ExtremumKind.ABS_VALUE, 1, interval)
        assert first.argmax == pytest.approx(interval.lo)
        assert first.max_value == pytest.approx(0.5810, abs=1e-3)
        high = interval_max(ExtremumKind.ABS_VALUE, 20, interval)
        assert high.argmax == pytest.approx(interval.hi)

    def test_mu0_contributions(self, mu0_certificate):
        S = mu0_certificate.S
        assert S.certified_S_upper == pytest.approx(ref.MU0_S, abs=1e-4)
        expected = [1.240843, 1.076795, 0.781099, 0.630586]
        for order, value in enumerate(expected, start=1):
            assert S.contribution(order).total == pytest.approx(value, abs=1e-4)

    def test_mu1_sum_and_block(self, mu1_certificate):
        S = mu1_certificate.S
        assert S.tabulated_S == pytest.approx(ref.MU1_S, abs=1e-4)
        assert S.block_sum(7) == pytest.approx(ref.MU1_S_TAIL_FROM_7, abs=1e-4)
        # n * sup|J_n/r| over the full interval
        assert 6.53 <= S.certified_S_upper <= 6.55

    def test_mu0_has_no_separate_tally(self, mu0_certificate):
        assert mu0_certificate.S.tabulated_S is None

    def test_truncation_changes_less_than_tail(self):
        inner, outer = J01 - 0.5, J01 + 0.5
        short = compute_S(inner, outer, 40)
        long = compute_S(inner, outer, 80)
        assert abs(short.certified_S_upper - long.certified_S_upper) <= short.tail_bound + 1e-12
        assert long.tail_bound < short.tail_bound

    def test_tail_bound_positive(self):
        assert 0.0 < tail_bound(6.02, 100) < 1e-100

    def test_envelope(self):
        with pytest.raises(EnvelopeError):
            compute_S(3.0, 2.0, 50)
        with pytest.raises(EnvelopeError):
            compute_S(1.0, 2.0, 5)


class TestMu1Table:
    @pytest.mark.parametrize("order", sorted(ref.MU1_TABLE))
    def test_row(self, mu1_certificate, order):
        u, value_u, v, value_v, w, value_w, s_n = ref.MU1_TABLE[order]
        c = mu1_certificate.S.contribution(order)
        assert c.argmax_value == pytest.approx(u, abs=1e-3)
        assert c.sup_value == pytest.approx(value_u, abs=1e-3)
        assert c.argmax_tabulated_over_r == pytest.approx(v, abs=1e-3)
        assert c.tabulated_over_r == pytest.approx(value_v, abs=1e-3)
        assert c.argmax_deriv == pytest.approx(w, abs=1e-3)
        assert c.sup_deriv == pytest.approx(value_w, abs=1e-3)
        assert c.tabulated_total == pytest.approx(s_n, abs=1e-3)

    def test_first_order_supremum_at_inner_edge(self, mu1_certificate):
        c = mu1_certificate.S.contribution(1)
        assert c.argmax_over_r == pytest.approx(J01 - 0.5)
        assert c.weighted_sup_over_r == pytest.approx(0.305034, abs=1e-3)
        assert c.weighted_sup_over_r > 4 * c.tabulated_over_r

    @pytest.mark.parametrize("order", [2, 3, 4, 5, 6])
    def test_weighting_by_order(self, mu1_certificate, order):
        c = mu1_certificate.S.contribution(order)
        assert c.weighted_sup_over_r == pytest.approx(order * c.tabulated_over_r, rel=1e-6)
        assert c.total > c.tabulated_total


class TestProbability:
    def test_mu0_probability(self):
        # the Γ(0) tail; the Γ(-1/2) form sits near -1280
        value = probability_lower_bound(ref.MU0_S, ref.MU0_EPSILON)
        assert -1284.5 <= value.log10_abs <= -1283.0

    def test_mu1_probability(self):
        value = probability_lower_bound(ref.MU1_S, ref.MU1_EPSILON)
        assert -4537.0 <= value.log10_abs <= -4535.5

    def test_decreasing_in_S(self):
        values = [probability_lower_bound(S, 0.08).log10_abs for S in (0.01, 0.5, 2.0, 4.0)]
        assert values == sorted(values, reverse=True)
        assert probability_lower_bound(1e-6, 1.0).to_float() == pytest.approx(1.0, abs=1e-4)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            probability_lower_bound(0.0, 0.1)


class TestMuLowerBound:
    def test_mu0(self, mu0_certificate):
        cert = mu0_certificate
        assert cert.checklist.passed
        assert cert.epsilon == pytest.approx(ref.MU0_EPSILON, abs=1e-5)
        assert -1284.5 <= cert.log10_probability.log10_abs <= -1283.0
        assert -1281.0 <= cert.appendix_log10_probability.log10_abs <= -1279.0
        assert cert.appendix_log10_probability.log10_abs + cert.log10_prefactor.log10_abs >= \
            ref.MU0_LOG10_BOUND_HEADLINE
        assert cert.log10_mu_bound.log10_abs == pytest.approx(
            cert.log10_probability.log10_abs + cert.log10_prefactor.log10_abs)

    def test_mu1(self, mu1_certificate):
        cert = mu1_certificate
        assert cert.checklist.passed
        expected = probability_lower_bound(cert.S.certified_S_upper, cert.epsilon)
        assert cert.log10_probability.log10_abs == pytest.approx(expected.log10_abs)
        assert cert.log10_probability.log10_abs < ref.MU1_LOG10_PROBABILITY - 2000
        assert -4533.0 <= cert.tabulated_log10_probability.log10_abs <= -4531.0
        columns = cert.bound_columns()
        assert columns["tabulated S, Γ(-1/2) form"].log10_abs >= ref.MU1_LOG10_BOUND_HEADLINE
        assert columns["certified S, Γ(-1/2) form"].log10_abs < ref.MU1_LOG10_BOUND_HEADLINE

    def test_both_conventions(self, mu0_certificate):
        bounds = mu0_certificate.mu_bounds
        exact = bounds[CnsConvention.KAC_RICE_EXACT.value]
        ten = bounds[CnsConvention.FACTOR_TEN.value]
        assert exact.log10_abs - ten.log10_abs == pytest.approx(math.log10(1.0 / CNS_UPPER_BOUND / 10.0))

    def test_prefactor(self):
        prefactor = barrier_prefactor(Target.MU0, 0.5, CnsConvention.FACTOR_TEN)
        assert prefactor.to_float() == pytest.approx(10.0 / ((J01 + 0.5) ** 2 * math.sqrt(12.0)))

    def test_round_trip(self, mu1_certificate):
        restored = BarrierCertificate.from_dict(mu1_certificate.to_dict())
        assert restored.to_dict() == mu1_certificate.to_dict()
        assert restored.bands.bands[2] == mu1_certificate.bands.bands[2]


class TestConfig:
    def test_rejects_short_truncation(self):
        with pytest.raises(ValueError):
            BarrierConfig(truncation_order=5)

    def test_string_fields_coerced(self):
        config = BarrierConfig(target="mu1", cns_convention="factor_ten")
        assert config.target is Target.MU1
        assert BarrierConfig.from_dict(config.to_dict()) == config
