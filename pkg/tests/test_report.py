import pytest

from bounds.barrier import BarrierConfig, mu_lower_bound
from bounds.checklist import Target
from reporting.report import (
    BARRIER_KIND,
    ENSEMBLE_KIND,
    ReportTemplates,
    columns_meeting_headline,
    headline_threshold,
    render_report,
)
from simulation.ensemble import EnsembleStats
from simulation.wave import GridSpec


@pytest.fixture(scope="module")
def mu0_certificate():
    return mu_lower_bound(BarrierConfig(target=Target.MU0, delta=0.5))


@pytest.fixture(scope="module")
def mu1_certificate():
    return mu_lower_bound(BarrierConfig(target=Target.MU1, delta=0.5))


def _stats():
    return EnsembleStats(
        n_samples=2, n_terms=20, seed=3, grid=GridSpec(half_width=6.0, resolution=64),
        mu_hat=[0.9, 0.1], mu_std_error=[0.02, 0.02], cns_hat=0.0047, cns_std_error=0.0002,
        n_interior_total=5, hole_histogram={0: 5}, n_observed_total=12,
    )


class TestHeadlineColumns:
    def test_thresholds(self):
        assert headline_threshold(Target.MU0) == -1282
        assert headline_threshold("mu1") == -4535

    def test_mu0_met_by_gamma_half_form(self, mu0_certificate):
        assert columns_meeting_headline(mu0_certificate) == ["certified S, Γ(-1/2) form"]

    def test_mu1_met_only_by_tabulated_tally(self, mu1_certificate):
        assert columns_meeting_headline(mu1_certificate) == ["tabulated S, Γ(-1/2) form"]


class TestBarrierSection:
    def test_mu0_labels_the_meeting_column(self, mu0_certificate):
        text = ReportTemplates.barrier_section(mu0_certificate)
        assert "| meets published 10^-1282 | certified S, Γ(-1/2) form |" in text
        assert "S (tabulated" not in text
        assert "all passed" in text

    def test_mu1_shows_both_tallies(self, mu1_certificate):
        text = ReportTemplates.barrier_section(mu1_certificate)
        assert "| S (certified upper) |" in text
        assert "| S (tabulated, not a bound) | 5.21" in text
        assert "| meets published 10^-4535 | tabulated S, Γ(-1/2) form |" in text


class TestRender:
    def test_sections_in_order(self, mu0_certificate):
        documents = [
            {"kind": BARRIER_KIND, "payload": mu0_certificate.to_dict()},
            {"kind": "unknown", "payload": {}},
            {"kind": ENSEMBLE_KIND, "payload": _stats().to_dict()},
        ]
        text = render_report(documents)
        assert text.index("## Barrier bound, mu0") < text.index("## Simulation")

    def test_ensemble_section_names_the_estimator(self):
        text = ReportTemplates.ensemble_section(_stats())
        assert "Edge-corrected over 12 domains clear of the grid edge" in text
        assert "| mu_hat(0) | 0.9000 | 0.0200 |" in text
