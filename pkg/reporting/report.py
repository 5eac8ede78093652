"""
Markdown summary of certificate and statistics artifacts beside the published values
"""
import logging
import math
from typing import Any, Dict, List

from bounds.barrier import BarrierCertificate
from bounds.checklist import Target
from bounds.symmetrize import SymmetrizationCertificate, TMode, kac_rice_expected_crossings
from simulation.crossings import CrossingStats
from simulation.ensemble import EnsembleStats
from . import reference_values as ref

logger = logging.getLogger(__name__)

BARRIER_KIND = "barrier_certificate"
SYMMETRIZATION_KIND = "symmetrization_certificate"
ENSEMBLE_KIND = "ensemble_stats"
CROSSING_KIND = "crossing_stats"


def headline_threshold(target: Target) -> int:
    return ref.MU0_LOG10_BOUND_HEADLINE if Target(target) is Target.MU0 else ref.MU1_LOG10_BOUND_HEADLINE


def columns_meeting_headline(cert: BarrierCertificate) -> List[str]:
    """Names of the bound columns whose log10 mu reaches the published headline exponent"""
    threshold = headline_threshold(cert.config.target)
    return [name for name, bound in cert.bound_columns().items() if bound.log10_abs >= threshold]


class ReportTemplates:
    """Markdown fragments, one per artifact kind"""

    @staticmethod
    def barrier_section(cert: BarrierCertificate) -> str:
        target = cert.config.target
        if target is Target.MU0:
            published = (f"10^{ref.MU0_LOG10_PROBABILITY} (probability), 10^{ref.MU0_LOG10_BOUND_CHAIN} (chain), "
                         f"10^{ref.MU0_LOG10_BOUND_HEADLINE} (headline)")
            published_s = ref.MU0_S
        else:
            published = (f"10^{ref.MU1_LOG10_PROBABILITY} (probability), "
                         f"10^{ref.MU1_LOG10_BOUND_HEADLINE} (headline)")
            published_s = ref.MU1_S

        rows = [
            ("delta", f"{cert.config.delta:g}", ""),
            ("epsilon", f"{cert.epsilon:.6f}", f"{ref.MU0_EPSILON if target is Target.MU0 else ref.MU1_EPSILON}"),
            ("S (certified upper)", f"{cert.S.certified_S_upper:.6f}", f"{published_s}"),
        ]
        if cert.S.tabulated_S is not None:
            rows.append(("S (tabulated, not a bound)", f"{cert.S.tabulated_S:.6f}", f"{published_s}"))
        rows += [
            ("tail bound (n > N)", f"{cert.S.tail_bound:.3e}", ""),
            ("log10 P", f"{cert.log10_probability.log10_abs:.4f}", published),
            ("log10 P, Γ(-1/2) form", f"{cert.appendix_log10_probability.log10_abs:.4f}",
             f"difference {cert.appendix_gap:+.4f}"),
        ]
        if cert.tabulated_log10_probability is not None:
            rows.append(("log10 P, tabulated S, Γ(-1/2) form",
                         f"{cert.tabulated_log10_probability.log10_abs:.4f}", ""))
        for convention, bound in sorted(cert.mu_bounds.items()):
            rows.append((f"log10 mu bound ({convention})", f"{bound.log10_abs:.4f}", ""))
        headline = headline_threshold(target)
        meeting = columns_meeting_headline(cert)
        rows.append((f"meets published 10^{headline}", ", ".join(meeting) if meeting else "none",
                     f"{cert.config.cns_convention.value} prefactor"))

        lines = [f"## Barrier bound, {target.value}", "", "| quantity | computed | published |", "|---|---|---|"]
        lines += [f"| {name} | {computed} | {published_value} |" for name, computed, published_value in rows]
        failed = cert.checklist.failed()
        lines += ["", f"Hypothesis checks: {len(cert.checklist.items)} recorded, "
                      f"{'all passed' if not failed else 'FAILED: ' + ', '.join(failed)}."]
        return "\n".join(lines)

    @staticmethod
    def symmetrization_section(cert: SymmetrizationCertificate) -> str:
        lines = [f"## Symmetrization bound, {cert.target.value}", "",
                 "| quantity | computed | published |", "|---|---|---|"]
        radii = ", ".join(f"{r:.4f}" for r in cert.schedule.radii)
        single = len(cert.schedule) == 1
        lines.append(f"| radii | {radii} | |")
        lines.append(f"| T ({cert.T_mode.value}) | {cert.T:.6f} | "
                     f"{ref.SINGLE_RADIUS_T if single else ref.NESTED_T} |")
        lines.append(f"| mu bound | {cert.log10_mu_bound} | "
                     f"{ref.SINGLE_RADIUS_BOUND if single else ref.NESTED_BOUND} |")
        if cert.quadrature_log10_q is not None:
            lines.append(f"| log10 q (closed form / quadrature) | {cert.q.log10_abs:.4f} / "
                         f"{cert.quadrature_log10_q:.4f} | |")
        notes = list(cert.warnings)
        if not single and cert.T_mode is not TMode.EXPLICIT:
            notes.append("the published (T, bound) pair for the nested schedule is not self-consistent; "
                         "recomputed values are reported as they are")
        if notes:
            lines += [""] + [f"- {note}" for note in notes]
        return "\n".join(lines)

    @staticmethod
    def ensemble_section(stats: EnsembleStats) -> str:
        lines = [
            f"## Simulation ({stats.n_samples} samples, N={stats.n_terms}, {stats.grid.resolution}^2 grid, "
            f"L={stats.grid.half_width:g}, R={stats.grid.counting_radius:g})",
            "",
            "| quantity | computed | std error | published |",
            "|---|---|---|---|",
            f"| mu_hat(0) | {stats.mu(0):.4f} | {stats.mu_std_error[0] if stats.mu_std_error else 0.0:.4f} | "
            f"{ref.MU0_SIMULATED} |",
            f"| mu_hat(1) | {stats.mu(1):.4f} | "
            f"{stats.mu_std_error[1] if len(stats.mu_std_error) > 1 else 0.0:.4f} | {ref.MU1_SIMULATED} |",
            f"| 4 pi c_NS | {stats.four_pi_cns:.4f} | {4 * math.pi * stats.cns_std_error:.4f} | "
            f"{ref.FOUR_PI_CNS_SIMULATED} |",
            "",
            f"Edge-corrected over {stats.n_observed_total} domains clear of the grid edge. "
            f"Inside the counting disk: {stats.n_interior_total} domains, holes {stats.hole_histogram}; "
            f"Faber-Krahn flags: {stats.faber_krahn_flags}; Euler violations: {stats.euler_violations}.",
        ]
        return "\n".join(lines)

    @staticmethod
    def crossing_section(stats: CrossingStats, expected: float) -> str:
        z = (stats.mean - expected) / stats.std_error if stats.std_error else float('inf')
        return "\n".join([
            f"## Circle crossings, r={stats.radius:.4f}, xi0={stats.xi0:g}",
            "",
            f"Monte Carlo mean {stats.mean:.4f} +/- {stats.std_error:.4f} over {stats.n_samples} samples; "
            f"Kac-Rice {expected:.4f} (z = {z:+.2f}).",
        ])


def render_report(documents: List[Dict[str, Any]]) -> str:
    """Combine loaded artifact documents into one Markdown report; unknown kinds are skipped"""
    sections = ["# Nodal bounds report", ""]
    for document in documents:
        kind = document["kind"]
        payload = document["payload"]
        if kind == BARRIER_KIND:
            sections.append(ReportTemplates.barrier_section(BarrierCertificate.from_dict(payload)))
        elif kind == SYMMETRIZATION_KIND:
            sections.append(ReportTemplates.symmetrization_section(SymmetrizationCertificate.from_dict(payload)))
        elif kind == ENSEMBLE_KIND:
            sections.append(ReportTemplates.ensemble_section(EnsembleStats.from_dict(payload)))
        elif kind == CROSSING_KIND:
            stats = CrossingStats.from_dict(payload)
            expected = kac_rice_expected_crossings(stats.radius, stats.xi0)
            sections.append(ReportTemplates.crossing_section(stats, expected))
        else:
            logger.warning(f"Skipping artifact of unknown kind '{kind}'")
            continue
        sections.append("")
    return "\n".join(sections)
