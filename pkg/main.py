#!/usr/bin/env python3
"""
Main entry point for the nodal-bounds system
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config import Settings
from config.run_config import RunConfig, parse_config
from bounds.barrier import BarrierConfig, CnsConvention, mu_lower_bound
from bounds.checklist import Target
from bounds.symmetrize import RadiiSchedule, TMode, symmetrization_certificate
from reporting.report import (
    BARRIER_KIND,
    CROSSING_KIND,
    ENSEMBLE_KIND,
    SYMMETRIZATION_KIND,
    render_report,
)
from reporting.reference_values import SINGLE_RADIUS
from simulation.crossings import circle_crossings
from simulation.ensemble import estimate_mu
from simulation.export import export_csv, export_pgm
from simulation.wave import GridSpec, evaluate_field, sample_wave
from utils.artifacts import ArtifactError, ArtifactStore
from utils.errors import (
    DegenerateError,
    EnvelopeError,
    HypothesisError,
    NoSolutionError,
    UsageError,
)
from utils.logger import log_banner, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class BoundSystem:
    """
    Runs one subcommand and writes its artifacts
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.store = ArtifactStore(config.out, deterministic=config.deterministic_output)

    def metadata(self, **extra: Any) -> Dict[str, Any]:
        data = {"command": self.config.command, "config": self.config.to_dict()}
        data.update(extra)
        return data

    def run(self) -> List[Path]:
        handlers = {
            'barrier': self.run_barrier,
            'symmetrize': self.run_symmetrize,
            'simulate': self.run_simulate,
            'report': self.run_report,
        }
        return handlers[self.config.command]()

    def run_barrier(self) -> List[Path]:
        config = self.config
        barrier_config = BarrierConfig(
            target=Target(config.target),
            delta=config.delta,
            epsilon=config.epsilon,
            truncation_order=config.truncation,
            cns_convention=CnsConvention(config.cns_convention),
        )
        log_banner(logger, f"Barrier bound for {config.target} (delta={config.delta})")
        try:
            certificate = mu_lower_bound(barrier_config)
        except HypothesisError as e:
            if e.checklist is not None:
                self.store.save("hypothesis_failure", e.checklist.to_dict(),
                                f"barrier_{config.target}_checklist.json", metadata=self.metadata())
            raise
        path = self.store.save(BARRIER_KIND, certificate.to_dict(), f"barrier_{config.target}.json",
                               metadata=self.metadata())
        logger.info(f"log10 mu({config.target[-1]}) >= {certificate.log10_mu_bound.log10_abs:.4f}")
        return [path]

    def run_symmetrize(self) -> List[Path]:
        config = self.config
        target = Target(config.target)
        if config.radii is not None:
            schedule = RadiiSchedule(config.radii)
        elif target is Target.MU0:
            schedule = RadiiSchedule.single(SINGLE_RADIUS)
        else:
            schedule = RadiiSchedule.nested_limit()

        log_banner(logger, f"Symmetrization bound for {config.target} over {len(schedule)} radii")
        try:
            certificate = symmetrization_certificate(schedule, target, TMode(config.t_mode), config.t_value)
        except HypothesisError as e:
            if e.checklist is not None:
                self.store.save("hypothesis_failure", e.checklist.to_dict(),
                                f"symmetrize_{config.target}_checklist.json", metadata=self.metadata())
            raise
        if certificate.vacuous:
            logger.warning("Bound is vacuous at this T")
        path = self.store.save(SYMMETRIZATION_KIND, certificate.to_dict(), f"symmetrize_{config.target}.json",
                               metadata=self.metadata())
        return [path]

    def run_simulate(self) -> List[Path]:
        config = self.config
        grid = GridSpec(half_width=config.half_width, resolution=config.grid,
                        counting_radius=config.counting_radius)
        provenance = self.metadata(seed=config.seed, grid=grid.to_dict(), n_terms=config.terms)

        log_banner(logger, f"Simulation: {config.samples} samples")
        stats = estimate_mu(grid, config.terms, config.samples, config.seed, workers=config.workers)
        paths = [self.store.save(ENSEMBLE_KIND, stats.to_dict(), "simulate_stats.json", metadata=provenance)]

        if config.export != 'none':
            sample = sample_wave(config.terms, config.seed, xi0_override=config.xi0)
            field_grid = evaluate_field(sample, grid)
            field_meta = dict(provenance, xi0=sample.xi0, sample_index=0)
            if config.export in ('csv', 'both'):
                paths.append(export_csv(self.store.resolve("field_sample0.csv"), field_grid, field_meta))
            if config.export in ('pgm', 'both'):
                paths.append(export_pgm(self.store.resolve("field_sample0.pgm"), field_grid, field_meta))

        if config.crossing_radius is not None:
            xi0 = 0.0 if config.xi0 is None else config.xi0
            crossings = circle_crossings(config.crossing_radius, xi0, config.samples, config.terms, config.seed)
            paths.append(self.store.save(CROSSING_KIND, crossings.to_dict(), "crossings.json", metadata=provenance))
        return paths

    def _report_documents(self) -> List[Dict[str, Any]]:
        if self.config.inputs:
            return [self.store.load(path) for path in self.config.inputs]
        documents = []
        for path in sorted(self.store.output_dir.glob("*.json")):
            try:
                documents.append(self.store.load(path))
            except ArtifactError as e:
                logger.debug(f"Not an artifact, skipped: {e}")
        return documents

    def run_report(self) -> List[Path]:
        documents = self._report_documents()
        if not documents:
            raise UsageError(f"no artifacts to report in {self.store.output_dir}")
        text = render_report(documents)
        return [self.store.save_text(text, "report.md")]


def dispatch(config: RunConfig) -> int:
    """
    Run one validated configuration; 0 on success, 1 on mathematical or I/O
    failure, 2 on operator error
    """
    try:
        paths = BoundSystem(config).run()
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except EnvelopeError as e:
        logger.error(f"Parameter outside the supported range: {e}")
        return EXIT_USAGE
    except HypothesisError as e:
        logger.error(f"Hypothesis checks failed: {', '.join(e.failed)}")
        return EXIT_FAILURE
    except (NoSolutionError, DegenerateError) as e:
        logger.error(f"No valid result: {e}")
        return EXIT_FAILURE
    except ArtifactError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_FAILURE

    for path in paths:
        logger.info(f"  wrote {path}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point
    """
    setup_logging(log_dir=Settings.LOG_DIR, level=Settings.LOG_LEVEL)
    try:
        Settings.validate()
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE

    try:
        config = parse_config(argv)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE

    status = dispatch(config)
    if status == EXIT_OK:
        logger.info("✓ Done")
    else:
        logger.error(f"✗ Failed with exit status {status}")
    return status


if __name__ == '__main__':
    exit(main())
