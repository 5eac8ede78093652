"""
Monte Carlo estimates of the hole-count distribution mu(h) and the nodal
component density c_NS

Both come from the edge-corrected domain weights of each census, pooled over the
whole grid window. The counts inside the counting disk are kept as diagnostics;
domains crossing the disk boundary are lost there, large ones most often, so
those counts underweight domains with holes.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from typing import Any, Dict, List, Optional

import numpy as np

from .census import NodalCensus, nodal_census
from .wave import FieldBasis, GridSpec, sample_wave

logger = logging.getLogger(__name__)

MAX_BATCHES = 20


@dataclass
class SampleSummary:
    sample_index: int
    n_interior: int
    hole_histogram: Dict[int, int]
    tree_end_histogram: Dict[str, int]
    euler_violations: int
    faber_krahn_flags: int
    weighted_holes: Dict[int, float] = field(default_factory=dict)
    n_observed: int = 0

    @property
    def density(self) -> float:
        return math.fsum(self.weighted_holes.values())

    @classmethod
    def from_census(cls, sample_index: int, census: NodalCensus) -> SampleSummary:
        return cls(
            sample_index=sample_index,
            n_interior=census.n_interior,
            hole_histogram=census.hole_histogram(),
            tree_end_histogram=census.tree_end_histogram,
            euler_violations=census.euler_violations,
            faber_krahn_flags=census.faber_krahn_flags,
            weighted_holes=census.weighted_hole_histogram(),
            n_observed=len(census.observed_domains()),
        )


@dataclass
class EnsembleStats:
    n_samples: int
    n_terms: int
    seed: int
    grid: GridSpec
    mu_hat: List[float]
    mu_std_error: List[float]
    cns_hat: float
    cns_std_error: float
    n_interior_total: int
    hole_histogram: Dict[int, int] = field(default_factory=dict)
    tree_end_histogram: Dict[str, int] = field(default_factory=dict)
    euler_violations: int = 0
    faber_krahn_flags: int = 0
    n_observed_total: int = 0

    @property
    def h_max(self) -> int:
        return len(self.mu_hat) - 1

    @property
    def four_pi_cns(self) -> float:
        return 4.0 * math.pi * self.cns_hat

    def mu(self, h: int) -> float:
        return self.mu_hat[h] if 0 <= h < len(self.mu_hat) else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_samples": self.n_samples,
            "n_terms": self.n_terms,
            "seed": self.seed,
            "grid": self.grid.to_dict(),
            "mu_hat": list(self.mu_hat),
            "mu_std_error": list(self.mu_std_error),
            "cns_hat": self.cns_hat,
            "cns_std_error": self.cns_std_error,
            "four_pi_cns": self.four_pi_cns,
            "n_interior_total": self.n_interior_total,
            "hole_histogram": {str(h): n for h, n in sorted(self.hole_histogram.items())},
            "tree_end_histogram": dict(sorted(self.tree_end_histogram.items())),
            "euler_violations": self.euler_violations,
            "faber_krahn_flags": self.faber_krahn_flags,
            "n_observed_total": self.n_observed_total,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> EnsembleStats:
        return cls(
            n_samples=int(data["n_samples"]),
            n_terms=int(data["n_terms"]),
            seed=int(data["seed"]),
            grid=GridSpec.from_dict(data["grid"]),
            mu_hat=[float(v) for v in data["mu_hat"]],
            mu_std_error=[float(v) for v in data["mu_std_error"]],
            cns_hat=float(data["cns_hat"]),
            cns_std_error=float(data["cns_std_error"]),
            n_interior_total=int(data["n_interior_total"]),
            hole_histogram={int(h): int(n) for h, n in data.get("hole_histogram", {}).items()},
            tree_end_histogram={k: int(v) for k, v in data.get("tree_end_histogram", {}).items()},
            euler_violations=int(data.get("euler_violations", 0)),
            faber_krahn_flags=int(data.get("faber_krahn_flags", 0)),
            n_observed_total=int(data.get("n_observed_total", 0)),
        )


def _batches(n_samples: int) -> List[np.ndarray]:
    count = min(MAX_BATCHES, n_samples)
    return np.array_split(np.arange(n_samples), count)


def _batch_std_error(values: List[float]) -> float:
    finite = [v for v in values if not math.isnan(v)]
    if len(finite) < 2:
        return 0.0
    return float(np.std(finite, ddof=1) / math.sqrt(len(finite)))


def summarize(summaries: List[SampleSummary], grid: GridSpec, n_terms: int, seed: int) -> EnsembleStats:
    """
    Pool per-sample censuses in sample order. mu(h) is the weighted share of
    h-hole domains and c_NS the mean weighted density; batch means give the
    standard errors.
    """
    summaries = sorted(summaries, key=lambda s: s.sample_index)
    holes: Counter = Counter()
    tree_ends: Counter = Counter()
    for summary in summaries:
        holes.update(summary.hole_histogram)
        tree_ends.update(summary.tree_end_histogram)

    h_max = max((h for s in summaries for h in s.weighted_holes), default=0)

    def weighted_shares(members: List[SampleSummary]) -> List[float]:
        total = math.fsum(s.density for s in members)
        if not total > 0:
            return [math.nan] * (h_max + 1)
        return [math.fsum(s.weighted_holes.get(h, 0.0) for s in members) / total for h in range(h_max + 1)]

    pooled = weighted_shares(summaries)
    mu_hat = [0.0 if math.isnan(v) else v for v in pooled]
    per_sample_density = np.array([s.density for s in summaries], dtype=float)

    mu_batches: List[List[float]] = [[] for _ in range(h_max + 1)]
    cns_batches: List[float] = []
    for batch in _batches(len(summaries)):
        shares = weighted_shares([summaries[i] for i in batch])
        for h in range(h_max + 1):
            mu_batches[h].append(shares[h])
        cns_batches.append(float(per_sample_density[batch].mean()))

    return EnsembleStats(
        n_samples=len(summaries),
        n_terms=n_terms,
        seed=seed,
        grid=grid,
        mu_hat=mu_hat,
        mu_std_error=[_batch_std_error(values) for values in mu_batches],
        cns_hat=float(per_sample_density.mean()) if summaries else 0.0,
        cns_std_error=_batch_std_error(cns_batches),
        n_interior_total=sum(s.n_interior for s in summaries),
        hole_histogram=dict(sorted(holes.items())),
        tree_end_histogram=dict(tree_ends),
        euler_violations=sum(s.euler_violations for s in summaries),
        faber_krahn_flags=sum(s.faber_krahn_flags for s in summaries),
        n_observed_total=sum(s.n_observed for s in summaries),
    )


def estimate_mu(grid: GridSpec, n_terms: int = 100, n_samples: int = 200, seed: int = 0,
                workers: int = 1, basis: Optional[FieldBasis] = None) -> EnsembleStats:
    """
    Census n_samples independent waves on the grid and pool the edge-corrected
    domain weights.

    Sample i is drawn from the stream keyed by (seed, i), so the result does not
    depend on the number of workers.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if basis is None:
        basis = FieldBasis(grid, n_terms)

    def run_sample(index: int) -> SampleSummary:
        field_grid = basis.evaluate(sample_wave(n_terms, seed, sample_index=index))
        summary = SampleSummary.from_census(index, nodal_census(field_grid, grid))
        logger.debug(f"Sample {index}: {summary.n_observed} observed and {summary.n_interior} interior domains, "
                     f"holes {summary.hole_histogram}")
        return summary

    logger.info(f"Running {n_samples} samples on a {grid.resolution}^2 grid (L={grid.half_width}, "
                f"R={grid.counting_radius}, N={n_terms}) with {workers} worker(s)")
    if workers == 1:
        summaries = [run_sample(i) for i in range(n_samples)]
    else:
        with ThreadPool(workers) as pool:
            summaries = pool.map(run_sample, range(n_samples))

    stats = summarize(summaries, grid, n_terms, seed)
    if stats.faber_krahn_flags:
        logger.warning(f"{stats.faber_krahn_flags} interior domains below the Faber-Krahn area floor")
    logger.info(f"mu_hat(0)={stats.mu(0):.4f}, mu_hat(1)={stats.mu(1):.4f}, "
                f"4 pi c_NS={stats.four_pi_cns:.4f} over {stats.n_observed_total} observed domains "
                f"({stats.n_interior_total} inside the counting disk)")
    return stats
