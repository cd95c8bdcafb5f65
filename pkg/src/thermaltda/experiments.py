"""Spectral-gap scaling study: cooling thresholds of random complexes.

Random clique complexes are drawn at a fixed vertex count, the cooling
threshold (smallest inverse temperature meeting the rate criterion) is
solved per dimension, and the threshold is regressed against the spectral
gap on log-log axes.  Instances whose simplex set is empty or whose
Laplacian is identically zero are rejected and counted.  The whole run is
deterministic under a master seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .complexes import SimplicialComplex, random_complex
from .homology import (
    EmptySimplexSetError,
    ZeroSpectrumError,
    betti_exact_kernel,
    combinatorial_laplacian,
    spectral_gap,
    spectrum,
)
from .thermal import DEFAULT_CRITERION, beta_threshold

SCALING_CSV_HEADER = (
    "instance_id,seed,k,edge_prob,num_simplices,delta_gap,betti,beta_threshold"
)


@dataclass(frozen=True)
class ScalingRecord:
    instance_id: int
    seed: int
    k: int
    edge_prob: float
    num_simplices: int
    delta_gap: float
    betti: int
    beta_threshold: float


@dataclass(frozen=True)
class ScalingResult:
    records: list[ScalingRecord]
    rejected: dict[str, int] = field(default_factory=dict)


def _instance_seeds(master_seed: int, instance_id: int) -> tuple[int, int]:
    # deterministic, well-mixed child seeds: one for the graph, one for the
    # edge-probability draw, so the two streams never overlap
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(instance_id,))
    graph_seed, prob_seed = seq.generate_state(2, dtype=np.uint64)
    return int(graph_seed), int(prob_seed)


def evaluate_instance(
    cx: SimplicialComplex,
    k: int,
    criterion: float = DEFAULT_CRITERION,
) -> tuple[float, int, float]:
    """(spectral gap, Betti number, cooling threshold) for one complex and k.

    Raises EmptySimplexSetError or ZeroSpectrumError when the instance must
    be rejected.
    """
    spec = spectrum(combinatorial_laplacian(cx, k))
    gap = spectral_gap(spec)
    threshold = beta_threshold(spec, spec.dim, criterion)
    return gap, betti_exact_kernel(spec), threshold


def scaling_experiment(
    n: int,
    ks,
    instances: int,
    criterion: float = DEFAULT_CRITERION,
    edge_prob_range: tuple[float, float] = (0.3, 0.9),
    master_seed: int = 0,
) -> ScalingResult:
    """Thresholds and gaps over random clique complexes at n vertices.

    Each instance draws its edge probability uniformly from the range and
    its own seed deterministically from (master_seed, instance_id); one
    record is emitted per requested k with a nonempty simplex set and a
    nonzero Laplacian.
    """
    if instances < 1:
        raise ValueError("need at least one instance")
    lo, hi = edge_prob_range
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("edge probability range must satisfy 0 <= lo <= hi <= 1")
    ks = sorted(set(int(k) for k in ks))
    records: list[ScalingRecord] = []
    rejected = {"empty_simplex_set": 0, "zero_laplacian": 0}
    max_dim = max(ks) + 1  # the up-boundary needs one dimension above the largest k
    for instance_id in range(instances):
        seed, prob_seed = _instance_seeds(master_seed, instance_id)
        edge_prob = float(lo + (hi - lo) * np.random.default_rng(prob_seed).random())
        cx = random_complex(n, edge_prob, max_dim, seed)
        for k in ks:
            try:
                gap, betti, threshold = evaluate_instance(cx, k, criterion)
            except EmptySimplexSetError:
                rejected["empty_simplex_set"] += 1
                continue
            except ZeroSpectrumError:
                rejected["zero_laplacian"] += 1
                continue
            records.append(
                ScalingRecord(
                    instance_id=instance_id,
                    seed=seed,
                    k=k,
                    edge_prob=edge_prob,
                    num_simplices=cx.num_simplices(k),
                    delta_gap=gap,
                    betti=betti,
                    beta_threshold=threshold,
                )
            )
    return ScalingResult(records=records, rejected=rejected)


@dataclass(frozen=True)
class FitLine:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line on (ln gap, ln threshold), pooled and per k."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    per_k: dict[int, FitLine] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "pooled": {
                "slope": self.slope,
                "intercept": self.intercept,
                "r2": self.r_squared,
                "n": self.n_points,
            },
            "per_k": {
                str(k): {
                    "slope": f.slope,
                    "intercept": f.intercept,
                    "r2": f.r_squared,
                    "n": f.n_points,
                }
                for k, f in sorted(self.per_k.items())
            },
        }


class InsufficientDataError(ValueError):
    """Fewer than the minimum number of records for a trustworthy fit."""


MIN_FIT_POINTS = 10


def _fit_line(log_x: np.ndarray, log_y: np.ndarray) -> FitLine:
    slope, intercept = np.polyfit(log_x, log_y, 1)
    predicted = slope * log_x + intercept
    ss_res = float(((log_y - predicted) ** 2).sum())
    ss_tot = float(((log_y - log_y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitLine(float(slope), float(intercept), r2, log_x.size)


def fit_power_law(records, group_by_k: bool = False) -> PowerLawFit:
    """Fit threshold = C * gap^slope by least squares in log-log coordinates.

    Requires at least 10 records (per group when grouped) and strictly
    positive gaps and thresholds.
    """
    records = list(records)
    if len(records) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need at least {MIN_FIT_POINTS} records, got {len(records)}"
        )
    gaps = np.array([r.delta_gap for r in records])
    thresholds = np.array([r.beta_threshold for r in records])
    if np.any(gaps <= 0.0) or np.any(thresholds <= 0.0):
        raise ValueError("power-law fit needs positive gaps and thresholds")
    pooled = _fit_line(np.log(gaps), np.log(thresholds))
    per_k: dict[int, FitLine] = {}
    if group_by_k:
        for k in sorted(set(r.k for r in records)):
            group = [r for r in records if r.k == k]
            if len(group) < MIN_FIT_POINTS:
                continue
            per_k[k] = _fit_line(
                np.log(np.array([r.delta_gap for r in group])),
                np.log(np.array([r.beta_threshold for r in group])),
            )
    return PowerLawFit(
        slope=pooled.slope,
        intercept=pooled.intercept,
        r_squared=pooled.r_squared,
        n_points=pooled.n_points,
        per_k=per_k,
    )


def write_scaling_csv(result: ScalingResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SCALING_CSV_HEADER.split(","))
    for r in result.records:
        writer.writerow(
            [
                r.instance_id,
                r.seed,
                r.k,
                repr(r.edge_prob),
                r.num_simplices,
                repr(r.delta_gap),
                r.betti,
                repr(r.beta_threshold),
            ]
        )


def read_scaling_csv(fh) -> list[ScalingRecord]:
    reader = csv.DictReader(fh)
    return [
        ScalingRecord(
            instance_id=int(row["instance_id"]),
            seed=int(row["seed"]),
            k=int(row["k"]),
            edge_prob=float(row["edge_prob"]),
            num_simplices=int(row["num_simplices"]),
            delta_gap=float(row["delta_gap"]),
            betti=int(row["betti"]),
            beta_threshold=float(row["beta_threshold"]),
        )
        for row in reader
    ]


def spearman_gap_threshold(records) -> float:
    """Spearman rank correlation between gap and threshold (expected negative)."""
    from scipy.stats import spearmanr

    gaps = [r.delta_gap for r in records]
    thresholds = [r.beta_threshold for r in records]
    rho, _ = spearmanr(gaps, thresholds)
    return float(rho)
