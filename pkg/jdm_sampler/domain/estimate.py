"""Observables and importance-sampling estimators over weighted samples.

Weights stay in log space throughout; every weighted sum is shifted by the
largest log-weight before exponentiation.
"""

import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

import networkx as nx
import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from .exceptions import EmptySeries, InvalidInputError, MaxLenExceeded
from .models import EstimateRow, LabeledGraph, LogWeightHistogram, ObservableSeries, WeightedSample

logger = logging.getLogger(__name__)

OBSERVABLES = ("clustering", "cycles")
MAX_CYCLE_LEN = 8

Number = Union[float, Fraction]


def _require(series: ObservableSeries) -> None:
    if len(series) == 0:
        raise EmptySeries("no samples to estimate from")


def _shifted_mean(values: np.ndarray, log_weights: np.ndarray) -> float:
    w = np.exp(log_weights - log_weights.max())
    return float(values @ w / w.sum())


def weighted_mean(series: ObservableSeries) -> float:
    """Sum Q_i w_i / sum w_i with w_i = exp(log_weight_i).

    Raises:
        EmptySeries: If the series has no samples
    """
    _require(series)
    return _shifted_mean(np.asarray(series.values, dtype=float), np.asarray(series.log_weights, dtype=float))


def unweighted_mean(series: ObservableSeries) -> float:
    """Plain average of the values."""
    _require(series)
    return float(np.mean(np.asarray(series.values, dtype=float)))


def stratified_weighted_mean(series: ObservableSeries) -> float:
    """Weighted mean taken per spectra matrix, then across spectra matrices.

    Within a group the samples are weighted by their subgraph weight
    (log_weight minus the group log-weight); the group means are then
    weighted by the spectra weights, one term per group. Without group
    annotations this is ``weighted_mean``.

    Raises:
        EmptySeries: If the series has no samples
    """
    _require(series)
    if series.groups is None or series.group_log_weights is None:
        return weighted_mean(series)

    values = np.asarray(series.values, dtype=float)
    log_weights = np.asarray(series.log_weights, dtype=float)
    group_log_weights = np.asarray(series.group_log_weights, dtype=float)
    groups = np.asarray(series.groups)

    means: List[float] = []
    spectra_log_weights: List[float] = []
    for group in np.unique(groups):
        members = groups == group
        means.append(_shifted_mean(values[members], log_weights[members] - group_log_weights[members]))
        spectra_log_weights.append(float(group_log_weights[members][0]))
    return _shifted_mean(np.asarray(means), np.asarray(spectra_log_weights))


def effective_sample_size(series: ObservableSeries) -> float:
    """Kish effective sample size (sum w)^2 / sum w^2."""
    _require(series)
    lw = np.asarray(series.log_weights, dtype=float)
    return float(np.exp(2.0 * logsumexp(lw) - logsumexp(2.0 * lw)))


def clustering_by_degree(g: LabeledGraph, exact: bool = False) -> Dict[int, Number]:
    """Average local clustering coefficient per node degree.

    Nodes of degree below 2 have coefficient 0. Isolated nodes are skipped.

    Args:
        g: Simple graph
        exact: Return Fractions instead of floats

    Returns:
        ``{degree: mean clustering}`` for every degree present
    """
    adjacency = g.adjacency()
    totals: Dict[int, Fraction] = defaultdict(Fraction)
    counts: Dict[int, int] = defaultdict(int)
    for v, neighbors in enumerate(adjacency):
        d = len(neighbors)
        if d == 0:
            continue
        counts[d] += 1
        if d < 2:
            continue
        links = sum(1 for u in neighbors for w in adjacency[u] if w in neighbors) // 2
        totals[d] += Fraction(2 * links, d * (d - 1))
    result = {d: totals[d] / counts[d] for d in sorted(counts)}
    if exact:
        return dict(result)
    return {d: float(c) for d, c in result.items()}


def cycle_counts(g: LabeledGraph, max_len: int) -> Dict[int, int]:
    """Number of distinct simple cycles of each length 3..max_len.

    Raises:
        MaxLenExceeded: If ``max_len`` is above 8
    """
    if max_len > MAX_CYCLE_LEN:
        raise MaxLenExceeded(f"max cycle length {max_len} exceeds {MAX_CYCLE_LEN}")
    counts = {length: 0 for length in range(3, max_len + 1)}
    if not counts:
        return counts
    for cycle in nx.simple_cycles(g.to_networkx(), length_bound=max_len):
        if len(cycle) >= 3:
            counts[len(cycle)] += 1
    return counts


def observe(g: LabeledGraph, observable: str, max_cycle_len: int = 5) -> Dict[int, float]:
    """Evaluate a named observable, keyed by degree or cycle length."""
    if observable == "clustering":
        return dict(clustering_by_degree(g))
    if observable == "cycles":
        return {k: float(v) for k, v in cycle_counts(g, max_cycle_len).items()}
    raise InvalidInputError(f"unknown observable {observable!r}; expected one of {OBSERVABLES}")


def log_weight_histogram(series: ObservableSeries, bins: int) -> LogWeightHistogram:
    """Histogram of the log-weights with a fitted normal density per bin.

    The fit uses the sample mean and variance and is scaled to counts, so
    the log-normal shape of the weights can be checked against the counts.

    Raises:
        EmptySeries: If the series has no samples
    """
    _require(series)
    lw = np.asarray(series.log_weights, dtype=float)
    counts, edges = np.histogram(lw, bins=bins)
    mean = float(lw.mean())
    variance = float(lw.var())
    if variance > 0:
        centers = (edges[:-1] + edges[1:]) / 2
        fit = norm.pdf(centers, loc=mean, scale=np.sqrt(variance)) * lw.size * np.diff(edges)
    else:
        fit = counts.astype(float)
    return LogWeightHistogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        mean=mean,
        variance=variance,
        gaussian_fit=tuple(float(f) for f in fit),
    )


def estimate_report(
    samples: Iterable[WeightedSample], observable: str, max_cycle_len: int = 5
) -> Tuple[List[EstimateRow], ObservableSeries]:
    """Estimate an observable from a sample stream.

    Samples are consumed one at a time; only their observable values and
    weights are kept.

    Returns:
        One row per key and the log-weight series of all samples

    Raises:
        EmptySeries: If the stream is empty
    """
    values: Dict[int, List[float]] = defaultdict(list)
    members: Dict[int, List[int]] = defaultdict(list)
    log_weights: List[float] = []
    groups: List[int] = []
    group_log_weights: List[float] = []

    for index, sample in enumerate(samples):
        for key, value in observe(sample.graph, observable, max_cycle_len).items():
            values[key].append(value)
            members[key].append(index)
        log_weights.append(sample.log_weight)
        groups.append(sample.spectra_id)
        group_log_weights.append(sample.spectra_log_weight)

    everything = ObservableSeries(
        values=tuple(0.0 for _ in log_weights),
        log_weights=tuple(log_weights),
        groups=tuple(groups),
        group_log_weights=tuple(group_log_weights),
    )
    _require(everything)

    rows: List[EstimateRow] = []
    for key in sorted(values):
        index = members[key]
        series = ObservableSeries(
            values=tuple(values[key]),
            log_weights=tuple(log_weights[i] for i in index),
            groups=tuple(groups[i] for i in index),
            group_log_weights=tuple(group_log_weights[i] for i in index),
        )
        rows.append(EstimateRow(
            observable=observable,
            key=key,
            weighted=stratified_weighted_mean(series),
            product_weighted=weighted_mean(series),
            unweighted=unweighted_mean(series),
            effective_sample_size=effective_sample_size(series),
            n_samples=len(series),
        ))
    logger.info("Estimates computed", extra={"observable": observable, "samples": len(everything), "keys": len(rows)})
    return rows, everything
