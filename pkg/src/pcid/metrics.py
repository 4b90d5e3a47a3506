"""Segmentation accuracy measures.

A change-point set on {1..T} induces a partition of the time axis into
segments; estimated segmentations are scored against the truth by the
adjusted Rand index of the induced partitions, by a scaled two-sided worst
distance between the change-point sets, and by the distribution of the error
in the number of detections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HISTOGRAM_BINS = ("<=-3", "-2", "-1", "0", "1", "2", ">=3")


def _as_changepoints(changepoints, length):
    cps = tuple(int(r) for r in changepoints)
    if any(not (0 < r < length) for r in cps):
        raise ValueError("change-points must lie strictly between 0 and length")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("change-points must be strictly increasing")
    return cps


def segment_labels(changepoints, length):
    """Segment index (0-based) of each position t = 1..length."""
    length = int(length)
    if length < 1:
        raise ValueError("length must be positive")
    cps = _as_changepoints(changepoints, length)
    labels = np.zeros(length, dtype=np.intp)
    for r in cps:
        labels[r:] += 1
    return labels


def _comb2(x):
    return x * (x - 1) / 2.0


def ari(true_changepoints, est_changepoints, length):
    """Adjusted Rand index between the two induced segmentations.

    Chance-corrected agreement of same-segment co-membership over all
    position pairs: 1 for identical segmentations (including the degenerate
    case where both have no change-points), around 0 for unrelated ones.
    """
    a = segment_labels(true_changepoints, length)
    b = segment_labels(est_changepoints, length)
    contingency = np.zeros((int(a[-1]) + 1, int(b[-1]) + 1))
    np.add.at(contingency, (a, b), 1)
    index = _comb2(contingency).sum()
    sum_a = _comb2(contingency.sum(axis=1)).sum()
    sum_b = _comb2(contingency.sum(axis=0)).sum()
    total = _comb2(float(length))
    expected = sum_a * sum_b / total if total else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))


def hausdorff_scaled(true_changepoints, est_changepoints, length):
    """Two-sided worst distance between the change-point sets, scaled by the
    longest segment of the true signal; None when either set is empty.

    The scaling segments include the boundary ones [0, r_1] and (r_N, T].
    """
    length = int(length)
    true_cps = _as_changepoints(true_changepoints, length)
    est_cps = _as_changepoints(est_changepoints, length)
    if not true_cps or not est_cps:
        return None
    edges = np.asarray((0,) + true_cps + (length,))
    n_s = int(np.diff(edges).max())
    a = np.asarray(true_cps)
    b = np.asarray(est_cps)
    dist = np.abs(a[:, None] - b[None, :])
    h = max(int(dist.min(axis=1).max()), int(dist.min(axis=0).max()))
    return h / n_s


def n_diff_histogram(diffs):
    """Counts of N_hat - N over the seven reporting bins, tails clipped."""
    out = {bin_: 0 for bin_ in HISTOGRAM_BINS}
    for d in diffs:
        d = max(-3, min(3, int(d)))
        if d == -3:
            out["<=-3"] += 1
        elif d == 3:
            out[">=3"] += 1
        else:
            out[str(d)] += 1
    return out


@dataclass(frozen=True)
class SegmentationMetrics:
    """Replicate-aggregated scores for one scenario.

    ``mean_ari`` is None when the true signal has no change-points (the index
    is uninformative there); ``mean_hausdorff`` averages the replicates where
    it is defined and is None when there are none.
    """

    n_diff_bins: dict[str, int]
    mean_ari: float | None
    mean_hausdorff: float | None


def aggregate_metrics(true_changepoints, estimates, length):
    """SegmentationMetrics over replicate estimates against one truth."""
    true_cps = tuple(true_changepoints)
    diffs = [len(tuple(est)) - len(true_cps) for est in estimates]
    aris = [ari(true_cps, est, length) for est in estimates] if true_cps else []
    hds = [
        h for est in estimates
        if (h := hausdorff_scaled(true_cps, est, length)) is not None
    ]
    return SegmentationMetrics(
        n_diff_bins=n_diff_histogram(diffs),
        mean_ari=float(np.mean(aris)) if aris else None,
        mean_hausdorff=float(np.mean(hds)) if hds else None,
    )
