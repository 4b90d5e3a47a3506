"""Majority-vote detection across interleaved subsequences.

Serial correlation inflates the false-alarm rate of permutation tests, which
assume exchangeability.  Taking every nu-th observation yields nu nearly
independent subsequences; each is scanned on its own and only locations
supported by at least eta distinct subsequences are reported.

Agreement is judged on subsequence positions: a change between original
indices t and t+1 appears at the same position j (give or take one) in every
subsequence, whereas the mapped original indices (j-1)*nu + i of agreeing
votes are interleaved and always at least one apart.  A +-delta radius on
positions therefore expresses "the same location up to detection jitter",
which a radius on original indices cannot once nu exceeds it.  Accepted
clusters are reported at the median of their mapped original indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circular import AngularSeries, as_angular
from .engine import DetectionResult, PcidConfig, _segment_means, pcid_detect


@dataclass(frozen=True)
class SubsampleConfig:
    """nu interleaved subsequences; eta votes within +-delta subsequence
    positions accept a location."""

    nu: int
    eta: int
    delta: int

    def __post_init__(self):
        if int(self.nu) < 1:
            raise ValueError("nu must be a positive integer")
        if not (1 <= int(self.eta) <= int(self.nu)):
            raise ValueError("eta must lie in 1..nu")
        if int(self.delta) < 0:
            raise ValueError("delta must be nonnegative")


def subsample(series, nu):
    """The nu interleaved subsequences; subsequence i holds Theta_i,
    Theta_{i+nu}, ... so its j-th element is original index (j-1)*nu + i."""
    series = as_angular(series)
    nu = int(nu)
    if not (1 <= nu <= len(series)):
        raise ValueError("nu must lie in 1..T")
    return [AngularSeries(series.values[i::nu]) for i in range(nu)]


def cluster_votes(candidates, eta, delta):
    """Greedy ascending clustering of (position, subsequence id) votes.

    Walking candidates by position, a vote joins the open cluster when it is
    within delta of the cluster's running median (upper median while the
    cluster is even-sized, so the representative tracks the growth side).
    A cluster is accepted when at least eta distinct subsequences voted in
    it.  Returns the accepted clusters as tuples of (position, sid) votes in
    ascending order; deterministic given the candidate multiset.
    """
    eta = int(eta)
    delta = int(delta)
    ordered = sorted((int(pos), int(sid)) for pos, sid in candidates)
    accepted = []

    def flush(cluster):
        if len({sid for _, sid in cluster}) >= eta:
            accepted.append(tuple(cluster))

    cluster: list[tuple[int, int]] = []
    for cand in ordered:
        if cluster:
            positions = [pos for pos, _ in cluster]
            rep = positions[len(positions) // 2]
            if cand[0] - rep <= delta:
                cluster.append(cand)
                continue
            flush(cluster)
        cluster = [cand]
    if cluster:
        flush(cluster)
    return accepted


def detect_correlated(series, sub_cfg, cfg=None):
    """Subsample, scan each subsequence, and majority-vote the detections.

    Each subsequence is scanned with ``pcid_detect`` under ``cfg``; with a
    gamma target this resolves the per-test level at the subsequence length.
    Votes are clustered on subsequence positions (radius delta) and each
    accepted cluster is reported at the lower median of its votes' original
    indices (j-1)*nu + i.  With nu = eta = 1 and delta = 0 this reduces
    exactly to a plain scan.  Returned segment means are computed on the
    original series; ``params`` echoes each subsequence's resolved level with
    subsequence-local ranges.
    """
    series = as_angular(series)
    cfg = cfg if cfg is not None else PcidConfig()
    n = len(series)
    if n < sub_cfg.nu * 2 * cfg.lam:
        raise ValueError("series too short: subsequences cannot schedule any interval")
    votes = []
    params = []
    for i, sub in enumerate(subsample(series, sub_cfg.nu), start=1):
        result = pcid_detect(sub, cfg)
        params.extend(result.params)
        votes.extend((j, i) for j in result.changepoints)
    cps = []
    for cluster in cluster_votes(votes, sub_cfg.eta, sub_cfg.delta):
        mapped = sorted((j - 1) * sub_cfg.nu + i for j, i in cluster)
        cps.append(mapped[(len(mapped) - 1) // 2])
    cps = tuple(sorted(set(cps)))
    return DetectionResult(
        changepoints=cps,
        segment_means=_segment_means(series, cps),
        params=tuple(params),
        audit=(),
    )
