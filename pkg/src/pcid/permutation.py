"""Permutation significance test for the maximal contrast of a segment.

Shuffles are drawn from counter-based Philox substreams keyed by
(seed, tested interval, permutation index), so the verdict never depends on
the order in which intervals are scheduled, on how many permutations other
tests consumed, or on how evaluation is batched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contrast import max_split_contrasts

_CHUNK_CAP = 256


def b_from_alpha(alpha):
    """Permutation count paired with a level: B = 10^d for alpha with d decimals.

    This keeps the cut-off B * alpha an integer (it equals the numerator of
    alpha written as a decimal fraction).
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly between 0 and 1")
    for d in range(1, 13):
        nearest = round(alpha * 10**d)
        # integers up to 10^12 and their quotients by 10^d are exact in
        # binary64, so the round-trip only holds when alpha is that decimal
        if nearest >= 1 and nearest / 10**d == alpha:
            return 10**d
    raise ValueError("alpha must have a finite decimal representation")


def permutation_count_guard(n, n_permutations):
    """True when n! < B: the segment is too short to support B distinct shuffles.

    The factorial loop exits as soon as the running product reaches B, so the
    check never overflows and costs O(min(n, 21)) multiplications for any
    B that fits in 64 bits.
    """
    n = int(n)
    n_permutations = int(n_permutations)
    if n < 0:
        raise ValueError("segment length must be nonnegative")
    if n_permutations < 1:
        raise ValueError("permutation count must be positive")
    fact = 1
    for k in range(2, n + 1):
        fact *= k
        if fact >= n_permutations:
            return False
    return fact < n_permutations


@dataclass(frozen=True)
class PermTestConfig:
    """Parameters of one permutation test.

    ``stream_id`` identifies the tested interval; together with ``seed`` and
    the permutation index it keys the shuffle substream.
    """

    n_permutations: int
    alpha: float
    seed: int = 0
    stream_id: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if int(self.n_permutations) < 1:
            raise ValueError("permutation count must be positive")
        if not (0.0 < float(self.alpha) < 1.0):
            raise ValueError("alpha must lie strictly between 0 and 1")
        cut = self.n_permutations * self.alpha
        if round(cut) < 1 or abs(cut - round(cut)) > 1e-6:
            raise ValueError("n_permutations * alpha must be a positive integer")
        if int(self.seed) < 0:
            raise ValueError("seed must be nonnegative")

    @property
    def cutoff(self):
        return int(round(self.n_permutations * self.alpha))


@dataclass(frozen=True)
class PermTestOutcome:
    """detected is the verdict; permutations_run == 0 means the factorial
    guard fired and no shuffles were drawn."""

    detected: bool
    permutations_run: int
    exceedances: int


def _stream_key(seed, stream_id):
    entropy = (int(seed),) + tuple(int(v) for v in stream_id)
    return np.random.SeedSequence(entropy).generate_state(2, np.uint64)


class _ShuffleStream:
    """Keyed Philox shuffle substreams addressed by permutation index.

    Index i always maps to the counter block [0, 0, 0, i] of the same key, so
    shuffle i is identical no matter which batch it lands in or whether other
    indices were drawn first.  One bit generator is reused and re-seated via
    its state to avoid paying generator construction per shuffle.
    """

    def __init__(self, key):
        self._bitgen = np.random.Philox(counter=[0, 0, 0, 0], key=key)
        self._gen = np.random.Generator(self._bitgen)
        self._state = self._bitgen.state
        self._counter = self._state["state"]["counter"]

    def draw(self, first, count, n):
        """Shuffles for indices first..first+count-1 as an integer (count, n) array."""
        out = np.empty((count, n), dtype=np.intp)
        bitgen, gen, state, counter = self._bitgen, self._gen, self._state, self._counter
        for r in range(count):
            counter[3] = first + r
            state["buffer_pos"] = 4
            state["has_uint32"] = 0
            state["uinteger"] = 0
            bitgen.state = state
            out[r] = gen.permutation(n)
        return out


def permutation_test(segment, cfg, observed, early_stop=True):
    """Decide whether ``observed`` (the maximal contrast of the segment) is
    significant among random rearrangements of the segment.

    Counts shuffles whose maximal contrast is >= observed; ties count against
    detection, which is the fail-safe direction.  To make ties on degenerate
    data (e.g. constant segments) exact rather than subject to round-off, the
    comparison reference is the unpermuted segment's statistic computed by the
    same batched kernel as the shuffled statistics; ``observed`` is validated
    against it.  The scan stops once the count reaches c = B * alpha, because
    the verdict (no detection) is then fixed; ``early_stop=False`` evaluates
    all B shuffles and applies the same rule, which is only useful for
    verifying that both paths agree.

    Returns a PermTestOutcome with detected = (exceedances < c).
    """
    seg = np.asarray(getattr(segment, "values", segment), dtype=float).ravel()
    n = seg.size
    if n < 2:
        raise ValueError("segment must contain at least two observations")
    total = int(cfg.n_permutations)
    cut = cfg.cutoff
    if permutation_count_guard(n, total):
        return PermTestOutcome(detected=False, permutations_run=0, exceedances=0)
    cos_vals = np.cos(seg)
    sin_vals = np.sin(seg)
    stream = _ShuffleStream(_stream_key(cfg.seed, cfg.stream_id))
    reference = None
    exceed = 0
    done = 0
    chunk = max(4, min(cut, _CHUNK_CAP)) if early_stop else _CHUNK_CAP
    while done < total:
        m = min(chunk, total - done)
        idx = stream.draw(done + 1, m, n)
        if reference is None:
            # the identity arrangement rides along in the first batch; its
            # statistic anchors the >= comparison in kernel arithmetic
            idx = np.concatenate([np.arange(n, dtype=np.intp)[None, :], idx])
            stats = max_split_contrasts(cos_vals[idx], sin_vals[idx])
            reference = float(stats[0])
            if not abs(observed - reference) <= 1e-9 * n * max(1.0, reference):
                raise ValueError(
                    "observed contrast does not match the segment "
                    f"(got {observed!r}, segment gives {reference!r})"
                )
            stats = stats[1:]
        else:
            stats = max_split_contrasts(cos_vals[idx], sin_vals[idx])
        hits = np.nonzero(stats >= reference)[0]
        if early_stop and exceed + hits.size >= cut:
            k = int(hits[cut - exceed - 1])
            return PermTestOutcome(detected=False, permutations_run=done + k + 1,
                                   exceedances=cut)
        exceed += int(hits.size)
        done += m
        chunk = min(chunk * 2, _CHUNK_CAP)
    return PermTestOutcome(detected=exceed < cut, permutations_run=total, exceedances=exceed)
