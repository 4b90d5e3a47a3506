"""Isolate-and-detect driver for multiple change-points in mean direction.

The detector expands intervals from both ends of the range in a fixed
alternating schedule, so that some scheduled interval contains each true
change-point in isolation whenever consecutive change-points are more than
the expansion step apart.  Each scheduled interval is tested once with a
permutation test; a detection splits the range and the scan restarts on the
side that has not been cleared yet.  Negative verdicts are cached for the
lifetime of one top-level call so restarts never re-test an interval.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circular import as_angular, circular_mean
from .contrast import argmax_contrast, build_prefix
from .permutation import PermTestConfig, PermTestOutcome, b_from_alpha, permutation_test

_GAMMA_CHOICES = (0.01, 0.05)
_ALPHA_FLOOR = (0.001, 1000)


@dataclass(frozen=True)
class ScheduledInterval:
    s: int
    e: int
    tag: str  # "right" for [s, s + j*lam - 1], "left" for [e - j*lam + 1, e]


@dataclass(frozen=True)
class ExpansionSchedule:
    s: int
    e: int
    lam: int
    intervals: tuple[ScheduledInterval, ...]

    def __len__(self):
        return len(self.intervals)


def build_schedule(s, e, lam):
    """Alternating right/left expansions of [s, e] with step lam.

    Right expansion j ends at min(s + j*lam - 1, e), left expansion j starts
    at max(e - j*lam + 1, s); the two alternate (right first) until both span
    [s, e].  Exact duplicates keep their first occurrence only, so the last
    entry is always [s, e] itself.
    """
    s, e, lam = int(s), int(e), int(lam)
    if lam < 1:
        raise ValueError("expansion step must be a positive integer")
    if not (1 <= s <= e):
        raise ValueError(f"invalid interval [{s}, {e}]")
    n = e - s + 1
    k_max = -(-n // lam)
    seen = set()
    out = []
    for j in range(1, k_max + 1):
        for iv in (
            ScheduledInterval(s, min(s + j * lam - 1, e), "right"),
            ScheduledInterval(max(e - j * lam + 1, s), e, "left"),
        ):
            if (iv.s, iv.e) not in seen:
                seen.add((iv.s, iv.e))
                out.append(iv)
    return ExpansionSchedule(s=s, e=e, lam=lam, intervals=tuple(out))


def sidak_gamma(gamma, k):
    """Per-window target level so k independent scans keep family level gamma."""
    gamma = float(gamma)
    k = int(k)
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie strictly between 0 and 1")
    if k < 1:
        raise ValueError("window count must be positive")
    return 1.0 - (1.0 - gamma) ** (1.0 / k)


def choose_alpha(gamma_target, length, allow_sub_milli=False):
    """Per-test level and permutation count for a sequence of the given length.

    Looks up the embedded Monte Carlo calibration grid at the sequence length
    rounded to the nearest multiple of 50 (clamped to [50, 500]) and picks the
    alpha whose estimated end-to-end Type-I error is closest to gamma_target,
    ties going to the smaller alpha.  Levels below 0.001 are floored to
    (0.001, 1000) unless ``allow_sub_milli`` is set, because they force ten
    times more permutations per test.
    """
    from .calibration import embedded_table  # deferred: calibration imports engine

    gamma_target = float(gamma_target)
    if not (0.0 < gamma_target < 1.0):
        raise ValueError("gamma_target must lie strictly between 0 and 1")
    length = int(length)
    if length < 1:
        raise ValueError("length must be positive")
    rounded = 50 * int(length / 50 + 0.5)
    rounded = min(500, max(50, rounded))
    rows = embedded_table().column(rounded)
    alpha = min(rows, key=lambda row: (abs(row[1] - gamma_target), row[0]))[0]
    if alpha < 0.001 and not allow_sub_milli:
        return _ALPHA_FLOOR
    return alpha, b_from_alpha(alpha)


@dataclass(frozen=True)
class PcidConfig:
    """Detection parameters.

    Either ``gamma`` (a target end-to-end Type-I error, translated to a
    per-test level via the calibration grid) or an explicit
    (``alpha``, ``n_permutations``) pair must be given, not both.
    """

    lam: int = 5
    gamma: float | None = 0.05
    alpha: float | None = None
    n_permutations: int | None = None
    window: int = 500
    allow_sub_milli_alpha: bool = False
    seed: int = 0

    def __post_init__(self):
        if int(self.lam) < 1:
            raise ValueError("expansion step must be a positive integer")
        if int(self.window) < 2 * int(self.lam):
            raise ValueError("window must be at least twice the expansion step")
        if int(self.seed) < 0:
            raise ValueError("seed must be nonnegative")
        explicit = self.alpha is not None or self.n_permutations is not None
        if explicit:
            if self.alpha is None or self.n_permutations is None:
                raise ValueError("alpha and n_permutations must be given together")
            if self.gamma is not None:
                raise ValueError("give either gamma or (alpha, n_permutations), not both")
            # fails fast on a fractional cut-off
            PermTestConfig(n_permutations=self.n_permutations, alpha=self.alpha)
        else:
            if self.gamma is None:
                raise ValueError("either gamma or (alpha, n_permutations) is required")
            if not any(abs(self.gamma - g) < 1e-12 for g in _GAMMA_CHOICES):
                raise ValueError(f"gamma must be one of {_GAMMA_CHOICES}")

    def resolve_test_params(self, length):
        """(alpha, B) for a scan over a range of the given length."""
        if self.alpha is not None:
            return float(self.alpha), int(self.n_permutations)
        return choose_alpha(self.gamma, length, self.allow_sub_milli_alpha)


@dataclass(frozen=True)
class AuditRecord:
    """One executed permutation test (cache hits are skipped, not logged)."""

    s: int
    e: int
    tag: str  # "right" | "left" | "stitch"
    argmax_b: int
    contrast: float
    outcome: PermTestOutcome


@dataclass(frozen=True)
class WindowParams:
    """The (alpha, B) actually used on the scan range [s, e]."""

    s: int
    e: int
    alpha: float
    n_permutations: int


@dataclass(frozen=True)
class DetectionResult:
    changepoints: tuple[int, ...]
    segment_means: tuple[float, ...]
    params: tuple[WindowParams, ...]
    audit: tuple[AuditRecord, ...]

    @property
    def n_hat(self):
        return len(self.changepoints)


def _segment_means(series, changepoints, s=1, e=None):
    e = len(series) if e is None else e
    edges = (s - 1,) + tuple(changepoints) + (e,)
    return tuple(circular_mean(series, a + 1, b) for a, b in zip(edges, edges[1:]))


def _scan(series, prefix, s, e, alpha, n_permutations, lam, seed, cache, found, audit):
    """Walk the expansion schedule of [s, e]; on a detection, recurse on the
    un-cleared side and stop this walk."""
    if e - s < 1:
        return
    for iv in build_schedule(s, e, lam).intervals:
        key = (iv.s, iv.e)
        if key in cache:
            continue
        res = argmax_contrast(prefix, iv.s, iv.e)
        outcome = permutation_test(
            series.values[iv.s - 1 : iv.e],
            PermTestConfig(
                n_permutations=n_permutations, alpha=alpha, seed=seed, stream_id=key
            ),
            res.value,
        )
        audit.append(AuditRecord(iv.s, iv.e, iv.tag, res.argmax_b, res.value, outcome))
        if outcome.detected:
            found.append(res.argmax_b)
            if iv.tag == "right":
                _scan(series, prefix, res.argmax_b + 1, e, alpha, n_permutations,
                      lam, seed, cache, found, audit)
            else:
                _scan(series, prefix, s, res.argmax_b, alpha, n_permutations,
                      lam, seed, cache, found, audit)
            return
        cache.add(key)


def pcid_detect(series, cfg=None, s=1, e=None):
    """Detect all change-points in mean direction over [s, e] (default: the
    whole series).

    Deterministic for fixed (series, cfg); every reported location r satisfies
    s <= r < e and means the last index of its segment.
    """
    series = as_angular(series)
    cfg = cfg if cfg is not None else PcidConfig()
    n = len(series)
    s = int(s)
    e = n if e is None else int(e)
    if not (1 <= s <= e <= n):
        raise ValueError(f"invalid scan range [{s}, {e}] for length {n}")
    alpha, n_perm = cfg.resolve_test_params(e - s + 1)
    prefix = build_prefix(series)
    found: list[int] = []
    audit: list[AuditRecord] = []
    _scan(series, prefix, s, e, alpha, n_perm, cfg.lam, cfg.seed, set(), found, audit)
    cps = tuple(sorted(found))
    return DetectionResult(
        changepoints=cps,
        segment_means=_segment_means(series, cps, s, e),
        params=(WindowParams(s, e, alpha, n_perm),),
        audit=tuple(audit),
    )


def pcid_windowed(series, cfg=None):
    """Windowed detection for long series: identical to ``pcid_detect`` when
    T <= window, otherwise the series is scanned in ceil(T/window) disjoint
    windows and the window boundaries are stitched with one extra test each.

    With ``gamma`` given, each window gets its own per-test level: the family
    target is split over windows (Sidak) and translated via the calibration
    grid at the window length.  An explicit (alpha, B) pair is applied
    unchanged in every window and stitch.  A boundary stitch interval spans
    up to floor(window/2) on both sides of the boundary but never crosses the
    nearest detection of either adjacent window; a detection inside it is
    recorded without any recursion.
    """
    series = as_angular(series)
    cfg = cfg if cfg is not None else PcidConfig()
    n = len(series)
    if n <= cfg.window:
        return pcid_detect(series, cfg)
    k_w = -(-n // cfg.window)
    bounds = [(cfg.window * (i - 1) + 1, min(cfg.window * i, n)) for i in range(1, k_w + 1)]
    if cfg.alpha is not None:
        window_params = [(float(cfg.alpha), int(cfg.n_permutations))] * k_w
    else:
        g_i = sidak_gamma(cfg.gamma, k_w)
        window_params = [
            choose_alpha(g_i, b - a + 1, cfg.allow_sub_milli_alpha) for a, b in bounds
        ]

    prefix = build_prefix(series)
    audit: list[AuditRecord] = []
    per_window: list[list[int]] = []
    params = []
    for (a, b), (alpha, n_perm) in zip(bounds, window_params):
        found: list[int] = []
        _scan(series, prefix, a, b, alpha, n_perm, cfg.lam, cfg.seed, set(), found, audit)
        per_window.append(sorted(found))
        params.append(WindowParams(a, b, alpha, n_perm))

    cps = [r for window in per_window for r in window]
    half = cfg.window // 2
    for i in range(k_w - 1):
        boundary = bounds[i][1]
        lo = boundary - half
        if per_window[i]:
            lo = max(per_window[i][-1] + 1, lo)
        hi = boundary + half
        if per_window[i + 1]:
            hi = min(per_window[i + 1][0], hi)
        lo = max(lo, 1)
        hi = min(hi, n)
        if hi - lo < 1:
            continue  # detections hug the boundary: nothing left to stitch
        alpha, n_perm = window_params[i]  # the left window's level
        res = argmax_contrast(prefix, lo, hi)
        outcome = permutation_test(
            series.values[lo - 1 : hi],
            PermTestConfig(n_permutations=n_perm, alpha=alpha, seed=cfg.seed,
                           stream_id=(lo, hi)),
            res.value,
        )
        audit.append(AuditRecord(lo, hi, "stitch", res.argmax_b, res.value, outcome))
        if outcome.detected:
            cps.append(res.argmax_b)

    cps_sorted = tuple(sorted(set(cps)))
    return DetectionResult(
        changepoints=cps_sorted,
        segment_means=_segment_means(series, cps_sorted),
        params=tuple(params),
        audit=tuple(audit),
    )
