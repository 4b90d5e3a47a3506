"""Monte Carlo link between the per-test level alpha and the end-to-end
Type-I error of a full detection pass.

The number of permutation tests a detection pass performs depends on the data
itself, so the end-to-end false-alarm rate gamma cannot be derived from alpha
in closed form.  The embedded grid below was estimated over 1000 no-change
replicates per cell (lam = 5, B = 10000) and drives ``choose_alpha``;
``estimate_type1`` re-estimates any cell from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .engine import PcidConfig, pcid_detect
from .signals import NoiseSpec, SignalSpec, generate

_GRID_SIMS = 1000

# (alpha, gamma_hat) rows per sequence length, alphas descending.
_GRID = {
    50: (
        (0.01, 0.083), (0.009, 0.078), (0.008, 0.066), (0.007, 0.058),
        (0.006, 0.046), (0.005, 0.041), (0.004, 0.035), (0.003, 0.029),
        (0.002, 0.008), (0.001, 0.006), (0.0005, 0.002), (0.0001, 0.000),
    ),
    100: (
        (0.01, 0.149), (0.005, 0.083), (0.004, 0.069), (0.003, 0.051),
        (0.002, 0.037), (0.001, 0.011), (0.0005, 0.005), (0.0001, 0.001),
    ),
    150: (
        (0.005, 0.097), (0.003, 0.055), (0.002, 0.032), (0.001, 0.017),
        (0.0005, 0.010), (0.0001, 0.003),
    ),
    200: (
        (0.005, 0.131), (0.002, 0.057), (0.001, 0.037), (0.0005, 0.017),
        (0.0003, 0.013), (0.0002, 0.004), (0.0001, 0.003),
    ),
    250: (
        (0.002, 0.056), (0.001, 0.034), (0.0005, 0.019), (0.0004, 0.014),
        (0.0003, 0.012), (0.0002, 0.010), (0.0001, 0.002),
    ),
    300: (
        (0.002, 0.070), (0.001, 0.041), (0.0005, 0.021), (0.0004, 0.017),
        (0.0003, 0.013), (0.0002, 0.009), (0.0001, 0.003),
    ),
    350: (
        (0.002, 0.068), (0.001, 0.044), (0.0005, 0.019), (0.0004, 0.018),
        (0.0003, 0.013), (0.0002, 0.008), (0.0001, 0.007),
    ),
    400: (
        (0.002, 0.076), (0.001, 0.045), (0.0005, 0.025), (0.0004, 0.021),
        (0.0003, 0.013), (0.0002, 0.006), (0.0001, 0.003),
    ),
    450: (
        (0.002, 0.081), (0.001, 0.048), (0.0005, 0.020), (0.0004, 0.025),
        (0.0003, 0.013), (0.0002, 0.009), (0.0001, 0.005),
    ),
    500: (
        (0.002, 0.096), (0.001, 0.057), (0.0005, 0.031), (0.0004, 0.028),
        (0.0003, 0.020), (0.0002, 0.009), (0.0001, 0.002),
    ),
}


@dataclass(frozen=True)
class CalibrationTable:
    """gamma_hat estimates indexed by (sequence length, alpha).

    Loading validates the shape of the grid and that gamma_hat is
    non-decreasing in alpha within each length, up to two binomial standard
    errors of slack: the estimates are Monte Carlo values, so small
    inversions between neighbouring cells are expected noise, not data-entry
    errors.
    """

    grid: dict[int, tuple[tuple[float, float], ...]]
    n_sims: int = _GRID_SIMS

    def __post_init__(self):
        if not self.grid:
            raise ValueError("calibration grid is empty")
        for length, rows in self.grid.items():
            if length < 1 or not rows:
                raise ValueError(f"invalid grid column for length {length}")
            alphas = [a for a, _ in rows]
            if sorted(alphas, reverse=True) != alphas or len(set(alphas)) != len(alphas):
                raise ValueError(f"alphas for length {length} must be strictly descending")
            for alpha, gamma_hat in rows:
                if not (0.0 < alpha < 1.0) or not (0.0 <= gamma_hat <= 1.0):
                    raise ValueError(f"invalid cell ({alpha}, {gamma_hat}) for length {length}")
            for (a_hi, g_hi), (a_lo, g_lo) in zip(rows, rows[1:]):
                slack = 2.0 * math.sqrt(max(g_hi, g_lo) * (1.0 - max(g_hi, g_lo)) / self.n_sims)
                if g_lo > g_hi + slack:
                    raise ValueError(
                        f"gamma_hat not monotone in alpha at length {length}: "
                        f"({a_lo}, {g_lo}) vs ({a_hi}, {g_hi})"
                    )

    def lengths(self):
        return tuple(sorted(self.grid))

    def column(self, length):
        """All (alpha, gamma_hat) rows for one length."""
        try:
            return self.grid[int(length)]
        except KeyError:
            raise ValueError(f"no calibration column for length {length}") from None

    def lookup(self, length, alpha):
        """gamma_hat for one (length, alpha) cell."""
        for a, g in self.column(length):
            if abs(a - alpha) < 1e-12:
                return g
        raise ValueError(f"no calibration cell for length {length}, alpha {alpha}")


_TABLE = CalibrationTable(grid=_GRID)


def embedded_table():
    """The calibration grid shipped with the package."""
    return _TABLE


@dataclass(frozen=True)
class Type1Estimate:
    length: int
    alpha: float
    n_permutations: int
    n_sims: int
    gamma_hat: float
    se: float
    detections: dict[int, int]  # number of reported change-points -> replicate count


def _replicate_n_hat(length, noise, cfg, seed, rep):
    noise_seed, perm_seed = (
        int(x) for x in np.random.SeedSequence((seed, rep)).generate_state(2, np.uint64)
    )
    series = generate(SignalSpec(length), noise, noise_seed)
    return pcid_detect(series, replace(cfg, seed=perm_seed)).n_hat


def estimate_type1(length, alpha, n_permutations, lam=5, n_sims=1000, noise=None,
                   seed=0, n_jobs=1):
    """Fraction of no-change replicates on which a detection pass reports at
    least one change-point, with its binomial standard error.

    Replicate r derives its noise and shuffle seeds from (seed, r) alone, so
    the estimate does not depend on how replicates are batched over workers.
    The default noise is von Mises with concentration 2; under the no-change
    null the permutation tests are rank-based, so the choice matters little.
    """
    if n_sims < 1:
        raise ValueError("n_sims must be positive")
    noise = noise if noise is not None else NoiseSpec("von_mises", 2.0)
    cfg = PcidConfig(lam=lam, gamma=None, alpha=alpha, n_permutations=n_permutations)
    if n_jobs == 1:
        n_hats = [_replicate_n_hat(length, noise, cfg, seed, r) for r in range(n_sims)]
    else:
        from joblib import Parallel, delayed

        n_hats = Parallel(n_jobs=n_jobs)(
            delayed(_replicate_n_hat)(length, noise, cfg, seed, r) for r in range(n_sims)
        )
    detections: dict[int, int] = {}
    for h in n_hats:
        detections[h] = detections.get(h, 0) + 1
    gamma_hat = sum(1 for h in n_hats if h > 0) / n_sims
    se = math.sqrt(gamma_hat * (1.0 - gamma_hat) / n_sims)
    return Type1Estimate(
        length=int(length),
        alpha=float(alpha),
        n_permutations=int(n_permutations),
        n_sims=int(n_sims),
        gamma_hat=gamma_hat,
        se=se,
        detections=detections,
    )
