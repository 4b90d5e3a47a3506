"""Synthetic angular signals and circular noise families.

A signal is a piecewise-constant mean direction; a change-point at r means
the level changes between positions r and r+1.  Noise families: von Mises,
wrapped Cauchy, wrapped normal, and a circular AR(1) scheme with von Mises
innovations for serially correlated data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circular import TWO_PI, AngularSeries, wrap_angle

_FAMILIES = ("von_mises", "wrapped_cauchy", "wrapped_normal", "ar1")
_AR_BURN_IN = 500


@dataclass(frozen=True)
class SignalSpec:
    """Piecewise-constant signal: levels[k] holds on segment k.

    Levels are given in radians but not restricted to [0, 2*pi); generation
    wraps.  Adjacent levels must differ, otherwise the nominal change-point
    would not exist.
    """

    length: int
    changepoints: tuple[int, ...] = ()
    levels: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "changepoints", tuple(int(r) for r in self.changepoints))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if self.length < 1:
            raise ValueError("length must be positive")
        cps = self.changepoints
        if any(not (0 < r < self.length) for r in cps):
            raise ValueError("change-points must lie strictly between 0 and length")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("change-points must be strictly increasing")
        if len(self.levels) != len(cps) + 1:
            raise ValueError("need exactly one level per segment")
        if any(a == b for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("adjacent levels must differ")


# The simulation-study signals.  S2 is listed in the study with alternating
# levels 0, 3; four change-points leave five segments, so five levels.
_BUILTINS = {
    "S1": SignalSpec(1000),
    "S2": SignalSpec(1000, (200, 400, 600, 800), (0.0, 3.0, 0.0, 3.0, 0.0)),
    "S3": SignalSpec(200),
    "S4": SignalSpec(100, (50,), (0.0, math.pi)),
    "S5": SignalSpec(200, (50, 100), (0.0, math.pi, 1.0)),
    "S6": SignalSpec(210, (30, 60, 90, 120, 150, 180), (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)),
    "S7": SignalSpec(150, (60, 100, 130), (1.5, 3.3, 5.2, 1.5)),
    "S8": SignalSpec(600, (150, 300, 500), (1.0, 4.0, 2.0, 5.0)),
    "S9": SignalSpec(500),
    "S10": SignalSpec(500, tuple(range(50, 500, 50)),
                      tuple(0.0 if k % 2 == 0 else 1.5 for k in range(10))),
    "S11": SignalSpec(100, tuple(range(10, 100, 10)),
                      tuple(0.0 if k % 2 == 0 else 2.0 for k in range(10))),
}


def builtin_signal(signal_id):
    """One of the study signals S1..S11."""
    key = str(signal_id).upper()
    if key not in _BUILTINS:
        raise ValueError(f"unknown signal {signal_id!r}; expected S1..S11")
    return _BUILTINS[key]


def builtin_signal_ids():
    return tuple(_BUILTINS)


@dataclass(frozen=True)
class NoiseSpec:
    """A centred circular noise family.

    ``concentration`` is kappa for von Mises (>= 0), rho for wrapped Cauchy
    (in (0, 1)) and beta for wrapped normal (in [0, 1]; 0 is the uniform
    limit, 1 is a point mass).  The ar1 family instead takes the
    autoregressive coefficient ``ar_phi`` (|phi| < 1) and the concentration
    of its von Mises innovations; the default 1.7 gives circular variance
    0.4, the same as a wrapped standard normal innovation.
    """

    family: str
    concentration: float | None = None
    ar_phi: float | None = None
    innovation_kappa: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}; expected one of {_FAMILIES}")
        if self.family == "ar1":
            if self.concentration is not None:
                raise ValueError("ar1 noise takes ar_phi and innovation_kappa, not concentration")
            if self.ar_phi is None or not abs(float(self.ar_phi)) < 1.0:
                raise ValueError("ar_phi must satisfy |phi| < 1")
            if self.innovation_kappa is None:
                object.__setattr__(self, "innovation_kappa", 1.7)
            if float(self.innovation_kappa) < 0.0:
                raise ValueError("innovation_kappa must be nonnegative")
            return
        if self.ar_phi is not None or self.innovation_kappa is not None:
            raise ValueError("ar_phi/innovation_kappa apply to the ar1 family only")
        if self.concentration is None:
            raise ValueError(f"{self.family} noise requires a concentration")
        c = float(self.concentration)
        if self.family == "von_mises" and not (math.isfinite(c) and c >= 0.0):
            raise ValueError("von Mises concentration must be a finite nonnegative real")
        if self.family == "wrapped_cauchy" and not (0.0 < c < 1.0):
            raise ValueError("wrapped Cauchy concentration must lie strictly between 0 and 1")
        if self.family == "wrapped_normal" and not (0.0 <= c <= 1.0):
            raise ValueError("wrapped normal concentration must lie in [0, 1]")


def sample_noise(spec, n, seed=0):
    """n centred noise angles in [0, 2*pi); deterministic for a fixed seed."""
    n = int(n)
    if n < 1:
        raise ValueError("sample size must be positive")
    rng = np.random.default_rng(seed)
    if spec.family == "von_mises":
        return wrap_angle(rng.vonmises(0.0, spec.concentration, n))
    if spec.family == "wrapped_cauchy":
        scale = -math.log(spec.concentration)
        return wrap_angle(rng.standard_cauchy(n) * scale)
    if spec.family == "wrapped_normal":
        beta = float(spec.concentration)
        if beta == 0.0:
            return rng.uniform(0.0, TWO_PI, n)  # the sigma -> inf limit exactly
        if beta == 1.0:
            return np.zeros(n)
        return wrap_angle(rng.normal(0.0, math.sqrt(-2.0 * math.log(beta)), n))
    # ar1: scale the signed representative of the previous state, add a von
    # Mises innovation, wrap; a burn-in absorbs the arbitrary zero start.
    phi = float(spec.ar_phi)
    draws = rng.vonmises(0.0, spec.innovation_kappa, n + _AR_BURN_IN)
    out = np.empty(n)
    state = 0.0
    for t in range(n + _AR_BURN_IN):
        state = (phi * state + draws[t] + math.pi) % TWO_PI - math.pi
        if t >= _AR_BURN_IN:
            out[t - _AR_BURN_IN] = state
    return wrap_angle(out)


def signal_values(spec):
    """The unwrapped level sequence f_1..f_T of a signal."""
    edges = (0,) + spec.changepoints + (spec.length,)
    lengths = [b - a for a, b in zip(edges, edges[1:])]
    return np.repeat(np.asarray(spec.levels, dtype=float), lengths)


def generate(spec, noise=None, seed=0):
    """AngularSeries Theta_t = wrap(f_t + eps_t); ``noise=None`` means eps = 0.

    Adding a constant to every level rotates the output by that constant for
    the same seed, since the noise draws do not depend on the signal.
    """
    f = signal_values(spec)
    if noise is None:
        return AngularSeries(f)
    return AngularSeries(f + sample_noise(noise, spec.length, seed))
