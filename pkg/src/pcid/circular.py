"""Directional statistics primitives shared by the detector and the samplers.

Angles live on [0, 2*pi).  Segment indices (s, e) are 1-based and inclusive
throughout the package, matching the t = 1, ..., T convention for time series;
the underlying numpy arrays stay 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

TWO_PI = 2.0 * math.pi


def wrap_angle(theta):
    """Reduce an angle (scalar or array) modulo 2*pi into [0, 2*pi).

    Non-finite input is rejected rather than propagated: a single NaN would
    silently poison every cos/sin prefix sum downstream.
    """
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("angles must be finite")
    out = np.mod(arr, TWO_PI)
    # np.mod may return 2*pi itself for tiny negative inputs.
    out = np.where(out >= TWO_PI, 0.0, out)
    if arr.ndim == 0:
        return float(out)
    return out


def signed_angle(theta):
    """Signed representative of an angle (scalar or array) in [-pi, pi)."""
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("angles must be finite")
    out = np.mod(arr + math.pi, TWO_PI) - math.pi
    if arr.ndim == 0:
        return float(out)
    return out


def atan2c(x, y):
    """Quadrant-aware arctangent of a (sine, cosine) component pair, in [0, 2*pi).

    ``x`` is the sine component and ``y`` the cosine component.  Defined
    piecewise: arctan(x/y) for y > 0, arctan(x/y) + pi for y < 0,
    sign(x) * pi/2 for y = 0 with x != 0, and 0 at the (0, 0) corner so the
    mean direction of a vanishing resultant is the zero direction.
    """
    x = float(x)
    y = float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("components must be finite")
    if y > 0.0:
        val = math.atan(x / y)
    elif y < 0.0:
        val = math.atan(x / y) + math.pi
    elif x != 0.0:
        val = math.copysign(math.pi / 2.0, x)
    else:
        return 0.0
    return wrap_angle(val)


class AngularSeries:
    """An angular sequence Theta_1..Theta_T stored wrapped to [0, 2*pi).

    Cos/sin values are computed lazily and cached so the contrast sweep and
    the permutation tests share one trig pass over the data.
    """

    __slots__ = ("values", "_cos", "_sin")

    def __init__(self, values):
        arr = np.atleast_1d(np.asarray(values, dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("series must be a nonempty one-dimensional array")
        self.values = wrap_angle(arr)
        self._cos = None
        self._sin = None

    def __len__(self):
        return int(self.values.size)

    def __repr__(self):
        return f"AngularSeries(length={len(self)})"

    @property
    def cos_values(self):
        if self._cos is None:
            self._cos = np.cos(self.values)
        return self._cos

    @property
    def sin_values(self):
        if self._sin is None:
            self._sin = np.sin(self.values)
        return self._sin


def as_angular(series):
    """Coerce raw angles to an AngularSeries; pass an AngularSeries through."""
    if isinstance(series, AngularSeries):
        return series
    return AngularSeries(series)


def _check_segment(s, e, n):
    s = int(s)
    e = int(e)
    if not (1 <= s <= e <= n):
        raise IndexError(f"invalid segment [{s}, {e}] for a series of length {n}")
    return s, e


def circular_mean(series, s=1, e=None):
    """Mean direction of Theta_s..Theta_e (1-based, inclusive), in [0, 2*pi).

    A vanishing resultant leaves the direction undefined; it is mapped to 0,
    the same convention as atan2c(0, 0).  The check uses the mean resultant
    length so that exact cancellations (e.g. antipodal pairs) hit the
    convention instead of amplifying trig round-off into an arbitrary angle.
    """
    series = as_angular(series)
    n = len(series)
    s, e = _check_segment(s, n if e is None else e, n)
    c = float(np.sum(series.cos_values[s - 1 : e]))
    sn = float(np.sum(series.sin_values[s - 1 : e]))
    if math.hypot(c, sn) <= 1e-12 * (e - s + 1):
        return 0.0
    return atan2c(sn, c)


def mean_resultant_length(series, s=1, e=None):
    """Mean resultant length of Theta_s..Theta_e, a dispersion measure in [0, 1].

    1 means all observations point the same way, 0 a perfectly balanced
    spread (e.g. antipodal pairs).
    """
    series = as_angular(series)
    n = len(series)
    s, e = _check_segment(s, n if e is None else e, n)
    c = float(np.sum(series.cos_values[s - 1 : e]))
    sn = float(np.sum(series.sin_values[s - 1 : e]))
    return math.hypot(c, sn) / (e - s + 1)


def bessel_i(p, kappa):
    """Modified Bessel function of the first kind I_p, standard normalisation.

    The circular integral int_0^{2pi} cos(p t) exp(kappa cos t) dt equals
    2*pi*I_p(kappa); only the ratio I_1/I_0 and the von Mises normalising
    constant 1/(2*pi*I_0) are consumed elsewhere, so the 2*pi factor is kept
    out of this function.
    """
    if p not in (0, 1):
        raise ValueError("order must be 0 or 1")
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0.0:
        raise ValueError("kappa must be a finite nonnegative real")
    return float(special.i0(kappa) if p == 0 else special.i1(kappa))


@dataclass(frozen=True)
class ConcentrationMatch:
    """Concentration parameters of the three noise families matched so that
    all share the same mean resultant length, hence the same circular
    variance."""

    kappa: float
    rho: float
    beta: float
    variance: float


def match_concentration(kappa):
    """Wrapped-Cauchy rho and wrapped-normal beta with the same mean resultant
    length as von Mises concentration kappa.

    The shared mean resultant length is I_1(kappa)/I_0(kappa), evaluated via
    exponentially scaled Bessel functions so large kappa does not overflow.
    """
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0.0:
        raise ValueError("kappa must be a finite nonnegative real")
    ratio = float(special.i1e(kappa) / special.i0e(kappa))
    return ConcentrationMatch(kappa=kappa, rho=ratio, beta=ratio, variance=1.0 - ratio)
