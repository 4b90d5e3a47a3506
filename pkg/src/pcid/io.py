"""CSV input and JSON result serialisation for the command line tools."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circular import AngularSeries, signed_angle


class SeriesLoadError(Exception):
    """Input file missing, unreadable, or containing an unparsable row."""


def load_series(path, units="radians", column=0, header=False):
    """AngularSeries from a delimited text file, one observation per row.

    ``column`` selects a 0-based field; ``header=True`` skips the first row.
    Degrees are converted to radians and all values are wrapped to [0, 2*pi).
    Unparsable or non-finite entries raise SeriesLoadError naming the line.
    """
    if units not in ("radians", "degrees"):
        raise ValueError(f"units must be 'radians' or 'degrees', got {units!r}")
    column = int(column)
    if column < 0:
        raise ValueError("column must be nonnegative")
    values = []
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise SeriesLoadError(f"cannot open {path}: {exc.strerror or exc}") from exc
    with handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if column >= len(row):
                raise SeriesLoadError(f"{path}, line {lineno}: no column {column}")
            cell = row[column].strip()
            try:
                value = float(cell)
            except ValueError:
                raise SeriesLoadError(
                    f"{path}, line {lineno}: cannot parse {cell!r} as an angle"
                ) from None
            if not math.isfinite(value):
                raise SeriesLoadError(f"{path}, line {lineno}: non-finite angle {cell!r}")
            values.append(value)
    if not values:
        raise SeriesLoadError(f"{path}: no observations found")
    arr = np.asarray(values, dtype=float)
    if units == "degrees":
        arr = np.deg2rad(arr)
    return AngularSeries(arr)


@dataclass
class ResultDocument:
    """JSON-serialisable detection report with a stable field order.

    Angles are reported in radians; ``segment_means_signed`` repeats the
    means on the [-pi, pi) scale for plotting convenience.
    """

    changepoints: list[int]
    n_hat: int
    segment_means: list[float]
    segment_means_signed: list[float]
    config: dict = field(default_factory=dict)
    audit: list[dict] | None = None
    metrics: dict | None = None

    @classmethod
    def from_result(cls, result, config, include_audit=False, metrics=None):
        """Build from a DetectionResult plus a config echo dict."""
        audit = None
        if include_audit:
            audit = [
                {
                    "s": rec.s,
                    "e": rec.e,
                    "tag": rec.tag,
                    "argmax_b": rec.argmax_b,
                    "contrast": rec.contrast,
                    "detected": rec.outcome.detected,
                    "permutations_run": rec.outcome.permutations_run,
                    "exceedances": rec.outcome.exceedances,
                }
                for rec in result.audit
            ]
        return cls(
            changepoints=[int(r) for r in result.changepoints],
            n_hat=result.n_hat,
            segment_means=[float(m) for m in result.segment_means],
            segment_means_signed=[float(signed_angle(m)) for m in result.segment_means],
            config=dict(config),
            audit=audit,
            metrics=metrics,
        )

    def to_dict(self):
        out = {
            "changepoints": list(self.changepoints),
            "n_hat": int(self.n_hat),
            "segment_means": list(self.segment_means),
            "segment_means_signed": list(self.segment_means_signed),
            "config": dict(self.config),
        }
        if self.audit is not None:
            out["audit"] = self.audit
        if self.metrics is not None:
            out["metrics"] = self.metrics
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(
            changepoints=list(data["changepoints"]),
            n_hat=int(data["n_hat"]),
            segment_means=list(data["segment_means"]),
            segment_means_signed=list(data["segment_means_signed"]),
            config=dict(data.get("config", {})),
            audit=data.get("audit"),
            metrics=data.get("metrics"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
