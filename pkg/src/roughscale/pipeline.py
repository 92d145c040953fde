"""Rolling-window orchestration: per-window MFDFA across a delta sweep, ansatz
fits, and multifractality metrics, with JSON/CSV reporting."""
from __future__ import annotations

import csv
import datetime as dt
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import __version__
from .errors import DataError, NumericError
from .market_data import TickSeries, intraday_log_returns, resample_prices
from .mfdfa import MfdfaConfig, default_scales, fluctuation_function, generalized_hurst
from .multifractal_metrics import taylor_b1
from .realized_volatility import RVSeries, compute_daily_rv, log_increments
from .scaling import AnsatzFit, FrequencySweep, divisors_of_1440, fit_ansatz

MIN_WINDOW_SERIES = 40  # shortest V_t series the default scale grid supports


@dataclass(frozen=True)
class RollingSpec:
    window_days: int = 2922  # eight years including two leap days
    step_days: int = 5

    def __post_init__(self):
        if not (self.window_days > self.step_days > 0):
            raise ValueError("need window_days > step_days > 0")


@dataclass
class WindowReport:
    window_start: dt.date
    window_end: dt.date  # exclusive
    h2_by_delta: dict[int, float] = field(default_factory=dict)
    h2_stderr_by_delta: dict[int, float] = field(default_factory=dict)
    ansatz: AnsatzFit | None = None
    curve_q: list[float] = field(default_factory=list)
    curve_h: list[float] = field(default_factory=list)
    delta_h3: float | None = None
    b0: float | None = None
    b1: float | None = None
    reference_delta: int = 5
    reference_n: int = 288
    diagnostics: dict = field(default_factory=dict)
    reason: str | None = None

    def to_dict(self) -> dict:
        d = {
            "window_start": self.window_start.isoformat(),
            "window_end": self.window_end.isoformat(),
            "h2_by_delta": {str(k): self.h2_by_delta[k] for k in sorted(self.h2_by_delta)},
            "h2_stderr_by_delta": {str(k): self.h2_stderr_by_delta[k]
                                   for k in sorted(self.h2_stderr_by_delta)},
            "ansatz": None,
            "curve_q": self.curve_q,
            "curve_h": self.curve_h,
            "delta_h3": self.delta_h3,
            "b0": self.b0,
            "b1": self.b1,
            "reference_delta": self.reference_delta,
            "reference_n": self.reference_n,
            "diagnostics": self.diagnostics,
            "reason": self.reason,
        }
        if self.ansatz is not None:
            d["ansatz"] = {
                "h0": self.ansatz.h0, "a": self.ansatz.a,
                "h0_stderr": self.ansatz.h0_stderr, "a_stderr": self.ansatz.a_stderr,
                "residual_rms": self.ansatz.residual_rms,
                "excluded_deltas": self.ansatz.excluded_deltas,
                "boundary_warning": self.ansatz.boundary_warning,
            }
        return d


def build_rv_by_delta(ticks: TickSeries, deltas: list[int],
                      start_date: dt.date | None = None,
                      end_date: dt.date | None = None,
                      min_coverage: float = 0.0) -> dict[int, RVSeries]:
    """Resample the tick stream once per delta and compute daily RV series."""
    out = {}
    for delta in deltas:
        grid = resample_prices(ticks, delta, start_date, end_date,
                               min_coverage=min_coverage)
        out[delta] = compute_daily_rv(intraday_log_returns(grid))
    return out


def _slice_rv(rv: RVSeries, start: dt.date, end: dt.date) -> RVSeries:
    keep = [i for i, d in enumerate(rv.dates) if start <= d < end]
    return RVSeries(delta_minutes=rv.delta_minutes,
                    dates=[rv.dates[i] for i in keep],
                    rv=rv.rv[keep], daily_return=rv.daily_return[keep],
                    samples_per_day=rv.samples_per_day)


def _window_report(rv_by_delta: Mapping[int, RVSeries], start: dt.date,
                   end: dt.date, deltas: list[int], reference_delta: int,
                   detrend_order: int, q_values,
                   exclude_deltas: list[int]) -> WindowReport:
    report = WindowReport(window_start=start, window_end=end,
                          reference_delta=reference_delta,
                          reference_n=1440 // reference_delta)
    dropped_days = 0
    short_deltas = []
    for delta in deltas:
        window_rv = _slice_rv(rv_by_delta[delta], start, end)
        if len(window_rv) < 2:
            short_deltas.append(delta)
            continue
        incr = log_increments(window_rv, zero_policy="drop")
        dropped_days += incr.dropped_days
        if len(incr) < MIN_WINDOW_SERIES:
            short_deltas.append(delta)
            continue
        if delta == reference_delta:
            config = MfdfaConfig(q_values=q_values,
                                 scales=default_scales(len(incr)),
                                 detrend_order=detrend_order)
        else:
            config = MfdfaConfig(q_values=np.array([2.0]),
                                 scales=default_scales(len(incr)),
                                 detrend_order=detrend_order)
        surface = fluctuation_function(incr.values, config)
        curve = generalized_hurst(surface)
        report.h2_by_delta[delta] = curve.h_at(2.0)
        for p in curve.points:
            if abs(p.q - 2.0) < 1e-9:
                report.h2_stderr_by_delta[delta] = p.stderr
        if delta == reference_delta:
            report.curve_q = [p.q for p in curve.points]
            report.curve_h = [p.h for p in curve.points]
            report.diagnostics["zero_variance_segments"] = int(surface.excluded_segments.sum())
            try:
                report.delta_h3 = curve.h_at(-3.0) - curve.h_at(3.0)
                report.b0, report.b1 = taylor_b1(curve, 3.0)
            except ValueError:
                pass  # q grid without +-3; metrics stay absent
    report.diagnostics["dropped_days"] = dropped_days
    if short_deltas:
        report.diagnostics["short_deltas"] = short_deltas
    if not report.h2_by_delta:
        report.reason = "insufficient_data"
        return report
    if len(report.h2_by_delta) >= 3:
        sweep = FrequencySweep(
            deltas=np.array(sorted(report.h2_by_delta)),
            h2=np.array([report.h2_by_delta[d] for d in sorted(report.h2_by_delta)]))
        try:
            report.ansatz = fit_ansatz(sweep, exclude=exclude_deltas)
        except NumericError as exc:
            report.reason = "ansatz_fit_failed"
            report.diagnostics["ansatz_error"] = str(exc)
    else:
        report.reason = "too_few_deltas_for_ansatz"
    return report


def run_rolling(data, rolling: RollingSpec, deltas: list[int] | None = None,
                reference_delta: int = 5, detrend_order: int = 1,
                q_values=None, exclude_deltas: list[int] | None = None,
                workers: int = 1) -> list[WindowReport]:
    """Run the rolling-window analysis.

    `data` is either a TickSeries or a precomputed {delta: RVSeries} mapping
    (the latter lets synthetic oracles bypass tick handling). Windows advance
    by `rolling.step_days`; each window is computed independently, so the
    result is identical for any worker count.
    """
    if deltas is None:
        deltas = divisors_of_1440()
    deltas = sorted(set(int(d) for d in deltas))
    for d in deltas:
        if 1440 % d != 0:
            raise ValueError(f"delta {d} does not divide 1440")
    if reference_delta not in deltas:
        deltas = sorted(deltas + [reference_delta])
    if q_values is None:
        q_values = np.arange(-6, 7) / 2.0
    else:
        q_values = np.asarray(q_values, dtype=float)

    if isinstance(data, TickSeries):
        rv_by_delta = build_rv_by_delta(data, deltas)
    else:
        rv_by_delta = dict(data)
        missing = [d for d in deltas if d not in rv_by_delta]
        if missing:
            raise DataError(f"precomputed RV mapping lacks deltas {missing}")

    ref = rv_by_delta[reference_delta]
    if not ref.dates:
        raise DataError("no usable days in the data span")
    first, last = ref.dates[0], ref.dates[-1]
    total_days = (last - first).days + 1
    if total_days < rolling.window_days:
        raise DataError(f"data span of {total_days} days is shorter than the "
                        f"{rolling.window_days}-day window")
    count = (total_days - rolling.window_days) // rolling.step_days + 1
    starts = [first + dt.timedelta(days=i * rolling.step_days) for i in range(count)]

    def one(i: int) -> WindowReport:
        start = starts[i]
        return _window_report(rv_by_delta, start,
                              start + dt.timedelta(days=rolling.window_days),
                              deltas, reference_delta, detrend_order, q_values,
                              exclude_deltas or [])

    if workers <= 1:
        return [one(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(count)))


def report_document(reports: list[WindowReport], config_echo: dict | None = None) -> dict:
    if not reports:
        raise DataError("no window reports to emit")
    return {
        "library_version": __version__,
        "config": config_echo or {},
        "windows": [r.to_dict() for r in reports],
    }


def emit_report(reports: list[WindowReport], json_path: str,
                h2_csv_path: str | None = None, hq_csv_path: str | None = None,
                config_echo: dict | None = None) -> dict:
    """Write the JSON document plus optional long-form CSV tables."""
    doc = report_document(reports, config_echo)
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    if h2_csv_path is not None:
        with open(h2_csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["window_start", "delta", "h2"])
            for r in reports:
                for d in sorted(r.h2_by_delta):
                    writer.writerow([r.window_start.isoformat(), d,
                                     repr(r.h2_by_delta[d])])
    if hq_csv_path is not None:
        with open(hq_csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["window_start", "q", "h"])
            for r in reports:
                for q, h in zip(r.curve_q, r.curve_h):
                    writer.writerow([r.window_start.isoformat(), repr(q), repr(h)])
    return doc
