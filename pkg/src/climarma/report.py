"""Pipeline orchestration and report emission.

``run_analysis`` executes the full workflow -- ingest, correlograms on the
level/first/second-difference series, ADF test, model fits (explicit orders
or automatic grid selection), residual diagnostics, cross-model comparison,
and a forecast from the comparison winner -- and assembles a machine-readable
JSON document.  Plain-text tables and static SVG figures are views derived
from the same document; the JSON content never depends on whether figures
are rendered, and is byte-stable for a fixed config, seed and input.

Numbers are serialized at full precision in JSON and at 6 significant
digits in the text view.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__ as _pkg_version
from .arma import ModelOrder, log_likelihood
from .correlation import CorrelationSequence, sample_acf, sample_pacf
from .diagnostics import ComparisonTable, DiagnosticsReport, compare, diagnose
from .estimation import FittedModel, auto_select, fit
from .exceptions import AnalysisStageError, ClimarmaError, RangeError
from .forecasting import ForecastResult, forecast
from .ingest import parse_anomaly_csv, read_anomaly_csv
from .series import TimeSeries, difference, moments
from .stationarity import adf_test

__all__ = ["AnalysisConfig", "ReportBundle", "run_analysis", "render_text"]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
FORMATS = ("text", "json", "svg")


@dataclass(frozen=True)
class AnalysisConfig:
    """Configuration of one analysis run.

    Exactly one of ``orders`` (explicit (p,d,q) triples) or ``auto`` (grid
    bounds dict with keys max_p/max_d/max_q and optional min_d/criterion)
    must be given.  ``include_constant=None`` leaves each order on its
    convention default (constant for d=0 only).
    """

    input_path: str | None = None
    csv_text: str | None = None
    year_column: str = "Year"
    value_column: str | None = None
    orders: tuple[tuple[int, int, int], ...] | None = None
    auto: dict | None = None
    include_constant: bool | None = None
    lags: int = 20
    adf_regression: str = "constant"
    adf_max_lag: int | None = None
    horizon: int = 10
    alpha: float = 0.05
    formats: tuple[str, ...] = ("json",)
    seed: int = 0
    out_dir: str | None = None

    def __post_init__(self):
        if (self.orders is None) == (self.auto is None):
            raise RangeError("exactly one of explicit orders or an auto grid must be set")
        if self.orders is not None and len(self.orders) == 0:
            raise RangeError("orders must be non-empty")
        if (self.input_path is None) == (self.csv_text is None):
            raise RangeError("exactly one of input_path or csv_text must be set")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise RangeError(f"unknown output formats {bad}; choose from {FORMATS}")
        if self.auto is not None:
            unknown = set(self.auto) - {"max_p", "max_d", "max_q", "min_d", "criterion"}
            if unknown:
                raise RangeError(f"unknown auto-grid keys {sorted(unknown)}")


@dataclass
class ReportBundle:
    document: dict
    json_text: str
    text_report: str | None = None
    figures: dict[str, str] = field(default_factory=dict)

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        p = out / "report.json"
        p.write_text(self.json_text, encoding="utf-8")
        written.append(p)
        if self.text_report is not None:
            p = out / "report.txt"
            p.write_text(self.text_report, encoding="utf-8")
            written.append(p)
        for name, svg in self.figures.items():
            p = out / f"{name}.svg"
            p.write_text(svg, encoding="utf-8")
            written.append(p)
        return written


def _corr_payload(c: CorrelationSequence) -> dict:
    return {
        "kind": c.kind,
        "lags": list(c.lags),
        "values": [float(v) for v in c.values],
        "threshold": float(c.threshold),
        "significant_lags": list(c.significant_lags()),
    }


def _model_payload(m: FittedModel) -> dict:
    return {
        "order": [m.order.p, m.order.d, m.order.q],
        "label": m.order.label(),
        "include_constant": bool(m.order.include_constant),
        "ar": [float(v) for v in m.params.ar],
        "ma": [float(v) for v in m.params.ma],
        "constant": float(m.params.constant),
        "sigma2": float(m.params.sigma2),
        "loglik": float(m.loglik),
        "aic": float(m.aic),
        "bic": float(m.bic),
        "n_used": m.n_used,
        "converged": bool(m.converged),
    }


def _diag_payload(d: DiagnosticsReport) -> dict:
    return {
        "label": d.label,
        "order": list(d.order),
        "max_abs_residual": float(d.max_abs_residual),
        "skewness": float(d.moments.skewness),
        "kurtosis": float(d.moments.kurtosis),
        "residual_mean": float(d.moments.mean),
        "residual_variance": float(d.moments.variance),
        "ljung_box": {
            "statistic": float(d.ljung_box.statistic),
            "p_value": float(d.ljung_box.p_value),
            "lags": d.ljung_box.lags,
            "dof": d.ljung_box.dof,
        },
        "jarque_bera": {
            "statistic": float(d.jarque_bera.statistic),
            "p_value": float(d.jarque_bera.p_value),
        },
        "qq_points": [[float(a), float(b)] for a, b in d.qq_points],
        "kde_curve": [[float(a), float(b)] for a, b in d.kde_curve],
        "residual_acf": _corr_payload(d.residual_acf),
        "standardized_residuals": [float(v) for v in d.standardized_residuals],
    }


def _comparison_payload(table: ComparisonTable) -> dict:
    return {
        "criterion": table.criterion,
        "rows": [
            {
                "label": r.label,
                "order": list(r.order),
                "max_abs_residual": float(r.max_abs_residual),
                "skewness": float(r.skewness),
                "kurtosis_gap": float(r.kurtosis_gap),
                "ljung_box_p": float(r.ljung_box_p),
                "aic": float(r.aic),
                "bic": float(r.bic),
                "criterion_rank": r.criterion_rank,
                "residual_rank": r.residual_rank,
            }
            for r in table.rows
        ],
    }


def _forecast_payload(f: ForecastResult) -> dict:
    return {
        "horizon": f.horizon,
        "alpha": float(f.alpha),
        "times": list(f.times),
        "point": [float(v) for v in f.point],
        "variance": [float(v) for v in f.variance],
        "lower": [float(v) for v in f.lower],
        "upper": [float(v) for v in f.upper],
    }


def _config_payload(config: AnalysisConfig) -> dict:
    return {
        "input_path": config.input_path,
        "year_column": config.year_column,
        "value_column": config.value_column,
        "orders": [list(o) for o in config.orders] if config.orders else None,
        "auto": dict(sorted(config.auto.items())) if config.auto else None,
        "include_constant": config.include_constant,
        "lags": config.lags,
        "adf_regression": config.adf_regression,
        "adf_max_lag": config.adf_max_lag,
        "horizon": config.horizon,
        "alpha": float(config.alpha),
        "seed": config.seed,
    }


def run_analysis(config: AnalysisConfig) -> ReportBundle:
    """Execute the full pipeline; see the module docstring.

    On a stage failure the completed stages are flushed (with a failure
    manifest) to ``out_dir`` when one is set, and the error propagates as
    :class:`AnalysisStageError` naming the stage.
    """
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "generator": {"name": "climarma", "version": _pkg_version},
        "config": _config_payload(config),
    }
    stage = "ingest"

    def fail(exc: Exception):
        doc["failure"] = {
            "stage": stage,
            "error": f"{type(exc).__name__}: {exc}",
            "completed_stages": [k for k in doc if k not in ("schema_version", "generator", "config")],
        }
        if config.out_dir:
            try:
                ReportBundle(doc, _to_json(doc)).write(config.out_dir)
            except OSError:
                logger.exception("could not flush partial report")
        raise AnalysisStageError(stage, exc) from exc

    try:
        if config.csv_text is not None:
            series = parse_anomaly_csv(config.csv_text, config.year_column, config.value_column)
        else:
            series = read_anomaly_csv(config.input_path, config.year_column, config.value_column)
        mom = moments(series)
        doc["series"] = {
            "n": len(series),
            "first_time": series.times[0],
            "last_time": series.times[-1],
            "times": list(series.times),
            "values": [float(v) for v in series.values],
            "mean": float(mom.mean),
            "variance": float(mom.variance),
            "skewness": float(mom.skewness),
            "kurtosis": float(mom.kurtosis),
        }

        stage = "correlograms"
        corr = {}
        for name, d in (("levels", 0), ("diff1", 1), ("diff2", 2)):
            sub = difference(series, d)
            acf_lags = min(config.lags, len(sub) - 1)
            pacf_lags = min(config.lags, (len(sub) - 1) // 2)
            corr[name] = {
                "acf": _corr_payload(sample_acf(sub, acf_lags)),
                "pacf": _corr_payload(sample_pacf(sub, pacf_lags)),
            }
        doc["correlograms"] = corr

        stage = "adf"
        adf = adf_test(series, max_lag=config.adf_max_lag, regression=config.adf_regression)
        doc["adf"] = {
            "statistic": float(adf.statistic),
            "p_value": float(adf.p_value),
            "used_lags": adf.used_lags,
            "n_obs": adf.n_obs,
            "critical_values": {k: float(v) for k, v in adf.critical_values.items()},
            "reject_unit_root": bool(adf.reject_unit_root),
            "regression": adf.regression,
            "level": float(adf.level),
        }

        stage = "fit"
        models: list[FittedModel] = []
        if config.orders is not None:
            for p, d, q in config.orders:
                order = ModelOrder(p, d, q, include_constant=config.include_constant)
                models.append(fit(series, order))
            doc["selection"] = None
        else:
            grid = dict(config.auto)
            sel = auto_select(
                series,
                max_p=int(grid.get("max_p", 2)),
                max_d=int(grid.get("max_d", 2)),
                max_q=int(grid.get("max_q", 2)),
                criterion=str(grid.get("criterion", "aic")),
                min_d=grid.get("min_d"),
            )
            models.append(sel.best)
            doc["selection"] = {
                "criterion": sel.criterion,
                "chosen_d": sel.chosen_d,
                "best": sel.best.order.label(),
                "candidates": [
                    {
                        "label": c.order.label() if c.order else "(invalid)",
                        "criterion_value": None if c.fitted is None else float(c.criterion_value),
                        "skipped": c.error,
                    }
                    for c in sel.ranking
                ],
            }
        doc["models"] = [_model_payload(m) for m in models]

        stage = "diagnostics"
        reports = [(m.order.label(), diagnose(m, series)) for m in models]
        doc["diagnostics"] = [_diag_payload(rep) for _, rep in reports]

        stage = "comparison"
        table = None
        if len(reports) >= 2:
            table = compare(reports)
            doc["comparison"] = _comparison_payload(table)
        else:
            doc["comparison"] = None

        stage = "forecast"
        # the paper's headline comparator: smallest max |residual| wins
        if table is not None:
            best_label = table.best_by_residual().label
            best_model = next(m for m in models if m.order.label() == best_label)
        else:
            best_model = models[0]
        fc = forecast(best_model, series, config.horizon, config.alpha)
        doc["forecast"] = {"model": best_model.order.label(), **_forecast_payload(fc)}
    except ClimarmaError as exc:
        fail(exc)

    bundle = ReportBundle(doc, _to_json(doc))
    if "text" in config.formats:
        bundle.text_report = render_text(doc)
    if "svg" in config.formats:
        stage = "figures"
        try:
            from .figures import render_figures

            bundle.figures = render_figures(doc)
        except ClimarmaError as exc:
            fail(exc)
    if config.out_dir:
        bundle.write(config.out_dir)
    return bundle


def _to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _sig6(x: float) -> str:
    if x != x:
        return "nan"
    return f"{x:.6g}"


def render_text(doc: dict) -> str:
    """Plain-text tables derived from the JSON document (6 significant digits)."""
    lines: list[str] = []
    s = doc["series"]
    lines.append(f"Series: n={s['n']}  {s['first_time']}..{s['last_time']}  "
                 f"mean={_sig6(s['mean'])}  var={_sig6(s['variance'])}")
    a = doc.get("adf")
    if a:
        cvs = "  ".join(f"{k}:{_sig6(v)}" for k, v in a["critical_values"].items())
        verdict = "reject unit root (stationary)" if a["reject_unit_root"] else \
            "fail to reject unit root (non-stationary)"
        lines.append(f"ADF[{a['regression']}]: stat={_sig6(a['statistic'])}  "
                     f"p={_sig6(a['p_value'])}  lags={a['used_lags']}  {cvs}  -> {verdict}")
    sel = doc.get("selection")
    if sel:
        lines.append(f"Auto selection ({sel['criterion']}, d*={sel['chosen_d']}): best {sel['best']}")
    models = doc.get("models", [])
    if models:
        lines.append("")
        lines.append(f"{'model':<14}{'ar':<22}{'ma':<22}{'sigma2':<12}{'loglik':<12}{'aic':<12}{'bic':<12}")
        for m in models:
            ar = ",".join(_sig6(v) for v in m["ar"]) or "-"
            ma = ",".join(_sig6(v) for v in m["ma"]) or "-"
            lines.append(
                f"{m['label']:<14}{ar:<22}{ma:<22}{_sig6(m['sigma2']):<12}"
                f"{_sig6(m['loglik']):<12}{_sig6(m['aic']):<12}{_sig6(m['bic']):<12}"
            )
    comp = doc.get("comparison")
    if comp:
        lines.append("")
        lines.append(f"Comparison (criterion={comp['criterion']}; criterion ranks only "
                     "comparable within a differencing level)")
        lines.append(f"{'model':<14}{'max|resid|':<14}{'skew':<10}{'|kurt-3|':<10}"
                     f"{'LB p':<10}{'aic':<12}{'crit#':<7}{'resid#':<7}")
        for r in comp["rows"]:
            lines.append(
                f"{r['label']:<14}{_sig6(r['max_abs_residual']):<14}{_sig6(r['skewness']):<10}"
                f"{_sig6(r['kurtosis_gap']):<10}{_sig6(r['ljung_box_p']):<10}"
                f"{_sig6(r['aic']):<12}{r['criterion_rank']:<7}{r['residual_rank']:<7}"
            )
    fc = doc.get("forecast")
    if fc:
        lines.append("")
        lines.append(f"Forecast from {fc['model']} (alpha={_sig6(fc['alpha'])})")
        lines.append(f"{'time':<8}{'point':<12}{'variance':<12}{'lower':<12}{'upper':<12}")
        for t, pt, vr, lo, hi in zip(fc["times"], fc["point"], fc["variance"], fc["lower"], fc["upper"]):
            lines.append(f"{t:<8}{_sig6(pt):<12}{_sig6(vr):<12}{_sig6(lo):<12}{_sig6(hi):<12}")
    return "\n".join(lines) + "\n"
