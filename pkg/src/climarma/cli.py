"""Command-line client for the analysis service.

Every subcommand builds the same pydantic request models the HTTP API uses
and dispatches them either in-process (default) or to a running server via
``--server URL``.  File reading always happens client-side, so remote mode
needs no shared filesystem.
"""

from __future__ import annotations

from pathlib import Path

import click

from .exceptions import ClimarmaError
from .ingest import bundled_csv_path, read_anomaly_csv
from .service import api
from .service import schemas as sc

GISTEMP_URL = "https://data.giss.nasa.gov/gistemp/graphs/graph_data/GLB.Ts+dSST.csv"

_ENDPOINTS = {
    "ingest-check": ("ingest-check", api.ingest_check, sc.IngestCheckResponse),
    "acf": ("acf", api.acf, sc.CorrelationResponse),
    "pacf": ("pacf", api.pacf, sc.CorrelationResponse),
    "adf": ("adf", api.adf, sc.AdfResponse),
    "fit": ("fit", api.fit_model, sc.FitResponse),
    "auto": ("auto", api.auto, sc.AutoResponse),
    "diagnose": ("diagnose", api.diagnose_model, sc.DiagnoseResponse),
    "forecast": ("forecast", api.forecast_model, sc.ForecastResponse),
    "report": ("report", api.report, sc.ReportResponse),
}


def _dispatch(ctx_obj: dict, name: str, request) -> object:
    path, fn, resp_model = _ENDPOINTS[name]
    server = ctx_obj.get("server")
    try:
        if server is None:
            return fn(request)
        import httpx

        resp = httpx.post(
            f"{server.rstrip('/')}/v1/{path}",
            json=request.model_dump(mode="json"),
            timeout=600.0,
        )
        if resp.status_code >= 400:
            try:
                detail = resp.json()
            except ValueError:
                detail = {"message": resp.text}
            raise click.ClickException(
                f"server error {resp.status_code}: {detail.get('message', detail)}"
            )
        return resp_model.model_validate(resp.json())
    except ClimarmaError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}")


def _load_series(ctx_obj: dict, path: str) -> sc.SeriesPayload:
    series = read_anomaly_csv(path, ctx_obj["year_col"], ctx_obj["value_col"])
    return sc.SeriesPayload.from_series(series)


def _print(obj, as_json: bool, text_renderer) -> None:
    if as_json:
        click.echo(obj.model_dump_json(indent=2))
    else:
        text_renderer(obj)


def _parse_order(text: str) -> sc.OrderSpec:
    try:
        p, d, q = (int(v) for v in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected p,d,q integers, got {text!r}")
    return sc.OrderSpec(p=p, d=d, q=q)


input_argument = click.argument("input_path", type=click.Path(), metavar="INPUT")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Send requests to a running climarma server instead of computing in-process.")
@click.option("--year-col", default="Year", show_default=True, help="Year column name.")
@click.option("--value-col", default=None, help="Anomaly column name (default: first non-year column).")
@click.version_option(package_name="climarma")
@click.pass_context
def main(ctx, server, year_col, value_col):
    """ARMA/ARIMA analysis of annual anomaly series."""
    ctx.obj = {"server": server, "year_col": year_col, "value_col": value_col}


@main.command("bundled-path")
def bundled_path_cmd():
    """Print the path of the vendored annual anomaly snapshot."""
    click.echo(str(bundled_csv_path()))


@main.command("fetch-gistemp")
@click.argument("dest", type=click.Path(dir_okay=False))
@click.option("--url", default=GISTEMP_URL, show_default=True)
def fetch_gistemp(dest, url):
    """Download a fresh annual anomaly CSV (explicit network access)."""
    import httpx

    resp = httpx.get(url, timeout=120.0, follow_redirects=True)
    resp.raise_for_status()
    Path(dest).write_bytes(resp.content)
    click.echo(f"wrote {len(resp.content)} bytes to {dest}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (requires uvicorn)."""
    import uvicorn

    uvicorn.run("climarma.service.app:app", host=host, port=port)


@main.command("ingest-check")
@input_argument
@format_option
@click.pass_obj
def ingest_check_cmd(obj, input_path, fmt):
    """Validate a CSV file and summarize the ingested series."""
    req = sc.IngestCheckRequest(
        csv_text=Path(input_path).read_text(encoding="utf-8"),
        year_column=obj["year_col"],
        value_column=obj["value_col"],
    )
    out = _dispatch(obj, "ingest-check", req)
    _print(out, fmt == "json", lambda r: click.echo(
        f"ok: n={r.n} years {r.first_year}..{r.last_year} mean={r.mean:.6g} variance={r.variance:.6g}"
    ))


def _corr_text(r) -> None:
    click.echo(f"{r.kind} (threshold +-{r.threshold:.6g})")
    for lag, v in zip(r.lags, r.values):
        mark = " *" if abs(v) > r.threshold and lag > 0 else ""
        click.echo(f"  lag {lag:>3}: {v:+.6g}{mark}")


@main.command("acf")
@input_argument
@click.option("--lags", default=20, show_default=True)
@click.option("--diff", "d", default=0, show_default=True, help="Difference the series d times first.")
@format_option
@click.pass_obj
def acf_cmd(obj, input_path, lags, d, fmt):
    """Sample autocorrelation sequence."""
    payload = _differenced_payload(obj, input_path, d)
    out = _dispatch(obj, "acf", sc.CorrelationRequest(series=payload, max_lag=lags))
    _print(out, fmt == "json", _corr_text)


@main.command("pacf")
@input_argument
@click.option("--lags", default=20, show_default=True)
@click.option("--diff", "d", default=0, show_default=True)
@format_option
@click.pass_obj
def pacf_cmd(obj, input_path, lags, d, fmt):
    """Sample partial autocorrelation sequence (Durbin-Levinson)."""
    payload = _differenced_payload(obj, input_path, d)
    out = _dispatch(obj, "pacf", sc.CorrelationRequest(series=payload, max_lag=lags))
    _print(out, fmt == "json", _corr_text)


def _differenced_payload(obj, input_path, d) -> sc.SeriesPayload:
    from .series import difference

    series = read_anomaly_csv(input_path, obj["year_col"], obj["value_col"])
    if d:
        series = difference(series, d)
    return sc.SeriesPayload.from_series(series)


@main.command("adf")
@input_argument
@click.option("--lags", default=None, type=int, help="Max lag bound (default: Schwert rule).")
@click.option("--regression", type=click.Choice(["constant", "constant+trend", "none"]),
              default="constant", show_default=True)
@click.option("--level", default=0.05, show_default=True)
@format_option
@click.pass_obj
def adf_cmd(obj, input_path, lags, regression, level, fmt):
    """Augmented Dickey-Fuller unit-root test."""
    req = sc.AdfRequest(series=_load_series(obj, input_path), max_lag=lags,
                        regression=regression, level=level)
    out = _dispatch(obj, "adf", req)

    def text(r):
        verdict = "reject unit root (stationary)" if r.reject_unit_root else \
            "fail to reject unit root (non-stationary)"
        click.echo(f"ADF statistic: {r.statistic:.6g}")
        click.echo(f"p-value:       {r.p_value:.6g}")
        click.echo(f"used lags:     {r.used_lags}  (n_obs {r.n_obs})")
        for k, v in r.critical_values.items():
            click.echo(f"  {k:>4} critical value: {v:.6g}")
        click.echo(f"verdict at {r.level:g}: {verdict}")

    _print(out, fmt == "json", text)


def _fit_text(r) -> None:
    click.echo(f"{r.label}  converged={r.converged}")
    if r.ar:
        click.echo(f"  ar:       {', '.join(f'{v:+.6g}' for v in r.ar)}")
    if r.ma:
        click.echo(f"  ma:       {', '.join(f'{v:+.6g}' for v in r.ma)}")
    click.echo(f"  constant: {r.constant:+.6g}")
    click.echo(f"  sigma2:   {r.sigma2:.6g}")
    click.echo(f"  loglik:   {r.loglik:.6g}   aic: {r.aic:.6g}   bic: {r.bic:.6g}")


@main.command("fit")
@input_argument
@click.option("--order", required=True, metavar="p,d,q")
@click.option("--constant/--no-constant", "include_constant", default=None,
              help="Override the intercept convention (default: constant iff d=0).")
@format_option
@click.pass_obj
def fit_cmd(obj, input_path, order, include_constant, fmt):
    """Fit one ARIMA(p,d,q) model by exact maximum likelihood."""
    spec = _parse_order(order)
    spec = sc.OrderSpec(p=spec.p, d=spec.d, q=spec.q, include_constant=include_constant)
    out = _dispatch(obj, "fit", sc.FitRequest(series=_load_series(obj, input_path), order=spec))
    _print(out, fmt == "json", _fit_text)


@main.command("auto")
@input_argument
@click.option("--max-p", default=2, show_default=True)
@click.option("--max-d", default=2, show_default=True)
@click.option("--max-q", default=2, show_default=True)
@click.option("--min-d", default=None, type=int, help="Pin d by setting min-d = max-d.")
@click.option("--criterion", type=click.Choice(["aic", "bic"]), default="aic", show_default=True)
@format_option
@click.pass_obj
def auto_cmd(obj, input_path, max_p, max_d, max_q, min_d, criterion, fmt):
    """Automatic order selection over an exhaustive (p,d,q) grid."""
    req = sc.AutoRequest(series=_load_series(obj, input_path), max_p=max_p, max_d=max_d,
                         max_q=max_q, criterion=criterion, min_d=min_d)
    out = _dispatch(obj, "auto", req)

    def text(r):
        click.echo(f"best: {r.best.label} (criterion {r.criterion}, d*={r.chosen_d})")
        _fit_text(r.best)
        click.echo("candidates:")
        for c in r.candidates:
            if c.skipped:
                click.echo(f"  {c.label:<16} skipped: {c.skipped}")
            else:
                click.echo(f"  {c.label:<16} {r.criterion}={c.criterion_value:.6g}")

    _print(out, fmt == "json", text)


@main.command("diagnose")
@input_argument
@click.option("--order", required=True, metavar="p,d,q")
@click.option("--constant/--no-constant", "include_constant", default=None)
@format_option
@click.pass_obj
def diagnose_cmd(obj, input_path, order, include_constant, fmt):
    """Fit a model and report residual diagnostics."""
    spec = _parse_order(order)
    spec = sc.OrderSpec(p=spec.p, d=spec.d, q=spec.q, include_constant=include_constant)
    out = _dispatch(obj, "diagnose", sc.DiagnoseRequest(series=_load_series(obj, input_path), order=spec))

    def text(r):
        _fit_text(r.fit)
        click.echo(f"  max |residual|: {r.max_abs_residual:.6g}")
        click.echo(f"  skew: {r.skewness:.6g}   kurtosis: {r.kurtosis:.6g}")
        click.echo(f"  Ljung-Box({r.ljung_box.lags}): stat={r.ljung_box.statistic:.6g} "
                   f"p={r.ljung_box.p_value:.6g} (dof {r.ljung_box.dof})")
        click.echo(f"  Jarque-Bera: stat={r.jarque_bera.statistic:.6g} p={r.jarque_bera.p_value:.6g}")

    _print(out, fmt == "json", text)


@main.command("forecast")
@input_argument
@click.option("--order", required=True, metavar="p,d,q")
@click.option("--constant/--no-constant", "include_constant", default=None)
@click.option("--horizon", default=10, show_default=True)
@click.option("--alpha", default=0.05, show_default=True)
@format_option
@click.pass_obj
def forecast_cmd(obj, input_path, order, include_constant, horizon, alpha, fmt):
    """Fit a model and forecast with prediction intervals."""
    spec = _parse_order(order)
    spec = sc.OrderSpec(p=spec.p, d=spec.d, q=spec.q, include_constant=include_constant)
    req = sc.ForecastRequest(series=_load_series(obj, input_path), order=spec,
                             horizon=horizon, alpha=alpha)
    out = _dispatch(obj, "forecast", req)

    def text(r):
        click.echo(f"forecast from {r.model_label} (alpha={r.alpha:g})")
        click.echo(f"{'time':<8}{'point':<14}{'variance':<14}{'lower':<14}{'upper':<14}")
        for t, pt, vr, lo, hi in zip(r.times, r.point, r.variance, r.lower, r.upper):
            click.echo(f"{t:<8}{pt:<14.6g}{vr:<14.6g}{lo:<14.6g}{hi:<14.6g}")

    _print(out, fmt == "json", text)


@main.command("report")
@input_argument
@click.option("--order", "orders", multiple=True, metavar="p,d,q",
              help="Explicit model order; repeatable. Mutually exclusive with --auto.")
@click.option("--auto", "use_auto", is_flag=True, help="Automatic order selection instead of explicit orders.")
@click.option("--max-p", default=2, show_default=True)
@click.option("--max-d", default=2, show_default=True)
@click.option("--max-q", default=2, show_default=True)
@click.option("--min-d", default=None, type=int)
@click.option("--criterion", type=click.Choice(["aic", "bic"]), default="aic", show_default=True)
@click.option("--constant/--no-constant", "include_constant", default=None)
@click.option("--lags", default=20, show_default=True)
@click.option("--horizon", default=10, show_default=True)
@click.option("--alpha", default=0.05, show_default=True)
@click.option("--format", "formats", multiple=True, type=click.Choice(["text", "json", "svg"]),
              default=("text", "json"), show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for report.json / report.txt / *.svg.")
@click.pass_obj
def report_cmd(obj, input_path, orders, use_auto, max_p, max_d, max_q, min_d, criterion,
               include_constant, lags, horizon, alpha, formats, seed, out_dir):
    """Run the full analysis pipeline and emit a report bundle."""
    if bool(orders) == use_auto:
        raise click.UsageError("give either --order (one or more) or --auto, not both/neither")
    order_specs = [_parse_order(o) for o in orders] if orders else None
    req = sc.ReportRequest(
        csv_text=Path(input_path).read_text(encoding="utf-8"),
        year_column=obj["year_col"],
        value_column=obj["value_col"],
        orders=order_specs,
        auto=sc.AutoRequestGrid(max_p=max_p, max_d=max_d, max_q=max_q,
                                criterion=criterion, min_d=min_d) if use_auto else None,
        include_constant=include_constant,
        lags=lags,
        horizon=horizon,
        alpha=alpha,
        formats=list(dict.fromkeys(formats)),
        seed=seed,
    )
    out = _dispatch(obj, "report", req)
    if out_dir:
        dest = Path(out_dir)
        dest.mkdir(parents=True, exist_ok=True)
        (dest / "report.json").write_text(out.json_text, encoding="utf-8")
        if out.text:
            (dest / "report.txt").write_text(out.text, encoding="utf-8")
        for name, svg in out.figures.items():
            (dest / f"{name}.svg").write_text(svg, encoding="utf-8")
        click.echo(f"wrote report bundle to {dest}", err=True)
    if "text" in formats and out.text:
        click.echo(out.text)
    elif "json" in formats and not out_dir:
        click.echo(out.json_text)


if __name__ == "__main__":
    main(prog_name="climarma")
