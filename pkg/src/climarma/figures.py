"""Static SVG figure rendering for report bundles.

All figures are derived from the JSON document, never the other way around;
report content is identical whether or not figures are rendered.  Matplotlib
is imported lazily so the core pipeline has no hard plotting dependency.
"""

from __future__ import annotations

import io

__all__ = ["render_figures"]


def _mpl():
    import matplotlib

    matplotlib.use("Agg", force=False)
    matplotlib.rcParams["svg.hashsalt"] = "climarma"
    import matplotlib.pyplot as plt

    return plt


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)
    return buf.getvalue()


def _stem(ax, payload: dict, title: str):
    lags = payload["lags"]
    vals = payload["values"]
    thr = payload["threshold"]
    ax.axhspan(-thr, thr, color="0.85", zorder=0)
    ax.vlines(lags, 0, vals, color="tab:blue")
    ax.plot(lags, vals, "o", color="tab:blue", markersize=3)
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_title(title)
    ax.set_xlabel("lag")


def render_figures(doc: dict) -> dict[str, str]:
    """Render the standard figure set from a report document."""
    plt = _mpl()
    figures: dict[str, str] = {}

    s = doc["series"]
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.plot(s["times"], s["values"], color="tab:red", linewidth=1.2)
    ax.set_xlabel("year")
    ax.set_ylabel("anomaly")
    ax.set_title("series")
    fig.tight_layout()
    figures["series"] = _to_svg(fig)

    for name, block in doc.get("correlograms", {}).items():
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
        _stem(axes[0], block["acf"], f"ACF ({name})")
        _stem(axes[1], block["pacf"], f"PACF ({name})")
        fig.tight_layout()
        figures[f"correlogram_{name}"] = _to_svg(fig)

    for diag in doc.get("diagnostics", []):
        label = diag["label"].replace("(", "_").replace(")", "").replace(",", "_")
        fig, axes = plt.subplots(1, 3, figsize=(11, 3.2))
        xs = [p[0] for p in diag["kde_curve"]]
        ys = [p[1] for p in diag["kde_curve"]]
        axes[0].plot(xs, ys, color="tab:orange")
        axes[0].set_title(f"residual density {diag['label']}")
        qx = [p[0] for p in diag["qq_points"]]
        qy = [p[1] for p in diag["qq_points"]]
        axes[1].plot(qx, qy, "o", markersize=3)
        lim = [min(qx + qy), max(qx + qy)]
        axes[1].plot(lim, lim, color="tab:red", linewidth=0.8)
        axes[1].set_title("normal Q-Q")
        _stem(axes[2], diag["residual_acf"], "residual ACF")
        fig.tight_layout()
        figures[f"diagnostics_{label}"] = _to_svg(fig)

    fc = doc.get("forecast")
    if fc:
        fig, ax = plt.subplots(figsize=(8, 3.5))
        ax.plot(s["times"], s["values"], color="tab:gray", linewidth=1.0)
        ax.plot(fc["times"], fc["point"], color="tab:blue")
        ax.fill_between(fc["times"], fc["lower"], fc["upper"], color="tab:blue", alpha=0.25)
        ax.set_title(f"forecast ({fc['model']})")
        ax.set_xlabel("year")
        fig.tight_layout()
        figures["forecast"] = _to_svg(fig)
    return figures
