"""Text tables, CSV and SVG emitted from persisted run results.

All reports average over seeds. A mean involving an undefined value is undefined
and renders as ``n/a``.
"""

import io
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from clinrisk.harness.runner import RunResult
from clinrisk.methods import METHODS
from clinrisk.metrics.record import COUNT_KEYS, RATE_KEYS
from clinrisk.metrics.risk import risk_sweep

logger = logging.getLogger(__name__)

NA = "n/a"
BEST_MARK = "*"
COLLAPSE_NOTE = "risk fell while collapse flagged"
DEFAULT_RATIOS = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
TABLE_RATES = ("sensitivity", "specificity", "bac", "auc", "f1")
_METHOD_ORDER = {name: i for i, name in enumerate(METHODS)}


class ReportError(ValueError):
    """Raised when results cannot be combined into the requested report."""


def _fmt(value, digits: int = 3) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return NA
    return f"{value:.{digits}f}"


def _completed(results: Sequence[RunResult]) -> list[RunResult]:
    completed = [r for r in results if r.ok]
    if len(completed) < len(results):
        logger.warning(f"Skipping {len(results) - len(completed)} failed runs")
    if not completed:
        raise ReportError("No completed runs to report")
    return completed


def _check_same_dataset(results: Sequence[RunResult]) -> None:
    fingerprints = sorted({r.dataset_fingerprint for r in results})
    if len(fingerprints) > 1:
        raise ReportError(f"Results mix datasets {', '.join(fingerprints)}")


def scenario_names(results: Sequence[RunResult]) -> list[str]:
    """Risk scenario names present in the results, in first-seen order."""
    names: list[str] = []
    for r in results:
        for name in r.metrics.risks:
            if name not in names:
                names.append(name)
    return names


def _strict_mean(series: pd.Series) -> float:
    return series.mean(skipna=False)


def summarize(results: Sequence[RunResult]) -> pd.DataFrame:
    """Seed-averaged metrics, one row per (method, cost-sensitive, noise rate) cell.

    Columns are ``label``, ``method``, ``cs``, ``noise``, ``n_seeds``, every rate,
    risk and count key of the metrics record, ``ppr`` and ``collapse`` (any seed
    collapsed). Rows are ordered by method, then CS, then noise rate.
    """
    completed = _completed(results)
    rows = []
    for r in completed:
        rows.append(
            dict(
                label=r.label,
                method=r.method,
                cs=r.cost_sensitive,
                noise=r.noise_rate,
                seed=r.config["seed"],
                collapse=bool(r.collapse),
                **r.metrics.to_dict(),
            )
        )
    frame = pd.DataFrame(rows)
    numeric = [*RATE_KEYS, *scenario_names(completed), "ppr", *COUNT_KEYS]
    for column in numeric:
        if column not in frame:
            frame[column] = np.nan
        frame[column] = frame[column].astype(float)

    summary = (
        frame.groupby(["label", "noise"], sort=False)
        .agg(
            method=("method", "first"),
            cs=("cs", "first"),
            n_seeds=("seed", "count"),
            collapse=("collapse", "any"),
            **{column: (column, _strict_mean) for column in numeric},
        )
        .reset_index()
    )
    summary["order"] = summary["method"].map(lambda m: _METHOD_ORDER.get(m, len(METHODS)))
    return (
        summary.sort_values(["order", "method", "cs", "noise"], kind="stable")
        .drop(columns="order")
        .reset_index(drop=True)
    )


def _labels(summary: pd.DataFrame) -> list[str]:
    return list(dict.fromkeys(summary["label"]))


def _best(values: pd.Series, maximize: bool) -> list[str]:
    defined = values.dropna()
    if defined.empty:
        return []
    target = defined.max() if maximize else defined.min()
    return [label for label, v in defined.items() if np.isclose(v, target, rtol=0, atol=1e-12)]


def emit_method_table(results: Sequence[RunResult]) -> str:
    """Method x noise table of seed-averaged test metrics.

    Every cell reads ``sens / spec / bac / auc / f1 | <risk scenarios>`` at three
    decimals. Within each noise rate a ``*`` follows the best value of every metric
    (highest rate, lowest risk), and a footer repeats the best labels; ties are all
    marked.

    Raises:
        ReportError: No completed runs, or runs on different datasets.
    """
    completed = _completed(results)
    _check_same_dataset(completed)
    summary = summarize(completed)
    risks = scenario_names(completed)
    noises = sorted(summary["noise"].unique())
    directions = [*((k, True) for k in TABLE_RATES), *((k, False) for k in risks)]

    best = {}
    for noise in noises:
        at_noise = summary[summary["noise"] == noise].set_index("label")
        for key, maximize in directions:
            best[noise, key] = _best(at_noise[key], maximize)

    def value(row, key) -> str:
        mark = BEST_MARK if row["label"] in best[row["noise"], key] else ""
        return _fmt(row[key]) + mark

    def cell(row) -> str:
        rates = " / ".join(value(row, k) for k in TABLE_RATES)
        return f"{rates} | " + " / ".join(value(row, k) for k in risks)

    table = pd.DataFrame(index=pd.Index(_labels(summary), name="method"))
    for noise in noises:
        table[f"eta={noise:g}"] = NA
    for _, row in summary.iterrows():
        table.loc[row["label"], f"eta={row['noise']:g}"] = cell(row)

    lines = [
        f"Cells: {' / '.join(TABLE_RATES)} | {' / '.join(risks)} "
        f"(mean over seeds, {BEST_MARK} best per noise rate)",
        table.to_string(),
        "",
        "Best values per column:",
    ]
    for noise in noises:
        at_noise = summary[summary["noise"] == noise].set_index("label")
        for key, _ in directions:
            labels = best[noise, key]
            if labels:
                shown = _fmt(at_noise.loc[labels[0], key])
                lines.append(f"  eta={noise:g} {key}: {shown} ({', '.join(labels)})")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TradeoffData:
    """CSV rows of the BAC/risk trade-off and, when any risk is defined, an SVG."""

    csv: str
    svg: Optional[str]
    n_points: int


def _scatter_svg(points: pd.DataFrame, scenario: str) -> str:
    with matplotlib.rc_context({"svg.hashsalt": "clinrisk", "svg.fonttype": "none"}):
        fig = Figure(figsize=(6.4, 4.8))
        ax = fig.add_subplot()
        for i, (_, point) in enumerate(points.iterrows()):
            ax.plot(
                [point["risk"]],
                [point["bac"]],
                marker="s" if point["cs"] else "o",
                color="tab:red" if point["collapse_flag"] else "tab:blue",
                linestyle="none",
                gid=f"marker-{i}",
            )
            ax.annotate(
                f"{point['label']} ({point['noise']:g})",
                (point["risk"], point["bac"]),
                textcoords="offset points",
                xytext=(4, 4),
                fontsize=7,
            )
        ax.set_xlabel(f"{scenario} (lower is better)")
        ax.set_ylabel("Balanced accuracy (higher is better)")
        ax.text(0.02, 0.98, "ideal", transform=ax.transAxes, va="top", fontsize=8)
        ax.grid(alpha=0.3)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None}, bbox_inches="tight")
    return buffer.getvalue()


def emit_tradeoff_data(results: Sequence[RunResult], scenario: str = "risk_II") -> TradeoffData:
    """BAC against clinical risk, one point per (method, CS, noise rate) cell.

    The SVG puts risk on the horizontal and BAC on the vertical axis, so the ideal
    region is the top-left corner. It is omitted, with a warning, when the scenario's
    risk is undefined for every cell.

    Raises:
        ReportError: No completed runs, or runs on different datasets.
    """
    completed = _completed(results)
    _check_same_dataset(completed)
    summary = summarize(completed)
    if scenario not in summary:
        summary[scenario] = np.nan
    rows = pd.DataFrame(
        {
            "method": summary["method"],
            "cs": summary["cs"],
            "noise": summary["noise"],
            "bac": summary["bac"],
            "risk": summary[scenario],
            "collapse_flag": summary["collapse"],
        }
    )
    csv = rows.to_csv(index=False, float_format="%.6f", lineterminator="\n")
    points = rows.assign(label=summary["label"]).dropna(subset=["bac", "risk"])
    if points.empty:
        logger.warning(f"No defined {scenario} values; SVG omitted")
        return TradeoffData(csv=csv, svg=None, n_points=0)
    return TradeoffData(csv=csv, svg=_scatter_svg(points, scenario), n_points=len(points))


@dataclass(frozen=True)
class NoiseImpactReport:
    """Per-noise error decomposition of one method."""

    text: str
    csv: str
    annotations: tuple[str, ...]


def emit_noise_impact_report(
    results: Sequence[RunResult], scenario: str = "risk_II"
) -> NoiseImpactReport:
    """False negatives, false positives, risks and collapse per noise rate.

    Consecutive noise rates whose ``scenario`` risk falls while the higher rate is
    flagged as collapsed are annotated, since a collapse onto the positive class
    lowers a false-negative-heavy risk without improving the classifier.

    Raises:
        ReportError: Several methods, fewer than two noise rates, or runs on different
            datasets.
    """
    completed = _completed(results)
    _check_same_dataset(completed)
    summary = summarize(completed)
    labels = _labels(summary)
    if len(labels) != 1:
        raise ReportError(f"Noise impact needs a single method, got {', '.join(labels)}")
    if len(summary) < 2:
        raise ReportError("Noise impact needs results at two or more noise rates")
    risks = scenario_names(completed)
    columns = ["noise", "fn", "fp", *risks, "ppr", "collapse"]
    table = summary[columns].reset_index(drop=True)

    annotations = []
    if scenario in table:
        for (_, low), (_, high) in zip(table.iloc[:-1].iterrows(), table.iloc[1:].iterrows()):
            if high[scenario] < low[scenario] and high["collapse"]:
                annotations.append(
                    f"eta={low['noise']:g} -> eta={high['noise']:g}: {scenario} "
                    f"{low[scenario]:.4f} -> {high[scenario]:.4f}; {COLLAPSE_NOTE} "
                    f"(positive prediction rate {high['ppr']:.3f})"
                )

    shown = table.copy()
    for key in ("fn", "fp"):
        shown[key] = shown[key].map(lambda v: _fmt(v, 1))
    for key in (*risks, "ppr"):
        shown[key] = shown[key].map(lambda v: _fmt(v, 4))
    shown["noise"] = shown["noise"].map(lambda v: f"{v:g}")
    lines = [f"Noise impact for {labels[0]}", shown.to_string(index=False)]
    lines.extend(annotations)
    csv = table.to_csv(index=False, float_format="%.6f", lineterminator="\n")
    return NoiseImpactReport(text="\n".join(lines) + "\n", csv=csv, annotations=tuple(annotations))


def emit_sweep_report(
    results: Sequence[RunResult],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    c_fp: float = 1.0,
) -> str:
    """Mean risk per cell across cost ratios ``lambda = c_fn / c_fp``.

    Raises:
        ReportError: No completed runs, or runs on different datasets.
    """
    completed = _completed(results)
    _check_same_dataset(completed)
    rows = []
    for r in completed:
        swept = risk_sweep(r.metrics.counts, ratios, c_fp)
        rows.append(
            dict(
                method=r.method,
                label=r.label,
                cs=r.cost_sensitive,
                noise=r.noise_rate,
                **{f"lambda={ratio:g}": value for ratio, value in swept},
            )
        )
    frame = pd.DataFrame(rows)
    frame["order"] = frame["method"].map(lambda m: _METHOD_ORDER.get(m, len(METHODS)))
    columns = [f"lambda={ratio:g}" for ratio in ratios]
    table = (
        frame.groupby(["order", "method", "cs", "label", "noise"])[columns]
        .mean()
        .reset_index()
        .drop(columns=["order", "method", "cs"])
    )
    table["noise"] = table["noise"].map(lambda v: f"{v:g}")
    for column in columns:
        table[column] = table[column].map(lambda v: _fmt(v, 4))
    return f"Mean risk by cost ratio (c_fp = {c_fp:g})\n" + table.to_string(index=False) + "\n"


def emit_risk_report(results: Sequence[RunResult], scenario: str = "risk_II") -> str:
    """Mean risks per method and noise rate; ``*`` marks the lowest ``scenario`` risk.

    Raises:
        ReportError: No completed runs, or runs on different datasets.
    """
    completed = _completed(results)
    _check_same_dataset(completed)
    summary = summarize(completed)
    risks = scenario_names(completed)
    noises = sorted(summary["noise"].unique())
    table = pd.DataFrame(index=pd.Index(_labels(summary), name="method"))
    lowest = []
    for noise in noises:
        at_noise = summary[summary["noise"] == noise].set_index("label")
        best = _best(at_noise[scenario], maximize=False) if scenario in at_noise else []
        column = []
        for label in table.index:
            if label not in at_noise.index:
                column.append(NA)
                continue
            mark = BEST_MARK if label in best else ""
            column.append(" / ".join(_fmt(at_noise.loc[label, k], 4) for k in risks) + mark)
        table[f"eta={noise:g}"] = column
        if best:
            lowest.append(f"  eta={noise:g}: {', '.join(best)}")
    lines = [f"Cells: {' / '.join(risks)} (mean over seeds)", table.to_string()]
    if lowest:
        lines += ["", f"Lowest {scenario}:", *lowest]
    return "\n".join(lines) + "\n"


__doc_title__ = "Reports"
__all__ = [
    "ReportError",
    "TradeoffData",
    "NoiseImpactReport",
    "summarize",
    "scenario_names",
    "emit_method_table",
    "emit_tradeoff_data",
    "emit_noise_impact_report",
    "emit_sweep_report",
    "emit_risk_report",
]
