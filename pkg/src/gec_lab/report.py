"""Multi-run aggregation and paper-style tables."""
from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from gec_lab.errors import ValidationError
from gec_lab.m2_scorer import precision_recall_f

METRIC_ORDER = ("P", "R", "F0.5", "GLEU")


@dataclass
class RunSummary:
    run_id: str
    metrics: dict[str, float]
    per_type: dict[str, dict[str, float]] | None = None
    # populated by aggregate_runs
    deviation: dict[str, float] = field(default_factory=dict)
    per_type_runs: dict[str, int] = field(default_factory=dict)
    n_runs: int = 1
    counts: dict[str, int] | None = None


def f_key(beta: float) -> str:
    return f"F{beta:g}"


def load_run(path: str | Path) -> RunSummary:
    """Read one run report in the JSON schema written by ``--json``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return run_from_json(data, default_id=Path(path).stem)


def run_from_json(data: dict, default_id: str = "") -> RunSummary:
    run_id = str(data.get("run_id") or default_id)
    metrics: dict[str, float] = {}
    counts = None
    if data.get("metric", "m2") == "gleu":
        if "score" not in data:
            raise ValidationError(f"run {run_id!r}: gleu report without 'score'")
        metrics["GLEU"] = float(data["score"])
    else:
        try:
            metrics["P"] = float(data["precision"])
            metrics["R"] = float(data["recall"])
            metrics[f_key(float(data.get("beta", 0.5)))] = float(data["f_beta"])
        except KeyError as exc:
            raise ValidationError(f"run {run_id!r}: missing field {exc.args[0]!r}") from None
        if all(k in data for k in ("tp", "fp", "fn")):
            counts = {k: int(data[k]) for k in ("tp", "fp", "fn")}
    per_type = None
    if data.get("per_type"):
        per_type = {t: {"P": float(v["precision"]), "R": float(v["recall"]), "F": float(v["f_beta"])}
                    for t, v in data["per_type"].items()}
    return RunSummary(run_id, metrics, per_type, counts=counts)


def aggregate_runs(runs: Sequence[RunSummary], pooled: bool = False, beta: float = 0.5) -> RunSummary:
    """Mean and sample standard deviation per metric.

    By default each score is averaged on its own, so the mean F is generally
    not F(mean P, mean R). ``pooled=True`` instead sums tp/fp/fn over runs
    and recomputes P, R and F from the totals.
    """
    if not runs:
        raise ValidationError("no runs to aggregate")
    keys = set(runs[0].metrics)
    for r in runs[1:]:
        if set(r.metrics) != keys:
            raise ValidationError(
                f"run {r.run_id!r} has metrics {sorted(r.metrics)}, expected {sorted(keys)}")
    metrics, deviation = {}, {}
    for k in _ordered(keys):
        values = [r.metrics[k] for r in runs]
        metrics[k] = statistics.fmean(values)
        deviation[k] = statistics.stdev(values) if len(values) > 1 else 0.0

    if pooled:
        if any(r.counts is None for r in runs):
            raise ValidationError("pooled aggregation needs tp/fp/fn in every run")
        tp = sum(r.counts["tp"] for r in runs)
        fp = sum(r.counts["fp"] for r in runs)
        fn = sum(r.counts["fn"] for r in runs)
        p, rec, f = precision_recall_f(tp, fp, fn, beta)
        metrics.update({"P": p, "R": rec, f_key(beta): f})

    per_type = None
    per_type_runs: dict[str, int] = {}
    if any(r.per_type for r in runs):
        per_type = {}
        names = sorted({t for r in runs for t in (r.per_type or {})})
        for t in names:
            having = [r.per_type[t] for r in runs if r.per_type and t in r.per_type]
            per_type_runs[t] = len(having)
            per_type[t] = {m: statistics.fmean(h[m] for h in having) for m in having[0]}
    return RunSummary("mean", metrics, per_type, deviation, per_type_runs, len(runs))


def _ordered(keys) -> list[str]:
    return sorted(keys, key=lambda k: (METRIC_ORDER.index(k) if k in METRIC_ORDER else len(METRIC_ORDER), k))


def render_summary(runs: Sequence[RunSummary], summary: RunSummary, markdown: bool = False,
                   decimals: int = 1) -> str:
    """Per-run rows followed by the mean (and deviation) row; values in percent."""
    cols = _ordered(summary.metrics)
    rows = [["run", *cols]]
    for r in runs:
        rows.append([r.run_id, *(f"{100 * r.metrics[c]:.{decimals}f}" for c in cols)])
    rows.append([f"mean (n={summary.n_runs})", *(f"{100 * summary.metrics[c]:.{decimals}f}" for c in cols)])
    rows.append(["std", *(f"{100 * summary.deviation.get(c, 0.0):.{decimals}f}" for c in cols)])
    if markdown:
        lines = ["| " + " | ".join(rows[0]) + " |",
                 "|" + "|".join([":---"] + ["---:"] * len(cols)) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
        return "\n".join(lines) + "\n"
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join([r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]))
    return "\n".join(lines) + "\n"
