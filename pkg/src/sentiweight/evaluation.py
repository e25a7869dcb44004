"""Cross-validated evaluation with and without evolved feature weights, and
report tables in the layout of the published result tables."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .classifiers import ALGORITHMS, HyperParams, train
from .crossval import Metrics, compute_metrics, cross_validate, fold_indices, resubstitution_accuracy
from .dataset import Dataset
from .optimizer import ESConfig, evolve

log = logging.getLogger(__name__)

REPORT_FORMAT_VERSION = 1
DISPLAY_NAMES = {
    "svm": "SVM",
    "naive-bayes": "Naive Bayes",
    "decision-tree": "Decision Tree",
    "linear-regression": "Linear Regression",
    "logistic-regression": "Logistic Regression",
}
REPORT_FORMATS = ("text", "csv", "json")


def evaluate_with_optimization(data: Dataset, algorithm: str, hyper: HyperParams | None = None,
                               k: int = 10, seed: int = 0, es_config: ESConfig | None = None,
                               paper_mode: bool = False, jobs: int = 1) -> Metrics:
    """Cross-validated metrics using weights found by the evolution strategy.

    Default (honest) mode evolves a weight vector inside every outer training
    part and scores the held-out part with it. ``paper_mode`` evolves once on
    the whole dataset and then cross-validates with those weights, so the
    held-out rows have already influenced the weights. In paper mode the
    resubstitution accuracy of the evolved weights is stored in
    ``extras["resubstitution_accuracy"]``.
    """
    es_config = es_config or ESConfig(seed=seed)
    extras: dict = {"mode": "paper" if paper_mode else "honest"}
    if paper_mode:
        res = evolve(data, algorithm, hyper, es_config, jobs=jobs)
        metrics = cross_validate(data, algorithm, hyper, k, seed, weights=res.weights)
        extras["weights"] = [res.weights.tolist()]
        extras["es_fitness"] = res.fitness
        extras["resubstitution_accuracy"] = resubstitution_accuracy(
            data, algorithm, hyper, seed=seed, weights=res.weights)
        log.info("%s paper-mode: resubstitution %.4f vs %d-fold %.4f", algorithm,
                 extras["resubstitution_accuracy"], k, metrics.accuracy)
        metrics.extras = extras
        return metrics

    folds = fold_indices(data, k, seed)
    pred = np.empty(len(data), dtype=np.int64)
    fold_weights = []
    for f in range(k):
        test = np.flatnonzero(folds == f)
        if len(test) == 0:
            continue
        train_part = data.subset(np.flatnonzero(folds != f))
        res = evolve(train_part, algorithm, hyper, replace(es_config, seed=es_config.seed + f), jobs=jobs)
        fold_weights.append(res.weights.tolist())
        model = train(algorithm, train_part, hyper, seed=seed + f, weights=res.weights)
        pred[test] = model.predict_many(data.X[test])
    metrics = compute_metrics(data.y, pred)
    extras["weights"] = fold_weights
    metrics.extras = extras
    return metrics


@dataclass
class EvalReport:
    level: str
    rows: dict[str, dict[str, Metrics | None]] = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "level": self.level,
            "config": self.config,
            "rows": {
                algo: {cond: (m.to_dict() if m is not None else None) for cond, m in conds.items()}
                for algo, conds in self.rows.items()
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        rows = {
            algo: {cond: (Metrics.from_dict(m) if m is not None else None) for cond, m in conds.items()}
            for algo, conds in d["rows"].items()
        }
        return cls(d["level"], rows, d.get("config", {}))


def run_grid(data: Dataset, algorithms=ALGORITHMS, hyper: HyperParams | None = None, k: int = 10,
             seed: int = 0, weights: np.ndarray | None = None, optimize: bool = False,
             es_config: ESConfig | None = None, paper_mode: bool = False, jobs: int = 1,
             config: dict | None = None) -> EvalReport:
    """One report row per algorithm: plain CV and, if requested, optimized CV.

    Fixed ``weights`` (e.g. read from a file) fill the "with" column when
    ``optimize`` is off.
    """
    report = EvalReport(data.level, {}, dict(config or {}))
    for algo in algorithms:
        without = cross_validate(data, algo, hyper, k, seed)
        with_ = None
        if optimize:
            with_ = evaluate_with_optimization(data, algo, hyper, k, seed, es_config, paper_mode, jobs)
        elif weights is not None:
            with_ = cross_validate(data, algo, hyper, k, seed, weights=weights)
        report.rows[algo] = {"without": without, "with": with_}
    return report


def percent_cell(x: float | None) -> str:
    """Percentage rounded half up to an integer, as in the published tables."""
    if x is None:
        return "-"
    return str(int((Decimal(repr(x)) * 100).quantize(Decimal(1), rounding=ROUND_HALF_UP)))


_CSV_HEADER = ("level", "classifier", "accuracy_without", "precision_without",
               "accuracy_with", "precision_with", "mode")


def _rows(reports):
    for rep in reports:
        for algo, conds in rep.rows.items():
            wo, wi = conds.get("without"), conds.get("with")
            yield rep, algo, wo, wi


def emit_report(reports: list[EvalReport], fmt: str = "text") -> str:
    """Serialize reports.

    Columns are classifier, accuracy and precision without optimization,
    then with. Precision is the macro average of the two per-class values.
    """
    if fmt == "json":
        return json.dumps({"format_version": REPORT_FORMAT_VERSION,
                           "reports": [r.to_dict() for r in reports]},
                          indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_CSV_HEADER)
        for rep, algo, wo, wi in _rows(reports):
            w.writerow([
                rep.level, algo,
                repr(wo.accuracy) if wo else "", repr(wo.precision_macro) if wo else "",
                repr(wi.accuracy) if wi else "", repr(wi.precision_macro) if wi else "",
                wi.extras.get("mode", "fixed-weights") if wi else "",
            ])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")

    header = f"{'classifier':<22}{'Without Optimization':>24}{'With Optimization':>24}\n" \
             f"{'':<22}{'Accuracy':>12}{'Precision':>12}{'Accuracy':>12}{'Precision':>12}\n"
    if not reports:
        return header
    out = []
    for rep in reports:
        modes = {c["with"].extras.get("mode") for c in rep.rows.values() if c.get("with")}
        title = f"{rep.level.capitalize()} Level"
        if "paper" in modes:
            title += " [paper-mode: weights evolved on the full dataset]"
        out.append(title + "\n" + header)
        for _, algo, wo, wi in _rows([rep]):
            out.append(
                f"{DISPLAY_NAMES.get(algo, algo):<22}"
                f"{percent_cell(wo.accuracy if wo else None):>12}"
                f"{percent_cell(wo.precision_macro if wo else None):>12}"
                f"{percent_cell(wi.accuracy if wi else None):>12}"
                f"{percent_cell(wi.precision_macro if wi else None):>12}\n"
            )
        out.append("\n")
    return "".join(out)


def read_reports(text: str) -> list[EvalReport]:
    d = json.loads(text)
    if d.get("format_version") != REPORT_FORMAT_VERSION:
        raise ValueError(f"unsupported report format version {d.get('format_version')!r}")
    return [EvalReport.from_dict(r) for r in d["reports"]]
