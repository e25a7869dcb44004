"""Figures written next to the delimited report output."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evaluation import DISPLAY_NAMES, EvalReport  # noqa: E402
from .optimizer import GenerationRecord  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "svg.hashsalt": "sentiweight",
}
# fixed metadata keeps repeated renders byte-identical
_META = {"png": {"Software": None}, "svg": {"Date": None}, "pdf": {"CreationDate": None}}


def _save(fig, path) -> None:
    ext = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_META.get(ext), bbox_inches="tight")
    plt.close(fig)


def plot_report(report: EvalReport, path) -> None:
    """Grouped bars: accuracy and precision per classifier, without vs with weights."""
    algos = list(report.rows)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 2, figsize=(7.5, 3.0), sharey=True)
        x = np.arange(len(algos))
        for ax, (attr, title) in zip(axes, (("accuracy", "Accuracy"), ("precision_macro", "Precision"))):
            for off, cond, color in ((-0.2, "without", "0.6"), (0.2, "with", "C0")):
                vals = [getattr(report.rows[a][cond], attr) * 100 if report.rows[a].get(cond) else np.nan
                        for a in algos]
                ax.bar(x + off, vals, width=0.4, color=color, label=f"{cond} optimization")
            ax.set_xticks(x)
            ax.set_xticklabels([DISPLAY_NAMES.get(a, a) for a in algos], rotation=30, ha="right")
            ax.set_title(f"{title} ({report.level} level)")
            ax.set_ylim(0, 100)
        axes[0].set_ylabel("%")
        handles, labels = axes[0].get_legend_handles_labels()
        fig.legend(handles, labels, loc="upper center", ncol=2, frameon=False, bbox_to_anchor=(0.5, 1.08))
        _save(fig, path)


def plot_trace(trace: list[GenerationRecord], path) -> None:
    """Best/mean population fitness and the step size over generations."""
    t = [r.t for r in trace]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ax.plot(t, [r.best for r in trace], color="C0", label="best fitness")
        ax.plot(t, [r.mean for r in trace], color="C0", ls="--", lw=0.8, label="mean fitness")
        ax.set_xlabel("generation")
        ax.set_ylabel("fitness")
        ax2 = ax.twinx()
        ax2.spines["right"].set_visible(True)
        ax2.semilogy(t, [r.sigma for r in trace], color="C3", lw=0.8, label="step size")
        ax2.set_ylabel("step size", color="C3")
        lines = ax.get_lines() + ax2.get_lines()
        ax.legend(lines, [ln.get_label() for ln in lines], loc="lower right", frameon=False)
        _save(fig, path)


def plot_sweep(table: list[tuple[float, float]], path, rule: str = "") -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.0))
        ax.plot([t for t, _ in table], [a * 100 for _, a in table], marker="o", ms=3)
        ax.set_xlabel("threshold")
        ax.set_ylabel("accuracy (%)")
        if rule:
            ax.set_title(rule)
        _save(fig, path)
