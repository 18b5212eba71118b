"""Report rendering: aligned text, delimited values, and figure files.

The evaluation layer stays pure; everything presentational lives here.
Figures are written with the non-interactive matplotlib backend so the CLI
works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .evaluation import AblationGrid, EvalReport

_MACRO_NOTE = "macro averages run over classes present in gold or predictions"


def render_text_report(report: EvalReport) -> str:
    """Aligned per-class table in the style of a classification report."""
    width = max(len(c) for c in (*report.classes, "macro-avg."))
    lines = [
        f"task: {report.task}  instances: {report.total}  ({_MACRO_NOTE})",
        f"{'class':<{width}}  {'prec.':>6}  {'recall':>6}  {'F1':>6}  {'support':>7}",
    ]
    for cls in report.classes:
        m = report.per_class[cls]
        lines.append(
            f"{cls:<{width}}  {100 * m.precision:>6.1f}  {100 * m.recall:>6.1f}  "
            f"{100 * m.f1:>6.1f}  {m.support:>7}"
        )
    lines.append(
        f"{'macro-avg.':<{width}}  {100 * report.macro_precision:>6.1f}  "
        f"{100 * report.macro_recall:>6.1f}  {100 * report.macro_f1:>6.1f}  "
        f"{report.total:>7}"
    )
    lines.append(f"accuracy: {100 * report.accuracy:.1f}")
    return "\n".join(lines) + "\n"


def render_delimited_report(report: EvalReport, delimiter: str = "\t") -> str:
    """Machine-readable per-class metrics plus macro/accuracy rows."""
    lines = [delimiter.join(["class", "precision", "recall", "f1", "support"])]
    for cls in report.classes:
        m = report.per_class[cls]
        lines.append(
            delimiter.join(
                [cls, f"{m.precision:.6f}", f"{m.recall:.6f}", f"{m.f1:.6f}", str(m.support)]
            )
        )
    lines.append(
        delimiter.join(
            [
                "macro-avg.",
                f"{report.macro_precision:.6f}",
                f"{report.macro_recall:.6f}",
                f"{report.macro_f1:.6f}",
                str(report.total),
            ]
        )
    )
    lines.append(delimiter.join(["accuracy", f"{report.accuracy:.6f}", "", "", str(report.total)]))
    return "\n".join(lines) + "\n"


def render_confusion_text(report: EvalReport) -> str:
    """Gold-by-predicted count matrix as a delimited block."""
    lines = ["gold\\pred\t" + "\t".join(report.classes)]
    for gold in report.classes:
        row = [str(report.confusion.get((gold, pred), 0)) for pred in report.classes]
        lines.append(gold + "\t" + "\t".join(row))
    return "\n".join(lines) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_confusion_figure(report: EvalReport, path: str | Path) -> Path:
    """Heatmap of the confusion matrix with per-cell counts."""
    import numpy as np

    plt = _pyplot()
    classes = report.classes
    matrix = np.array(
        [[report.confusion.get((g, p), 0) for p in classes] for g in classes], dtype=float
    )
    side = max(4.0, 0.5 * len(classes) + 2.0)
    fig, ax = plt.subplots(figsize=(side, side))
    im = ax.imshow(matrix, cmap="Blues")
    ax.set_xticks(range(len(classes)), classes, rotation=90)
    ax.set_yticks(range(len(classes)), classes)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    ax.set_title(f"Confusion matrix ({report.task})")
    threshold = matrix.max() / 2 if matrix.max() else 0.5
    for i in range(len(classes)):
        for j in range(len(classes)):
            count = int(matrix[i, j])
            if count:
                color = "white" if matrix[i, j] > threshold else "black"
                ax.text(j, i, str(count), ha="center", va="center", color=color, fontsize=8)
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_f1_figure(report: EvalReport, path: str | Path) -> Path:
    """Horizontal bar chart of per-class F1 with the macro average marked."""
    plt = _pyplot()
    classes = list(report.classes)
    values = [100 * report.per_class[c].f1 for c in classes]
    fig, ax = plt.subplots(figsize=(6, max(3.0, 0.35 * len(classes) + 1.5)))
    ax.barh(range(len(classes)), values, color="#4878b0")
    ax.set_yticks(range(len(classes)), classes)
    ax.invert_yaxis()
    ax.set_xlim(0, 100)
    ax.set_xlabel("F1 (%)")
    ax.set_title(f"Per-class F1 ({report.task})")
    ax.axvline(100 * report.macro_f1, color="#d1605e", linestyle="--", linewidth=1.2,
               label=f"macro {100 * report.macro_f1:.1f}")
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_ablation_figure(grid: AblationGrid, path: str | Path) -> Path:
    """Grouped bar chart: one bar group per configuration, one color per task."""
    import numpy as np

    plt = _pyplot()
    labels = [row.label for row in grid.rows]
    x = np.arange(len(labels), dtype=float)
    width = 0.8 / max(1, len(grid.tasks))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(labels) + 2.0), 4.0))
    for k, task in enumerate(grid.tasks):
        values = [100 * grid.cells[(label, task)] for label in labels]
        ax.bar(x + k * width, values, width, label=task)
    ax.set_xticks(x + 0.4 - width / 2, labels, rotation=30, ha="right")
    ax.set_ylim(0, 100)
    ax.set_ylabel("macro F1 (%)")
    ax.set_title("Ablation grid")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_lines(path: str | Path, lines: Iterable[str]) -> None:
    Path(path).write_text("".join(lines), encoding="utf-8")
