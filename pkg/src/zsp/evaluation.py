"""Dataset loading, metric computation, and the ablation runner.

Datasets are line-delimited JSON records with fields id, text, source,
target and optional gold labels root / quad / binary. Quad and binary gold
labels are derived from the root when absent. Reports carry per-class
precision/recall/F1, unweighted macro averages, accuracy, and the full
confusion matrix for one task granularity (binary, quad, or root).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence, TextIO

from . import ontology
from .engine import ClassifierConfig, EventInstance, Mode, Prediction, classify
from .errors import DatasetError, DuplicateId, IdMismatch, MissingField, UnknownLabel
from .hypotheses import HypothesisTable
from .ontology import BinaryClass, Quadcode, Rootcode
from .scorer import Scorer

TASKS = ("binary", "quad", "root")

_REQUIRED_FIELDS = ("id", "text", "source", "target")


@dataclass(frozen=True)
class Dataset:
    """Named list of instances plus the task granularities their gold labels support."""

    name: str
    instances: tuple[EventInstance, ...]
    tasks: frozenset[str]

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    def require_task(self, task: str) -> None:
        if task not in TASKS:
            raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")
        if task not in self.tasks:
            raise MissingField(
                f"dataset {self.name!r} has no gold labels for task {task!r} "
                f"(covered: {sorted(self.tasks) or 'none'})"
            )


def _parse_record(record: dict, line_num: int) -> EventInstance:
    for name in _REQUIRED_FIELDS:
        value = record.get(name)
        if not isinstance(value, str) or not value.strip():
            raise MissingField(f"record is missing field {name!r}", row=line_num)
    root = quad = binary = None
    if record.get("root") not in (None, ""):
        root = ontology.normalize_alias(str(record["root"]))
    if record.get("quad") not in (None, ""):
        quad = ontology.parse_quadcode(str(record["quad"]))
    if record.get("binary") not in (None, ""):
        binary = ontology.parse_binary(str(record["binary"]))
    # Fill the coarser labels from the finer ones and reject contradictions.
    if root is not None:
        base = ontology.root_base_quad(root)
        if quad is not None and quad != base:
            raise UnknownLabel(
                f"quad {quad.display} contradicts root {root.value} "
                f"(base {base.display})"
            )
        quad = base
    if quad is not None:
        projected = ontology.quad_to_binary(quad)
        if binary is not None and binary != projected:
            raise UnknownLabel(
                f"binary {binary.value} contradicts quad {quad.display}"
            )
        binary = projected
    return EventInstance(
        id=str(record["id"]),
        text=record["text"],
        source=record["source"],
        target=record["target"],
        gold_root=root,
        gold_quad=quad,
        gold_binary=binary,
    )


def load_dataset(source: str | TextIO, name: str = "dataset") -> Dataset:
    """Load a line-delimited JSON dataset, validating ids and labels."""
    if isinstance(source, str):
        source = io.StringIO(source)
    instances: list[EventInstance] = []
    seen: set[str] = set()
    for line_num, line in enumerate(source, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"invalid JSON: {exc}", row=line_num) from exc
        if not isinstance(record, dict):
            raise DatasetError("record must be a JSON object", row=line_num)
        instance = _parse_record(record, line_num)
        if instance.id in seen:
            raise DuplicateId(f"duplicate instance id {instance.id!r}", row=line_num)
        seen.add(instance.id)
        instances.append(instance)
    tasks = set()
    if instances:
        if all(i.gold_root is not None for i in instances):
            tasks.add("root")
        if all(i.gold_quad is not None for i in instances):
            tasks.add("quad")
        if all(i.gold_binary is not None for i in instances):
            tasks.add("binary")
    return Dataset(name=name, instances=tuple(instances), tasks=frozenset(tasks))


def load_dataset_path(path: str | Path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return load_dataset(fh, name=Path(path).name)


# --- metrics -----------------------------------------------------------------

def _task_universe(task: str) -> list[str]:
    if task == "root":
        return [r.value for r in Rootcode]
    if task == "quad":
        return [q.display for q in Quadcode]
    return [b.value for b in BinaryClass]


def _gold_label(instance: EventInstance, task: str) -> str:
    if task == "root":
        assert instance.gold_root is not None
        return instance.gold_root.value
    if task == "quad":
        assert instance.gold_quad is not None
        return instance.gold_quad.display
    assert instance.gold_binary is not None
    return instance.gold_binary.value


def predicted_label(prediction: Prediction, task: str) -> str:
    if task == "root":
        return prediction.root.value
    if task == "quad":
        return prediction.quad.display
    return prediction.binary.value


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """Per-class and aggregate metrics for one task granularity.

    Macro averages run over the classes present in the gold labels or the
    predictions; classes absent from both are reported with zero metrics
    but do not enter the macro denominators.
    """

    task: str
    classes: tuple[str, ...]
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    confusion: dict[tuple[str, str], int]
    total: int

    def support(self, cls: str) -> int:
        return self.per_class[cls].support


def evaluate(
    predictions: Mapping[str, Prediction], dataset: Dataset, task: str
) -> EvalReport:
    """Score id-aligned predictions against the dataset's gold labels."""
    dataset.require_task(task)
    wanted = {i.id for i in dataset}
    got = set(predictions)
    if wanted != got:
        missing = sorted(wanted - got)[:3]
        extra = sorted(got - wanted)[:3]
        raise IdMismatch(
            f"predictions do not cover the dataset (missing {missing}, extra {extra})"
        )

    universe = _task_universe(task)
    confusion: dict[tuple[str, str], int] = {}
    for instance in dataset:
        gold = _gold_label(instance, task)
        pred = predicted_label(predictions[instance.id], task)
        confusion[(gold, pred)] = confusion.get((gold, pred), 0) + 1

    present = {g for g, _ in confusion} | {p for _, p in confusion}
    per_class: dict[str, ClassMetrics] = {}
    for cls in universe:
        tp = confusion.get((cls, cls), 0)
        fp = sum(n for (g, p), n in confusion.items() if p == cls and g != cls)
        fn = sum(n for (g, p), n in confusion.items() if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = ClassMetrics(precision, recall, f1, support=tp + fn)

    scored = [cls for cls in universe if cls in present]
    n = len(scored)
    macro_p = sum(per_class[c].precision for c in scored) / n if n else 0.0
    macro_r = sum(per_class[c].recall for c in scored) / n if n else 0.0
    macro_f1 = sum(per_class[c].f1 for c in scored) / n if n else 0.0
    total = len(dataset)
    correct = sum(confusion.get((c, c), 0) for c in universe)
    return EvalReport(
        task=task,
        classes=tuple(universe),
        per_class=per_class,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f1,
        accuracy=correct / total if total else 0.0,
        confusion=confusion,
        total=total,
    )


# --- classification over datasets --------------------------------------------

def classify_dataset(
    dataset: Dataset,
    table: HypothesisTable,
    scorer: Scorer,
    config: ClassifierConfig | None = None,
    jobs: int = 1,
) -> dict[str, Prediction]:
    """Classify every instance, optionally with a worker pool over instances."""
    config = config or ClassifierConfig()
    if jobs <= 1 or len(dataset) <= 1:
        return {i.id: classify(i, table, scorer, config) for i in dataset}
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(lambda i: (i.id, classify(i, table, scorer, config)), dataset)
        return dict(results)


# --- ablation grid ------------------------------------------------------------

@dataclass(frozen=True)
class GridRow:
    """One ablation configuration: which table variant, depth, and penalty."""

    label: str
    variant: str
    mode: Mode
    consult_penalty: float


@dataclass(frozen=True)
class AblationGrid:
    rows: tuple[GridRow, ...]
    tasks: tuple[str, ...]
    cells: dict[tuple[str, str], float]  # (row label, task) -> macro F1

    def to_delimited(self, delimiter: str = "\t") -> str:
        lines = [delimiter.join(["config", *self.tasks])]
        for row in self.rows:
            cells = [f"{100 * self.cells[(row.label, task)]:.1f}" for task in self.tasks]
            lines.append(delimiter.join([row.label, *cells]))
        return "\n".join(lines) + "\n"


def default_grid_rows(
    variants: Mapping[str, HypothesisTable], consult_penalty: float = 0.02
) -> tuple[GridRow, ...]:
    """Flat rows (with and without the penalty) per variant, then tree rows.

    Tree rows use the "default" variant when present, otherwise the first.
    """
    rows: list[GridRow] = []
    for name in variants:
        label = name.capitalize()
        rows.append(GridRow(f"Flat-{label}-c", name, Mode.FLAT, 0.0))
        rows.append(GridRow(f"Flat-{label}", name, Mode.FLAT, consult_penalty))
    tree_variant = "default" if "default" in variants else next(iter(variants))
    rows.extend(
        [
            GridRow("L1-c", tree_variant, Mode.L1, 0.0),
            GridRow("L1", tree_variant, Mode.L1, consult_penalty),
            GridRow("L2-c", tree_variant, Mode.L2, 0.0),
            GridRow("L2", tree_variant, Mode.L2, consult_penalty),
            GridRow("L3", tree_variant, Mode.L3, consult_penalty),
        ]
    )
    return tuple(rows)


def run_ablation(
    dataset: Dataset,
    table_variants: Mapping[str, HypothesisTable],
    scorer: Scorer,
    rows: Sequence[GridRow] | None = None,
    tasks: Sequence[str] | None = None,
    base_config: ClassifierConfig | None = None,
    jobs: int = 1,
) -> AblationGrid:
    """Evaluate each grid configuration on the same instances."""
    base = base_config or ClassifierConfig()
    rows = tuple(rows) if rows is not None else default_grid_rows(table_variants, base.consult_penalty)
    tasks = tuple(tasks) if tasks is not None else tuple(t for t in TASKS if t in dataset.tasks)
    for task in tasks:
        dataset.require_task(task)
    for row in rows:
        if row.variant not in table_variants:
            raise ValueError(f"grid row {row.label!r} names unknown table variant {row.variant!r}")

    cells: dict[tuple[str, str], float] = {}
    for row in rows:
        config = replace(base, mode=row.mode, consult_penalty=row.consult_penalty)
        predictions = classify_dataset(dataset, table_variants[row.variant], scorer, config, jobs)
        for task in tasks:
            cells[(row.label, task)] = evaluate(predictions, dataset, task).macro_f1
    return AblationGrid(rows=rows, tasks=tasks, cells=cells)
