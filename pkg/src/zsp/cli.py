"""Command-line interface.

Subcommands bind tables, datasets, scorer backends, and classifier settings
into the classify / evaluate / ablate / validate-table workflows. All
diagnostics go to stderr; data goes to stdout or --out. A key=value config
file can pre-set any flag; explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import hypotheses, report
from .engine import ClassifierConfig, Mode, Override, format_trace
from .errors import ZspError
from .evaluation import (
    TASKS,
    Dataset,
    classify_dataset,
    default_grid_rows,
    evaluate,
    load_dataset_path,
    run_ablation,
)
from .hypotheses import HypothesisTable, load_table_path, scan_table, tiny_table
from .scorer import CachedScorer, OracleScorer, RemoteScorer, Scorer

ENDPOINT_ENV = "ZSP_ENDPOINT"

_MODES = {"l1": Mode.L1, "l2": Mode.L2, "l3": Mode.L3, "flat": Mode.FLAT}
_OVERRIDES = {o.value: o for o in Override}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation settings shared by the run commands."""

    table: HypothesisTable
    dataset: Dataset
    scorer: Scorer
    classifier: ClassifierConfig
    task: str
    out: str | None
    figures: str | None
    verbose: bool
    jobs: int


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_num, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ZspError(f"{path}:{line_num}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


_CONFIG_KEYS = frozenset(
    {
        "table", "dataset", "oracle", "endpoint", "top_k", "margin", "consult_penalty",
        "mode", "disable_override", "task", "tasks", "full_table", "out", "figures",
        "verbose", "jobs",
    }
)


def _apply_config_file(subparsers: list[argparse.ArgumentParser], args: list[str]) -> None:
    """Turn config-file entries into parser defaults so real flags override them.

    Defaults must land on the subparsers: argparse subcommands parse into a
    fresh namespace whose values overwrite top-level defaults.
    """
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    found, _ = probe.parse_known_args(args)
    if not found.config:
        return
    values = _read_config_file(found.config)
    defaults: dict[str, object] = {}
    for key, value in values.items():
        if key not in _CONFIG_KEYS:
            raise ZspError(f"{found.config}: unknown config key {key!r}")
        try:
            if key == "disable_override":
                defaults[key] = [v.strip() for v in value.split(",") if v.strip()]
            elif key == "verbose":
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in ("top_k", "jobs"):
                defaults[key] = int(value)
            elif key in ("margin", "consult_penalty"):
                defaults[key] = float(value)
            else:
                defaults[key] = value
        except ValueError as exc:
            raise ZspError(f"{found.config}: bad value for {key!r}: {exc}") from exc
    for sub in subparsers:
        sub.set_defaults(**defaults)


def _add_shared_options(sub: argparse.ArgumentParser, *, needs_dataset: bool = True) -> None:
    sub.add_argument("--config", help="key=value file pre-setting any flag")
    sub.add_argument("--table", help="hypothesis table file (default: shipped table)")
    if needs_dataset:
        sub.add_argument("--dataset", required=False, help="line-delimited JSON dataset")
        backend = sub.add_argument_group("scorer backend (exactly one)")
        backend.add_argument("--oracle", help="JSON oracle score file")
        backend.add_argument(
            "--endpoint",
            help=f"scoring service base URL (falls back to ${ENDPOINT_ENV})",
        )
        sub.add_argument("--top-k", type=int, default=3, dest="top_k")
        sub.add_argument("--margin", type=float, default=0.1)
        sub.add_argument("--consult-penalty", type=float, default=0.02, dest="consult_penalty")
        sub.add_argument("--mode", choices=sorted(_MODES), default="l3")
        sub.add_argument(
            "--disable-override",
            action="append",
            choices=sorted(_OVERRIDES),
            default=None,
            dest="disable_override",
            help="repeatable; turn off a disambiguation rule",
        )
        sub.add_argument("--jobs", type=int, default=1, help="worker threads over instances")
    sub.add_argument("--out", help="write data output to this file instead of stdout")
    sub.add_argument("--verbose", action="store_true")


def _build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="zsp",
        description="Zero-shot PLOVER relation classifier and evaluation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="label every dataset instance")
    _add_shared_options(p_classify)

    p_eval = sub.add_parser("evaluate", help="classify and score against gold labels")
    _add_shared_options(p_eval)
    p_eval.add_argument("--task", choices=TASKS, default="root")
    p_eval.add_argument("--figures", help="directory for rendered figure files")

    p_ablate = sub.add_parser("ablate", help="run the configuration grid")
    _add_shared_options(p_ablate)
    p_ablate.add_argument("--tasks", help="comma-separated subset of binary,quad,root")
    p_ablate.add_argument("--full-table", dest="full_table",
                          help="optional larger flat table to add as a grid variant")
    p_ablate.add_argument("--figures", help="directory for rendered figure files")

    p_validate = sub.add_parser("validate-table", help="check a hypothesis table file")
    _add_shared_options(p_validate, needs_dataset=False)
    return parser, [p_classify, p_eval, p_ablate, p_validate]


def _load_table(args) -> HypothesisTable:
    if args.table:
        return load_table_path(args.table)
    return hypotheses.default_table()


def _build_scorer(args) -> Scorer:
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV)
    if args.oracle and endpoint:
        raise ZspError("choose one scorer backend: --oracle or --endpoint, not both")
    if args.oracle:
        return OracleScorer.from_file(args.oracle)
    if endpoint:
        return CachedScorer(RemoteScorer(endpoint))
    raise ZspError(f"no scorer backend: pass --oracle or --endpoint (or set ${ENDPOINT_ENV})")


def _classifier_config(args) -> ClassifierConfig:
    # config-file values bypass argparse choices, so re-validate here
    disabled = set()
    for name in args.disable_override or []:
        if name not in _OVERRIDES:
            raise ZspError(f"unknown override {name!r}; expected one of {sorted(_OVERRIDES)}")
        disabled.add(_OVERRIDES[name])
    mode = str(args.mode).lower()
    if mode not in _MODES:
        raise ZspError(f"unknown mode {args.mode!r}; expected one of {sorted(_MODES)}")
    try:
        return ClassifierConfig(
            top_k=args.top_k,
            margin=args.margin,
            consult_penalty=args.consult_penalty,
            mode=_MODES[mode],
            overrides_enabled=frozenset(Override) - disabled,
        )
    except ValueError as exc:
        raise ZspError(str(exc)) from exc


def _resolve(args, task: str = "root") -> RunConfig:
    if not args.dataset:
        raise ZspError("--dataset is required")
    return RunConfig(
        table=_load_table(args),
        dataset=load_dataset_path(args.dataset),
        scorer=_build_scorer(args),
        classifier=_classifier_config(args),
        task=task,
        out=args.out,
        figures=getattr(args, "figures", None),
        verbose=args.verbose,
        jobs=args.jobs,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    cfg = _resolve(args)
    predictions = classify_dataset(cfg.dataset, cfg.table, cfg.scorer, cfg.classifier, cfg.jobs)
    lines = ["id\troot\tquad\tbinary\tscore\n"]
    for instance_id in sorted(predictions):
        p = predictions[instance_id]
        top = p.ranked[0]
        lines.append(
            f"{instance_id}\t{p.root.value}\t{int(p.quad)}\t{p.binary.value}"
            f"\t{top.adjusted_score:.6g}\n"
        )
        if cfg.verbose:
            lines.extend(f"# {line}\n" for line in format_trace(p))
    _emit("".join(lines), cfg.out)
    return 0


def cmd_evaluate(args) -> int:
    if args.task not in TASKS:
        raise ZspError(f"unknown task {args.task!r}; expected one of {','.join(TASKS)}")
    cfg = _resolve(args, task=args.task)
    cfg.dataset.require_task(cfg.task)
    predictions = classify_dataset(cfg.dataset, cfg.table, cfg.scorer, cfg.classifier, cfg.jobs)
    result = evaluate(predictions, cfg.dataset, cfg.task)
    sys.stdout.write(report.render_text_report(result))
    if cfg.verbose:
        sys.stdout.write(report.render_confusion_text(result))
    if cfg.out:
        Path(cfg.out).write_text(report.render_delimited_report(result), encoding="utf-8")
    if cfg.figures:
        figures = Path(cfg.figures)
        figures.mkdir(parents=True, exist_ok=True)
        report.save_confusion_figure(result, figures / f"confusion_matrix_{cfg.task}.png")
        report.save_f1_figure(result, figures / f"per_class_f1_{cfg.task}.png")
    return 0


def cmd_ablate(args) -> int:
    cfg = _resolve(args)
    variants: dict[str, HypothesisTable] = {"tiny": tiny_table(), "default": cfg.table}
    if args.full_table:
        variants["full"] = load_table_path(args.full_table)
    tasks = None
    if args.tasks:
        tasks = tuple(t.strip() for t in args.tasks.split(",") if t.strip())
        for t in tasks:
            if t not in TASKS:
                raise ZspError(f"unknown task {t!r}; expected subset of {','.join(TASKS)}")
    rows = default_grid_rows(variants, cfg.classifier.consult_penalty)
    grid = run_ablation(
        cfg.dataset, variants, cfg.scorer, rows=rows, tasks=tasks,
        base_config=cfg.classifier, jobs=cfg.jobs,
    )
    _emit(grid.to_delimited(), cfg.out)
    if cfg.figures:
        figures = Path(cfg.figures)
        figures.mkdir(parents=True, exist_ok=True)
        report.save_ablation_figure(grid, figures / "ablation_grid.png")
    return 0


def cmd_validate_table(args) -> int:
    path = args.table or str(hypotheses.default_table_path())
    with open(path, encoding="utf-8") as fh:
        table, errors = scan_table(fh)
    for err in errors:
        print(f"{path}: {err}", file=sys.stderr)
    if table is None:
        return 1
    lines = [f"past={table.past_count} future={table.future_count}\n"]
    for root, count in table.root_coverage().items():
        lines.append(f"coverage {root.value}={count}\n")
    for entry in table:
        if entry.peace_general_of is not None:
            lines.append(f"override-pair general={entry.id} specific={entry.peace_general_of}\n")
        if entry.blockade_coerce:
            lines.append(f"override-blockade entry={entry.id}\n")
    _emit("".join(lines), args.out)
    return 1 if errors else 0


_COMMANDS = {
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "validate-table": cmd_validate_table,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        _apply_config_file(subparsers, argv)
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ZspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
