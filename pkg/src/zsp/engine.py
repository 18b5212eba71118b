"""Tree-query cascade classifier.

Level 1 scores every past-form hypothesis and keeps the top candidates
within a margin of the best score. Level 2 branches each survivor into its
future form where one exists, re-labeling the branch by the modality
transition. Level 3 resolves remaining label overlaps with the
disambiguation rules (peace-forces pairing, blockade ownership, and
material-over-verbal conflict precedence). The overly broad CONSULT class
is handicapped by a fixed penalty before any filtering.

A flat single-pass mode over all forms is kept for ablation baselines.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import EmptyInput, EmptyTable
from .hypotheses import HypothesisEntry, HypothesisTable, InstantiatedHypothesis, instantiate
from .ontology import BinaryClass, Modality, Quadcode, Rootcode, quad_to_binary
from .scorer import Scorer, ScoreRequest


class Mode(Enum):
    """How deep the cascade runs; FLAT bypasses it entirely."""

    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    FLAT = "FLAT"


class Override(Enum):
    CONFLICT = "conflict"
    PEACE = "peace"
    BLOCKADE = "blockade"


ALL_OVERRIDES = frozenset(Override)

# Rule names recorded on eliminations.
RULE_MARGIN = "margin"
RULE_TOPK = "topk"


@dataclass(frozen=True)
class EventInstance:
    """A premise sentence with its source/target mentions and optional gold label."""

    id: str
    text: str
    source: str
    target: str
    gold_root: Rootcode | None = None
    gold_quad: Quadcode | None = None
    gold_binary: BinaryClass | None = None

    def __post_init__(self):
        for name in ("id", "text", "source", "target"):
            if not getattr(self, name).strip():
                raise ValueError(f"instance field {name!r} must be non-empty")


@dataclass(frozen=True)
class Candidate:
    """A scored (entry, form) pair flowing through the cascade.

    ``root``/``quad`` are the realized label of this form; the entry's own
    context label (its past-form label) stays reachable for the rules that
    key on context.
    """

    entry: HypothesisEntry
    form: Modality
    root: Rootcode
    quad: Quadcode
    raw_score: float
    adjusted_score: float
    eliminated_by: str | None = None

    @property
    def entry_id(self) -> int:
        return self.entry.id

    @property
    def context_root(self) -> Rootcode:
        return self.entry.context_root

    @property
    def context_quad(self) -> Quadcode:
        return self.entry.context_quad

    @property
    def label(self) -> tuple[Rootcode, Quadcode]:
        return self.root, self.quad


@dataclass(frozen=True)
class ClassifierConfig:
    top_k: int = 3
    margin: float = 0.1
    consult_penalty: float = 0.02
    mode: Mode = Mode.L3
    overrides_enabled: frozenset[Override] = ALL_OVERRIDES

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.margin < 0:
            raise ValueError("margin must be >= 0")
        if self.consult_penalty < 0:
            raise ValueError("consult_penalty must be >= 0")
        object.__setattr__(self, "overrides_enabled", frozenset(self.overrides_enabled))


@dataclass(frozen=True)
class TraceRecord:
    """One cascade action; serializes to a single text line."""

    level: int
    action: str
    entry_id: int | None = None
    form: Modality | None = None
    root: Rootcode | None = None
    quad: Quadcode | None = None
    raw_score: float | None = None
    adjusted_score: float | None = None
    rule: str | None = None

    def line(self) -> str:
        parts = [f"LEVEL{self.level}", self.action]
        if self.entry_id is not None:
            parts.append(f"entry={self.entry_id}")
        if self.form is not None:
            parts.append(f"form={self.form.value}")
        if self.root is not None and self.quad is not None:
            parts.append(f"label={self.root.value} {int(self.quad)}")
        if self.raw_score is not None and self.adjusted_score is not None:
            parts.append(f"score={self.raw_score:.6g}/{self.adjusted_score:.6g}")
        if self.rule is not None:
            parts.append(f"rule={self.rule}")
        return " ".join(parts)


@dataclass(frozen=True)
class Prediction:
    """Final decision plus the surviving candidates and the action trace."""

    root: Rootcode
    quad: Quadcode
    binary: BinaryClass
    ranked: tuple[Candidate, ...]
    trace: tuple[TraceRecord, ...]


def format_trace(prediction: Prediction) -> list[str]:
    return [record.line() for record in prediction.trace]


def _rank_key(c: Candidate):
    # Descending score; ties go to the lowest entry id, past before future.
    return (-c.adjusted_score, c.entry_id, 0 if c.form is Modality.PAST else 1)


def _candidate_record(level: int, action: str, c: Candidate, rule: str | None = None) -> TraceRecord:
    return TraceRecord(
        level=level,
        action=action,
        entry_id=c.entry_id,
        form=c.form,
        root=c.root,
        quad=c.quad,
        raw_score=c.raw_score,
        adjusted_score=c.adjusted_score,
        rule=rule,
    )


def _make_candidate(
    entry: HypothesisEntry, hyp: InstantiatedHypothesis, raw: float, config: ClassifierConfig
) -> Candidate:
    adjusted = raw - config.consult_penalty if hyp.root is Rootcode.CONSULT else raw
    return Candidate(
        entry=entry,
        form=hyp.form,
        root=hyp.root,
        quad=hyp.quad,
        raw_score=raw,
        adjusted_score=adjusted,
    )


def _score_forms(
    instance: EventInstance,
    pairs: list[tuple[HypothesisEntry, InstantiatedHypothesis]],
    scorer: Scorer,
    config: ClassifierConfig,
) -> list[Candidate]:
    request = ScoreRequest(
        premise=instance.text,
        hypotheses=tuple(hyp.text for _, hyp in pairs),
        premise_key=instance.id,
    )
    raw_scores = scorer.score_batch(request)
    return [
        _make_candidate(entry, hyp, raw, config)
        for (entry, hyp), raw in zip(pairs, raw_scores)
    ]


def level1_filter(
    scored: list[Candidate],
    config: ClassifierConfig,
    trace: list[TraceRecord] | None = None,
) -> list[Candidate]:
    """Keep candidates within the margin of the best adjusted score, then top-k.

    The maximum-scoring candidate always survives, margin 0 included.
    """
    if not scored:
        raise EmptyInput("no candidates to filter")
    max_adj = max(c.adjusted_score for c in scored)
    in_margin = [
        c for c in scored
        if c.adjusted_score > max_adj - config.margin or c.adjusted_score == max_adj
    ]
    in_margin.sort(key=_rank_key)
    survivors = in_margin[: config.top_k]
    if trace is not None:
        kept = set(map(id, survivors))
        margin_pass = set(map(id, in_margin))
        for c in scored:
            if id(c) in kept:
                trace.append(_candidate_record(1, "KEEP", c))
            else:
                rule = RULE_TOPK if id(c) in margin_pass else RULE_MARGIN
                trace.append(_candidate_record(1, "ELIMINATE", replace(c, eliminated_by=rule), rule))
    return survivors


def level2_expand(
    survivors: list[Candidate],
    instance: EventInstance,
    scorer: Scorer,
    config: ClassifierConfig | None = None,
    trace: list[TraceRecord] | None = None,
) -> list[Candidate]:
    """Branch each surviving past candidate into its future form, if any.

    Entries whose label would not change have no future template and add
    nothing. All needed future forms are fetched in a single scorer call;
    with nothing to fetch, the scorer is not consulted at all.
    """
    config = config or ClassifierConfig()
    pool = list(survivors)
    pairs = [
        (c.entry, instantiate(c.entry, Modality.FUTURE, instance.source, instance.target))
        for c in survivors
        if c.form is Modality.PAST and c.entry.has_future
    ]
    if not pairs:
        return pool
    branches = _score_forms(instance, pairs, scorer, config)
    for branch in branches:
        if trace is not None:
            trace.append(_candidate_record(2, "ADD", branch))
        pool.append(branch)
    return pool


def _peace_doomed(pool: list[Candidate]) -> set[int]:
    specific_ids = {c.entry_id for c in pool if c.entry.peace_specific}
    return {
        c.entry_id
        for c in pool
        if c.entry.peace_general_of is not None and c.entry.peace_general_of in specific_ids
    }


def _blockade_doomed(pool: list[Candidate]) -> set[int]:
    if not any(c.context_root is Rootcode.PROTEST for c in pool):
        return set()
    return {c.entry_id for c in pool if c.entry.blockade_coerce}


def _conflict_doomed(pool: list[Candidate]) -> set[int]:
    if not any(c.context_quad is Quadcode.MATERIAL_CONFLICT for c in pool):
        return set()
    return {c.entry_id for c in pool if c.context_quad is Quadcode.VERBAL_CONFLICT}


_RULES = (
    (Override.PEACE, _peace_doomed),
    (Override.BLOCKADE, _blockade_doomed),
    (Override.CONFLICT, _conflict_doomed),
)


def level3_disambiguate(
    pool: list[Candidate],
    config: ClassifierConfig,
    trace: list[TraceRecord] | None = None,
) -> list[Candidate]:
    """Apply the enabled class disambiguation rules to the candidate pool.

    Eliminations are entry-scoped: dropping a context label drops its
    modality branches too. A rule that would empty the pool is skipped.
    """
    pool = list(pool)
    for override, doomed_ids in _RULES:
        if override not in config.overrides_enabled or not pool:
            continue
        doomed = doomed_ids(pool)
        if not doomed:
            continue
        survivors = [c for c in pool if c.entry_id not in doomed]
        if not survivors:
            if trace is not None:
                trace.append(TraceRecord(level=3, action="SKIP", rule=override.value))
            continue
        if trace is not None:
            for c in pool:
                if c.entry_id in doomed:
                    trace.append(
                        _candidate_record(
                            3, "ELIMINATE", replace(c, eliminated_by=override.value), override.value
                        )
                    )
        pool = survivors
    return pool


def _finish(pool: list[Candidate], level: int, trace: list[TraceRecord]) -> Prediction:
    ranked = tuple(sorted(pool, key=_rank_key))
    winner = ranked[0]
    trace.append(_candidate_record(level, "SELECT", winner))
    return Prediction(
        root=winner.root,
        quad=winner.quad,
        binary=quad_to_binary(winner.quad),
        ranked=ranked,
        trace=tuple(trace),
    )


def flat_classify(
    instance: EventInstance,
    table: HypothesisTable,
    scorer: Scorer,
    config: ClassifierConfig | None = None,
) -> Prediction:
    """Score every past and future form in one pass and take the argmax."""
    config = config or ClassifierConfig(mode=Mode.FLAT)
    if not table.entries:
        raise EmptyTable("hypothesis table is empty")
    pairs = []
    for entry in table:
        pairs.append((entry, instantiate(entry, Modality.PAST, instance.source, instance.target)))
        if entry.has_future:
            pairs.append(
                (entry, instantiate(entry, Modality.FUTURE, instance.source, instance.target))
            )
    candidates = _score_forms(instance, pairs, scorer, config)
    return _finish(candidates, 0, [])


def classify(
    instance: EventInstance,
    table: HypothesisTable,
    scorer: Scorer,
    config: ClassifierConfig | None = None,
) -> Prediction:
    """Run the cascade at the configured depth and return the decision."""
    config = config or ClassifierConfig()
    if not table.entries:
        raise EmptyTable("hypothesis table is empty")
    if config.mode is Mode.FLAT:
        return flat_classify(instance, table, scorer, config)

    trace: list[TraceRecord] = []
    pairs = [
        (entry, instantiate(entry, Modality.PAST, instance.source, instance.target))
        for entry in table
    ]
    scored = _score_forms(instance, pairs, scorer, config)
    pool = level1_filter(scored, config, trace=trace)
    final_level = 1
    if config.mode in (Mode.L2, Mode.L3):
        pool = level2_expand(pool, instance, scorer, config, trace=trace)
        final_level = 2
    if config.mode is Mode.L3:
        pool = level3_disambiguate(pool, config, trace=trace)
        final_level = 3
    return _finish(pool, final_level, trace)
