"""Shared fixtures: the shipped table and the two demonstration-premise setups."""

from __future__ import annotations

import pytest

from zsp.engine import EventInstance
from zsp.hypotheses import HypothesisEntry, HypothesisTable, default_table, instantiate
from zsp.ontology import Modality
from zsp.scorer import OracleScorer

INDONESIA_PROTEST_PREMISE = (
    "Thousands of Indonesian students said they would stage mass demonstrations "
    "Saturday, demanding political reforms from President Suharto's government."
)
INDONESIA_SUSPEND_PREMISE = (
    "Thousands of Indonesian students agreed to suspend Saturday's demonstrations, "
    "demanding political reforms from President Suharto's government."
)
INDONESIA_SOURCE = "Indonesian students"
INDONESIA_TARGET = "President Suharto's government"


@pytest.fixture(scope="session")
def table() -> HypothesisTable:
    return default_table()


def entry_by_past(table: HypothesisTable, fragment: str) -> HypothesisEntry:
    """The unique entry whose past template contains the fragment."""
    matches = [e for e in table if fragment in e.past_template]
    assert len(matches) == 1, f"{fragment!r} matched {len(matches)} entries"
    return matches[0]


def oracle_for(
    table: HypothesisTable,
    instance: EventInstance,
    scores: dict[tuple[str, Modality], float],
    default: float = 0.0,
) -> OracleScorer:
    """Build an oracle keyed on the instance id from (template fragment, form) scores."""
    mapped = {}
    for (fragment, form), value in scores.items():
        entry = entry_by_past(table, fragment)
        hyp = instantiate(entry, form, instance.source, instance.target)
        mapped[(instance.id, hyp.text)] = value
    return OracleScorer(mapped, default_score=default)


def announced_protest_case(table: HypothesisTable) -> tuple[EventInstance, OracleScorer]:
    """Demonstrations-announcement premise with its transcribed score column."""
    instance = EventInstance(
        id="t2",
        text=INDONESIA_PROTEST_PREMISE,
        source=INDONESIA_SOURCE,
        target=INDONESIA_TARGET,
    )
    oracle = oracle_for(
        table,
        instance,
        {
            ("demanded something from", Modality.PAST): 0.927,
            ("launched protests against", Modality.PAST): 0.925,
            ("added aid to", Modality.PAST): 0.008,
            ("launched protests against", Modality.FUTURE): 0.973,
        },
    )
    return instance, oracle


def suspended_protest_case(table: HypothesisTable) -> tuple[EventInstance, OracleScorer]:
    """Suspended-demonstrations premise; the agree path wins via the yield branch."""
    instance = EventInstance(
        id="t3",
        text=INDONESIA_SUSPEND_PREMISE,
        source=INDONESIA_SOURCE,
        target=INDONESIA_TARGET,
    )
    oracle = oracle_for(
        table,
        instance,
        {
            ("agreed to do something for", Modality.PAST): 0.963,
            ("reduced protest against", Modality.PAST): 0.952,
            ("reduced protest against", Modality.FUTURE): 0.971,
            ("launched protests against", Modality.PAST): 0.001,
            ("launched protests against", Modality.FUTURE): 0.675,
        },
    )
    return instance, oracle


class CountingScorer:
    """Wrap a scorer and count score_batch calls and scored hypotheses."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0
        self.hypotheses_scored = 0

    def score_batch(self, request):
        self.calls += 1
        self.hypotheses_scored += len(request.hypotheses)
        return self.inner.score_batch(request)
