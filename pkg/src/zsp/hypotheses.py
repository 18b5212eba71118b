"""Hypothesis table loading, validation, and instantiation.

A table row pairs a context label (root + quad) with a past-tense template
and, where the label would change from past to future, a future-tense
template. Templates carry <S> and <T> placeholders for the source and
target mentions. Rows may be tagged to participate in the class
disambiguation rules (peace-forces pairs, the blockade entry).
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, TextIO

from . import ontology
from .errors import (
    DanglingOverridePair,
    EmptyMention,
    LabelMismatch,
    MissingPlaceholder,
    NoFutureForm,
    TableError,
    UnknownLabel,
)
from .ontology import Modality, Quadcode, Rootcode

SOURCE_PLACEHOLDER = "<S>"
TARGET_PLACEHOLDER = "<T>"

TAG_PEACE_SPECIFIC = "peace_specific"
TAG_PEACE_GENERAL = "peace_general"
TAG_BLOCKADE_COERCE = "blockade_coerce"

_PLACEHOLDER_RE = re.compile(r"<S>|<T>")


@dataclass(frozen=True)
class HypothesisEntry:
    """One table row: a context label with its templated sentence forms."""

    id: int
    context_root: Rootcode
    context_quad: Quadcode
    past_template: str
    future_template: str | None = None
    peace_specific: bool = False
    peace_general_of: int | None = None  # id of the paired specific entry
    blockade_coerce: bool = False

    @property
    def has_future(self) -> bool:
        return self.future_template is not None

    @property
    def tags(self) -> frozenset[str]:
        toks = set()
        if self.peace_specific:
            toks.add(TAG_PEACE_SPECIFIC)
        if self.peace_general_of is not None:
            toks.add(f"{TAG_PEACE_GENERAL}={self.peace_general_of}")
        if self.blockade_coerce:
            toks.add(TAG_BLOCKADE_COERCE)
        return frozenset(toks)


@dataclass(frozen=True)
class HypothesisTable:
    """An ordered, validated collection of hypothesis entries."""

    entries: tuple[HypothesisEntry, ...]
    _by_id: dict[int, HypothesisEntry] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def entry(self, entry_id: int) -> HypothesisEntry:
        return self._by_id[entry_id]

    @property
    def past_count(self) -> int:
        return len(self.entries)

    @property
    def future_count(self) -> int:
        return sum(1 for e in self.entries if e.has_future)

    def root_coverage(self) -> dict[Rootcode, int]:
        """Past-form entry count per canonical root."""
        counts = {root: 0 for root in Rootcode}
        for e in self.entries:
            counts[e.context_root] += 1
        return counts


@dataclass(frozen=True)
class InstantiatedHypothesis:
    """A template with mentions substituted, ready to score."""

    entry_id: int
    form: Modality
    text: str
    root: Rootcode
    quad: Quadcode


def _check_placeholders(template: str, row: int, column: str) -> None:
    for ph in (SOURCE_PLACEHOLDER, TARGET_PLACEHOLDER):
        n = template.count(ph)
        if n != 1:
            raise MissingPlaceholder(
                f"{column} template must contain {ph} exactly once, found {n}: {template!r}",
                row=row,
            )


def _parse_tags(cell: str, row: int):
    peace_specific = False
    peace_general_of: int | None = None
    blockade = False
    for token in cell.split(";"):
        token = token.strip()
        if not token:
            continue
        if token == TAG_PEACE_SPECIFIC:
            peace_specific = True
        elif token == TAG_BLOCKADE_COERCE:
            blockade = True
        elif token.startswith(TAG_PEACE_GENERAL + "="):
            ref = token.split("=", 1)[1].strip()
            if not ref.isdigit():
                raise TableError(f"bad {TAG_PEACE_GENERAL} reference {ref!r}", row=row)
            peace_general_of = int(ref)
        else:
            raise TableError(f"unknown tag {token!r}", row=row)
    return peace_specific, peace_general_of, blockade


def _parse_rows(source: str | TextIO) -> Iterable[tuple[int, HypothesisEntry | TableError]]:
    """Yield (data-row number, entry or error) pairs, continuing past bad rows."""
    if isinstance(source, str):
        source = io.StringIO(source)
    header_line = source.readline()
    if not header_line.strip():
        yield 0, TableError("empty table file")
        return
    delimiter = "\t" if "\t" in header_line else ","
    header = [c.strip().lower() for c in next(csv.reader([header_line], delimiter=delimiter))]
    required = {"root", "quad", "past"}
    if not required.issubset(header):
        yield 0, TableError(f"header must name Root, Quad, Past columns, got {header}")
        return
    col = {name: header.index(name) for name in header}

    reader = csv.reader(source, delimiter=delimiter, skipinitialspace=True)
    next_id = 0
    for row_num, cells in enumerate(reader, start=1):
        if not any(c.strip() for c in cells):
            continue

        def cell(name: str) -> str:
            idx = col.get(name)
            if idx is None or idx >= len(cells):
                return ""
            return cells[idx].strip()

        try:
            root = ontology.normalize_alias(cell("root"))
            quad = ontology.parse_quadcode(cell("quad"))
            if quad != ontology.root_base_quad(root):
                raise LabelMismatch(
                    f"declared quad {quad.display} does not match base quad of "
                    f"{root.value} ({ontology.root_base_quad(root).display})",
                    row=row_num,
                )
            past = cell("past")
            _check_placeholders(past, row_num, "past")
            future_cell = cell("future")
            future = None if future_cell in ("", "None", "none") else future_cell
            if future is not None:
                _check_placeholders(future, row_num, "future")
            tags = _parse_tags(cell("tags"), row_num)
        except UnknownLabel as exc:
            yield row_num, TableError(str(exc), row=row_num)
            continue
        except TableError as exc:
            yield row_num, exc
            continue
        entry = HypothesisEntry(
            id=next_id,
            context_root=root,
            context_quad=quad,
            past_template=past,
            future_template=future,
            peace_specific=tags[0],
            peace_general_of=tags[1],
            blockade_coerce=tags[2],
        )
        next_id += 1
        yield row_num, entry


def _check_pairs(entries: list[HypothesisEntry], rows: dict[int, int]) -> list[TableError]:
    by_id = {e.id: e for e in entries}
    problems = []
    for e in entries:
        if e.peace_general_of is None:
            continue
        paired = by_id.get(e.peace_general_of)
        if paired is None or not paired.peace_specific:
            problems.append(
                DanglingOverridePair(
                    f"{TAG_PEACE_GENERAL}={e.peace_general_of} does not reference a "
                    f"{TAG_PEACE_SPECIFIC} entry",
                    row=rows.get(e.id),
                )
            )
    return problems


def scan_table(source: str | TextIO) -> tuple[HypothesisTable | None, list[TableError]]:
    """Parse a table, collecting every row error instead of stopping at the first.

    Returns the table built from the good rows (None if the file is unusable)
    and the list of errors found.
    """
    entries: list[HypothesisEntry] = []
    errors: list[TableError] = []
    rows: dict[int, int] = {}
    for row_num, item in _parse_rows(source):
        if isinstance(item, TableError):
            errors.append(item)
        else:
            entries.append(item)
            rows[item.id] = row_num
    errors.extend(_check_pairs(entries, rows))
    if not entries:
        errors.append(TableError("table has no entries"))
        return None, errors
    return HypothesisTable(entries=tuple(entries)), errors


def load_table(source: str | TextIO) -> HypothesisTable:
    """Load and validate a hypothesis table, raising on the first bad row."""
    table, errors = scan_table(source)
    if errors:
        raise errors[0]
    assert table is not None
    return table


def load_table_path(path: str | Path) -> HypothesisTable:
    with open(path, encoding="utf-8") as fh:
        return load_table(fh)


def dump_table(table: HypothesisTable, delimiter: str = "\t") -> str:
    """Serialize a table; load_table(dump_table(t)) reproduces t."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["Root", "Quad", "Past", "Future", "Tags"])
    for e in table:
        writer.writerow(
            [
                e.context_root.value,
                e.context_quad.display,
                e.past_template,
                e.future_template if e.future_template is not None else "None",
                ";".join(sorted(e.tags)),
            ]
        )
    return out.getvalue()


def instantiate(
    entry: HypothesisEntry, form: Modality, source: str, target: str
) -> InstantiatedHypothesis:
    """Substitute mentions into the entry's template for the given form.

    Substitution is verbatim and simultaneous, so mention text can never be
    re-expanded. The instantiated label is the context label for past forms
    and the future-shifted label for future forms.
    """
    if form not in (Modality.PAST, Modality.FUTURE):
        raise ValueError(f"only past/future forms are queryable, got {form}")
    if not source.strip() or not target.strip():
        raise EmptyMention("source and target mentions must be non-empty")
    if form is Modality.FUTURE:
        if entry.future_template is None:
            raise NoFutureForm(f"entry {entry.id} ({entry.context_root.value}) has no future form")
        template = entry.future_template
    else:
        template = entry.past_template
    text = _PLACEHOLDER_RE.sub(
        lambda m: source if m.group() == SOURCE_PLACEHOLDER else target, template
    )
    root, quad = ontology.modality_map(entry.context_root, form)
    return InstantiatedHypothesis(entry_id=entry.id, form=form, text=text, root=root, quad=quad)


# One-plus past-only sentences per root, phrased from the short CAMEO
# category descriptions; used by the flat-query ablation baseline.
_TINY_SENTENCES: tuple[tuple[Rootcode, str], ...] = (
    (Rootcode.AGREE, "<S> expressed intent to cooperate with <T>."),
    (Rootcode.CONSULT, "<S> consulted with <T>."),
    (Rootcode.SUPPORT, "<S> engaged in diplomatic cooperation with <T>."),
    (Rootcode.COOPERATE, "<S> engaged in material cooperation with <T>."),
    (Rootcode.AID, "<S> provided aid to <T>."),
    (Rootcode.YIELD, "<S> yielded to <T>."),
    (Rootcode.ACCUSE, "<S> investigated <T>."),
    (Rootcode.ACCUSE, "<S> disapproved of <T>."),
    (Rootcode.REQUEST, "<S> demanded something from <T>."),
    (Rootcode.REJECT, "<S> rejected <T>."),
    (Rootcode.THREATEN, "<S> threatened <T>."),
    (Rootcode.PROTEST, "<S> protested against <T>."),
    (Rootcode.MOBILIZE, "<S> exhibited force posture against <T>."),
    (Rootcode.SANCTION, "<S> reduced relations with <T>."),
    (Rootcode.COERCE, "<S> coerced <T>."),
    (Rootcode.ASSAULT, "<S> assaulted <T>."),
    (Rootcode.ASSAULT, "<S> fought <T>."),
    (Rootcode.ASSAULT, "<S> used unconventional mass violence against <T>."),
)

_DEFAULT_TABLE_RESOURCE = "hypotheses_plover.tsv"


def tiny_table() -> HypothesisTable:
    """The 18-sentence flat table: every root covered, past forms only."""
    entries = tuple(
        HypothesisEntry(
            id=i,
            context_root=root,
            context_quad=ontology.root_base_quad(root),
            past_template=text,
        )
        for i, (root, text) in enumerate(_TINY_SENTENCES)
    )
    return HypothesisTable(entries=entries)


def default_table_path() -> Path:
    """Filesystem path of the shipped modality-aware table."""
    return Path(str(resources.files("zsp.data").joinpath(_DEFAULT_TABLE_RESOURCE)))


def default_table() -> HypothesisTable:
    """Load the shipped modality-aware table (76 past forms, 58 future forms)."""
    return load_table_path(default_table_path())
