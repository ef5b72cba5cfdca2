"""Technology-aspect extraction via simultaneous multi-pattern matching.

A term index (one phrase per line, CyBOK-style) is compiled into an
Aho-Corasick automaton with the failure function pre-resolved into dense
per-state transition rows, so scanning a text is a single pass. Matches are
post-filtered to word boundaries: a boundary is any transition between word
characters (letters/digits) and non-word characters or the string edge;
hyphens are non-word. Nested and overlapping phrases all fire ("cloud" and
"cloud native" both report), but a term counts once per record.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .textprep import CleanText

logger = logging.getLogger(__name__)

_WS_RE = re.compile(r"\s+")


class TermLoadError(Exception):
    """The term file cannot supply a usable index."""


@dataclass(frozen=True)
class AspectMention:
    """One extracted technology term occurrence within a record."""

    term: str
    record_id: str
    span: tuple[int, int]


def _normalize_phrase(phrase: str) -> str:
    return _WS_RE.sub(" ", phrase).strip().lower()


def _build_automaton(phrases: list[str]) -> tuple[list[dict[str, int]], list[tuple[str, ...]]]:
    """Compile phrases into closed transition rows plus per-state outputs."""
    # Trie construction
    children: list[dict[str, int]] = [{}]
    outputs: list[list[str]] = [[]]
    for phrase in phrases:
        state = 0
        for ch in phrase:
            nxt = children[state].get(ch)
            if nxt is None:
                children.append({})
                outputs.append([])
                nxt = len(children) - 1
                children[state][ch] = nxt
            state = nxt
        outputs[state].append(phrase)

    # Breadth-first failure links, folded directly into dense rows so the
    # scan loop is a single dict lookup per character. Rows are indexed by
    # state id (trie insertion order), hence the preallocation.
    alphabet = {ch for row in children for ch in row}
    rows: list[dict[str, int] | None] = [None] * len(children)
    root_row = dict.fromkeys(alphabet, 0)
    root_row.update(children[0])
    rows[0] = root_row
    fail = [0] * len(children)
    queue = list(children[0].values())
    head = 0
    while head < len(queue):
        state = queue[head]
        head += 1
        fallback_row = rows[fail[state]]
        if outputs[fail[state]]:
            outputs[state].extend(outputs[fail[state]])
        row = dict(fallback_row)
        for ch, nxt in children[state].items():
            fail[nxt] = fallback_row[ch]
            row[ch] = nxt
            queue.append(nxt)
        rows[state] = row
    return rows, [tuple(out) for out in outputs]


class TermIndex:
    """Immutable set of lowercase term phrases with a compiled matcher."""

    def __init__(self, terms: Iterable[str], source_name: str = ""):
        normalized = {_normalize_phrase(t) for t in terms}
        normalized.discard("")
        if not normalized:
            raise TermLoadError(f"no usable terms in index {source_name!r}")
        self.terms: frozenset[str] = frozenset(normalized)
        self.source_name = source_name
        self._rows, self._outputs = _build_automaton(sorted(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, phrase: str) -> bool:
        return _normalize_phrase(phrase) in self.terms


def load_terms(path: str | Path) -> TermIndex:
    """Load a one-phrase-per-line term file; fatal if it yields no terms."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    index = TermIndex(lines, source_name=path.name)
    logger.info("loaded %d terms from %s", len(index), path)
    return index


def _word(ch: str) -> bool:
    return ch.isalnum()


def extract(clean: CleanText, index: TermIndex, record_id: str = "") -> set[AspectMention]:
    """Report every index phrase occurring in the matching view.

    All whole-word occurrences are found; per term only the first span is
    kept (set semantics per record).
    """
    text = clean.matching_view
    n = len(text)
    rows = index._rows
    outputs = index._outputs
    found: dict[str, tuple[int, int]] = {}
    state = 0
    for pos, ch in enumerate(text):
        state = rows[state].get(ch, 0)
        hits = outputs[state]
        if not hits:
            continue
        end = pos + 1
        for phrase in hits:
            if phrase in found:
                continue
            start = end - len(phrase)
            if start > 0 and _word(text[start - 1]) and _word(phrase[0]):
                continue
            if end < n and _word(phrase[-1]) and _word(text[end]):
                continue
            found[phrase] = (start, end)
    return {AspectMention(term=t, record_id=record_id, span=span) for t, span in found.items()}
