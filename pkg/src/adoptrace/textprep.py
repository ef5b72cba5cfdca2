"""Normalized text views for matching and scoring.

``matching_view`` is lowercased with mentions, hashtags, URLs, and the
configured scrape keywords removed; it feeds aspect extraction.
``sentiment_view`` feeds the valence engine and equals the matching view
unless ``preserve_case_for_sentiment`` keeps the original casing (with the
same removals applied).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

# Scheme- or www-prefixed runs up to whitespace; deliberately simpler than a
# full URL grammar.
_URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\S*")
_HASHTAG_RE = re.compile(r"#\S*")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class PrepConfig:
    scrape_keywords: tuple[str, ...] = ()
    preserve_case_for_sentiment: bool = False
    drop_non_english: bool = True

    @classmethod
    def from_file(cls, path: str | Path) -> "PrepConfig":
        with Path(path).open(encoding="utf-8") as handle:
            raw = json.load(handle)
        return cls(
            scrape_keywords=tuple(raw.get("scrape_keywords", ())),
            preserve_case_for_sentiment=bool(raw.get("preserve_case_for_sentiment", False)),
            drop_non_english=bool(raw.get("drop_non_english", True)),
        )


@dataclass(frozen=True)
class CleanText:
    matching_view: str
    sentiment_view: str
    removed_spans: tuple[tuple[str, str], ...] = ()


def _is_word_char(ch: str) -> bool:
    # Word characters are letters and digits; hyphens and underscores are not.
    return ch.isalnum()


def _lower_same_length(text: str) -> str:
    """Per-character lowercase that never changes the string length.

    str.lower() can expand some code points (e.g. U+0130), which would
    desynchronize match offsets against the original text.
    """
    lowered = text.lower()
    if len(lowered) == len(text):
        return lowered
    return "".join((c.lower() or c)[0] for c in text)


def _find_whole_word(text: str, phrase: str, start: int = 0) -> int:
    """Index of the next whole-word occurrence of ``phrase``, or -1."""
    n = len(text)
    m = len(phrase)
    if m == 0:
        return -1
    pos = text.find(phrase, start)
    while pos != -1:
        left_ok = pos == 0 or not (_is_word_char(text[pos - 1]) and _is_word_char(phrase[0]))
        end = pos + m
        right_ok = end == n or not (_is_word_char(phrase[-1]) and _is_word_char(text[end]))
        if left_ok and right_ok:
            return pos
        pos = text.find(phrase, pos + 1)
    return -1


def _remove_keywords(text: str, keywords: tuple[str, ...], spans: list[tuple[str, str]],
                     casefold: bool) -> str:
    """Blank out whole-word keyword occurrences until none remain.

    Removal can create a new adjacency that itself spells a keyword
    ("internet of <tag> things"), so sweeps repeat to a fixpoint.
    """
    normalized = [_WS_RE.sub(" ", kw).strip().lower() for kw in keywords]
    normalized = [kw for kw in normalized if kw]
    if not normalized:
        return text
    changed = True
    while changed:
        changed = False
        haystack = _lower_same_length(text) if casefold else text
        for keyword in normalized:
            pos = _find_whole_word(haystack, keyword)
            while pos != -1:
                spans.append(("keyword", text[pos:pos + len(keyword)]))
                text = text[:pos] + " " + text[pos + len(keyword):]
                text = _WS_RE.sub(" ", text).strip()
                haystack = _lower_same_length(text) if casefold else text
                changed = True
                pos = _find_whole_word(haystack, keyword)
    return text


def _strip_markup(raw: str, spans: list[tuple[str, str]]) -> str:
    def record(kind: str):
        def sub(match: re.Match) -> str:
            spans.append((kind, match.group(0)))
            return " "
        return sub

    text = _URL_RE.sub(record("url"), raw)
    text = _MENTION_RE.sub(record("mention"), text)
    text = _HASHTAG_RE.sub(record("hashtag"), text)
    return _WS_RE.sub(" ", text).strip()


def normalize(raw: str, config: PrepConfig = PrepConfig()) -> CleanText:
    """Build the matching and sentiment views of one raw text."""
    spans: list[tuple[str, str]] = []
    stripped = _strip_markup(raw, spans)

    matching = _remove_keywords(stripped.lower(), config.scrape_keywords, spans, casefold=False)
    if config.preserve_case_for_sentiment:
        # Same removals on the original casing; keyword matching stays
        # case-insensitive.
        sentiment = _remove_keywords(stripped, config.scrape_keywords, [], casefold=True)
    else:
        sentiment = matching
    return CleanText(matching_view=matching, sentiment_view=sentiment,
                     removed_spans=tuple(spans))
