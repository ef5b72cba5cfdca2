"""Rule-augmented lexicon valence engine and threshold classifier.

Scores a text by summing lexicon word valences adjusted by contextual
rules: degree boosters (distance-damped over the three preceding words),
all-caps emphasis amid mixed-case text, negation flips, special-case idioms,
and contrastive "but" reweighting. It then adds exclamation/question-mark
emphasis and squashes the sum S to a compound score S/sqrt(S^2 + alpha).
Constants default to the published values of the Hutto & Gilbert (2014)
VADER method and are overridable through ValenceConfig; the bundled lexicon
is the published one (see data/ATTRIBUTION.md).

The engine reports pos/neg/neu proportions and the compound at full
precision; writers that surface scores externally print 4 decimals.
"""
from __future__ import annotations

import logging
import math
import string
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

logger = logging.getLogger(__name__)

_BOOST = 0.293
_DAMPEN = -0.293

_DEFAULT_NEGATORS = frozenset([
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing", "nowhere",
    "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't",
    "without", "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
])

_DEFAULT_BOOSTERS: Mapping[str, float] = MappingProxyType({
    "absolutely": _BOOST, "amazingly": _BOOST, "awfully": _BOOST,
    "completely": _BOOST, "considerable": _BOOST, "considerably": _BOOST,
    "decidedly": _BOOST, "deeply": _BOOST, "effing": _BOOST,
    "enormous": _BOOST, "enormously": _BOOST,
    "entirely": _BOOST, "especially": _BOOST,
    "exceptional": _BOOST, "exceptionally": _BOOST,
    "extreme": _BOOST, "extremely": _BOOST,
    "fabulously": _BOOST, "flipping": _BOOST, "flippin": _BOOST,
    "frackin": _BOOST, "fracking": _BOOST,
    "fricking": _BOOST, "frickin": _BOOST, "frigging": _BOOST, "friggin": _BOOST,
    "fully": _BOOST, "fuckin": _BOOST, "fucking": _BOOST,
    "fuggin": _BOOST, "fugging": _BOOST,
    "greatly": _BOOST, "hella": _BOOST, "highly": _BOOST, "hugely": _BOOST,
    "incredible": _BOOST, "incredibly": _BOOST, "intensely": _BOOST,
    "major": _BOOST, "majorly": _BOOST, "more": _BOOST, "most": _BOOST,
    "particularly": _BOOST, "purely": _BOOST, "quite": _BOOST,
    "really": _BOOST, "remarkably": _BOOST,
    "so": _BOOST, "substantially": _BOOST,
    "thoroughly": _BOOST, "total": _BOOST, "totally": _BOOST,
    "tremendous": _BOOST, "tremendously": _BOOST,
    "uber": _BOOST, "unbelievably": _BOOST, "unusually": _BOOST,
    "utter": _BOOST, "utterly": _BOOST, "very": _BOOST,
    "almost": _DAMPEN, "barely": _DAMPEN, "hardly": _DAMPEN,
    "just enough": _DAMPEN,
    "kind of": _DAMPEN, "kinda": _DAMPEN, "kindof": _DAMPEN, "kind-of": _DAMPEN,
    "less": _DAMPEN, "little": _DAMPEN,
    "marginal": _DAMPEN, "marginally": _DAMPEN,
    "occasional": _DAMPEN, "occasionally": _DAMPEN, "partly": _DAMPEN,
    "scarce": _DAMPEN, "scarcely": _DAMPEN,
    "slight": _DAMPEN, "slightly": _DAMPEN, "somewhat": _DAMPEN,
    "sort of": _DAMPEN, "sorta": _DAMPEN, "sortof": _DAMPEN, "sort-of": _DAMPEN,
})

_DEFAULT_SPECIAL_CASES: Mapping[str, float] = MappingProxyType({
    "the shit": 3.0, "the bomb": 3.0, "bad ass": 1.5, "badass": 1.5,
    "bus stop": 0.0, "yeah right": -2.0, "kiss of death": -1.5,
    "to die for": 3.0, "beating heart": 3.1, "broken heart": -2.9,
})


class LexiconError(Exception):
    """The lexicon file cannot supply a usable valence table."""


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"

    def __str__(self) -> str:  # plain value in file output
        return self.value


@dataclass(frozen=True)
class Lexicon:
    """Token -> mean valence map; tokens lowercase, valences finite."""

    entries: Mapping[str, float]
    metadata: str = ""

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ValenceConfig:
    normalization_alpha: float = 15.0
    booster_increment: float = _BOOST
    caps_boost: float = 0.733
    negation_factor: float = -0.74
    never_emphasis: float = 1.25
    exclamation_increment: float = 0.292
    max_exclamations: int = 4
    question_mark_step: float = 0.18
    question_mark_step_limit: int = 3
    question_mark_cap: float = 0.96
    but_weight_before: float = 0.5
    but_weight_after: float = 1.5
    damping_two_back: float = 0.95
    damping_three_back: float = 0.9
    negators: frozenset[str] = _DEFAULT_NEGATORS
    boosters: Mapping[str, float] = _DEFAULT_BOOSTERS
    special_cases: Mapping[str, float] = _DEFAULT_SPECIAL_CASES

    def __post_init__(self):
        if not self.normalization_alpha > 0:
            raise ValueError("normalization_alpha must be positive")


DEFAULT_CONFIG = ValenceConfig()


@dataclass(frozen=True)
class ValenceScore:
    """Positive/negative/neutral proportions plus normalized compound."""

    pos: float
    neg: float
    neu: float
    compound: float


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a tab-separated token/valence file.

    Duplicate tokens keep the last value (warned). Tokens containing
    uppercase are skipped: lookups lowercase the text token, so such
    entries could never match. Non-numeric valences reject the line.
    """
    path = Path(path)
    entries: dict[str, float] = {}
    skipped_case = 0
    duplicates: list[str] = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                logger.warning("%s:%d: not a token<TAB>valence line, skipping", path, line_no)
                continue
            token, raw_valence = parts[0], parts[1]
            try:
                valence = float(raw_valence)
            except ValueError:
                logger.warning("%s:%d: non-numeric valence %r, skipping", path, line_no, raw_valence)
                continue
            if not math.isfinite(valence):
                logger.warning("%s:%d: non-finite valence, skipping", path, line_no)
                continue
            if token != token.lower():
                skipped_case += 1
                continue
            if token in entries:
                duplicates.append(token)
            entries[token] = valence
    if duplicates:
        logger.warning("%s: %d duplicate tokens, keeping last values: %s",
                       path, len(duplicates), ", ".join(sorted(set(duplicates))))
    if skipped_case:
        logger.info("%s: skipped %d entries unreachable under lowercase lookup", path, skipped_case)
    if not entries:
        raise LexiconError(f"no usable entries in lexicon {path}")
    return Lexicon(entries=MappingProxyType(entries), metadata=path.name)


def default_lexicon() -> Lexicon:
    """The bundled published lexicon."""
    ref = resources.files("adoptrace.data") / "vader_lexicon.txt"
    with resources.as_file(ref) as path:
        return load_lexicon(path)


def normalize_sum(total: float, alpha: float = 15.0) -> float:
    """Squash an adjusted valence sum into (-1, 1); clamped at the limits."""
    value = total / math.sqrt(total * total + alpha)
    return max(-1.0, min(1.0, value))


_PUNCT = string.punctuation


def _tokens(text: str) -> list[str]:
    """Whitespace tokens, stripped of edge punctuation.

    A token that would shrink to two or fewer characters keeps its
    punctuation so emoticons like ":)" survive as lexicon keys.
    """
    out = []
    for token in text.split():
        stripped = token.strip(_PUNCT)
        out.append(token if len(stripped) <= 2 else stripped)
    return out


def _caps_contrast(tokens: list[str]) -> bool:
    """True when some but not all tokens are fully upper-case."""
    upper = sum(1 for t in tokens if t.isupper())
    return 0 < len(tokens) - upper < len(tokens)


def _booster_scalar(token: str, lowered: str, valence: float, caps_contrast: bool,
                    config: ValenceConfig) -> float:
    scalar = config.boosters.get(lowered, 0.0)
    if scalar == 0.0:
        return 0.0
    if valence < 0:
        scalar = -scalar
    if caps_contrast and token.isupper():
        scalar += config.caps_boost if valence > 0 else -config.caps_boost
    return scalar


def _is_negator(lowered: str, config: ValenceConfig) -> bool:
    return lowered in config.negators or "n't" in lowered


def _negation_adjust(valence: float, lower: list[str], back: int, i: int,
                     config: ValenceConfig) -> float:
    if back == 1:
        if _is_negator(lower[i - 1], config):
            valence *= config.negation_factor
    elif back == 2:
        if lower[i - 2] == "never" and lower[i - 1] in ("so", "this"):
            valence *= config.never_emphasis
        elif lower[i - 2] == "without" and lower[i - 1] == "doubt":
            pass
        elif _is_negator(lower[i - 2], config):
            valence *= config.negation_factor
    else:
        if (lower[i - 3] == "never" and lower[i - 2] in ("so", "this")) or \
                lower[i - 1] in ("so", "this"):
            valence *= config.never_emphasis
        elif lower[i - 3] == "without" and "doubt" in (lower[i - 2], lower[i - 1]):
            pass
        elif _is_negator(lower[i - 3], config):
            valence *= config.negation_factor
    return valence


def _idiom_adjust(valence: float, lower: list[str], i: int, config: ValenceConfig) -> float:
    # Only reached when three predecessors exist (i >= 3).
    w = lower
    behind = [
        f"{w[i-1]} {w[i]}",
        f"{w[i-2]} {w[i-1]} {w[i]}",
        f"{w[i-2]} {w[i-1]}",
        f"{w[i-3]} {w[i-2]} {w[i-1]}",
        f"{w[i-3]} {w[i-2]}",
    ]
    for gram in behind:
        if gram in config.special_cases:
            valence = config.special_cases[gram]
            break
    n = len(w)
    if i + 1 < n:
        ahead = f"{w[i]} {w[i+1]}"
        if ahead in config.special_cases:
            valence = config.special_cases[ahead]
    if i + 2 < n:
        ahead = f"{w[i]} {w[i+1]} {w[i+2]}"
        if ahead in config.special_cases:
            valence = config.special_cases[ahead]
    for gram in (behind[3], behind[4], behind[2]):
        if gram in config.boosters:
            valence += config.boosters[gram]
    return valence


def _least_adjust(valence: float, lower: list[str], i: int, entries: Mapping[str, float],
                  config: ValenceConfig) -> float:
    if i > 1 and lower[i - 1] == "least" and lower[i - 1] not in entries:
        if lower[i - 2] not in ("at", "very"):
            valence *= config.negation_factor
    elif i == 1 and lower[0] == "least" and lower[0] not in entries:
        valence *= config.negation_factor
    return valence


def _hit_valence(i: int, tokens: list[str], lower: list[str], caps_contrast: bool,
                 entries: Mapping[str, float], config: ValenceConfig) -> float:
    lowered = lower[i]
    valence = entries[lowered]
    n = len(tokens)

    # "no" negates an adjacent lexicon item instead of scoring itself.
    if lowered == "no" and i + 1 < n and lower[i + 1] in entries:
        valence = 0.0
    if (i >= 1 and lower[i - 1] == "no") \
            or (i >= 2 and lower[i - 2] == "no") \
            or (i >= 3 and lower[i - 3] == "no" and lower[i - 1] in ("or", "nor")):
        valence = entries[lowered] * config.negation_factor

    if caps_contrast and tokens[i].isupper():
        valence += config.caps_boost if valence > 0 else -config.caps_boost

    damping = (1.0, config.damping_two_back, config.damping_three_back)
    for back in (1, 2, 3):
        j = i - back
        if j < 0:
            break
        if lower[j] in entries:
            continue
        scalar = _booster_scalar(tokens[j], lower[j], valence, caps_contrast, config)
        if scalar != 0.0:
            scalar *= damping[back - 1]
        valence += scalar
        valence = _negation_adjust(valence, lower, back, i, config)
        if back == 3:
            valence = _idiom_adjust(valence, lower, i, config)

    return _least_adjust(valence, lower, i, entries, config)


def _apply_contrast(lower: list[str], valences: list[float], config: ValenceConfig) -> None:
    try:
        pivot = lower.index("but")
    except ValueError:
        return
    for j in range(pivot):
        valences[j] *= config.but_weight_before
    for j in range(pivot + 1, len(valences)):
        valences[j] *= config.but_weight_after


def _punctuation_emphasis(text: str, config: ValenceConfig) -> float:
    emphasis = min(text.count("!"), config.max_exclamations) * config.exclamation_increment
    question_marks = text.count("?")
    if question_marks > 1:
        if question_marks <= config.question_mark_step_limit:
            emphasis += question_marks * config.question_mark_step
        else:
            emphasis += config.question_mark_cap
    return emphasis


def score(text: str, lexicon: Lexicon, config: ValenceConfig = DEFAULT_CONFIG) -> ValenceScore:
    """Score one text; pure function of (text, lexicon, config)."""
    tokens = _tokens(text)
    if not tokens:
        return ValenceScore(pos=0.0, neg=0.0, neu=1.0, compound=0.0)
    lower = [t.lower() for t in tokens]
    caps_contrast = _caps_contrast(tokens)
    entries = lexicon.entries
    boosters = config.boosters
    n = len(tokens)

    valences: list[float] = []
    for i in range(n):
        lowered = lower[i]
        if lowered in boosters or (
                lowered == "kind" and i + 1 < n and lower[i + 1] == "of"):
            valences.append(0.0)
        elif lowered in entries:
            valences.append(_hit_valence(i, tokens, lower, caps_contrast, entries, config))
        else:
            valences.append(0.0)

    _apply_contrast(lower, valences, config)

    total = float(sum(valences))
    emphasis = _punctuation_emphasis(text, config)
    if total > 0:
        total += emphasis
    elif total < 0:
        total -= emphasis
    compound = normalize_sum(total, config.normalization_alpha)

    pos_mass = 0.0
    neg_mass = 0.0
    neutral_count = 0
    for v in valences:
        if v > 0:
            pos_mass += v + 1.0  # +-1 keeps neutral tokens commensurate
        elif v < 0:
            neg_mass += v - 1.0
        else:
            neutral_count += 1
    if pos_mass > abs(neg_mass):
        pos_mass += emphasis
    elif pos_mass < abs(neg_mass):
        neg_mass -= emphasis
    mass = pos_mass + abs(neg_mass) + neutral_count
    return ValenceScore(
        pos=abs(pos_mass / mass),
        neg=abs(neg_mass / mass),
        neu=abs(neutral_count / mass),
        compound=compound,
    )


def classify(compound: float) -> Polarity:
    """Three-way polarity from the compound thresholds."""
    if not -1.0 <= compound <= 1.0:
        raise ValueError(f"compound out of range: {compound}")
    if compound <= -0.05:
        return Polarity.NEGATIVE
    if compound >= 0.05:
        return Polarity.POSITIVE
    return Polarity.NEUTRAL
