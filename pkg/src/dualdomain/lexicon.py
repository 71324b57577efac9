"""Word-list sentiment lexicon.

File format: one word per line, grouped under ``positive:`` and
``negative:`` section headers.  A small built-in list is used when no file
is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_POSITIVE = (
    "good", "great", "hope", "win", "safe", "cure", "relief", "strong",
)
DEFAULT_NEGATIVE = (
    "bad", "fear", "scam", "fail", "hoax", "crisis", "panic", "weak",
)


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str]
    negative: frozenset[str]

    def score(self, tokens: list[str]) -> tuple[float, float, float]:
        """(signed score, positive proportion, negative proportion)."""
        if not tokens:
            return 0.0, 0.0, 0.0
        pos = sum(1 for t in tokens if t in self.positive)
        neg = sum(1 for t in tokens if t in self.negative)
        denom = max(1, len(tokens))
        return (pos - neg) / denom, pos / denom, neg / denom


def default_lexicon() -> SentimentLexicon:
    return SentimentLexicon(frozenset(DEFAULT_POSITIVE), frozenset(DEFAULT_NEGATIVE))


def parse_lexicon(text: str) -> SentimentLexicon:
    positive: set[str] = set()
    negative: set[str] = set()
    current: set[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip().lower()
        if not line or line.startswith("#"):
            continue
        if line == "positive:":
            current = positive
        elif line == "negative:":
            current = negative
        elif line.endswith(":"):
            raise ValueError(f"lexicon line {lineno}: unknown section '{line}'")
        elif current is None:
            raise ValueError(f"lexicon line {lineno}: word before any section header")
        else:
            current.add(line)
    return SentimentLexicon(frozenset(positive), frozenset(negative))


def load_lexicon(path) -> SentimentLexicon:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lexicon(fh.read())
