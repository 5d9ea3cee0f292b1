"""Accessibility keyword filtering with root-word matching.

A pattern matches where it starts at a word boundary, case-insensitively,
and the final word may continue past the pattern (root matching:
"handicap" matches "handicapped").  Multi-word patterns match across a
single whitespace run.  Matching is lexical only; deciding whether a hit
is actually about accessibility is the classifier's job.

The pattern set is compiled once into a character trie and shared
read-only across workers; each text is scanned in a single left-to-right
pass over its word boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .records import Review

_SENTENCE_BREAK = re.compile(r"[.!?]+(?=\s)|[.!?]+$")


class SearchListError(ValueError):
    pass


@dataclass(frozen=True)
class SearchList:
    """Ordered lowercase patterns, e.g. the shipped accessibility list."""

    patterns: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.patterns:
            raise SearchListError("empty search list")
        seen = set()
        for p in self.patterns:
            if p != p.lower():
                raise SearchListError(f"pattern not lowercase: {p!r}")
            if p in seen:
                raise SearchListError(f"duplicate pattern: {p!r}")
            seen.add(p)

    @classmethod
    def from_file(cls, path: str) -> "SearchList":
        """One pattern per line; ``#`` starts a comment."""
        patterns = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                term = line.split("#", 1)[0].strip()
                if term:
                    patterns.append(term.lower())
        return cls(tuple(patterns))


class _TrieNode:
    __slots__ = ("children", "terminal")

    def __init__(self) -> None:
        self.children: dict[str, _TrieNode] = {}
        self.terminal: str | None = None


class KeywordScanner:
    """Compiled multi-pattern matcher; immutable after construction."""

    def __init__(self, search_list: SearchList) -> None:
        self._root = _TrieNode()
        self.search_list = search_list
        for pattern in search_list.patterns:
            node = self._root
            for ch in pattern:
                node = node.children.setdefault(ch, _TrieNode())
            node.terminal = pattern

    def scan(self, text: str) -> list[tuple[str, int]]:
        """All (pattern, offset) matches, left to right.

        A match must begin at a word boundary; within a pattern a single
        space consumes one whitespace run of the text.
        """
        matches: list[tuple[str, int]] = []
        lowered = text.lower()
        n = len(lowered)
        for start in range(n):
            if not lowered[start].isalnum():
                continue
            if start > 0 and lowered[start - 1].isalnum():
                continue
            node = self._root
            i = start
            while True:
                if node.terminal is not None:
                    matches.append((node.terminal, start))
                if i >= n:
                    break
                ch = lowered[i]
                if ch.isspace():
                    nxt = node.children.get(" ")
                    if nxt is None:
                        break
                    while i < n and lowered[i].isspace():
                        i += 1
                    node = nxt
                else:
                    nxt = node.children.get(ch)
                    if nxt is None:
                        break
                    node = nxt
                    i += 1
        matches.sort(key=lambda m: m[1])
        return matches


@dataclass(frozen=True)
class AccessibilitySnippet:
    review_id: str
    poi_id: str
    matched_keywords: tuple[str, ...]
    targeted_text: str
    full_text: str


@dataclass
class FilterStats:
    scanned: int = 0
    matched: int = 0
    per_pattern: dict[str, int] = field(default_factory=dict)


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences, split on terminal punctuation followed
    by whitespace.  Abbreviation-blind by design; spans cover all of text."""
    spans = []
    start = 0
    for m in _SENTENCE_BREAK.finditer(text):
        end = m.end()
        spans.append((start, end))
        start = end
    if start < len(text):
        spans.append((start, len(text)))
    return spans


def chunk_targeted_text(review: Review,
                        matches: list[tuple[str, int]]) -> AccessibilitySnippet:
    """Reduce a matched review to the sentences that contain matches."""
    if not matches:
        raise ValueError("chunk_targeted_text requires at least one match")
    spans = split_sentences(review.text)
    offsets = [off for _, off in matches]
    hit_spans = [
        (a, b) for a, b in spans if any(a <= off < b for off in offsets)
    ]
    targeted = " ".join(review.text[a:b].strip() for a, b in hit_spans)
    keywords: list[str] = []
    for pattern, _ in matches:
        if pattern not in keywords:
            keywords.append(pattern)
    return AccessibilitySnippet(
        review_id=review.review_id,
        poi_id=review.poi_id,
        matched_keywords=tuple(keywords),
        targeted_text=targeted,
        full_text=review.text,
    )


def filter_corpus(reviews: Iterable[Review], search_list: SearchList,
                  stats: FilterStats | None = None
                  ) -> Iterator[AccessibilitySnippet]:
    """Yield one snippet per review with at least one keyword match."""
    if stats is None:
        stats = FilterStats()
    scanner = KeywordScanner(search_list)
    for review in reviews:
        stats.scanned += 1
        matches = scanner.scan(review.text)
        if not matches:
            continue
        stats.matched += 1
        for pattern in sorted({p for p, _ in matches}):
            stats.per_pattern[pattern] = stats.per_pattern.get(pattern, 0) + 1
        yield chunk_targeted_text(review, matches)
