"""Corpus ingestion and word-frequency tables."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CorpusError

#: Reserved marker used to render duplicated tokens; raw text must not contain it.
RESERVED_MARKER = "#DUP"


@dataclass(frozen=True)
class Corpus:
    """Lines of whitespace-pretokenized text plus their word counts.

    Instances are immutable; build them with :meth:`from_lines` so that the
    counts are derived rather than supplied.
    """

    lines: tuple[str, ...]
    word_counts: Mapping[str, int] = field(repr=False)
    total_words: int

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Corpus":
        lines = tuple(lines)
        for i, line in enumerate(lines):
            if RESERVED_MARKER in line:
                raise CorpusError(f"line {i + 1} contains the reserved marker {RESERVED_MARKER!r}")
        counts = Counter()
        for line in lines:
            counts.update(line.split())
        return cls(lines=lines, word_counts=dict(counts), total_words=sum(counts.values()))

    def line_words(self, index: int) -> list[str]:
        return self.lines[index].split()

    def __add__(self, other: "Corpus") -> "Corpus":
        if not isinstance(other, Corpus):
            return NotImplemented
        return Corpus.from_lines(self.lines + other.lines)

    def __len__(self) -> int:
        return len(self.lines)


def _decode(data: bytes, path) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc


def split_lines(text: str) -> list[str]:
    """Split on LF only, stripping a trailing CR; a final newline adds no line."""
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [l[:-1] if l.endswith("\r") else l for l in lines]


def load_corpus(path: str | os.PathLike, max_lines: int | None = None) -> Corpus:
    """Read a UTF-8 text file into a :class:`Corpus`.

    ``max_lines`` caps ingestion to the first lines of the file. Empty lines
    are kept but contribute no words.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc.strerror or exc}") from exc
    lines = split_lines(_decode(data, path))
    if max_lines is not None:
        if max_lines < 0:
            raise CorpusError("max_lines must be non-negative")
        lines = lines[:max_lines]
    try:
        return Corpus.from_lines(lines)
    except CorpusError as exc:
        raise CorpusError(f"{path}: {exc}") from None


def load_corpora(paths: Sequence[str | os.PathLike], max_lines: int | None = None) -> Corpus:
    """Load several files and concatenate them in order (source+target style)."""
    if not paths:
        raise CorpusError("no corpus paths given")
    lines: list[str] = []
    for p in paths:
        lines.extend(load_corpus(p, max_lines).lines)
    return Corpus.from_lines(lines)


def word_to_characters(word: str) -> tuple[str, ...]:
    """Split a word into its Unicode scalar values."""
    if not word:
        raise ValueError("word must be non-empty")
    return tuple(word)
