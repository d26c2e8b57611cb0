"""Standard BPE: greedy merge training and merge-list tokenization."""

from __future__ import annotations

import heapq
import os
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, word_to_characters
from .errors import LabError, UnknownCharacterError

UNKNOWN_POLICIES = ("reject", "passthrough")


@dataclass(frozen=True)
class Merge:
    left: str
    right: str
    rank: int

    @property
    def result(self) -> str:
        return self.left + self.right

    @property
    def pair(self) -> tuple[str, str]:
        return (self.left, self.right)


class Tokenizer:
    """A trained BPE tokenizer: alphabet, merge list and the vocabulary they imply.

    ``padding`` holds synthetic entries added by vocabulary inflation; they
    are members of the vocabulary but no merge ever produces them.
    """

    kind = "bpe"

    def __init__(self, alphabet: Iterable[str], merges: Sequence[Merge | tuple[str, str]],
                 padding: Sequence[str] = ()):
        self.alphabet = frozenset(alphabet)
        self.merges = tuple(
            m if isinstance(m, Merge) else Merge(m[0], m[1], i) for i, m in enumerate(merges)
        )
        self.padding = tuple(padding)
        self._ranks = {m.pair: m.rank for m in self.merges}
        self._parents = {}
        self._validate()
        self._cache: dict[str, tuple[str, ...]] = {}

    def _validate(self):
        known = set(self.alphabet)
        for a in self.alphabet:
            if len(a) != 1:
                raise LabError(f"alphabet entry {a!r} is not a single character")
        if len(self._ranks) != len(self.merges):
            raise LabError("merge list contains a duplicate (left, right) pair")
        for i, m in enumerate(self.merges):
            if m.rank != i:
                raise LabError(f"merge ranks must be contiguous from 0, got {m.rank} at {i}")
            if m.left not in known or m.right not in known:
                raise LabError(f"merge {m.rank} ({m.left!r}, {m.right!r}) uses an unknown subword")
            # The first merge producing a surface defines its decomposition.
            self._parents.setdefault(m.result, m.pair)
            known.add(m.result)
        overlap = known.intersection(self.padding)
        if overlap or len(set(self.padding)) != len(self.padding):
            raise LabError("padding entries must be fresh and distinct")

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def __eq__(self, other):
        if not isinstance(other, Tokenizer) or type(other) is not type(self):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.merges == other.merges
                and self.padding == other.padding)

    def __hash__(self):
        return hash((self.alphabet, self.merges, self.padding))

    def __repr__(self):
        return f"Tokenizer(|alphabet|={len(self.alphabet)}, merges={len(self.merges)}, |V|={self.vocab_size})"

    @property
    def vocab(self) -> frozenset[str]:
        return frozenset(self.alphabet) | {m.result for m in self.merges} | set(self.padding)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def is_atomic(self, token: str) -> bool:
        return token in self.alphabet

    def parents(self, token: str) -> tuple[str, str] | None:
        """The merge operands that produced ``token``, or ``None`` for atomic tokens."""
        return self._parents.get(token)

    def rank(self, left: str, right: str) -> int | None:
        return self._ranks.get((left, right))

    def tokenize_word(self, word: str, unknown: str = "reject") -> tuple[str, ...]:
        cached = self._cache.get(word)
        if cached is None:
            cached = _segment(self, word, unknown)
            if unknown == "reject" or all(ch in self.alphabet for ch in word):
                self._cache[word] = cached
        return cached

    def tokenize_occurrence(self, word: str, line: int, index: int, unknown: str = "reject") -> tuple[str, ...]:
        return self.tokenize_word(word, unknown)


def apply_merge(merge: Merge, seq: Sequence[str]) -> tuple[str, ...]:
    """Replace adjacent ``(left, right)`` left to right, resuming after each new token."""
    out = []
    i, n = 0, len(seq)
    while i < n:
        if i + 1 < n and seq[i] == merge.left and seq[i + 1] == merge.right:
            out.append(merge.result)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return tuple(out)


def _check_alphabet(tokenizer: Tokenizer, word: str, unknown: str):
    if unknown not in UNKNOWN_POLICIES:
        raise ValueError(f"unknown-character policy must be one of {UNKNOWN_POLICIES}")
    if unknown == "reject":
        for ch in word:
            if ch not in tokenizer.alphabet:
                raise UnknownCharacterError(word, ch)


def _segment(tokenizer: Tokenizer, word: str, unknown: str) -> tuple[str, ...]:
    # Jump straight to the lowest-ranked merge that is present and later than
    # the last one applied; every merge skipped over would have been a no-op
    # in the rank-order scan of reference_tokenize_word.
    _check_alphabet(tokenizer, word, unknown)
    seq = word_to_characters(word)
    ranks = tokenizer._ranks
    last = -1
    while len(seq) > 1:
        best = None
        for pair in zip(seq, seq[1:]):
            r = ranks.get(pair)
            if r is not None and r > last and (best is None or r < best):
                best = r
        if best is None:
            break
        seq = apply_merge(tokenizer.merges[best], seq)
        last = best
    return seq


def tokenize_word(tokenizer: Tokenizer, word: str, unknown: str = "reject") -> tuple[str, ...]:
    """Tokenize one word with the merge list. Out-of-alphabet characters either
    raise :class:`UnknownCharacterError` (``"reject"``) or pass through as
    single-character tokens (``"passthrough"``)."""
    return tokenizer.tokenize_word(word, unknown)


def reference_tokenize_word(tokenizer: Tokenizer, word: str, unknown: str = "reject") -> tuple[str, ...]:
    """Apply every merge in rank order to the character sequence, one pass each.

    Slow (linear in the merge count per word); kept as the oracle for the
    fast path.
    """
    _check_alphabet(tokenizer, word, unknown)
    seq = word_to_characters(word)
    for merge in tokenizer.merges:
        if len(seq) == 1:
            break
        seq = apply_merge(merge, seq)
    return seq


def _pair_counts(seq):
    return Counter(zip(seq, seq[1:]))


def train_bpe(corpus: Corpus, num_merges: int) -> Tokenizer:
    """Learn up to ``num_merges`` merges greedily from word frequencies.

    Pair frequency counts every adjacent position (overlaps included) weighted
    by word count. Ties go to the lexicographically smallest merged string,
    then the smallest (left, right). A pair whose merged string is already in
    the vocabulary is never selected, so every vocabulary entry has exactly one
    decomposition. Training stops early once the best pair occurs fewer than
    twice.
    """
    if corpus.total_words < 1:
        raise LabError("cannot train on an empty corpus")
    if num_merges < 0:
        raise ValueError("num_merges must be non-negative")

    words = sorted(corpus.word_counts)
    freqs = [corpus.word_counts[w] for w in words]
    seqs = [word_to_characters(w) for w in words]
    alphabet = {ch for w in words for ch in w}

    pair_counts: Counter = Counter()
    where: dict[tuple[str, str], set[int]] = defaultdict(set)
    for i, seq in enumerate(seqs):
        for pair, c in _pair_counts(seq).items():
            pair_counts[pair] += c * freqs[i]
            where[pair].add(i)

    heap = [(-c, a + b, a, b) for (a, b), c in pair_counts.items()]
    heapq.heapify(heap)
    merges: list[Merge] = []
    vocab = set(alphabet)

    while len(merges) < num_merges and heap:
        neg, _, a, b = heapq.heappop(heap)
        current = pair_counts.get((a, b), 0)
        if -neg != current:
            if current > 0:
                heapq.heappush(heap, (-current, a + b, a, b))
            continue
        if current < 2:
            break
        if a + b in vocab:
            continue
        merge = Merge(a, b, len(merges))
        merges.append(merge)
        vocab.add(merge.result)
        touched = set()
        for i in sorted(where.pop((a, b), ())):
            old = seqs[i]
            new = apply_merge(merge, old)
            if new == old:
                continue
            f = freqs[i]
            for pair, c in _pair_counts(old).items():
                pair_counts[pair] -= c * f
                touched.add(pair)
            for pair, c in _pair_counts(new).items():
                pair_counts[pair] += c * f
                where[pair].add(i)
                touched.add(pair)
            seqs[i] = new
        for pair in touched:
            c = pair_counts[pair]
            if c <= 0:
                del pair_counts[pair]
            else:
                heapq.heappush(heap, (-c, pair[0] + pair[1], pair[0], pair[1]))
    return Tokenizer(alphabet, merges)


@dataclass(frozen=True)
class TokenizedCorpus:
    """Per-line, per-word token sequences plus aggregate unigram counts."""

    line_words: tuple[tuple[tuple[str, ...], ...], ...] = field(repr=False)
    token_counts: Mapping[str, int] = field(repr=False)
    total_tokens: int
    source_line_count: int
    unknown_tokens: frozenset[str] = frozenset()

    @classmethod
    def from_line_words(cls, line_words, unknown_tokens=frozenset()) -> "TokenizedCorpus":
        line_words = tuple(tuple(tuple(w) for w in line) for line in line_words)
        counts = Counter()
        for line in line_words:
            for toks in line:
                counts.update(toks)
        return cls(line_words, dict(counts), sum(counts.values()), len(line_words),
                   frozenset(unknown_tokens))

    @property
    def line_tokens(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(t for toks in line for t in toks) for line in self.line_words)

    def render_lines(self) -> list[str]:
        """Human-readable lines: non-initial subwords of a word get a ``-`` prefix."""
        return [" ".join(render_word(toks) for toks in line) for line in self.line_words]


def render_word(tokens: Sequence[str]) -> str:
    return " ".join(t if i == 0 else "-" + t for i, t in enumerate(tokens))


def _tokenize_lines(tokenizer, lines, start, unknown):
    out = []
    unknown_seen = set()
    for offset, line in enumerate(lines):
        words = []
        for j, word in enumerate(line.split()):
            try:
                toks = tokenizer.tokenize_occurrence(word, start + offset, j, unknown)
            except UnknownCharacterError as exc:
                raise UnknownCharacterError(exc.word, exc.char, start + offset) from None
            if unknown == "passthrough":
                unknown_seen.update(ch for ch in word if ch not in tokenizer.alphabet)
            words.append(toks)
        out.append(tuple(words))
    return out, unknown_seen


def _tokenize_chunk(args):
    return _tokenize_lines(*args)


def tokenize_corpus(tokenizer, corpus: Corpus, workers: int = 1, unknown: str = "reject",
                    chunk_lines: int = 2000) -> TokenizedCorpus:
    """Tokenize every word of every line independently.

    ``tokenizer`` is anything exposing ``tokenize_occurrence`` and
    ``alphabet`` (the base tokenizer or one of its variants). With
    ``workers > 1`` lines are split into chunks and processed in child
    processes; the result is identical to the sequential run.
    """
    lines = corpus.lines
    if workers is None or workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1 or len(lines) <= chunk_lines:
        line_words, unknown_seen = _tokenize_lines(tokenizer, lines, 0, unknown)
    else:
        jobs = [(tokenizer, lines[s:s + chunk_lines], s, unknown)
                for s in range(0, len(lines), chunk_lines)]
        line_words, unknown_seen = [], set()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part, seen in pool.map(_tokenize_chunk, jobs):
                line_words.extend(part)
                unknown_seen |= seen
    return TokenizedCorpus.from_line_words(line_words, unknown_seen)
