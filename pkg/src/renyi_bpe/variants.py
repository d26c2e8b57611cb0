"""Adversarial decorations of a trained BPE tokenizer.

* Random-Drop: after ordinary BPE, recursively split every output token that
  belongs to a seeded random drop set back into its merge operands.
* Duplication: each occurrence of a top-N token is replaced by one of ``k``
  same-surface duplicates chosen uniformly per occurrence.
* Inflation: never-produced entries are appended to the vocabulary.

All three leave the base tokenizer untouched and are fully deterministic
given their seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bpe import Tokenizer, TokenizedCorpus
from .corpus import RESERVED_MARKER
from .errors import HyperparameterError
from .keyed_random import keyed_index, keyed_sample


@dataclass(frozen=True)
class RandomDropSpec:
    N: int
    k: int
    seed: int
    drop_set: frozenset[str]


@dataclass(frozen=True)
class DuplicationSpec:
    N: int
    k: int
    seed: int
    duplicated: frozenset[str]


@dataclass(frozen=True)
class InflationSpec:
    extra_tokens: int


def frequency_ranking(token_counts: Mapping[str, int], universe: Iterable[str] = ()) -> list[str]:
    """Tokens by descending count, ties broken lexicographically.

    Members of ``universe`` that never occur are ranked after all surfaced
    tokens with count 0.
    """
    tokens = set(token_counts) | set(universe)
    return sorted(tokens, key=lambda t: (-token_counts.get(t, 0), t))


def select_drop_set(tokenized: TokenizedCorpus, base: Tokenizer, N: int, k: int, seed: int) -> frozenset[str]:
    """Draw ``k`` non-atomic subwords from the ``N`` most frequent vocabulary entries."""
    V = base.vocab
    if not 1 <= k <= N <= len(V):
        raise HyperparameterError(f"need 1 <= k <= N <= |V|, got k={k}, N={N}, |V|={len(V)}")
    top = frequency_ranking(tokenized.token_counts, V)[:N]
    pool = [t for t in top if base.parents(t) is not None]
    if len(pool) < k:
        raise HyperparameterError(
            f"only {len(pool)} non-atomic subwords among the top {N}; cannot draw k={k} "
            f"(short by {k - len(pool)})")
    return frozenset(keyed_sample(pool, k, seed, "random-drop"))


def decompose(spec: RandomDropSpec | frozenset[str], base: Tokenizer, token: str) -> tuple[str, ...]:
    """Split ``token`` into merge operands while the pieces are in the drop set."""
    drop_set = spec.drop_set if isinstance(spec, RandomDropSpec) else spec
    if token not in drop_set:
        return (token,)
    parents = base.parents(token)
    assert parents is not None, f"atomic token {token!r} in drop set"
    left, right = parents
    return decompose(drop_set, base, left) + decompose(drop_set, base, right)


def random_drop_tokenize(spec: RandomDropSpec, base: Tokenizer, word: str, unknown: str = "reject") -> tuple[str, ...]:
    out: list[str] = []
    for tok in base.tokenize_word(word, unknown):
        out.extend(decompose(spec, base, tok))
    return tuple(out)


class RandomDropTokenizer:
    kind = "random_drop"

    def __init__(self, base: Tokenizer, spec: RandomDropSpec):
        for t in spec.drop_set:
            if base.parents(t) is None:
                raise HyperparameterError(f"drop set member {t!r} is atomic or not a merge result")
        self.base = base
        self.spec = spec
        self._cache: dict[str, tuple[str, ...]] = {}

    @classmethod
    def build(cls, base: Tokenizer, tokenized: TokenizedCorpus, N: int, k: int, seed: int) -> "RandomDropTokenizer":
        D = select_drop_set(tokenized, base, N, k, seed)
        return cls(base, RandomDropSpec(N, k, seed, D))

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    @property
    def alphabet(self):
        return self.base.alphabet

    @property
    def vocab_size(self) -> int:
        return self.base.vocab_size - len(self.spec.drop_set)

    @property
    def hyperparameters(self) -> dict:
        return {"N": self.spec.N, "k": self.spec.k, "seed": self.spec.seed}

    def tokenize_word(self, word: str, unknown: str = "reject") -> tuple[str, ...]:
        cached = self._cache.get(word)
        if cached is None:
            cached = random_drop_tokenize(self.spec, self.base, word, unknown)
            if unknown == "reject":
                self._cache[word] = cached
        return cached

    def tokenize_occurrence(self, word, line, index, unknown="reject"):
        return self.tokenize_word(word, unknown)


def select_duplication_set(tokenized: TokenizedCorpus, N: int) -> frozenset[str]:
    """The ``N`` most frequent surfaced tokens (lexicographic tie-break)."""
    distinct = len(tokenized.token_counts)
    if not 1 <= N <= distinct:
        raise HyperparameterError(f"need 1 <= N <= {distinct} distinct surfaced tokens, got N={N}")
    return frozenset(frequency_ranking(tokenized.token_counts)[:N])


def render_decorated(surface: str, index: int) -> str:
    return surface if index == 0 else f"{surface}{RESERVED_MARKER}{index}"


def parse_decorated(text: str) -> tuple[str, int]:
    surface, sep, idx = text.rpartition(RESERVED_MARKER)
    if not sep:
        return text, 0
    return surface, int(idx)


def duplication_tokenize(spec: DuplicationSpec, base: Tokenizer, word: str,
                         position_key: tuple[int, int], unknown: str = "reject") -> tuple[tuple[str, int], ...]:
    """Base tokenization with each duplicated token tagged by a keyed index in ``1..k``.

    Tokens outside the duplicated set carry index 0.
    """
    line, widx = position_key
    out = []
    for pos, tok in enumerate(base.tokenize_word(word, unknown)):
        if tok in spec.duplicated:
            out.append((tok, keyed_index(spec.seed, "duplication", spec.k, line, widx, pos)))
        else:
            out.append((tok, 0))
    return tuple(out)


def renormalize(seq: Sequence[tuple[str, int] | str]) -> tuple[str, ...]:
    """Strip duplicate indices, recovering the base surface sequence."""
    return tuple(t[0] if isinstance(t, tuple) else parse_decorated(t)[0] for t in seq)


class DuplicationTokenizer:
    kind = "duplication"

    def __init__(self, base: Tokenizer, spec: DuplicationSpec):
        if spec.k < 2:
            raise HyperparameterError(f"duplication factor must be >= 2, got {spec.k}")
        unknown = set(spec.duplicated) - base.vocab
        if unknown:
            raise HyperparameterError(f"duplicated tokens not in the vocabulary: {sorted(unknown)[:5]}")
        self.base = base
        self.spec = spec

    @classmethod
    def build(cls, base: Tokenizer, tokenized: TokenizedCorpus, N: int, k: int, seed: int) -> "DuplicationTokenizer":
        if not 1 <= N <= base.vocab_size or k < 2:
            raise HyperparameterError(f"need 1 <= N <= |V| and k >= 2, got N={N}, k={k}")
        X = select_duplication_set(tokenized, N)
        return cls(base, DuplicationSpec(N, k, seed, X))

    @property
    def alphabet(self):
        return self.base.alphabet

    @property
    def vocab_size(self) -> int:
        # Each duplicated token is replaced by k copies.
        return self.base.vocab_size + (self.spec.k - 1) * len(self.spec.duplicated)

    @property
    def hyperparameters(self) -> dict:
        return {"N": self.spec.N, "k": self.spec.k, "seed": self.spec.seed}

    def tokenize_decorated(self, word: str, position_key: tuple[int, int], unknown: str = "reject"):
        return duplication_tokenize(self.spec, self.base, word, position_key, unknown)

    def tokenize_occurrence(self, word, line, index, unknown="reject"):
        return tuple(render_decorated(s, i) for s, i in self.tokenize_decorated(word, (line, index), unknown))


def inflate_vocab(base: Tokenizer, extra: int) -> Tokenizer:
    """Copy of ``base`` with ``extra`` synthetic vocabulary entries no merge can produce."""
    if extra < 0:
        raise HyperparameterError("extra must be non-negative")
    if extra == 0:
        return base
    taken = base.vocab
    fresh = []
    i = len(base.padding)
    while len(fresh) < extra:
        name = f"<unused:{i}>"
        if name not in taken:
            fresh.append(name)
        i += 1
    return Tokenizer(base.alphabet, base.merges, base.padding + tuple(fresh))
