"""Intrinsic tokenization metrics over a unigram distribution.

Entropies are reported in bits. Efficiency divides by the log of the
support size, either in the same base (``"consistent"``) or, to match the
worked example values published with the duplication counterexample,
bits over nats (``"paper-table"``).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bpe import TokenizedCorpus
from .errors import HyperparameterError, LabError

ACCOUNTING_MODES = ("surfaced", "full-vocab")
CONVENTIONS = ("consistent", "paper-table")
DEFAULT_ALPHA = 3.0
DEFAULT_PERCENTILES = (0.03, 0.83)


@dataclass(frozen=True)
class UnigramDistribution:
    """Token probabilities plus the support size used for normalization.

    ``total`` is the token count ``T`` the probabilities came from, or
    ``None`` for distributions given directly as probabilities.
    """

    probs: Mapping[str, float]
    total: int | None
    support_size: int
    accounting_mode: str = "surfaced"

    @classmethod
    def from_probs(cls, probs: Sequence[float] | Mapping[str, float], support_size: int | None = None):
        """Build from raw probabilities; list inputs get labels ``w0, w1, ...``."""
        if not isinstance(probs, Mapping):
            width = len(str(max(len(probs) - 1, 0)))
            probs = {f"w{i:0{width}d}": float(p) for i, p in enumerate(probs)}
        probs = {t: float(p) for t, p in probs.items() if p > 0}
        if abs(math.fsum(probs.values()) - 1.0) > 1e-9:
            raise LabError("probabilities must sum to 1")
        surfaced = len(probs)
        mode = "surfaced" if support_size is None else "full-vocab"
        return cls(probs, None, surfaced if support_size is None else support_size, mode)

    def values(self) -> np.ndarray:
        return np.fromiter(self.probs.values(), dtype=float, count=len(self.probs))


def unigram_distribution(tokenized: TokenizedCorpus | Mapping[str, int], mode: str = "surfaced",
                         vocab=None) -> UnigramDistribution:
    """Relative frequencies of the tokens in ``tokenized``.

    In ``"full-vocab"`` mode ``vocab`` (an int, or anything with
    ``vocab_size``) sets the support size, counting never-used entries.
    """
    counts = tokenized.token_counts if isinstance(tokenized, TokenizedCorpus) else tokenized
    counts = {t: c for t, c in counts.items() if c > 0}
    T = sum(counts.values())
    if T < 1:
        raise LabError("empty tokenization has no unigram distribution")
    if mode not in ACCOUNTING_MODES:
        raise HyperparameterError(f"accounting mode must be one of {ACCOUNTING_MODES}")
    if mode == "surfaced":
        support = len(counts)
    else:
        if vocab is None:
            raise HyperparameterError("full-vocab accounting needs the vocabulary")
        support = vocab if isinstance(vocab, int) else vocab.vocab_size
        if support < len(counts):
            raise LabError(f"vocabulary size {support} is smaller than the {len(counts)} surfaced tokens")
    return UnigramDistribution({t: c / T for t, c in counts.items()}, T, support, mode)


def shannon_entropy(dist: UnigramDistribution) -> float:
    p = dist.values()
    return float(-np.sum(p * np.log2(p)))


def renyi_entropy(dist: UnigramDistribution, alpha: float) -> float:
    if alpha <= 0:
        raise HyperparameterError(f"alpha must be positive, got {alpha}")
    if alpha == 1:
        return shannon_entropy(dist)
    p = dist.values()
    return float(np.log2(np.sum(p ** alpha)) / (1 - alpha))


def renyi_efficiency(dist: UnigramDistribution, alpha: float = DEFAULT_ALPHA,
                     convention: str = "consistent") -> float:
    if dist.support_size < 2:
        raise LabError("efficiency is undefined for a support of fewer than 2 tokens")
    if convention == "consistent":
        denom = math.log2(dist.support_size)
    elif convention == "paper-table":
        denom = math.log(dist.support_size)
    else:
        raise HyperparameterError(f"convention must be one of {CONVENTIONS}")
    return renyi_entropy(dist, alpha) / denom


def _exact(x: float) -> Fraction:
    # Interpret user-facing decimals exactly so 0.03 * 100 is 3, not 3.0000000000000004.
    return Fraction(repr(float(x)))


def percentile_freq(dist: UnigramDistribution, gamma1: float = DEFAULT_PERCENTILES[0],
                    gamma2: float = DEFAULT_PERCENTILES[1]) -> float:
    """Probability mass of tokens whose frequency rank ``j`` satisfies
    ``gamma1 * n < j <= gamma2 * n``; ``n`` is the support size and ranks
    beyond the surfaced tokens hold zero mass."""
    if not 0 <= gamma1 < gamma2 <= 1:
        raise HyperparameterError(f"need 0 <= gamma1 < gamma2 <= 1, got {gamma1}, {gamma2}")
    n = dist.support_size
    lo, hi = _exact(gamma1) * n, _exact(gamma2) * n
    ranked = sorted(dist.probs.items(), key=lambda kv: (-kv[1], kv[0]))
    return math.fsum(p for j, (_, p) in enumerate(ranked, start=1) if lo < j <= hi)


def tokens_per_line(tokenized: TokenizedCorpus) -> float:
    if tokenized.source_line_count < 1:
        raise LabError("tokens per line is undefined for zero lines")
    return tokenized.total_tokens / tokenized.source_line_count


@dataclass(frozen=True)
class MetricReport:
    shannon_entropy: float
    renyi_entropy: float
    renyi_efficiency: float
    percentile_freq: float
    tokens_per_line: float
    effective_vocab: int
    total_tokens: int
    alpha: float
    gamma1: float
    gamma2: float
    accounting_mode: str
    convention: str
    log_base: str = "bits"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def score(tokenized: TokenizedCorpus, alpha: float = DEFAULT_ALPHA,
          percentiles: tuple[float, float] = DEFAULT_PERCENTILES, accounting: str = "surfaced",
          vocab=None, convention: str = "consistent") -> MetricReport:
    """Compute every metric for one tokenization under one parameter set."""
    dist = unigram_distribution(tokenized, accounting, vocab)
    g1, g2 = percentiles
    return MetricReport(
        shannon_entropy=shannon_entropy(dist),
        renyi_entropy=renyi_entropy(dist, alpha),
        renyi_efficiency=renyi_efficiency(dist, alpha, convention),
        percentile_freq=percentile_freq(dist, g1, g2),
        tokens_per_line=tokens_per_line(tokenized),
        effective_vocab=dist.support_size,
        total_tokens=tokenized.total_tokens,
        alpha=float(alpha),
        gamma1=float(g1),
        gamma2=float(g2),
        accounting_mode=accounting,
        convention=convention,
    )
