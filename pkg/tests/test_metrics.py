import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from renyi_bpe import (Corpus, LabError, TokenizedCorpus, Tokenizer, UnigramDistribution,
                       percentile_freq, renyi_efficiency, renyi_entropy, score, shannon_entropy,
                       tokenize_corpus, tokens_per_line, unigram_distribution)
from renyi_bpe.errors import HyperparameterError


def dist(probs):
    return UnigramDistribution.from_probs(probs)


def renyi_oracle(probs, alpha):
    # Plain-loop reference, independent of the numpy path.
    probs = [p for p in probs if p > 0]
    if alpha == 1:
        return -sum(p * math.log(p, 2) for p in probs)
    return math.log(sum(p ** alpha for p in probs), 2) / (1 - alpha)


counts_st = st.lists(st.integers(1, 50), min_size=1, max_size=12)


def from_counts(counts):
    return unigram_distribution({f"t{i}": c for i, c in enumerate(counts)})


# unigram distribution ----------------------------------------------------

def test_unigram_half_half():
    d = unigram_distribution({"a": 2, "b": 2})
    assert d.probs == {"a": 0.5, "b": 0.5} and d.total == 4 and d.support_size == 2


def test_unigram_the_two_percent():
    d = unigram_distribution({"the": 2, "rest": 98})
    assert d.probs["the"] == pytest.approx(0.02)


def test_full_vocab_counts_unused_entry():
    surfaced = unigram_distribution({"a": 3, "b": 1})
    full = unigram_distribution({"a": 3, "b": 1}, "full-vocab", vocab=3)
    assert full.support_size == surfaced.support_size + 1
    assert full.probs == surfaced.probs


def test_full_vocab_needs_vocab():
    with pytest.raises(HyperparameterError):
        unigram_distribution({"a": 1}, "full-vocab")


def test_empty_tokenization_rejected():
    with pytest.raises(LabError):
        unigram_distribution({})


@given(counts_st)
def test_probabilities_sum_to_one(counts):
    d = from_counts(counts)
    assert abs(math.fsum(d.probs.values()) - 1) <= 1e-12
    T = sum(counts)
    assert all(d.probs[f"t{i}"] == c / T for i, c in enumerate(counts))


# entropies ---------------------------------------------------------------

@pytest.mark.parametrize("probs, expected", [
    ((0.4, 0.3, 0.2, 0.1), 1.85),
    ((0.2, 0.2, 0.3, 0.2, 0.1), 2.25),
])
def test_shannon_published_examples(probs, expected):
    assert shannon_entropy(dist(probs)) == pytest.approx(expected, abs=0.005)


def test_shannon_uniform_four():
    assert shannon_entropy(dist([0.25] * 4)) == 2.0


@pytest.mark.parametrize("alpha, expected", [(3, 1.66), (0.5, 1.92)])
def test_renyi_published_examples(alpha, expected):
    assert renyi_entropy(dist((0.4, 0.3, 0.2, 0.1)), alpha) == pytest.approx(expected, abs=0.005)


@pytest.mark.parametrize("n", [2, 5, 17])
@pytest.mark.parametrize("alpha", [0.25, 1, 3, 7.5])
def test_renyi_uniform(n, alpha):
    assert renyi_entropy(dist([1 / n] * n), alpha) == pytest.approx(math.log2(n), abs=1e-12)


def test_renyi_rejects_nonpositive_alpha():
    with pytest.raises(HyperparameterError):
        renyi_entropy(dist([0.5, 0.5]), 0)


@given(counts_st, st.sampled_from([0.25, 0.5, 1, 1.5, 2, 3, 5]))
def test_renyi_matches_loop_oracle(counts, alpha):
    d = from_counts(counts)
    assert renyi_entropy(d, alpha) == pytest.approx(renyi_oracle(list(d.probs.values()), alpha), abs=1e-10)


@given(counts_st)
def test_renyi_limit_is_shannon(counts):
    d = from_counts(counts)
    h = shannon_entropy(d)
    for a in (1 - 1e-6, 1 + 1e-6):
        assert abs(renyi_entropy(d, a) - h) <= 1e-4


@given(counts_st)
def test_renyi_non_increasing_in_alpha(counts):
    d = from_counts(counts)
    grid = [0.1, 0.25, 0.5, 0.9, 1, 1.1, 2, 3, 5, 10]
    values = [renyi_entropy(d, a) for a in grid]
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))


@given(counts_st, st.sampled_from([0.5, 1, 3]))
def test_entropy_bounds(counts, alpha):
    d = from_counts(counts)
    assert -1e-12 <= renyi_entropy(d, alpha) <= math.log2(d.support_size) + 1e-9


@given(counts_st, st.integers(0, 11), st.integers(2, 10))
def test_duplication_entropy_law(counts, xi, k):
    d = from_counts(counts)
    x = f"t{xi % len(counts)}"
    split = {t: p for t, p in d.probs.items() if t != x}
    split.update({f"{x}_{i}": d.probs[x] / k for i in range(k)})
    gain = shannon_entropy(dist(split)) - shannon_entropy(d)
    assert gain == pytest.approx(d.probs[x] * math.log2(k), abs=1e-9)


@given(counts_st, st.randoms())
def test_metrics_permutation_invariant(counts, rnd):
    d = from_counts(counts)
    labels = list(d.probs)
    shuffled = labels[:]
    rnd.shuffle(shuffled)
    e = UnigramDistribution({n: d.probs[o] for o, n in zip(labels, shuffled)}, d.total, d.support_size)
    for a in (0.5, 1, 3):
        assert renyi_entropy(e, a) == pytest.approx(renyi_entropy(d, a), abs=1e-12)
    assert percentile_freq(e) == pytest.approx(percentile_freq(d), abs=1e-12)


# efficiency --------------------------------------------------------------

def test_efficiency_paper_table_convention():
    assert renyi_efficiency(dist((0.4, 0.3, 0.2, 0.1)), 3, "paper-table") == pytest.approx(1.20, abs=0.01)


def test_efficiency_decreases_for_ten_duplicates():
    probs = [0.04] * 10 + [0.3, 0.2, 0.1]
    assert renyi_efficiency(dist(probs), 3, "paper-table") == pytest.approx(0.93, abs=0.01)


@pytest.mark.parametrize("n", [2, 4, 100])
@pytest.mark.parametrize("alpha", [0.5, 1, 3])
def test_efficiency_uniform_is_one(n, alpha):
    assert renyi_efficiency(dist([1 / n] * n), alpha) == pytest.approx(1.0, abs=1e-12)


@given(counts_st, st.sampled_from([0.5, 1, 3]))
def test_consistent_efficiency_at_most_one(counts, alpha):
    assume(len(counts) >= 2)
    assert renyi_efficiency(from_counts(counts), alpha) <= 1 + 1e-12


def test_efficiency_needs_two_tokens():
    with pytest.raises(LabError):
        renyi_efficiency(dist([1.0]), 3)


def test_inflating_support_lowers_efficiency():
    counts = {"a": 5, "b": 3, "c": 2}
    base = renyi_efficiency(unigram_distribution(counts, "full-vocab", vocab=3))
    inflated = renyi_efficiency(unigram_distribution(counts, "full-vocab", vocab=1003))
    assert inflated < base


# percentile frequency ----------------------------------------------------

def test_percentile_whole_distribution():
    assert percentile_freq(dist((0.4, 0.3, 0.2, 0.1)), 0, 1) == 1.0


def test_percentile_uniform_ten():
    # band 0.3 < j <= 8.3 keeps ranks 1..8
    assert percentile_freq(dist([0.1] * 10)) == pytest.approx(0.8)


def test_percentile_exact_band_edges():
    # 0.03 * 100 must be exactly 3, so rank 3 is excluded and rank 83 included
    probs = [1 / 100] * 100
    assert percentile_freq(dist(probs)) == pytest.approx(0.80)


def test_percentile_full_vocab_ranks_unused_last():
    d = unigram_distribution({"a": 6, "b": 4}, "full-vocab", vocab=4)
    # n = 4: band 0 < j <= 2 holds both surfaced tokens
    assert percentile_freq(d, 0, 0.5) == pytest.approx(1.0)
    assert percentile_freq(d, 0.5, 1) == 0


@pytest.mark.parametrize("g1, g2", [(0.5, 0.5), (-0.1, 0.5), (0.2, 1.5)])
def test_percentile_invalid_bounds(g1, g2):
    with pytest.raises(HyperparameterError):
        percentile_freq(dist([0.5, 0.5]), g1, g2)


@given(counts_st, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_percentile_monotone_in_band(counts, a, b, c, e):
    lo, hi = sorted([a, b])
    wlo, whi = min(lo, c * lo), max(hi, hi + e * (1 - hi))
    assume(lo < hi)
    d = from_counts(counts)
    assert percentile_freq(d, wlo, whi) >= percentile_freq(d, lo, hi) - 1e-12


# tokens per line ---------------------------------------------------------

def _one_line(rendered):
    words = []
    for piece in rendered.split():
        if piece.startswith("-"):
            words[-1].append(piece[1:])
        else:
            words.append([piece])
    return TokenizedCorpus.from_line_words([words])


@pytest.mark.parametrize("line, expected", [
    ("the quick fox jump -ed", 5),
    ("th -e br -own fox j -u -m -ped", 9),
])
def test_tokens_per_line_published(line, expected):
    assert tokens_per_line(_one_line(line)) == expected


def test_tokens_per_line_average():
    tc = TokenizedCorpus.from_line_words([[("a",), ("b",), ("c",)], [("a", "b"), ("c", "d", "e")]])
    assert tokens_per_line(tc) == 4.0


def test_tokens_per_line_needs_lines():
    with pytest.raises(LabError):
        tokens_per_line(TokenizedCorpus.from_line_words([]))


# report ------------------------------------------------------------------

def test_score_report_is_finite(small_tokenizer, small_corpus):
    r = score(tokenize_corpus(small_tokenizer, small_corpus))
    for v in (r.shannon_entropy, r.renyi_entropy, r.renyi_efficiency, r.percentile_freq, r.tokens_per_line):
        assert math.isfinite(v)
    assert r.alpha == 3 and (r.gamma1, r.gamma2) == (0.03, 0.83)
    assert 0 < r.renyi_efficiency <= 1


def test_score_full_percentile_band():
    tc = tokenize_corpus(Tokenizer("ab", []), Corpus.from_lines(["ab ba a"]))
    assert score(tc, percentiles=(0, 1)).percentile_freq == 1.0
