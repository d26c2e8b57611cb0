"""
Counterexample tokenizers on the desk corpus
============================================

Train a 4k-merge BPE on the bundled corpus, then build the three degraded
variants and compare their intrinsic metrics with the baseline. Takes a few
seconds.
"""

from pathlib import Path

from renyi_bpe import (DuplicationTokenizer, RandomDropTokenizer, compare_tokenizers, inflate_vocab,
                       load_corpus, tokenize_corpus, train_bpe)

corpus = load_corpus(Path(__file__).resolve().parents[1] / "data" / "desk_corpus.txt")
print(f"{len(corpus.lines)} lines, {corpus.total_words} words, {len(corpus.word_counts)} types")

base = train_bpe(corpus, 4000)
tokenized = tokenize_corpus(base, corpus)

# Random-Drop: split 500 of the 2000 most frequent subwords back into their parts.
drops = [RandomDropTokenizer.build(base, tokenized, 2000, 500, seed) for seed in (1, 2, 3)]
# Duplication: every occurrence of a top-100 token becomes one of 3 copies.
dup = DuplicationTokenizer.build(base, tokenized, 100, 3, 1)

report = compare_tokenizers(corpus, base, drops + [dup])
print(report.to_table())

# Inflation only shows up when unused vocabulary entries count toward |V|.
print()
print(compare_tokenizers(corpus, base, [inflate_vocab(base, 1000)], accounting="full-vocab").to_table())
