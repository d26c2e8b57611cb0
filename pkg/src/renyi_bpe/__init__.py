"""BPE tokenizers, adversarial variants and intrinsic metrics (Renyi efficiency,
percentile frequency, sequence length)."""

__version__ = "0.1.0"

from .analysis import (check_duplication_renyi, compare_tokenizers, drop_condition,
                       duplicate_distribution, example_table, predict_duplication_shannon, verify)
from .bpe import (Merge, TokenizedCorpus, Tokenizer, apply_merge, reference_tokenize_word,
                  tokenize_corpus, tokenize_word, train_bpe)
from .corpus import Corpus, load_corpora, load_corpus, word_to_characters
from .errors import (CorpusError, HyperparameterError, LabError, ModelFormatError,
                     UnknownCharacterError)
from .metrics import (MetricReport, UnigramDistribution, percentile_freq, renyi_efficiency,
                      renyi_entropy, score, shannon_entropy, tokens_per_line, unigram_distribution)
from .model_io import load_model, save_model
from .variants import (DuplicationSpec, DuplicationTokenizer, InflationSpec, RandomDropSpec,
                       RandomDropTokenizer, decompose, duplication_tokenize, inflate_vocab,
                       random_drop_tokenize, renormalize, select_drop_set, select_duplication_set)
