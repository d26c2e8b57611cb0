from pathlib import Path

import pytest

from renyi_bpe import Corpus, Tokenizer, load_corpus, tokenize_corpus, train_bpe

DESK_CORPUS = Path(__file__).resolve().parents[1] / "data" / "desk_corpus.txt"

# Lines printed by test_acceptance.py, one per criterion.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def desk_corpus() -> Corpus:
    return load_corpus(DESK_CORPUS)


@pytest.fixture(scope="session")
def desk_tokenizer(desk_corpus) -> Tokenizer:
    return train_bpe(desk_corpus, 4000)


@pytest.fixture(scope="session")
def desk_tokenized(desk_tokenizer, desk_corpus):
    return tokenize_corpus(desk_tokenizer, desk_corpus)


@pytest.fixture(scope="session")
def small_corpus() -> Corpus:
    return load_corpus(DESK_CORPUS, max_lines=400)


@pytest.fixture(scope="session")
def small_tokenizer(small_corpus) -> Tokenizer:
    return train_bpe(small_corpus, 300)


@pytest.fixture
def encoding_tokenizer() -> Tokenizer:
    """Merges giving ENCODING -> ENCOD ING with ENCOD = (EN, COD) and COD = (CO, D)."""
    return Tokenizer(set("ENCODIG"), [("E", "N"), ("C", "O"), ("CO", "D"), ("EN", "COD"),
                                      ("I", "N"), ("IN", "G")])
