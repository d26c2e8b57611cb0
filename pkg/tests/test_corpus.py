import pytest
from hypothesis import given, strategies as st

from renyi_bpe import Corpus, CorpusError, load_corpora, load_corpus, word_to_characters


def write(tmp_path, data, name="c.txt"):
    p = tmp_path / name
    p.write_bytes(data if isinstance(data, bytes) else data.encode("utf-8"))
    return p


def test_load_two_lines(tmp_path):
    c = load_corpus(write(tmp_path, "the cat\nthe dog"))
    assert c.lines == ("the cat", "the dog")
    assert c.word_counts == {"the": 2, "cat": 1, "dog": 1}
    assert c.total_words == 4


def test_empty_file(tmp_path):
    c = load_corpus(write(tmp_path, ""))
    assert c.lines == () and c.word_counts == {} and c.total_words == 0


def test_repetition(tmp_path):
    assert load_corpus(write(tmp_path, "a a a")).word_counts == {"a": 3}


def test_crlf_and_empty_lines(tmp_path):
    c = load_corpus(write(tmp_path, "a b\r\n\r\nc\r\n"))
    assert c.lines == ("a b", "", "c")
    assert c.total_words == 3


def test_unicode_whitespace_splits_words(tmp_path):
    c = load_corpus(write(tmp_path, "a b c\td"))
    assert c.word_counts == {"a": 1, "b": 1, "c": 1, "d": 1}


def test_max_lines(tmp_path):
    c = load_corpus(write(tmp_path, "a\nb\nc\n"), max_lines=2)
    assert c.lines == ("a", "b")


def test_invalid_utf8_reports_offset(tmp_path):
    with pytest.raises(CorpusError, match="byte offset 4"):
        load_corpus(write(tmp_path, b"abc \xff def"))


def test_reserved_marker_rejected(tmp_path):
    with pytest.raises(CorpusError, match="reserved marker"):
        load_corpus(write(tmp_path, "ok line\nthe#DUP3 cat"))


def test_missing_file(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "absent.txt")


def test_load_corpora_concatenates(tmp_path):
    a, b = write(tmp_path, "x y\n", "a.txt"), write(tmp_path, "y z\n", "b.txt")
    c = load_corpora([a, b])
    assert c.lines == ("x y", "y z")
    assert c.word_counts == {"x": 1, "y": 2, "z": 1}


@pytest.mark.parametrize("word, chars", [
    ("cow", ("c", "o", "w")),
    ("a", ("a",)),
    ("naïve", ("n", "a", "ï", "v", "e")),
])
def test_word_to_characters(word, chars):
    assert word_to_characters(word) == chars


def test_word_to_characters_rejects_empty():
    with pytest.raises(ValueError):
        word_to_characters("")


text_lines = st.lists(st.text(alphabet=st.characters(blacklist_categories=("Cs",),
                                                      blacklist_characters="\n\r#"), max_size=30),
                      max_size=10)


@given(text_lines)
def test_counts_are_whitespace_multiset(lines):
    c = Corpus.from_lines(lines)
    assert c.total_words == sum(c.word_counts.values())
    assert all(w and not any(ch.isspace() for ch in w) for w in c.word_counts)
    expanded = [w for w, n in c.word_counts.items() for _ in range(n)]
    assert sorted(expanded) == sorted(w for line in lines for w in line.split())


@given(text_lines, text_lines)
def test_concatenation_adds_counts(a, b):
    ca, cb = Corpus.from_lines(a), Corpus.from_lines(b)
    both = ca + cb
    for w in set(ca.word_counts) | set(cb.word_counts):
        assert both.word_counts[w] == ca.word_counts.get(w, 0) + cb.word_counts.get(w, 0)


def test_reload_is_identical(tmp_path):
    p = write(tmp_path, "some text here\nand more text\n")
    assert load_corpus(p) == load_corpus(p)
