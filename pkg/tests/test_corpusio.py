import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppmgpn.corpusio import (ParallelCorpus, ToyG2PRules, atomic_write_text,
                             phonemize_external, read_lines, toy_g2p, words, write_lines)
from ppmgpn.errors import CorpusError, ExternalCommandError
from conftest import STUBS


def test_toy_g2p_basic():
    rules = ToyG2PRules([("a", "ɑ"), ("b", "b")])
    assert toy_g2p(rules, "") == ""
    assert toy_g2p(rules, "ab") == "ɑ b"
    assert toy_g2p(rules, "ab ba") == "ɑ b | b ɑ"


def test_leftmost_longest_overlap():
    rules = ToyG2PRules([("ab", "x"), ("a", "y"), ("b", "z")])
    # both parses exist; the policy picks the one-token parse
    parses = {("x",), ("y", "z")}
    assert tuple(rules.word("ab")) in parses
    assert toy_g2p(rules, "ab") == "x"


def test_uncovered_character():
    with pytest.raises(CorpusError, match="no rule covers 'c'"):
        toy_g2p(ToyG2PRules([("a", "a")]), "ac")


def test_rules_round_trip(tmp_path):
    rules = ToyG2PRules([("sh", "ʃ"), ("a", "a"), ("x", "k s")])
    rules.write(tmp_path / "r.tsv")
    assert ToyG2PRules.read(tmp_path / "r.tsv").rules == rules.rules


def test_words_split():
    assert words("a b | c") == [["a", "b"], ["c"]]
    assert words("") == []


def test_parallel_counts():
    with pytest.raises(CorpusError):
        ParallelCorpus("qa", ["a", "b"], ["a"])


def test_mixed_line_endings(tmp_path):
    p = tmp_path / "m.txt"
    p.write_bytes(b"a\r\nb\nc\n")
    with pytest.raises(CorpusError, match="mixed line endings"):
        read_lines(p)
    p.write_bytes(b"a\r\nb\r\n")
    assert read_lines(p) == ["a", "b"]


def test_invalid_utf8(tmp_path):
    p = tmp_path / "u.txt"
    p.write_bytes(b"a\xff\n")
    with pytest.raises(CorpusError):
        read_lines(p)


def test_atomic_write_leaves_no_temp(tmp_path):
    atomic_write_text(tmp_path / "x.txt", "hi\n")
    assert [f.name for f in tmp_path.iterdir()] == ["x.txt"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp")),
                        max_size=8), max_size=8))
def test_write_read_round_trip(tmp_path_factory, lines):
    path = tmp_path_factory.mktemp("rt") / "c.txt"
    write_lines(path, lines)
    assert read_lines(path) == lines
    assert b"\r" not in path.read_bytes()


def test_external_phonemizer_matches_toy(tmp_path, phonology):
    rules = ToyG2PRules([("a", "a"), ("p", "p"), ("t", "t͡ʃ")])
    rules.write(tmp_path / "r.tsv")
    sents = ["pat ta", "a", "tap"]
    corpus = phonemize_external(f"{STUBS} phonemize --rules {tmp_path / 'r.tsv'}",
                                sents, "qa", phonology.table)
    assert corpus.phonemes == [toy_g2p(rules, s) for s in sents]


def test_external_phonemizer_copy_and_errors(tmp_path, phonology):
    copy = f"{STUBS} channel"
    corpus = phonemize_external(copy, ["a b", "m"], "qa", phonology.table)
    assert corpus.records() == [("a b", "a b"), ("m", "m")]
    with pytest.raises(ExternalCommandError, match="1 lines for 2"):
        phonemize_external(copy + " --drop-line", ["a b", "m"], "qa", phonology.table)
    with pytest.raises(CorpusError, match="line 2"):
        phonemize_external(copy, ["a", "a?"], "qa", phonology.table)
