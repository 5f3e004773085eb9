import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppmgpn.errors import CorpusError, VocabularyError
from ppmgpn.ppm import (LanguageVocabulary, apply_merge_map, build_language_vocab,
                        build_merge_map, coverage, coverage_grid, importance_scores,
                        read_merge_map, read_pivots, read_vocab,
                        read_vocab_dir, select_pivots, write_merge_map, write_pivots,
                        write_vocab)
from ppmgpn.phonology import FeatureTable, Phonology
from ppmgpn.synth import bundled_languages
from test_phonology import raw_rows


def V(lang, **counts):
    return LanguageVocabulary(lang, counts)


@pytest.fixture
def three():
    return [V("l1", p=3, a=3, b=1), V("l2", p=2, i=2, m=1), V("l3", a=4, ɛ=1, t=1)]


def test_vocab_counts(phonology):
    v = build_language_vocab("xx", ["a b a"], phonology)
    assert v.counts == {"a": 2, "b": 1}
    assert v.prob == {"a": 2 / 3, "b": 1 / 3}


def test_delimiter_excluded(phonology):
    v = build_language_vocab("xx", ["a | b", "|"], phonology)
    assert v.counts == {"a": 1, "b": 1}
    with pytest.raises(VocabularyError, match="no phoneme tokens"):
        build_language_vocab("xx", ["| |", ""], phonology)
    with pytest.raises(VocabularyError, match="empty corpus"):
        build_language_vocab("xx", [], phonology)


def test_bad_tokens_name_line(phonology):
    with pytest.raises(VocabularyError, match=r"line 2.*'a\?'"):
        build_language_vocab("xx", ["a", "b a?"], phonology)
    with pytest.raises(VocabularyError, match="4 segments"):
        build_language_vocab("xx", ["a", "pata"], phonology)


def test_probabilities_sum_to_one():
    v = V("xx", a=7, b=11, c=13)
    assert math.isclose(sum(v.prob.values()), 1.0, abs_tol=1e-9)


def test_pivots_by_summed_probability():
    vocabs = [LanguageVocabulary("l1", {"a": 6, "b": 4}), LanguageVocabulary("l2", {"a": 5, "c": 5})]
    piv = select_pivots(vocabs, 2)
    assert piv.pivots == ("a", "c")
    assert piv.scores["a"] == pytest.approx(1.1)
    assert piv.scores["c"] == pytest.approx(0.5)
    assert select_pivots(vocabs, 1).pivots == ("a",)
    assert select_pivots(vocabs, 99).pivots == ("a", "c", "b")


def test_pivots_reject_bad_k():
    with pytest.raises(ValueError):
        select_pivots([V("xx", a=1)], 0)


def test_merge_map_by_hand(three, phonology):
    # the hand-computed feature differences against the pivots a and p
    rows = raw_rows()
    hamming = {(x, p): sum(u != v for u, v in zip(rows[x], rows[p])) / 24
               for x in ("b", "i", "m", "ɛ", "t") for p in ("a", "p")}
    assert hamming[("b", "p")] == 1 / 24 and hamming[("i", "a")] == 2 / 24
    assert hamming[("m", "p")] == hamming[("t", "p")] == 3 / 24

    piv = select_pivots(three, 2)
    assert piv.pivots == ("a", "p")
    mm = build_merge_map(three, piv, 1.0, phonology)
    assert mm.per_language == {
        "l1": {"a": "a", "b": "p", "p": "p"},
        "l2": {"i": "a", "m": "p", "p": "p"},
        "l3": {"a": "a", "t": "p", "ɛ": "a"},
    }
    tight = build_merge_map(three, piv, 0.1, phonology)
    assert tight.per_language["l2"] == {"i": "a", "m": "m", "p": "p"}
    assert tight.kept == {"l1": frozenset(), "l2": frozenset({"m"}), "l3": frozenset({"t"})}


def test_pivot_score_tie_breaks_on_surface():
    vocabs = [V("l1", c=1, b=1, a=2)]
    assert select_pivots(vocabs, 3).pivots == ("a", "b", "c")


def test_argmin_tie_goes_to_higher_ranked_pivot():
    # x differs from y and from z in exactly one feature each
    table = FeatureTable({"x": (1, 1, 0, 0), "y": (1, 1, 1, 0), "z": (1, 1, 0, 1)},
                         ["f1", "f2", "f3", "f4"])
    ph = Phonology(table)
    assert ph.distance("x", "y") == ph.distance("x", "z") == 0.25
    for heavy, light in (("y", "z"), ("z", "y")):
        vocabs = [V("l1", **{heavy: 5, light: 3, "x": 1})]
        mm = build_merge_map(vocabs, select_pivots(vocabs, 2), 1.0, ph)
        assert mm.per_language["l1"]["x"] == heavy
    # equal importance: the smaller surface ranks first and wins
    vocabs = [V("l1", z=4, y=4, x=1)]
    mm = build_merge_map(vocabs, select_pivots(vocabs, 2), 1.0, ph)
    assert mm.per_language["l1"]["x"] == "y"


def test_t_zero_is_identity(three, phonology):
    mm = build_merge_map(three, select_pivots(three, 2), 0.0, phonology)
    for v in three:
        assert mm.merged_vocab(v.lang_id) == set(v.counts)


def test_apply_merge_map(three, phonology):
    mm = build_merge_map(three, select_pivots(three, 2), 1.0, phonology)
    assert list(apply_merge_map(mm, "l1", ["b | b", "a p"])) == ["p | p", "a p"]
    with pytest.raises(CorpusError, match="line 2"):
        list(apply_merge_map(mm, "l1", ["a", "z"]))
    with pytest.raises(VocabularyError):
        list(apply_merge_map(mm, "zz", ["a"]))


def test_apply_output_inside_merged_vocab(phonology):
    langs = bundled_languages(4)[:3]
    corpora = {l.lang_id: l.corpus(200, 1).phonemes for l in langs}
    vocabs = [build_language_vocab(k, c, phonology) for k, c in corpora.items()]
    mm = build_merge_map(vocabs, select_pivots(vocabs, 10), 1.0, phonology)
    for lang, lines in corpora.items():
        out = list(apply_merge_map(mm, lang, lines))
        assert len(out) == len(lines)
        seen = {t for line in out for t in line.split() if t != "|"}
        assert seen <= mm.merged_vocab(lang)


def test_coverage_cases():
    assert coverage({"a": {"x", "y"}, "b": {"x", "y"}}) == ({"a": 1.0, "b": 1.0}, 1.0)
    assert coverage({"a": {"x"}, "b": {"y"}}) == ({"a": 0.0, "b": 0.0}, 0.0)
    per_lang, avg = coverage({"a": {"x", "y"}, "b": {"x"}, "c": {"z"}})
    assert per_lang == {"a": 0.5, "b": 1.0, "c": 0.0}
    assert avg == pytest.approx(0.5)
    with pytest.raises(VocabularyError, match="requires >=2"):
        coverage({"a": {"x"}})


def test_file_round_trips(three, phonology, tmp_path):
    for v in three:
        write_vocab(tmp_path / f"{v.lang_id}.tsv", v)
    back = read_vocab_dir(tmp_path, phonology)
    assert [b.counts for b in back] == [v.counts for v in three]
    piv = select_pivots(three, 2)
    write_pivots(tmp_path / "p.tsv", piv)
    assert read_pivots(tmp_path / "p.tsv") == piv
    mm = build_merge_map(three, piv, 0.1, phonology)
    write_merge_map(tmp_path / "m.tsv", mm)
    assert read_merge_map(tmp_path / "m.tsv") == mm
    first = (tmp_path / "m.tsv").read_bytes()
    write_merge_map(tmp_path / "m.tsv", build_merge_map(three, piv, 0.1, phonology))
    assert (tmp_path / "m.tsv").read_bytes() == first


def test_read_vocab_errors(tmp_path):
    (tmp_path / "x.tsv").write_text("a\t1\na\t2\n", encoding="utf-8")
    with pytest.raises(VocabularyError, match="duplicate"):
        read_vocab(tmp_path / "x.tsv")
    (tmp_path / "y.tsv").write_text("a\tone\n", encoding="utf-8")
    with pytest.raises(VocabularyError, match="bad count"):
        read_vocab(tmp_path / "y.tsv")
    with pytest.raises(VocabularyError, match="no \\*.tsv"):
        read_vocab_dir(tmp_path / "missing")


_PH = Phonology()
token_pool = ["p", "b", "t", "d", "k", "a", "e", "i", "o", "u", "m", "n", "s", "z", "ʃ"]
vocab_st = st.dictionaries(st.sampled_from(token_pool), st.integers(1, 20), min_size=1)


@settings(max_examples=60, deadline=None)
@given(st.lists(vocab_st, min_size=2, max_size=4), st.integers(1, 8),
       st.sampled_from([0.0, 0.05, 0.1, 0.2, 0.5, 1.0]))
def test_merge_map_invariants(dicts, k, t):
    ph = _PH
    vocabs = [LanguageVocabulary(f"l{i}", d) for i, d in enumerate(dicts)]
    piv = select_pivots(vocabs, k)
    mm = build_merge_map(vocabs, piv, t, ph)
    for v in vocabs:
        mapping = mm.per_language[v.lang_id]
        assert set(mapping) == set(v.counts)
        assert len(mm.merged_vocab(v.lang_id)) <= len(v.counts)
        for tok, out in mapping.items():
            if tok in mm.kept[v.lang_id]:
                assert out == tok
                assert min(ph.distance(tok, p) for p in piv.pivots) > t
            else:
                assert out in piv
                assert ph.distance(tok, out) <= t
    scores = importance_scores(vocabs)
    ranked = [scores[p] for p in piv.pivots]
    assert ranked == sorted(ranked, reverse=True)


@settings(max_examples=40, deadline=None)
@given(st.lists(vocab_st, min_size=2, max_size=4), st.integers(1, 8))
def test_t_zero_coverage_equals_baseline(dicts, k):
    vocabs = [LanguageVocabulary(f"l{i}", d) for i, d in enumerate(dicts)]
    grid = coverage_grid(vocabs, [0, k], [0.0], _PH)
    assert grid[(k, 0.0)] == grid[(0, 0.0)]
