import random
from importlib import resources
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppmgpn.errors import FeatureTableError, SegmentationError
from ppmgpn.phonology import (BOUNDARY, WORD_DELIMITER, FeatureTable, Phonology,
                              load_feature_table, make_token, segment_distance, segment_ipa,
                              token_distance, triphone_distance)
from oracles import all_segmentations, weighted_levenshtein

HEADER = "segment\t" + "\t".join(f"f{i}" for i in range(24)) + "\n"


def row(seg, values):
    return seg + "\t" + "\t".join(values) + "\n"


@pytest.fixture
def tiny(tmp_path):
    path = tmp_path / "t.tsv"
    path.write_text(HEADER + row("a", "+" * 24) + row("b", "-" * 24)
                    + row("c", "0" * 24), encoding="utf-8")
    return path


def raw_rows():
    """The shipped table parsed without the library, for oracle checks."""
    text = resources.files("ppmgpn").joinpath("data/features.tsv").read_text("utf-8")
    rows = {}
    for line in text.splitlines():
        if line.startswith("#") or line.startswith("segment"):
            continue
        cols = line.split("\t")
        rows[cols[0]] = cols[1:]
    return rows


def test_load_three_rows(tiny):
    table = load_feature_table(tiny)
    assert len(table) == 3
    assert table.n_features == 24


def test_header_only_is_empty(tmp_path):
    path = tmp_path / "e.tsv"
    path.write_text(HEADER, encoding="utf-8")
    with pytest.raises(FeatureTableError, match="empty feature table"):
        load_feature_table(path)


def test_malformed_value_cites_line(tmp_path):
    path = tmp_path / "m.tsv"
    path.write_text(HEADER + row("a", "+" * 24) + row("b", "x" + "-" * 23), encoding="utf-8")
    with pytest.raises(FeatureTableError, match=r":3:.*'x'"):
        load_feature_table(path)


def test_duplicate_segment_named(tmp_path):
    path = tmp_path / "d.tsv"
    path.write_text(HEADER + row("a", "+" * 24) + row("a", "-" * 24), encoding="utf-8")
    with pytest.raises(FeatureTableError, match="duplicate segment 'a'"):
        load_feature_table(path)


def test_wrong_width(tmp_path):
    path = tmp_path / "w.tsv"
    path.write_text(HEADER + row("a", "+" * 23), encoding="utf-8")
    with pytest.raises(FeatureTableError, match="expected 24"):
        load_feature_table(path)


def test_shipped_table_shape():
    table = load_feature_table()
    assert table.n_features == 24
    assert len(table) > 300
    assert len(set(table.entries.values())) == len(table)


def test_segment_basic(tiny):
    table = load_feature_table(tiny)
    assert segment_ipa("", table) == []
    assert [s.surface for s in segment_ipa("abc", table)] == ["a", "b", "c"]


def test_affricate_greedy_matches_enumeration(phonology):
    keys = ["t͡ʃ", "t", "ʃ", "a"]
    # the tie bar alone is not a key, so only the affricate parse survives
    parses = list(all_segmentations("t͡ʃa", keys))
    assert parses == [["t͡ʃ", "a"]]
    table = FeatureTable({k: phonology.table.entries[k] for k in keys},
                         phonology.table.feature_names)
    assert [s.surface for s in segment_ipa("t͡ʃa", table)] == ["t͡ʃ", "a"]


def test_longest_match_prefers_fewest_segments(phonology):
    # with "tʃ" also a key, greedy picks the 2-segment parse over t+ʃ+a
    table = phonology.table
    parses = list(all_segmentations("tʃa", [k for k in ("tʃ", "t", "ʃ", "a") if k in table]))
    got = [s.surface for s in segment_ipa("tʃa", table)]
    assert got in parses
    assert len(got) == min(len(p) for p in parses)


def test_segmentation_error_reports_byte_offset(phonology):
    with pytest.raises(SegmentationError) as info:
        segment_ipa("ɑ?", phonology.table)
    assert info.value.offset == len("ɑ".encode("utf-8")) == 2
    assert info.value.char == "?"


def test_no_unicode_normalization(phonology):
    # precomposed a-tilde is not a key; a + combining tilde is
    with pytest.raises(SegmentationError):
        segment_ipa("\u00e3", phonology.table)
    assert len(segment_ipa("a\u0303", phonology.table)) == 1


def test_p_b_distance_by_hand(phonology):
    rows = raw_rows()
    differing = sum(x != y for x, y in zip(rows["p"], rows["b"]))
    assert differing == 1  # voicing only
    d = segment_distance(phonology.table.segment("p"), phonology.table.segment("b"))
    assert d == differing / 24 == 1 / 24


def test_segment_distance_extremes(tiny):
    table = load_feature_table(tiny)
    a, b = table.segment("a"), table.segment("b")
    assert segment_distance(a, a) == 0.0
    assert segment_distance(a, b) == 1.0


def test_single_segment_token_distance_equals_segment_distance(phonology):
    t = phonology.table
    for x, y in [("p", "b"), ("a", "i"), ("s", "ʃ"), ("m", "k")]:
        want = segment_distance(t.segment(x), t.segment(y))
        assert token_distance(make_token(x, t), make_token(y, t), t) == pytest.approx(want)


def test_token_distance_matches_textbook_dp(phonology):
    t = phonology.table
    sub = lambda x, y: segment_distance(x, y)  # noqa: E731
    for x, y in [("mb", "b"), ("aiə", "e"), ("skr", "sk"), ("t͡ʃ", "ʃt"), ("ŋɡl", "aː")]:
        tx, ty = make_token(x, t), make_token(y, t)
        want = weighted_levenshtein(tx.segments, ty.segments, sub)
        assert token_distance(tx, ty, t) == pytest.approx(want, abs=1e-12)
        assert 0.0 <= want <= 3.0


def test_triphone_single_position(phonology):
    d = phonology.triphone_distance(("a", "p", "a"), ("a", "b", "a"))
    assert d == pytest.approx(1 / 24)
    assert phonology.triphone_distance(("a", "p", "a"), ("a", "p", "a")) == 0.0


def test_triphone_clamped_to_three(phonology):
    d = phonology.triphone_distance(("skr", "aiə", "spl"), ("a", "m", "ɔ"))
    assert d == 3.0
    t = phonology.table
    x = [make_token(s, t) for s in ("skr", "aiə", "spl")]
    y = [make_token(s, t) for s in ("a", "m", "ɔ")]
    assert triphone_distance(x, y, t) == 3.0


def test_special_tokens(phonology):
    assert phonology.distance(WORD_DELIMITER, "a") == 1.0
    assert phonology.distance(BOUNDARY, WORD_DELIMITER) == 1.0
    assert phonology.distance(WORD_DELIMITER, WORD_DELIMITER) == 0.0
    assert phonology.segment_count(WORD_DELIMITER) == 0


def test_triphone_needs_three(phonology):
    with pytest.raises(ValueError):
        phonology.triphone_distance(("a", "b"), ("a", "b"))


def test_segment_metric_exhaustive_on_fifty(phonology):
    rng = random.Random(3)
    segs = [phonology.table.segment(s) for s in rng.sample(list(phonology.table), 50)]
    d = {(x.surface, y.surface): segment_distance(x, y) for x in segs for y in segs}
    for x in segs:
        for y in segs:
            assert d[x.surface, y.surface] == d[y.surface, x.surface]
            assert (d[x.surface, y.surface] == 0) == (x.features == y.features)
    for x, y, z in combinations(segs, 3):
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            assert d[a.surface, c.surface] <= d[a.surface, b.surface] + d[b.surface, c.surface] + 1e-12


_TABLE = load_feature_table()
_KEYS = sorted(_TABLE)
segment_keys = st.sampled_from(_KEYS)
token_strings = st.lists(segment_keys, min_size=1, max_size=3).map("".join)


@settings(max_examples=200, deadline=None)
@given(st.lists(segment_keys, max_size=6))
def test_segmentation_round_trip(parts):
    s = "".join(parts)
    assert "".join(seg.surface for seg in segment_ipa(s, _TABLE)) == s
    assert segment_ipa(s, _TABLE) == segment_ipa(s, _TABLE)


@settings(max_examples=200, deadline=None)
@given(token_strings, token_strings)
def test_token_distance_properties(x, y):
    tx, ty = make_token(x, _TABLE), make_token(y, _TABLE)
    d = token_distance(tx, ty, _TABLE)
    assert d == pytest.approx(token_distance(ty, tx, _TABLE), abs=1e-12)
    assert (d == 0) == ([s.features for s in tx.segments] == [s.features for s in ty.segments])
    assert 0 <= d <= len(tx) + len(ty)


_PH = Phonology(_TABLE)


@settings(max_examples=100, deadline=None)
@given(st.tuples(token_strings, token_strings, token_strings),
       st.tuples(token_strings, token_strings, token_strings))
def test_triphone_is_clamped_sum(x, y):
    d = _PH.triphone_distance(x, y)
    assert 0.0 <= d <= 3.0
    assert d == pytest.approx(sum(min(1.0, _PH.distance(a, b)) for a, b in zip(x, y)))
