import pytest

from ppmgpn.errors import ConfigError
from ppmgpn.metrics import EvalReport
from ppmgpn.pipeline import PipelineConfig, parse_config_text, run_pipeline
from ppmgpn.ppm import build_language_vocab, build_merge_map, select_pivots, write_merge_map
from ppmgpn.corpusio import read_lines
from conftest import STUBS
from workflow import build_toy


@pytest.fixture(scope="module")
def toy(tmp_path_factory, phonology):
    return build_toy(tmp_path_factory.mktemp("toy"), phonology, n_train=600, n_test=150)


def config(toy, **over):
    values = {"test_graphemes": "test.graphemes.txt", "test_phonemes": "test.phonemes.txt",
              "lexicon": "lexicon.tsv", "noise_model": "model.tsv",
              "channel": "statistical", "decoder": "noise-aware", "lang": "qa", "seed": "3"}
    values.update(over)
    values = {k: v for k, v in values.items() if v is not None}
    return PipelineConfig.from_mapping(values, toy)


def test_parse_config_text():
    assert parse_config_text("a = 1\n# c\n\nb=x y  # tail\n") == {"a": "1", "b": "x y"}
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("nonsense")


@pytest.mark.parametrize("over,match", [
    ({"test_graphemes": None}, "missing test_graphemes"),
    ({"lexicon": None}, "needs lexicon"),
    ({"channel": "laser"}, "unknown channel"),
    ({"decoder": "psychic"}, "unknown decoder"),
    ({"noise_model": None}, "noise_model"),
    ({"seed": "x"}, "integer"),
    ({"colour": "red"}, "unknown config keys"),
])
def test_config_errors(toy, over, match):
    with pytest.raises(ConfigError, match=match):
        config(toy, **over)


def test_missing_file_fails_before_work(toy):
    cfg = config(toy, lexicon="nope.tsv")
    with pytest.raises(ConfigError, match="nope.tsv"):
        run_pipeline(cfg)


def test_identity_channel_is_perfect(toy):
    rep = run_pipeline(config(toy, channel="identity"))
    assert rep.wer == 0.0 and rep.per == 0.0
    assert rep.N == sum(len(s.split()) for s in read_lines(toy / "test.graphemes.txt"))


def test_noise_aware_beats_blind(toy):
    aware = run_pipeline(config(toy))
    blind = run_pipeline(config(toy, decoder="noise-blind"))
    assert aware.per == blind.per > 0
    assert aware.wer < blind.wer


def test_deterministic_report(toy, tmp_path):
    a, b = run_pipeline(config(toy)), run_pipeline(config(toy))
    a.write(tmp_path / "a.json")
    b.write(tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert EvalReport.from_json((tmp_path / "a.json").read_text()) == a


def test_training_corpus_lexicon(toy):
    rep = run_pipeline(config(toy, lexicon=None, channel="identity",
                              train_graphemes="graphemes.txt", train_phonemes="phonemes.txt",
                              test_graphemes="graphemes.txt", test_phonemes="phonemes.txt"))
    assert rep.wer == 0.0


def test_merged_run(toy, phonology, tmp_path):
    vocab = build_language_vocab("qa", read_lines(toy / "phonemes.txt"), phonology)
    mm = build_merge_map([vocab], select_pivots([vocab], 8), 1.0, phonology)
    write_merge_map(tmp_path / "map.tsv", mm)
    rep = run_pipeline(config(toy, lexicon=None, noise_model=None, channel="identity",
                              decoder="noise-blind", merge_map=str(tmp_path / "map.tsv"),
                              train_graphemes="graphemes.txt", train_phonemes="phonemes.txt"))
    merged = mm.merged_vocab("qa")
    used = {t for u in rep.utterances for t in u["noisy"].split() if t != "|"}
    assert used <= merged
    assert rep.extra["config"]["merged"]


def test_external_decoder(toy):
    rep = run_pipeline(config(toy, channel="identity",
                              decoder=f"external:{STUBS} p2g --lexicon {toy / 'lexicon.tsv'}"))
    assert rep.wer == 0.0
