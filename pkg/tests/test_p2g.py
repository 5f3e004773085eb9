import pytest

from ppmgpn.errors import CorpusError
from ppmgpn.noise import TriphoneNoiseModel, analyze_triphone_noise, noisify
from ppmgpn.p2g import P2GDecoder, P2GLexicon, build_lexicon, noise_likelihood, p2g_decode


@pytest.fixture
def toy(phonology):
    """Three words; the noise model turns p into b between vowels."""
    lex = build_lexicon(["papa tima", "papa", "nasu"],
                        ["p a p a | t i m a", "p a p a", "n a s u"])
    pairs = [("| p a p a |", "| p a b a |")] * 3 + [("| p a p a |", "| p a p a |")] * 7
    model = analyze_triphone_noise(pairs, phonology)
    return lex, model


def test_clean_input_is_exact(toy):
    lex, model = toy
    assert p2g_decode("p a p a | t i m a", lex) == "papa tima"
    assert p2g_decode("p a p a | t i m a", lex, model) == "papa tima"


def test_empty_lexicon_echoes():
    assert p2g_decode("t͡ʃ a | b", P2GLexicon()) == "t͡ʃa b"


def test_noise_aware_recovers_substitution(toy):
    lex, model = toy
    assert p2g_decode("p a b a | n a s u", lex, model) == "papa nasu"
    assert p2g_decode("p a b a | n a s u", lex, None) == "paba nasu"


def test_unreachable_word_falls_back(toy):
    lex, model = toy
    assert p2g_decode("k o", lex, model) == "ko"


def test_best_spelling_tie_break():
    lex = P2GLexicon()
    lex.add(["a"], "b", 2)
    lex.add(["a"], "a", 2)
    lex.add(["a"], "c", 1)
    assert lex.best(("a",)) == "a"


def test_likelihood_is_exact(phonology):
    # brute force: sample many noisifications and compare frequencies
    import random
    pairs = [("a p a p a", "a b a p a"), ("a p a p a", "a p a b a"),
             ("a p a p a", "a p a p a")] * 2
    model = analyze_triphone_noise(pairs, phonology)
    clean = "a p a p a".split()
    rng = random.Random(0)
    n = 40000
    counts = {}
    for _ in range(n):
        out = tuple(noisify(clean, model, rng))
        counts[out] = counts.get(out, 0) + 1
    total = 0.0
    for out, c in counts.items():
        p = noise_likelihood(clean, list(out), model)
        total += p
        assert abs(c / n - p) <= 4 * (p * (1 - p) / n) ** 0.5 + 1e-9
    assert total == pytest.approx(1.0)


def test_lexicon_errors(tmp_path):
    with pytest.raises(CorpusError):
        build_lexicon(["a b"], ["a"])
    lex = P2GLexicon()
    with pytest.raises(CorpusError):
        lex.add(["a", "|"], "x")
    lex.add(["a"], "x")
    lex.write(tmp_path / "l.tsv")
    assert P2GLexicon.read(tmp_path / "l.tsv").entries == lex.entries


def test_decoder_prefers_frequent_source(phonology):
    # both pa and ba can be heard as ma; the count prior decides
    lex = build_lexicon(["pa", "ba", "ba", "ba"], ["p a", "b a", "b a", "b a"])
    model = TriphoneNoiseModel()
    for clean in (("|", "p", "a"), ("|", "b", "a")):
        model.add(clean, ("|", "m", "a"), 1)
        model.totals[clean] = 2
    model.fill_distances(phonology)
    assert P2GDecoder(lex, model).decode("m a") == "ba"
