"""Toy end-to-end setup shared by the pipeline and acceptance tests."""

from pathlib import Path

from ppmgpn.kfold import ConfusionRecognizer, assemble_noisy_pairs, split_folds
from ppmgpn.noise import analyze_triphone_noise
from ppmgpn.synth import bundled_languages, write_language


def build_toy(root: Path, phonology, lang_id="qa", n_train=3000, n_test=1000, seed=0,
              rate=0.2):
    """Synthesize a language, simulate k-fold recognition and mine a model.

    Returns the directory holding graphemes/phonemes, the test split,
    lexicon.tsv and model.tsv.
    """
    langs = {l.lang_id: l for l in bundled_languages(seed, phonology)}
    lang = langs[lang_id]
    out = root / lang_id
    corpus = write_language(lang, out, n_train, seed, rate, n_test)
    rec = ConfusionRecognizer(lang.near_confusions(rate), seed)
    pairs = assemble_noisy_pairs(corpus.phonemes, split_folds(len(corpus), 5, seed), rec)
    analyze_triphone_noise(pairs, phonology).write(out / "model.tsv")
    return out
