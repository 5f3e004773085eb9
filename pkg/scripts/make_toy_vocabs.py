#!/usr/bin/env python3
"""Regenerate the bundled ten-language synthetic vocabulary set.

usage: python scripts/make_toy_vocabs.py [out_dir]
"""

import sys
from pathlib import Path

from ppmgpn.phonology import Phonology
from ppmgpn.ppm import build_language_vocab, write_vocab
from ppmgpn.synth import bundled_languages

SEED = 26
SENTENCES = 500


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "src/ppmgpn/data/toyvocab")
    ph = Phonology()
    for lang in bundled_languages(SEED, ph):
        vocab = build_language_vocab(lang.lang_id, lang.corpus(SENTENCES, SEED).phonemes, ph)
        write_vocab(out / f"{lang.lang_id}.tsv", vocab)
        print(f"{lang.lang_id}: {len(vocab)} tokens")


if __name__ == "__main__":
    main()
