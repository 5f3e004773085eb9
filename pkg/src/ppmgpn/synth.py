"""Deterministic synthetic languages for desk-scale experiments.

A toy language has an IPA inventory drawn from a shared pool, a one-letter
orthography (so the grapheme code is prefix-free), a homophone-free lexicon
of CV(C) words and Zipf-distributed word frequencies.
"""

from __future__ import annotations

import random
import string
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path

from .corpusio import ParallelCorpus, ToyG2PRules, toy_g2p, write_lines
from .p2g import P2GLexicon, build_lexicon
from .phonology import Phonology

CORE = ["p", "t", "k", "m", "n", "s", "l", "a", "i", "u"]

POOL = [
    "b", "d", "ɡ", "f", "v", "z", "ʃ", "ʒ", "x", "h", "r", "ɾ", "j", "w", "ŋ",
    "ɲ", "t͡ʃ", "d͡ʒ", "t͡s", "e", "o", "ɛ", "ɔ", "ə", "y", "ø", "ɨ", "aː", "iː",
    "uː", "eː", "oː", "pʰ", "tʰ", "kʰ", "tʲ", "lʲ", "ɫ", "ʎ", "ɕ", "ʑ", "ʂ",
    "θ", "ð", "ç", "β", "ʁ", "χ", "ɣ", "q", "ʔ", "ɑ", "æ", "ɪ", "ʊ", "ʏ", "œ",
    "a\u0303", "o\u0303", "aɪ", "aʊ", "ɔɪ", "ei̯", "t͡ɕ", "ʈ", "ɖ", "ɳ", "ɭ", "ɬ", "ħ", "ʕ",
]

# near-phoneme pairs for the homophone-collision experiments
NEAR_PAIRS = [("e", "ɛ"), ("o", "ɔ"), ("i", "ɪ"), ("u", "ʊ"), ("s", "z"),
              ("t", "tʰ"), ("k", "kʰ"), ("p", "b"), ("n", "ŋ"), ("l", "ɫ")]

# multi-segment units, each given to a single bundled language so that
# unmerged vocabularies are only partly shared
CLUSTERS = [
    "mb", "nd", "ŋɡ", "ps", "ks", "kʃ", "tl", "pf", "ʃt", "sk", "st", "sp",
    "ai", "au", "oi", "ui", "ia", "ea", "ua", "iu", "eo", "oa",
    "aiə", "uoə", "ieə", "mbr", "ndr", "ŋɡl", "skr", "spl",
]

BUNDLED_LANGS = ["qa", "qb", "qc", "qd", "qe", "qf", "qg", "qh", "qi", "qj"]

LETTERS = string.ascii_lowercase + string.ascii_uppercase


@dataclass
class ToyLanguage:
    lang_id: str
    rules: ToyG2PRules
    words: list[str]
    weights: list[float]

    def __post_init__(self):
        self._cum = list(accumulate(self.weights))

    @property
    def inventory(self) -> list[str]:
        return [rhs[0] for _, rhs in self.rules.rules]

    def phonemize(self, sentence: str) -> str:
        return toy_g2p(self.rules, sentence)

    def sentences(self, n: int, seed: int | str = 0, min_words: int = 3,
                  max_words: int = 8) -> list[str]:
        rng = random.Random(f"sentences:{self.lang_id}:{seed}")
        total = self._cum[-1]
        out = []
        for _ in range(n):
            k = rng.randint(min_words, max_words)
            idx = [bisect_right(self._cum, rng.random() * total) for _ in range(k)]
            out.append(" ".join(self.words[min(i, len(self.words) - 1)] for i in idx))
        return out

    def corpus(self, n: int, seed: int | str = 0) -> ParallelCorpus:
        graphemes = self.sentences(n, seed)
        return ParallelCorpus(self.lang_id, graphemes, [self.phonemize(s) for s in graphemes])

    def near_confusions(self, rate: float) -> dict[str, list[tuple[str, float]]]:
        """Symmetric confusions between near-phoneme pairs in the inventory."""
        inv = set(self.inventory)
        out: dict[str, list[tuple[str, float]]] = {}
        for a, b in NEAR_PAIRS:
            if a in inv and b in inv:
                out[a] = [(b, rate)]
                out[b] = [(a, rate)]
        return out


def _is_vowel(tok: str, phonology: Phonology) -> bool:
    return phonology.token(tok).segments[0].features[0] == 1


def make_language(lang_id: str, seed: int = 0, inventory: list[str] | None = None,
                  n_extra: tuple[int, int] = (8, 30), n_words: int = 400,
                  zipf_s: float = 1.0, max_syllables: int = 3,
                  phonology: Phonology | None = None) -> ToyLanguage:
    """Build a toy language; ``inventory`` overrides the random draw."""
    phonology = phonology or Phonology()
    rng = random.Random(f"language:{lang_id}:{seed}")
    if inventory is None:
        extra = rng.sample(POOL, rng.randint(*n_extra))
        inventory = CORE + extra
    inventory = list(dict.fromkeys(inventory))
    if len(inventory) > len(LETTERS):
        raise ValueError(f"inventory of {len(inventory)} exceeds {len(LETTERS)} letters")
    letters = list(LETTERS[:len(inventory)])
    rng.shuffle(letters)
    spelling = dict(zip(inventory, letters))
    rules = ToyG2PRules((spelling[p], p) for p in inventory)

    vowels = [p for p in inventory if _is_vowel(p, phonology)]
    consonants = [p for p in inventory if not _is_vowel(p, phonology)]
    if not vowels or not consonants:
        raise ValueError("inventory needs both vowels and consonants")

    seen: set[tuple[str, ...]] = set()
    words: list[str] = []
    attempts = 0
    while len(words) < n_words:
        attempts += 1
        if attempts > 200 * n_words:
            raise ValueError("could not generate enough distinct words")
        phones: list[str] = []
        for _ in range(rng.randint(1, max_syllables)):
            if rng.random() < 0.85:
                phones.append(rng.choice(consonants))
            phones.append(rng.choice(vowels))
            if rng.random() < 0.25:
                phones.append(rng.choice(consonants))
        key = tuple(phones)
        if key in seen:
            continue
        seen.add(key)
        words.append("".join(spelling[p] for p in phones))
    weights = [1.0 / (r + 1) ** zipf_s for r in range(len(words))]
    return ToyLanguage(lang_id, rules, words, weights)


def near_phoneme_language(lang_id: str = "qn", seed: int = 0,
                          phonology: Phonology | None = None, **kwargs) -> ToyLanguage:
    """Toy language whose inventory holds every near-phoneme pair."""
    inventory = list(dict.fromkeys(CORE + [p for pair in NEAR_PAIRS for p in pair]))
    return make_language(lang_id, seed, inventory=inventory, phonology=phonology, **kwargs)


def bundled_languages(seed: int = 0, phonology: Phonology | None = None
                      ) -> list[ToyLanguage]:
    """The ten-language synthetic set: random pool draws plus three
    language-specific clusters each."""
    phonology = phonology or Phonology()
    out = []
    for i, lang in enumerate(BUNDLED_LANGS):
        rng = random.Random(f"language:{lang}:{seed}")
        inventory = CORE + rng.sample(POOL, rng.randint(8, 30)) + CLUSTERS[3 * i:3 * i + 3]
        out.append(make_language(lang, seed, inventory=inventory, phonology=phonology))
    return out


def lexicon_for(lang: ToyLanguage, corpus: ParallelCorpus) -> P2GLexicon:
    """Every word of the language, counted as 1 + its training frequency."""
    lex = build_lexicon(corpus.graphemes, corpus.phonemes)
    for w in lang.words:
        lex.add(lang.rules.word(w), w)
    return lex


PRESETS = {"random": make_language, "near": near_phoneme_language}


def write_language(lang: ToyLanguage, out_dir: str | Path, n_sentences: int, seed: int,
                   confusion_rate: float = 0.2, n_test: int = 0) -> ParallelCorpus:
    """Write graphemes.txt, phonemes.txt, rules.tsv and confusions.tsv, plus
    test.graphemes.txt and test.phonemes.txt when ``n_test`` > 0.  The
    full lexicon goes to lexicon.tsv."""
    out = Path(out_dir)
    corpus = lang.corpus(n_sentences, seed)
    write_lines(out / "graphemes.txt", corpus.graphemes)
    write_lines(out / "phonemes.txt", corpus.phonemes)
    lexicon_for(lang, corpus).write(out / "lexicon.tsv")
    if n_test > 0:
        test = lang.corpus(n_test, f"test:{seed}")
        write_lines(out / "test.graphemes.txt", test.graphemes)
        write_lines(out / "test.phonemes.txt", test.phonemes)
    lang.rules.write(out / "rules.tsv")
    write_lines(out / "confusions.tsv",
                (f"{c}\t{n}\t{p!r}" for c, alts in sorted(lang.near_confusions(confusion_rate).items())
                 for n, p in alts))
    return corpus
