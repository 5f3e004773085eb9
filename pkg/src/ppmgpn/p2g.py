"""Lexicon-based phoneme-to-grapheme decoding with optional noise rescoring.

This is a desk-scale stand-in for a neural P2G translator.  Known phoneme
words are looked up directly.  Unknown (presumably corrupted) words are
matched against lexicon entries that the triphone noise model could have
turned into them; each candidate is scored by the exact likelihood of the
left-to-right pseudo-noise process times the candidate's corpus count.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from pathlib import Path

from .corpusio import read_lines, words, write_lines
from .errors import CorpusError
from .noise import TriphoneNoiseModel
from .phonology import WORD_DELIMITER

Key = tuple[str, ...]


class P2GLexicon:
    def __init__(self):
        self.entries: dict[Key, Counter[str]] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def add(self, phonemes: Sequence[str], grapheme: str, count: int = 1) -> None:
        key = tuple(phonemes)
        if not key or WORD_DELIMITER in key:
            raise CorpusError(f"invalid lexicon key {key!r}")
        if count < 1:
            raise CorpusError("lexicon counts must be >= 1")
        self.entries.setdefault(key, Counter())[grapheme] += count

    def count(self, key: Key) -> int:
        return sum(self.entries[key].values())

    def best(self, key: Key) -> str:
        """Most frequent spelling; ties go to the lexicographically smaller."""
        graphs = self.entries[key]
        return min(graphs, key=lambda g: (-graphs[g], g))

    def write(self, path: str | Path) -> None:
        write_lines(path, (f"{' '.join(k)}\t{g}\t{c}"
                           for k in sorted(self.entries)
                           for g, c in sorted(self.entries[k].items())))

    @classmethod
    def read(cls, path: str | Path) -> P2GLexicon:
        lex = cls()
        for lineno, line in enumerate(read_lines(path), 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise CorpusError(f"{path}:{lineno}: expected 'phonemes<TAB>grapheme<TAB>count'")
            lex.add(cols[0].split(" "), cols[1], int(cols[2]))
        return lex


def build_lexicon(graphemes: Iterable[str], phonemes: Iterable[str]) -> P2GLexicon:
    """Word-aligned lexicon from a parallel corpus."""
    lex = P2GLexicon()
    for lineno, (g, p) in enumerate(zip(graphemes, phonemes, strict=True), 1):
        gw, pw = g.split(), words(p)
        if len(gw) != len(pw):
            raise CorpusError(
                f"line {lineno}: {len(gw)} grapheme words vs {len(pw)} phoneme words")
        for gword, pword in zip(gw, pw):
            lex.add(pword, gword)
    return lex


def noise_likelihood(clean: Sequence[str], noisy: Sequence[str],
                     model: TriphoneNoiseModel) -> float:
    """P(noisy | clean) under left-to-right triphone pseudo-noise.

    At each scan position the clean triphone's candidates are tried in order;
    candidate k fires first with probability q_k * prod_{j<k}(1 - q_j) and
    advances the scan by three, otherwise the token is copied.
    """
    n = len(clean)
    if len(noisy) != n:
        return 0.0
    tail = [0.0] * (n + 1)
    tail[n] = 1.0
    for i in range(n - 1, -1, -1):
        if i > n - 3:
            tail[i] = tail[i + 1] if clean[i] == noisy[i] else 0.0
            continue
        total = 0.0
        survive = 1.0
        target = (noisy[i], noisy[i + 1], noisy[i + 2])
        for cand in model.candidates((clean[i], clean[i + 1], clean[i + 2])):
            if cand.noisy == target:
                total += survive * cand.prob * tail[i + 3]
            survive *= 1.0 - cand.prob
        if clean[i] == noisy[i]:
            total += survive * tail[i + 1]
        tail[i] = total
    return tail[0]


class P2GDecoder:
    def __init__(self, lexicon: P2GLexicon, model: TriphoneNoiseModel | None = None,
                 max_rewrites: int = 2):
        self.lexicon = lexicon
        self.model = model
        self.max_rewrites = max_rewrites
        self._cache: dict[Key, str] = {}

    def _sources(self, padded: list[str]) -> set[Key]:
        """Lexicon keys reachable by undoing up to ``max_rewrites``
        non-overlapping triphone rewrites, scanning left to right."""
        rev = self.model.reverse_index()
        found: set[Key] = set()
        frontier = [(padded, 0)]
        for _ in range(self.max_rewrites):
            nxt = []
            for seq, start in frontier:
                for i in range(start, len(seq) - 2):
                    for clean in rev.get((seq[i], seq[i + 1], seq[i + 2]), ()):
                        cand = seq[:i] + list(clean) + seq[i + 3:]
                        if cand[0] != WORD_DELIMITER or cand[-1] != WORD_DELIMITER:
                            continue
                        key = tuple(cand[1:-1])
                        if key in self.lexicon:
                            found.add(key)
                        nxt.append((cand, i + 3))
            frontier = nxt
        return found

    def decode_word(self, word: Sequence[str]) -> str:
        key = tuple(word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if key in self.lexicon:
            out = self.lexicon.best(key)
        elif self.model is None:
            out = "".join(key)
        else:
            noisy = [WORD_DELIMITER, *key, WORD_DELIMITER]
            best = None
            for cand in self._sources(noisy):
                like = noise_likelihood([WORD_DELIMITER, *cand, WORD_DELIMITER], noisy,
                                        self.model)
                if like <= 0.0:
                    continue
                count = self.lexicon.count(cand)
                rank = (-like * count, -count, cand)
                if best is None or rank < best:
                    best = rank
            out = self.lexicon.best(best[2]) if best is not None else "".join(key)
        self._cache[key] = out
        return out

    def decode(self, utterance: str | Sequence[str]) -> str:
        return " ".join(self.decode_word(w) for w in words(utterance))


def p2g_decode(utterance: str | Sequence[str], lexicon: P2GLexicon,
               model: TriphoneNoiseModel | None = None) -> str:
    return P2GDecoder(lexicon, model).decode(utterance)
