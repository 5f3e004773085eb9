"""Pivot Phoneme Merging: vocabularies, pivot selection, merge maps, coverage."""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .corpusio import atomic_write_text, read_lines
from .errors import CorpusError, SegmentationError, VocabularyError
from .phonology import MAX_TOKEN_SEGMENTS, SPECIAL_TOKENS, WORD_DELIMITER, Phonology

_LANG_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


def check_lang_id(lang_id: str) -> str:
    if not _LANG_RE.match(lang_id or ""):
        raise VocabularyError(f"invalid language id {lang_id!r}")
    return lang_id


@dataclass(frozen=True)
class LanguageVocabulary:
    lang_id: str
    counts: dict[str, int]

    def __post_init__(self):
        check_lang_id(self.lang_id)
        if not self.counts:
            raise VocabularyError(f"{self.lang_id}: no phoneme tokens")
        for tok, c in self.counts.items():
            if c < 1:
                raise VocabularyError(f"{self.lang_id}: count of {tok!r} must be >= 1")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def prob(self) -> dict[str, float]:
        total = self.total
        return {t: c / total for t, c in self.counts.items()}

    @property
    def tokens(self) -> frozenset[str]:
        return frozenset(self.counts)

    def __len__(self) -> int:
        return len(self.counts)


def _check_token(tok: str, phonology: Phonology, where: str) -> None:
    if tok in SPECIAL_TOKENS:
        raise VocabularyError(f"{where}: reserved token {tok!r} in vocabulary")
    try:
        n = phonology.segment_count(tok)
    except SegmentationError as exc:
        raise VocabularyError(f"{where}: unsegmentable token {tok!r} ({exc})") from None
    if n > MAX_TOKEN_SEGMENTS:
        raise VocabularyError(
            f"{where}: token {tok!r} has {n} segments (max {MAX_TOKEN_SEGMENTS})")


def count_tokens(lines: Iterable[str]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for line in lines:
        counts.update(t for t in line.split() if t != WORD_DELIMITER)
    return counts


def build_language_vocab(lang_id: str, corpus: Iterable[str],
                         phonology: Phonology) -> LanguageVocabulary:
    """Count token types over a phoneme corpus (one utterance per line)."""
    check_lang_id(lang_id)
    counts: Counter[str] = Counter()
    first_line: dict[str, int] = {}
    n_lines = 0
    for lineno, line in enumerate(corpus, 1):
        n_lines += 1
        for tok in line.split():
            if tok == WORD_DELIMITER:
                continue
            if tok not in counts:
                first_line[tok] = lineno
            counts[tok] += 1
    if n_lines == 0:
        raise VocabularyError(f"{lang_id}: empty corpus")
    if not counts:
        raise VocabularyError(f"{lang_id}: no phoneme tokens")
    for tok in sorted(counts):
        _check_token(tok, phonology, f"{lang_id} line {first_line[tok]}")
    return LanguageVocabulary(lang_id, dict(counts))


def write_vocab(path: str | Path, vocab: LanguageVocabulary) -> None:
    rows = sorted(vocab.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    atomic_write_text(path, "".join(f"{t}\t{c}\n" for t, c in rows))


def read_vocab(path: str | Path, lang_id: str | None = None,
               phonology: Phonology | None = None) -> LanguageVocabulary:
    path = Path(path)
    lang = lang_id or path.stem
    counts: dict[str, int] = {}
    for lineno, line in enumerate(read_lines(path), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise VocabularyError(f"{path}:{lineno}: expected 'token<TAB>count'")
        tok, raw = cols
        try:
            c = int(raw)
        except ValueError:
            raise VocabularyError(f"{path}:{lineno}: bad count {raw!r}") from None
        if tok in counts:
            raise VocabularyError(f"{path}:{lineno}: duplicate token {tok!r}")
        if phonology is not None:
            _check_token(tok, phonology, f"{path}:{lineno}")
        counts[tok] = c
    return LanguageVocabulary(lang, counts)


def read_vocab_dir(directory: str | Path, phonology: Phonology | None = None
                   ) -> list[LanguageVocabulary]:
    """Every ``<lang>.tsv`` under ``directory``, sorted by language id."""
    paths = sorted(Path(directory).glob("*.tsv"))
    if not paths:
        raise VocabularyError(f"{directory}: no *.tsv vocabulary files")
    return [read_vocab(p, phonology=phonology) for p in paths]


@dataclass(frozen=True)
class PivotSet:
    pivots: tuple[str, ...]
    scores: dict[str, float]

    def __contains__(self, tok: object) -> bool:
        return tok in self.pivots

    def __len__(self) -> int:
        return len(self.pivots)


def importance_scores(vocabs: Sequence[LanguageVocabulary]) -> dict[str, float]:
    """Per-token sum of occurrence probabilities across languages."""
    per_token: dict[str, list[float]] = {}
    for v in sorted(vocabs, key=lambda v: v.lang_id):
        for tok, p in v.prob.items():
            per_token.setdefault(tok, []).append(p)
    return {t: math.fsum(ps) for t, ps in per_token.items()}


def select_pivots(vocabs: Sequence[LanguageVocabulary], k: int) -> PivotSet:
    """Top-``k`` tokens by importance; ties go to the smaller surface string."""
    if k < 1:
        raise ValueError("K must be >= 1")
    if not vocabs:
        raise ValueError("at least one vocabulary is required")
    scores = importance_scores(vocabs)
    ranked = sorted(scores, key=lambda t: (-scores[t], t))
    pivots = tuple(ranked[:k])
    return PivotSet(pivots, {t: scores[t] for t in pivots})


def write_pivots(path: str | Path, pivots: PivotSet) -> None:
    atomic_write_text(path, "".join(f"{t}\t{pivots.scores[t]!r}\n" for t in pivots.pivots))


def read_pivots(path: str | Path) -> PivotSet:
    pivots, scores = [], {}
    for lineno, line in enumerate(read_lines(path), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise VocabularyError(f"{path}:{lineno}: expected 'token<TAB>score'")
        pivots.append(cols[0])
        scores[cols[0]] = float(cols[1])
    return PivotSet(tuple(pivots), scores)


@dataclass(frozen=True)
class PivotMergeMap:
    k: int
    t: float
    per_language: dict[str, dict[str, str]]
    kept: dict[str, frozenset[str]] = field(default_factory=dict)

    def languages(self) -> list[str]:
        return sorted(self.per_language)

    def merged_vocab(self, lang_id: str) -> set[str]:
        return set(self.per_language[lang_id].values())

    def lookup(self, lang_id: str) -> dict[str, str]:
        try:
            return self.per_language[lang_id]
        except KeyError:
            raise VocabularyError(f"merge map has no language {lang_id!r}") from None


def build_merge_map(vocabs: Sequence[LanguageVocabulary], pivots: PivotSet, t: float,
                    phonology: Phonology) -> PivotMergeMap:
    """Map each non-pivot to its nearest pivot when within distance ``t``.

    Nearest-pivot ties go to the more important pivot, then the smaller
    surface string.  Tokens farther than ``t`` from every pivot are kept.
    """
    if t < 0:
        raise ValueError("threshold T must be >= 0")
    pivot_set = set(pivots.pivots)
    # rank order already encodes the tie-break (importance desc, surface asc)
    ranked = list(pivots.pivots)
    decision: dict[str, str | None] = {}
    for tok in sorted({tok for v in vocabs for tok in v.counts}):
        if tok in pivot_set:
            decision[tok] = tok
            continue
        best, best_d = None, math.inf
        for p in ranked:
            d = phonology.distance(tok, p)
            if d < best_d:
                best, best_d = p, d
        decision[tok] = best if best_d <= t else None

    per_language: dict[str, dict[str, str]] = {}
    kept: dict[str, frozenset[str]] = {}
    for v in sorted(vocabs, key=lambda v: v.lang_id):
        mapping = {}
        kept_here = set()
        for tok in sorted(v.counts):
            target = decision[tok]
            if target is None:
                mapping[tok] = tok
                kept_here.add(tok)
            else:
                mapping[tok] = target
        per_language[v.lang_id] = mapping
        kept[v.lang_id] = frozenset(kept_here)
    return PivotMergeMap(len(pivots), float(t), per_language, kept)


def write_merge_map(path: str | Path, mm: PivotMergeMap) -> None:
    rows = [f"# K={mm.k} T={mm.t!r}\n"]
    for lang in mm.languages():
        kept = mm.kept.get(lang, frozenset())
        for orig, merged in sorted(mm.per_language[lang].items()):
            rows.append(f"{lang}\t{orig}\t{merged}\t{int(orig in kept)}\n")
    atomic_write_text(path, "".join(rows))


def read_merge_map(path: str | Path) -> PivotMergeMap:
    k, t = 0, 0.0
    per_language: dict[str, dict[str, str]] = {}
    kept: dict[str, set[str]] = {}
    for lineno, line in enumerate(read_lines(path), 1):
        if line.startswith("#"):
            m = re.match(r"#\s*K=(\d+)\s+T=(\S+)", line)
            if m:
                k, t = int(m.group(1)), float(m.group(2))
            continue
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 4 or cols[3] not in ("0", "1"):
            raise VocabularyError(
                f"{path}:{lineno}: expected 'lang<TAB>original<TAB>merged<TAB>kept_flag'")
        lang, orig, merged, flag = cols
        per_language.setdefault(lang, {})[orig] = merged
        kept.setdefault(lang, set())
        if flag == "1":
            kept[lang].add(orig)
    return PivotMergeMap(k, t, per_language, {l: frozenset(s) for l, s in kept.items()})


def apply_merge_map(mm: PivotMergeMap, lang_id: str, corpus: Iterable[str]) -> Iterable[str]:
    """Rewrite each token of a phoneme corpus through the language's map."""
    mapping = mm.lookup(lang_id)
    for lineno, line in enumerate(corpus, 1):
        out = []
        for tok in line.split():
            if tok == WORD_DELIMITER:
                out.append(tok)
                continue
            try:
                out.append(mapping[tok])
            except KeyError:
                raise CorpusError(
                    f"line {lineno}: token {tok!r} not in the {lang_id} merge map") from None
        yield " ".join(out)


def coverage(vocab_sets: Mapping[str, Iterable[str]]) -> tuple[dict[str, float], float]:
    """Fraction of each language's token types found in some other language.

    Returns the per-language values and their unweighted mean.
    """
    sets = {lang: frozenset(v) for lang, v in vocab_sets.items()}
    if len(sets) < 2:
        raise VocabularyError("coverage requires >=2 languages")
    seen_in: Counter[str] = Counter()
    for s in sets.values():
        seen_in.update(s)
    per_lang = {}
    for lang, s in sets.items():
        if not s:
            raise VocabularyError(f"coverage: language {lang!r} has an empty vocabulary")
        # a token is shared when some *other* language also has it
        shared = sum(1 for tok in s if seen_in[tok] >= 2)
        per_lang[lang] = shared / len(s)
    return per_lang, math.fsum(per_lang.values()) / len(per_lang)


def merged_vocab_sets(mm: PivotMergeMap) -> dict[str, set[str]]:
    return {lang: mm.merged_vocab(lang) for lang in mm.languages()}


def coverage_grid(vocabs: Sequence[LanguageVocabulary], ks: Sequence[int],
                  ts: Sequence[float], phonology: Phonology
                  ) -> dict[tuple[int, float], float]:
    """Average coverage over a K x T grid.  K=0 means no merging."""
    baseline = coverage({v.lang_id: v.tokens for v in vocabs})[1]
    grid = {}
    for k in ks:
        pivots = select_pivots(vocabs, k) if k > 0 else None
        for t in ts:
            if pivots is None:
                grid[(k, t)] = baseline
                continue
            mm = build_merge_map(vocabs, pivots, t, phonology)
            grid[(k, t)] = coverage(merged_vocab_sets(mm))[1]
    return grid
