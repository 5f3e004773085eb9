"""Phoneme and word error rates."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import kernels
from .corpusio import atomic_write_text
from .phonology import WORD_DELIMITER


@dataclass(frozen=True)
class ErrorCounts:
    substitutions: int
    insertions: int
    deletions: int
    ref_len: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def rate(self) -> float:
        return self.errors / self.ref_len

    def __add__(self, other: ErrorCounts) -> ErrorCounts:
        return ErrorCounts(self.substitutions + other.substitutions,
                           self.insertions + other.insertions,
                           self.deletions + other.deletions,
                           self.ref_len + other.ref_len)


ZERO = ErrorCounts(0, 0, 0, 0)


def error_counts(ref: Sequence, hyp: Sequence) -> ErrorCounts:
    s = i = d = 0
    for op in kernels.align_opcodes(ref, hyp):
        if op == kernels.SUBSTITUTE:
            s += 1
        elif op == kernels.INSERT:
            i += 1
        elif op == kernels.DELETE:
            d += 1
    return ErrorCounts(s, i, d, len(ref))


def _seq(x: str | Sequence[str]) -> list[str]:
    return x.split() if isinstance(x, str) else list(x)


def per(ref: str | Sequence[str], hyp: str | Sequence[str]) -> ErrorCounts:
    """Token-level edit errors of ``hyp`` against a non-empty ``ref``."""
    r = _seq(ref)
    if not r:
        raise ValueError("PER undefined for an empty reference")
    return error_counts(r, _seq(hyp))


def wer(ref: str | Sequence[str], hyp: str | Sequence[str]) -> ErrorCounts:
    """Whitespace-word edit errors of ``hyp`` against a non-empty ``ref``."""
    r = _seq(ref)
    if not r:
        raise ValueError("WER undefined for an empty reference")
    return error_counts(r, _seq(hyp))


def strip_delimiters(utterance: str) -> list[str]:
    return [t for t in utterance.split() if t != WORD_DELIMITER]


@dataclass
class EvalReport:
    """Corpus-level scores.  ``S/I/D/N`` are word-level when ``wer`` is set,
    otherwise phoneme-level."""

    per: float | None
    wer: float | None
    S: int
    I: int
    D: int
    N: int
    utterances: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> EvalReport:
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> EvalReport:
        return cls.from_dict(json.loads(text))

    def write(self, path: str | Path) -> None:
        atomic_write_text(path, self.to_json())


def corpus_report(refs: Sequence[str], hyps: Sequence[str], level: str) -> EvalReport:
    """Score line-aligned corpora; ``level`` is ``"per"`` or ``"wer"``."""
    if len(refs) != len(hyps):
        raise ValueError(f"{len(refs)} reference lines vs {len(hyps)} hypothesis lines")
    fn = per if level == "per" else wer
    total = ZERO
    utts = []
    for idx, (r, h) in enumerate(zip(refs, hyps)):
        c = fn(r, h)
        total = total + c
        utts.append({"index": idx, "S": c.substitutions, "I": c.insertions,
                     "D": c.deletions, "N": c.ref_len})
    if total.ref_len == 0:
        raise ValueError("empty reference corpus")
    rate = total.rate
    return EvalReport(per=rate if level == "per" else None,
                      wer=rate if level == "wer" else None,
                      S=total.substitutions, I=total.insertions, D=total.deletions,
                      N=total.ref_len, utterances=utts)
