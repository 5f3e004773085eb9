"""Corpus readers/writers, the external phonemizer bridge and toy G2P rules.

Line conventions: UTF-8, ``\\n`` terminated.  A phoneme utterance is a line of
space-separated tokens with ``|`` between words; a grapheme sentence is a
line of whitespace-separated words.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusError, ExternalCommandError, SegmentationError
from .phonology import WORD_DELIMITER, FeatureTable, segment_ipa


def read_lines(path: str | Path) -> list[str]:
    """Read a UTF-8 text file into lines (without terminators).

    Consistent ``\\r\\n`` endings are accepted; mixed or bare ``\\r`` endings
    and undecodable bytes are rejected.
    """
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"{path}: not valid UTF-8 (byte offset {exc.start})") from None
    if text.startswith("﻿"):
        text = text[1:]
    crlf = text.count("\r\n")
    if "\r" in text:
        if crlf != text.count("\r") or crlf != text.count("\n"):
            raise CorpusError(f"{path}: mixed line endings")
        text = text.replace("\r\n", "\n")
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_lines(path: str | Path, lines: Iterable[str]) -> None:
    buf = []
    for line in lines:
        if "\n" in line or "\r" in line:
            raise CorpusError(f"{path}: line contains a line break: {line!r}")
        buf.append(line)
        buf.append("\n")
    atomic_write_text(path, "".join(buf))


def tokens(utterance: str) -> list[str]:
    return utterance.split()


def words(utterance: str | Sequence[str]) -> list[list[str]]:
    """Split a phoneme utterance into its delimiter-separated words."""
    toks = tokens(utterance) if isinstance(utterance, str) else list(utterance)
    out: list[list[str]] = [[]]
    for t in toks:
        if t == WORD_DELIMITER:
            out.append([])
        else:
            out[-1].append(t)
    return [w for w in out if w]


def join_words(word_tokens: Iterable[Sequence[str]]) -> str:
    return f" {WORD_DELIMITER} ".join(" ".join(w) for w in word_tokens)


def validate_phonemes(lines: Sequence[str], table: FeatureTable, source: str = "") -> None:
    for lineno, line in enumerate(lines, 1):
        for tok in tokens(line):
            if tok == WORD_DELIMITER:
                continue
            try:
                segment_ipa(tok, table)
            except SegmentationError as exc:
                raise CorpusError(f"{source} line {lineno}: {exc}") from None


@dataclass
class ParallelCorpus:
    lang_id: str
    graphemes: list[str]
    phonemes: list[str]

    def __post_init__(self):
        if len(self.graphemes) != len(self.phonemes):
            raise CorpusError(
                f"parallel corpus {self.lang_id}: {len(self.graphemes)} grapheme lines "
                f"vs {len(self.phonemes)} phoneme lines")

    def __len__(self) -> int:
        return len(self.graphemes)

    def records(self) -> list[tuple[str, str]]:
        return list(zip(self.graphemes, self.phonemes))


def read_parallel(graphemes: str | Path, phonemes: str | Path, lang_id: str) -> ParallelCorpus:
    return ParallelCorpus(lang_id, read_lines(graphemes), read_lines(phonemes))


def split_command(command: str | Sequence[str]) -> list[str]:
    return shlex.split(command) if isinstance(command, str) else list(command)


def run_batch_command(command: str | Sequence[str], lines: Sequence[str],
                      extra: Sequence[str], what: str) -> list[str]:
    """Run ``command --in IN --out OUT *extra`` and return OUT's lines.

    Raises ExternalCommandError on a nonzero exit or a line-count mismatch.
    """
    argv = split_command(command)
    with tempfile.TemporaryDirectory(prefix="ppmgpn-") as tmp:
        src = Path(tmp) / "in.txt"
        dst = Path(tmp) / "out.txt"
        write_lines(src, lines)
        proc = subprocess.run(
            argv + ["--in", str(src), "--out", str(dst), *extra],
            capture_output=True, text=True)
        if proc.returncode != 0:
            msg = proc.stderr.strip().splitlines()[-1:] or [""]
            raise ExternalCommandError(
                f"{what} exited with status {proc.returncode}: {msg[0]}")
        if not dst.exists():
            raise ExternalCommandError(f"{what} wrote no output file")
        out = read_lines(dst)
    if len(out) != len(lines):
        raise ExternalCommandError(
            f"{what} returned {len(out)} lines for {len(lines)} input lines")
    return out


def phonemize_external(command: str | Sequence[str], graphemes: Sequence[str],
                       lang_id: str, table: FeatureTable) -> ParallelCorpus:
    """Phonemize a grapheme corpus with an external tool (``--in --out --lang``)."""
    phonemes = run_batch_command(command, graphemes, ["--lang", lang_id], "phonemizer")
    validate_phonemes(phonemes, table, source="phonemizer output")
    return ParallelCorpus(lang_id, list(graphemes), phonemes)


class ToyG2PRules:
    """Ordered grapheme -> phoneme-token rewrite rules.

    Application is leftmost-longest; for equal-length keys the first rule
    wins.  A right-hand side may hold several space-separated tokens.
    """

    def __init__(self, rules: Iterable[tuple[str, str]]):
        self.rules: list[tuple[str, tuple[str, ...]]] = []
        self._map: dict[str, tuple[str, ...]] = {}
        for graph, phon in rules:
            if not graph or any(c.isspace() for c in graph):
                raise CorpusError(f"invalid grapheme key {graph!r}")
            rhs = tuple(phon.split())
            if not rhs or WORD_DELIMITER in rhs:
                raise CorpusError(f"invalid phoneme output {phon!r} for {graph!r}")
            self.rules.append((graph, rhs))
            self._map.setdefault(graph, rhs)
        if not self.rules:
            raise CorpusError("empty rule set")
        self._longest = max(len(g) for g in self._map)

    def word(self, word: str) -> list[str]:
        out: list[str] = []
        i = 0
        while i < len(word):
            for width in range(min(self._longest, len(word) - i), 0, -1):
                rhs = self._map.get(word[i:i + width])
                if rhs is not None:
                    out.extend(rhs)
                    i += width
                    break
            else:
                raise CorpusError(f"no rule covers {word[i]!r} in {word!r}")
        return out

    @classmethod
    def read(cls, path: str | Path) -> ToyG2PRules:
        rules = []
        for lineno, line in enumerate(read_lines(path), 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise CorpusError(f"{path}:{lineno}: expected 'grapheme<TAB>phonemes'")
            rules.append((cols[0], cols[1]))
        return cls(rules)

    def write(self, path: str | Path) -> None:
        write_lines(path, (f"{g}\t{' '.join(p)}" for g, p in self.rules))


def toy_g2p(rules: ToyG2PRules, sentence: str) -> str:
    """Phonemize a sentence word by word; words are joined with ``|``."""
    return join_words(rules.word(w) for w in sentence.split())
