"""Global Phoneme Noise training data and the noise-channel abstraction.

The multilingual GPN generator itself is an external sequence model.  This
module prepares its training pairs (K-fold and triphone-labelled noise from
every language, language- and source-tagged) and defines the channel
interface through which either a trained model or the statistical triphone
channel produces noisy phoneme text.
"""

from __future__ import annotations

import json
import random
import shutil
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Protocol

from .corpusio import atomic_write_text, read_lines, run_batch_command, split_command, write_lines
from .errors import CorpusError, ExternalCommandError
from .noise import TriphoneNoiseModel, apply_pseudo_noise
from .phonology import WORD_DELIMITER
from .ppm import check_lang_id

SOURCES = ("kfold", "triphone")
LANG_TAG_PREFIX = "<lang:"


def lang_tag(lang_id: str) -> str:
    return f"{LANG_TAG_PREFIX}{lang_id}>"


class GpnPair(NamedTuple):
    lang: str
    source: str
    clean: str
    noisy: str


@dataclass
class GpnTrainingSet:
    pairs: list[GpnPair]
    manifest: dict[str, dict[str, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def tagged(self) -> list[tuple[str, str]]:
        """(source, target) lines for a single multilingual model; the source
        side starts with the ``<lang:xx>`` tag."""
        return [(f"{lang_tag(p.lang)} {p.clean}", p.noisy) for p in self.pairs]

    def write(self, path: str | Path) -> None:
        write_lines(path, ("\t".join(p) for p in self.pairs))

    def write_manifest(self, path: str | Path) -> None:
        atomic_write_text(path, json.dumps(self.manifest, indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> GpnTrainingSet:
        pairs = []
        for lineno, line in enumerate(read_lines(path), 1):
            cols = line.split("\t")
            if len(cols) != 4 or cols[1] not in SOURCES:
                raise CorpusError(f"{path}:{lineno}: expected 'lang<TAB>source<TAB>clean<TAB>noisy'")
            pairs.append(GpnPair(*cols))
        return cls(pairs, _manifest(pairs))


def _manifest(pairs: Sequence[GpnPair]) -> dict[str, dict[str, int]]:
    manifest: dict[str, dict[str, int]] = {}
    for p in pairs:
        row = manifest.setdefault(p.lang, dict.fromkeys(SOURCES, 0))
        row[p.source] += 1
    for row in manifest.values():
        row["total"] = sum(row[s] for s in SOURCES)
    return manifest


def _check_utterance(text: str, vocab: set[str] | None, where: str) -> None:
    if "\t" in text or "\n" in text:
        raise CorpusError(f"{where}: tab or newline inside an utterance")
    for tok in text.split():
        if tok.startswith(LANG_TAG_PREFIX):
            raise CorpusError(f"{where}: reserved language tag {tok!r} collides with data")
        if vocab is not None and tok != WORD_DELIMITER and tok not in vocab:
            raise CorpusError(f"{where}: token {tok!r} not in the language vocabulary")


def prepare_gpn_training_data(
    kfold: Mapping[str, Sequence[tuple[str, str]]],
    triphone: Mapping[str, Sequence[tuple[str, str]]],
    seed: int = 0,
    vocabularies: Mapping[str, set[str]] | None = None,
) -> GpnTrainingSet:
    """Concatenate, tag and shuffle per-language noisy pairs from both sources."""
    langs = sorted(set(kfold) | set(triphone))
    if not langs:
        raise CorpusError("GPN preparation needs at least one language")
    pairs: list[GpnPair] = []
    for lang in langs:
        check_lang_id(lang)
        vocab = vocabularies.get(lang) if vocabularies is not None else None
        if vocabularies is not None and vocab is None:
            raise CorpusError(f"no vocabulary supplied for language {lang!r}")
        for source, table in (("kfold", kfold), ("triphone", triphone)):
            for lineno, (clean, noisy) in enumerate(table.get(lang, ()), 1):
                where = f"{lang}/{source} line {lineno}"
                _check_utterance(clean, vocab, where)
                _check_utterance(noisy, vocab, where)
                pairs.append(GpnPair(lang, source, " ".join(clean.split()),
                                     " ".join(noisy.split())))
    random.Random(seed).shuffle(pairs)
    manifest = _manifest(pairs)
    for lang in langs:
        manifest.setdefault(lang, {**dict.fromkeys(SOURCES, 0), "total": 0})
    return GpnTrainingSet(pairs, manifest)


class NoiseChannel(Protocol):
    """Maps clean phoneme utterances to noisy ones, one output line per input."""

    def apply(self, utterances: Sequence[str], lang_id: str, seed: int = 0) -> list[str]: ...


class IdentityChannel:
    def apply(self, utterances, lang_id, seed=0):
        return list(utterances)


class StatisticalChannel:
    """Triphone pseudo-noise as a channel; stands in for a trained GPN."""

    def __init__(self, model: TriphoneNoiseModel):
        self.model = model

    def apply(self, utterances: Sequence[str], lang_id: str, seed: int = 0) -> list[str]:
        return apply_pseudo_noise(utterances, self.model, seed)


def statistical_channel(model: TriphoneNoiseModel) -> StatisticalChannel:
    return StatisticalChannel(model)


class ExternalChannel:
    """Batch channel: ``command --in F --out G --lang xx --seed N``."""

    def __init__(self, command: str | Sequence[str]):
        self.argv = split_command(command)
        if not self.argv or shutil.which(self.argv[0]) is None:
            raise ExternalCommandError(f"channel executable not found: {command!r}")

    def apply(self, utterances: Sequence[str], lang_id: str, seed: int = 0) -> list[str]:
        return run_batch_command(self.argv, utterances,
                                 ["--lang", lang_id, "--seed", str(seed)], "noise channel")


def external_channel(command: str | Sequence[str]) -> ExternalChannel:
    return ExternalChannel(command)
