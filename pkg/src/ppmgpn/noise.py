"""Triphone ASR-noise modeling and pseudo-noise labeling.

Clean and noisy phoneme transcripts are aligned; every three-token window of
the clean side that holds at least one substitution (and no insertion or
deletion) is recorded as a clean -> noisy triphone rewrite.  The rewrite
fires during pseudo-labeling with probability

    (freq / total_freq) * ((3.0 - distance) / 3.0)

where ``distance`` is the articulatory triphone distance between the two.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from . import kernels
from .corpusio import atomic_write_text, read_lines
from .errors import NoiseModelError
from .phonology import BOUNDARY, TRIPHONE_MAX_DISTANCE, Phonology

Triphone = tuple[str, str, str]

_KINDS = {
    kernels.MATCH: "match",
    kernels.SUBSTITUTE: "substitute",
    kernels.DELETE: "delete",
    kernels.INSERT: "insert",
}


class AlignOp(NamedTuple):
    kind: str
    clean: str | None
    noisy: str | None


@dataclass(frozen=True)
class AlignedUtterance:
    ops: tuple[AlignOp, ...]

    @property
    def clean(self) -> list[str]:
        return [op.clean for op in self.ops if op.clean is not None]

    @property
    def noisy(self) -> list[str]:
        return [op.noisy for op in self.ops if op.noisy is not None]

    @property
    def cost(self) -> int:
        return sum(op.kind != "match" for op in self.ops)

    def format(self) -> str:
        tag = {"match": "M", "substitute": "S", "delete": "D", "insert": "I"}
        return " ".join(f"{tag[o.kind]}:{o.clean or ''}:{o.noisy or ''}" for o in self.ops)


def align_sequences(clean: Sequence[str], noisy: Sequence[str]) -> AlignedUtterance:
    """Minimum unit-cost alignment; ties prefer match > substitute > delete > insert."""
    ops = []
    i = j = 0
    for code in kernels.align_opcodes(clean, noisy):
        kind = _KINDS[code]
        if kind in ("match", "substitute"):
            ops.append(AlignOp(kind, clean[i], noisy[j]))
            i += 1
            j += 1
        elif kind == "delete":
            ops.append(AlignOp(kind, clean[i], None))
            i += 1
        else:
            ops.append(AlignOp(kind, None, noisy[j]))
            j += 1
    return AlignedUtterance(tuple(ops))


def replacement_probability(freq: int, total_freq: int, distance: float) -> float:
    if not 0 < freq <= total_freq:
        raise NoiseModelError(
            f"replacement probability needs 0 < freq <= total_freq (got {freq}, {total_freq})")
    if not 0.0 <= distance <= TRIPHONE_MAX_DISTANCE:
        raise NoiseModelError(f"distance {distance} outside [0, {TRIPHONE_MAX_DISTANCE}]")
    return (freq / total_freq) * ((TRIPHONE_MAX_DISTANCE - distance) / TRIPHONE_MAX_DISTANCE)


def clean_triphones(tokens: Sequence[str]) -> list[Triphone]:
    """All width-3 windows; shorter utterances are right-padded with BOUNDARY."""
    toks = list(tokens)
    if not toks:
        return []
    if len(toks) < 3:
        toks += [BOUNDARY] * (3 - len(toks))
    return [tuple(toks[i:i + 3]) for i in range(len(toks) - 2)]


@dataclass(frozen=True)
class Candidate:
    noisy: Triphone
    freq: int
    distance: float
    prob: float


@dataclass
class TriphoneNoiseModel:
    """Clean-triphone -> noisy-triphone substitution statistics."""

    entries: dict[Triphone, dict[Triphone, int]] = field(default_factory=dict)
    totals: Counter = field(default_factory=Counter)
    distances: dict[tuple[Triphone, Triphone], float] = field(default_factory=dict)

    def __post_init__(self):
        self._cands: dict[Triphone, list[Candidate]] = {}
        self._rev: dict[Triphone, list[Triphone]] | None = None

    def __len__(self) -> int:
        return sum(len(v) for v in self.entries.values())

    def add(self, clean: Triphone, noisy: Triphone, freq: int = 1) -> None:
        row = self.entries.setdefault(clean, {})
        row[noisy] = row.get(noisy, 0) + freq
        self._cands.pop(clean, None)
        self._rev = None

    def merge(self, other: TriphoneNoiseModel) -> None:
        """Fold another model's counts into this one (shard reduction)."""
        for clean, row in other.entries.items():
            for noisy, f in row.items():
                self.add(clean, noisy, f)
        self.totals.update(other.totals)
        self.distances.update(other.distances)
        self._cands.clear()

    def fill_distances(self, phonology: Phonology) -> None:
        for clean, row in self.entries.items():
            for noisy in row:
                if (clean, noisy) not in self.distances:
                    self.distances[(clean, noisy)] = phonology.triphone_distance(clean, noisy)
        self._cands.clear()

    def probability(self, clean: Triphone, noisy: Triphone) -> float:
        return replacement_probability(
            self.entries[clean][noisy], self.totals[clean], self.distances[(clean, noisy)])

    def candidates(self, clean: Triphone) -> list[Candidate]:
        """Candidates for ``clean`` in firing order: descending freq, then noisy."""
        cached = self._cands.get(clean)
        if cached is not None:
            return cached
        row = self.entries.get(clean)
        if not row or BOUNDARY in clean:
            out: list[Candidate] = []
        else:
            out = [Candidate(n, f, self.distances[(clean, n)], self.probability(clean, n))
                   for n, f in sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))]
        self._cands[clean] = out
        return out

    def reverse_index(self) -> dict[Triphone, list[Triphone]]:
        """noisy triphone -> clean triphones that can produce it."""
        if self._rev is None:
            rev: dict[Triphone, list[Triphone]] = {}
            for clean in sorted(self.entries):
                if BOUNDARY in clean:
                    continue
                for noisy in sorted(self.entries[clean]):
                    rev.setdefault(noisy, []).append(clean)
            self._rev = rev
        return self._rev

    def rows(self) -> Iterable[tuple[Triphone, Triphone, int, int, float, float]]:
        for clean in sorted(self.entries):
            for noisy, f in sorted(self.entries[clean].items()):
                yield (clean, noisy, f, self.totals[clean],
                       self.distances[(clean, noisy)], self.probability(clean, noisy))

    def write(self, path: str | Path) -> None:
        """TSV rows ``clean noisy freq total_freq distance prob``.

        Totals of triphones without any entry go to ``#total`` lines so the
        file round-trips the whole model.
        """
        out = ["# clean_tri\tnoisy_tri\tfreq\ttotal_freq\tdistance\tprob\n"]
        for clean, noisy, f, tot, d, p in self.rows():
            out.append(f"{' '.join(clean)}\t{' '.join(noisy)}\t{f}\t{tot}\t{d!r}\t{p!r}\n")
        for clean in sorted(self.totals):
            if clean not in self.entries:
                out.append(f"#total\t{' '.join(clean)}\t{self.totals[clean]}\n")
        atomic_write_text(path, "".join(out))

    @classmethod
    def read(cls, path: str | Path) -> TriphoneNoiseModel:
        model = cls()
        for lineno, line in enumerate(read_lines(path), 1):
            if line.startswith("#total\t"):
                _, tri, tot = line.split("\t")
                model.totals[_triphone(tri, path, lineno)] = int(tot)
                continue
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 6:
                raise NoiseModelError(f"{path}:{lineno}: expected 6 tab-separated columns")
            clean = _triphone(cols[0], path, lineno)
            noisy = _triphone(cols[1], path, lineno)
            f, tot, d = int(cols[2]), int(cols[3]), float(cols[4])
            if clean in model.totals and model.totals[clean] != tot:
                raise NoiseModelError(f"{path}:{lineno}: inconsistent total_freq for {cols[0]!r}")
            model.totals[clean] = tot
            model.add(clean, noisy, f)
            model.distances[(clean, noisy)] = d
            replacement_probability(f, tot, d)
        return model


def _triphone(text: str, path, lineno: int) -> Triphone:
    toks = text.split(" ")
    if len(toks) != 3 or not all(toks):
        raise NoiseModelError(f"{path}:{lineno}: {text!r} is not a triphone")
    return tuple(toks)


def mine_pair(clean: Sequence[str], noisy: Sequence[str], model: TriphoneNoiseModel) -> None:
    """Add one aligned utterance's triphone statistics to ``model``."""
    model.totals.update(clean_triphones(clean))
    if len(clean) < 3:
        return
    aligned = align_sequences(clean, noisy).ops
    # op index of each clean position
    pos = [k for k, op in enumerate(aligned) if op.clean is not None]
    for i in range(len(clean) - 2):
        span = aligned[pos[i]:pos[i + 2] + 1]
        if any(op.kind in ("insert", "delete") for op in span):
            continue
        if any(op.kind == "substitute" for op in span):
            model.add(tuple(clean[i:i + 3]), tuple(op.noisy for op in span))


def analyze_triphone_noise(pairs: Iterable[tuple[Sequence[str] | str, Sequence[str] | str]],
                           phonology: Phonology) -> TriphoneNoiseModel:
    """Mine a triphone noise model from (clean, noisy) utterance pairs."""
    model = TriphoneNoiseModel()
    n = 0
    for clean, noisy in pairs:
        n += 1
        c = clean.split() if isinstance(clean, str) else list(clean)
        z = noisy.split() if isinstance(noisy, str) else list(noisy)
        mine_pair(c, z, model)
    if n == 0:
        raise NoiseModelError("no utterance pairs to analyze")
    model.fill_distances(phonology)
    return model


def _mine_shard(pairs: list[tuple[list[str], list[str]]]) -> TriphoneNoiseModel:
    model = TriphoneNoiseModel()
    for clean, noisy in pairs:
        mine_pair(clean, noisy, model)
    return model


def analyze_sharded(pairs: Sequence[tuple[str, str]], phonology: Phonology,
                    jobs: int = 1) -> TriphoneNoiseModel:
    """Like :func:`analyze_triphone_noise` but mines contiguous shards in
    worker processes.  Counts are summed, so the result does not depend on
    ``jobs``."""
    if not pairs:
        raise NoiseModelError("no utterance pairs to analyze")
    split = [(c.split(), z.split()) for c, z in pairs]
    if jobs <= 1:
        model = _mine_shard(split)
    else:
        from concurrent.futures import ProcessPoolExecutor
        size = -(-len(split) // jobs)
        shards = [split[i:i + size] for i in range(0, len(split), size)]
        model = TriphoneNoiseModel()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_mine_shard, shards):
                model.merge(part)
    model.fill_distances(phonology)
    return model


def line_rng(seed: int, index: int) -> random.Random:
    """Per-line generator; depends only on (seed, line index)."""
    return random.Random(f"{seed}:{index}")


def noisify(tokens: Sequence[str], model: TriphoneNoiseModel, rng: random.Random) -> list[str]:
    """Left-to-right triphone replacement of one utterance."""
    toks = list(tokens)
    out: list[str] = []
    i, n = 0, len(toks)
    while i <= n - 3:
        fired = None
        for cand in model.candidates((toks[i], toks[i + 1], toks[i + 2])):
            if rng.random() < cand.prob:
                fired = cand.noisy
                break
        if fired is not None:
            out.extend(fired)
            i += 3
        else:
            out.append(toks[i])
            i += 1
    out.extend(toks[i:])
    return out


def apply_pseudo_noise(corpus: Iterable[str], model: TriphoneNoiseModel, seed: int = 0,
                       start_index: int = 0) -> list[str]:
    """Pseudo-label a clean corpus (one utterance per line)."""
    return [" ".join(noisify(line.split(), model, line_rng(seed, idx)))
            for idx, line in enumerate(corpus, start_index)]
