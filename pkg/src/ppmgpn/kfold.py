"""K-fold clean/noisy pair generation with a pluggable recognizer.

Each fold is held out once: a recognizer trained on the remaining folds
transcribes it, so every training utterance ends up with a realistic noisy
hypothesis.  Real acoustic recognizers plug in through
:class:`SubprocessRecognizer`; :class:`ConfusionRecognizer` is a seeded
token-confusion simulator for desk-scale runs.
"""

from __future__ import annotations

import hashlib
import random
import shutil
import subprocess
import tempfile
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol

from .corpusio import read_lines, split_command, write_lines
from .errors import CorpusError, ExternalCommandError, RecognizerError
from .phonology import WORD_DELIMITER


@dataclass(frozen=True)
class FoldPlan:
    n_folds: int
    assignment: tuple[int, ...]
    seed: int

    def fold(self, f: int) -> list[int]:
        return [i for i, a in enumerate(self.assignment) if a == f]

    def sizes(self) -> list[int]:
        sizes = [0] * self.n_folds
        for a in self.assignment:
            sizes[a] += 1
        return sizes

    def write(self, path: str | Path) -> None:
        write_lines(path, [f"# n_folds={self.n_folds} seed={self.seed}"]
                    + [f"{i}\t{a}" for i, a in enumerate(self.assignment)])

    @classmethod
    def read(cls, path: str | Path) -> FoldPlan:
        lines = read_lines(path)
        header = dict(kv.split("=") for kv in lines[0].lstrip("# ").split())
        assignment = [int(line.split("\t")[1]) for line in lines[1:] if line.strip()]
        return cls(int(header["n_folds"]), tuple(assignment), int(header["seed"]))


def split_folds(n_records: int, n_folds: int, seed: int = 0) -> FoldPlan:
    """Seeded shuffled partition into folds whose sizes differ by at most one."""
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_records < n_folds:
        raise ValueError(f"cannot split {n_records} records into {n_folds} folds")
    order = list(range(n_records))
    random.Random(seed).shuffle(order)
    assignment = [0] * n_records
    for rank, idx in enumerate(order):
        assignment[idx] = rank % n_folds
    return FoldPlan(n_folds, tuple(assignment), seed)


class Recognizer(Protocol):
    def train(self, records: Sequence[str]) -> Any: ...

    def infer(self, handle: Any, records: Sequence[str]) -> list[str]: ...


class IdentityRecognizer:
    """Echoes its input; useful as a no-noise baseline."""

    def train(self, records):
        return None

    def infer(self, handle, records):
        return list(records)


class ConfusionRecognizer:
    """Simulated recognizer: a fixed token-confusion channel.

    ``confusions`` maps a clean token to ``[(noisy_token, prob), ...]``; each
    token is replaced by at most one alternative, drawn in list order.  The
    "model" returned by :meth:`train` is a digest of its training data, which
    seeds inference so results do not depend on fold scheduling.
    """

    def __init__(self, confusions: Mapping[str, Sequence[tuple[str, float]]], seed: int = 0):
        for tok, alts in confusions.items():
            if sum(p for _, p in alts) > 1.0 + 1e-12:
                raise ValueError(f"confusion probabilities for {tok!r} exceed 1")
        self.confusions = {k: list(v) for k, v in confusions.items()}
        self.seed = seed

    def train(self, records: Sequence[str]) -> str:
        h = hashlib.sha256()
        for r in records:
            h.update(r.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()[:16]

    def transcribe(self, utterance: str, rng: random.Random) -> str:
        out = []
        for tok in utterance.split():
            alts = self.confusions.get(tok) if tok != WORD_DELIMITER else None
            if alts:
                u = rng.random()
                acc = 0.0
                for noisy, p in alts:
                    acc += p
                    if u < acc:
                        tok = noisy
                        break
            out.append(tok)
        return " ".join(out)

    def infer(self, handle: str, records: Sequence[str]) -> list[str]:
        return [self.transcribe(r, random.Random(f"{self.seed}:{handle}:{i}"))
                for i, r in enumerate(records)]


def read_confusions(path: str | Path) -> dict[str, list[tuple[str, float]]]:
    """``clean<TAB>noisy<TAB>prob`` rows."""
    out: dict[str, list[tuple[str, float]]] = {}
    for lineno, line in enumerate(read_lines(path), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusError(f"{path}:{lineno}: expected 'clean<TAB>noisy<TAB>prob'")
        out.setdefault(cols[0], []).append((cols[1], float(cols[2])))
    return out


class SubprocessRecognizer:
    """Runs ``command --train T --infer I --out O`` once per fold."""

    def __init__(self, command: str | Sequence[str]):
        self.argv = split_command(command)
        if not self.argv or shutil.which(self.argv[0]) is None:
            raise ExternalCommandError(f"recognizer executable not found: {command!r}")

    def train(self, records: Sequence[str]) -> list[str]:
        # training happens inside the external process together with inference
        return list(records)

    def infer(self, handle: list[str], records: Sequence[str]) -> list[str]:
        with tempfile.TemporaryDirectory(prefix="ppmgpn-fold-") as tmp:
            train, infer, out = (Path(tmp) / n for n in ("train.txt", "infer.txt", "out.txt"))
            write_lines(train, handle)
            write_lines(infer, records)
            proc = subprocess.run(
                self.argv + ["--train", str(train), "--infer", str(infer), "--out", str(out)],
                capture_output=True, text=True)
            if proc.returncode != 0:
                tail = (proc.stderr.strip().splitlines() or [""])[-1]
                raise ExternalCommandError(
                    f"recognizer exited with status {proc.returncode}: {tail}")
            return read_lines(out) if out.exists() else []


def assemble_noisy_pairs(records: Sequence[str], plan: FoldPlan, recognizer: Recognizer,
                         jobs: int = 1) -> list[tuple[str, str]]:
    """Noisy hypotheses for every record, each produced by a model that never
    saw it.  Output order follows ``records``."""
    if len(plan.assignment) != len(records):
        raise ValueError(
            f"fold plan covers {len(plan.assignment)} records, corpus has {len(records)}")

    def run(f: int) -> tuple[list[int], list[str]]:
        held = plan.fold(f)
        held_set = set(held)
        train = [r for i, r in enumerate(records) if i not in held_set]
        try:
            hyps = recognizer.infer(recognizer.train(train), [records[i] for i in held])
        except ExternalCommandError as exc:
            raise RecognizerError(f"fold {f}: {exc}") from None
        if len(hyps) != len(held):
            raise RecognizerError(
                f"fold {f}: recognizer returned {len(hyps)} hypotheses for {len(held)} records")
        return held, hyps

    noisy: list[str | None] = [None] * len(records)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(plan.n_folds)))
    else:
        results = [run(f) for f in range(plan.n_folds)]
    for held, hyps in results:
        for i, h in zip(held, hyps):
            noisy[i] = h
    return [(r, n) for r, n in zip(records, noisy)]
