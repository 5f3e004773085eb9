"""Articulatory feature table, IPA segmentation and feature-based distances."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import kernels
from .errors import FeatureTableError, SegmentationError

WORD_DELIMITER = "|"
BOUNDARY = "<b>"
SPECIAL_TOKENS = frozenset({WORD_DELIMITER, BOUNDARY})
MAX_TOKEN_SEGMENTS = 3
TRIPHONE_MAX_DISTANCE = 3.0

_VALUES = {"+": 1, "-": -1, "−": -1, "0": 0}
# byte encoding of ternary values inside the kernel feature matrix
_ENCODE = {1: 2, 0: 1, -1: 0}


@dataclass(frozen=True)
class Segment:
    surface: str
    features: tuple[int, ...]
    row: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class PhonemeToken:
    surface: str
    segments: tuple[Segment, ...]

    def __len__(self) -> int:
        return len(self.segments)


class FeatureTable:
    """Immutable map from IPA segment to ternary feature vector."""

    def __init__(self, entries: dict[str, tuple[int, ...]], feature_names: Sequence[str]):
        names = tuple(feature_names)
        if not names:
            raise FeatureTableError("feature table declares no features")
        if not entries:
            raise FeatureTableError("empty feature table")
        for seg, vec in entries.items():
            if not seg:
                raise FeatureTableError("empty segment string in feature table")
            if len(vec) != len(names):
                raise FeatureTableError(
                    f"segment {seg!r} has {len(vec)} values, expected {len(names)}")
            if any(v not in (-1, 0, 1) for v in vec):
                raise FeatureTableError(f"segment {seg!r} has a non-ternary value")
        self._entries = dict(entries)
        self.feature_names = names
        self._order = sorted(self._entries)
        self._rows = {seg: i for i, seg in enumerate(self._order)}
        self.matrix = bytes(
            _ENCODE[v] for seg in self._order for v in self._entries[seg])
        self.max_key_len = max(len(k) for k in self._entries)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def entries(self) -> dict[str, tuple[int, ...]]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, seg: object) -> bool:
        return seg in self._entries

    def __iter__(self):
        return iter(self._order)

    def segment(self, surface: str) -> Segment:
        return Segment(surface, self._entries[surface], self._rows[surface])


def load_feature_table(path: str | Path | None = None) -> FeatureTable:
    """Parse a tab-separated feature table; ``None`` loads the bundled one."""
    if path is None:
        text = resources.files("ppmgpn").joinpath("data/features.tsv").read_text("utf-8")
        source = "features.tsv"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)

    header: list[str] | None = None
    entries: dict[str, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if header is None:
            if cols[0] != "segment" or len(cols) < 2:
                raise FeatureTableError(
                    f"{source}:{lineno}: header must be 'segment<TAB>f1...fN'")
            header = cols[1:]
            continue
        seg = cols[0]
        if len(cols) - 1 != len(header):
            raise FeatureTableError(
                f"{source}:{lineno}: expected {len(header)} values for {seg!r}, "
                f"got {len(cols) - 1}")
        try:
            vec = tuple(_VALUES[v] for v in cols[1:])
        except KeyError as exc:
            raise FeatureTableError(
                f"{source}:{lineno}: malformed value {exc.args[0]!r} for {seg!r}") from None
        if seg in entries:
            raise FeatureTableError(f"{source}:{lineno}: duplicate segment {seg!r}")
        entries[seg] = vec
    if header is None or not entries:
        raise FeatureTableError("empty feature table")
    return FeatureTable(entries, header)


def segment_ipa(s: str, table: FeatureTable) -> list[Segment]:
    """Greedy longest-match segmentation of ``s`` against table keys."""
    out: list[Segment] = []
    i, n = 0, len(s)
    while i < n:
        for width in range(min(table.max_key_len, n - i), 0, -1):
            piece = s[i:i + width]
            if piece in table:
                out.append(table.segment(piece))
                i += width
                break
        else:
            raise SegmentationError(s, len(s[:i].encode("utf-8")), s[i])
    return out


def segment_distance(x: Segment, y: Segment) -> float:
    """Fraction of feature positions on which two segments disagree."""
    n = len(x.features)
    return sum(a != b for a, b in zip(x.features, y.features)) / n


def make_token(surface: str, table: FeatureTable) -> PhonemeToken:
    return PhonemeToken(surface, tuple(segment_ipa(surface, table)))


def token_distance(x: PhonemeToken, y: PhonemeToken, table: FeatureTable) -> float:
    """Segment-level Levenshtein distance (normalized Hamming substitution,
    unit insertion/deletion)."""
    if x.segments == y.segments:
        return 0.0
    return kernels.feature_edit_distance(
        [s.row for s in x.segments], [s.row for s in y.segments],
        table.matrix, table.n_features)


def triphone_distance(x: Sequence[PhonemeToken], y: Sequence[PhonemeToken],
                      table: FeatureTable) -> float:
    """Sum over the three positions of the per-position token distance,
    each clamped to 1.0."""
    if len(x) != 3 or len(y) != 3:
        raise ValueError("triphones must have exactly 3 positions")
    return sum(min(1.0, token_distance(a, b, table)) for a, b in zip(x, y))


class Phonology:
    """Surface-string front end over a :class:`FeatureTable` with caching.

    Tokens are handled as plain strings; the reserved word delimiter and
    boundary tokens are atomic and sit at distance 1.0 from everything else.
    """

    def __init__(self, table: FeatureTable | None = None):
        self.table = table if table is not None else load_feature_table()
        self.token = lru_cache(maxsize=None)(self._token)
        self.distance = lru_cache(maxsize=1 << 16)(self._distance)

    def _token(self, surface: str) -> PhonemeToken:
        return make_token(surface, self.table)

    def segment_count(self, surface: str) -> int:
        if surface in SPECIAL_TOKENS:
            return 0
        return len(self.token(surface))

    def _distance(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        if a in SPECIAL_TOKENS or b in SPECIAL_TOKENS:
            return 1.0
        return token_distance(self.token(a), self.token(b), self.table)

    def triphone_distance(self, x: Sequence[str], y: Sequence[str]) -> float:
        if len(x) != 3 or len(y) != 3:
            raise ValueError("triphones must have exactly 3 positions")
        return sum(min(1.0, self.distance(a, b)) for a, b in zip(x, y))
