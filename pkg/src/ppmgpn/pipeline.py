"""End-to-end two-pass evaluation: clean phonemes -> channel -> P2G -> scores.

Configuration is a ``key = value`` text file::

    test_graphemes = data/test.graphemes.txt
    test_phonemes  = data/test.phonemes.txt
    train_graphemes = data/train.graphemes.txt   # lexicon source, or:
    train_phonemes  = data/train.phonemes.txt    # lexicon = lex.tsv
    noise_model = model.tsv          # enables noise-aware decoding
    channel = statistical            # identity | statistical | external:<command>
    channel_model = model.tsv        # defaults to noise_model
    decoder = noise-aware            # noise-blind | external:<command>
    merge_map = map.tsv              # optional PPM units
    lang = qa
    seed = 0

Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

import shutil
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .corpusio import read_lines, run_batch_command, split_command
from .errors import ConfigError, CorpusError, ExternalCommandError
from .gpn import ExternalChannel, IdentityChannel, NoiseChannel, StatisticalChannel
from .metrics import ZERO, EvalReport, per, strip_delimiters, wer
from .noise import TriphoneNoiseModel
from .p2g import P2GDecoder, P2GLexicon, build_lexicon
from .ppm import apply_merge_map, read_merge_map

_PATH_KEYS = ("test_graphemes", "test_phonemes", "train_graphemes", "train_phonemes",
              "lexicon", "noise_model", "channel_model", "merge_map")
_KEYS = set(_PATH_KEYS) | {"channel", "decoder", "lang", "seed"}


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        out[key] = value
    return out


def read_config(path: str | Path) -> dict[str, str]:
    return parse_config_text("\n".join(read_lines(path)))


@dataclass(frozen=True)
class PipelineConfig:
    test_graphemes: Path
    test_phonemes: Path
    train_graphemes: Path | None = None
    train_phonemes: Path | None = None
    lexicon: Path | None = None
    noise_model: Path | None = None
    channel_model: Path | None = None
    merge_map: Path | None = None
    channel: str = "identity"
    decoder: str = "noise-aware"
    lang: str = "xx"
    seed: int = 0

    @classmethod
    def from_mapping(cls, values: Mapping[str, str], base: str | Path = ".") -> PipelineConfig:
        unknown = set(values) - _KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        base = Path(base)
        kw: dict = {}
        for key in _PATH_KEYS:
            if values.get(key):
                p = Path(values[key])
                kw[key] = p if p.is_absolute() else base / p
        for key in ("test_graphemes", "test_phonemes"):
            if key not in kw:
                raise ConfigError(f"config is missing {key}")
        channel = values.get("channel", "identity")
        if channel not in ("identity", "statistical") and not channel.startswith("external:"):
            raise ConfigError(f"unknown channel {channel!r}")
        decoder = values.get("decoder", "noise-aware")
        if decoder not in ("noise-aware", "noise-blind") and not decoder.startswith("external:"):
            raise ConfigError(f"unknown decoder {decoder!r}")
        has_train = "train_graphemes" in kw and "train_phonemes" in kw
        if not decoder.startswith("external:") and "lexicon" not in kw and not has_train:
            raise ConfigError("config needs lexicon, or train_graphemes and train_phonemes")
        if channel == "statistical" and "channel_model" not in kw and "noise_model" not in kw:
            raise ConfigError("statistical channel needs channel_model or noise_model")
        if decoder == "noise-aware" and "noise_model" not in kw:
            raise ConfigError("noise-aware decoding needs noise_model")
        try:
            seed = int(values.get("seed", "0"))
        except ValueError:
            raise ConfigError(f"seed must be an integer, got {values['seed']!r}") from None
        return cls(channel=channel, decoder=decoder, lang=values.get("lang", "xx"),
                   seed=seed, **kw)

    @classmethod
    def read(cls, path: str | Path) -> PipelineConfig:
        return cls.from_mapping(read_config(path), Path(path).parent)

    def missing_paths(self) -> list[Path]:
        paths = [getattr(self, k) for k in _PATH_KEYS]
        return [p for p in paths if p is not None and not p.exists()]


class ExternalDecoder:
    """P2G translator behind ``command --in F --out G --lang xx``."""

    def __init__(self, command: str | Sequence[str]):
        self.argv = split_command(command)
        if not self.argv or shutil.which(self.argv[0]) is None:
            raise ExternalCommandError(f"decoder executable not found: {command!r}")

    def decode_all(self, utterances: Sequence[str], lang: str) -> list[str]:
        return run_batch_command(self.argv, utterances, ["--lang", lang], "P2G decoder")


def evaluate(graphemes: Sequence[str], phonemes: Sequence[str], lexicon: P2GLexicon | None,
             channel: NoiseChannel, model: TriphoneNoiseModel | None,
             lang: str = "xx", seed: int = 0,
             decoder: ExternalDecoder | None = None) -> EvalReport:
    """Run the channel and decoder over a test set and score both passes."""
    if len(graphemes) != len(phonemes):
        raise CorpusError(f"{len(graphemes)} grapheme vs {len(phonemes)} phoneme test lines")
    noisy = channel.apply(list(phonemes), lang, seed)
    if decoder is not None:
        hyps = decoder.decode_all(noisy, lang)
    else:
        p2g = P2GDecoder(lexicon, model)
        hyps = [p2g.decode(u) for u in noisy]
    w_total = p_total = ZERO
    utts = []
    for idx, (ref, clean, hyp_ph, hyp) in enumerate(zip(graphemes, phonemes, noisy, hyps)):
        wc = wer(ref, hyp)
        pc = per(strip_delimiters(clean), strip_delimiters(hyp_ph))
        w_total, p_total = w_total + wc, p_total + pc
        utts.append({"index": idx, "ref": ref, "hyp": hyp, "noisy": hyp_ph,
                     "wer_errors": wc.errors, "words": wc.ref_len,
                     "per_errors": pc.errors, "phonemes": pc.ref_len})
    if w_total.ref_len == 0:
        raise CorpusError("empty test set")
    return EvalReport(
        per=p_total.rate, wer=w_total.rate, S=w_total.substitutions, I=w_total.insertions,
        D=w_total.deletions, N=w_total.ref_len, utterances=utts,
        extra={"phoneme": {"S": p_total.substitutions, "I": p_total.insertions,
                           "D": p_total.deletions, "N": p_total.ref_len}})


def make_channel(spec: str, model: TriphoneNoiseModel | None) -> NoiseChannel:
    if spec == "identity":
        return IdentityChannel()
    if spec == "statistical":
        if model is None:
            raise ConfigError("statistical channel needs a noise model")
        return StatisticalChannel(model)
    if spec.startswith("external:"):
        return ExternalChannel(spec[len("external:"):])
    raise ConfigError(f"unknown channel {spec!r}")


def run_pipeline(config: PipelineConfig) -> EvalReport:
    missing = config.missing_paths()
    if missing:
        raise ConfigError("missing input files: " + ", ".join(str(p) for p in missing))

    test_g = read_lines(config.test_graphemes)
    test_p = read_lines(config.test_phonemes)
    merge = read_merge_map(config.merge_map) if config.merge_map else None
    if merge is not None:
        test_p = list(apply_merge_map(merge, config.lang, test_p))

    lexicon = None
    if config.lexicon is not None:
        lexicon = P2GLexicon.read(config.lexicon)
    elif config.train_graphemes is not None and config.train_phonemes is not None:
        train_p = read_lines(config.train_phonemes)
        if merge is not None:
            train_p = list(apply_merge_map(merge, config.lang, train_p))
        lexicon = build_lexicon(read_lines(config.train_graphemes), train_p)

    model = TriphoneNoiseModel.read(config.noise_model) if config.noise_model else None
    channel_model = (TriphoneNoiseModel.read(config.channel_model)
                     if config.channel_model else model)
    channel = make_channel(config.channel, channel_model)
    decode_model = model if config.decoder == "noise-aware" else None
    external = (ExternalDecoder(config.decoder[len("external:"):])
                if config.decoder.startswith("external:") else None)
    report = evaluate(test_g, test_p, lexicon, channel, decode_model, config.lang, config.seed,
                      external)
    report.extra["config"] = {
        "channel": config.channel, "decoder": config.decoder, "lang": config.lang,
        "seed": config.seed, "merged": merge is not None,
        "lexicon_entries": len(lexicon) if lexicon is not None else None}
    return report
