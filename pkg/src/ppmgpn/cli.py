"""``ppmgpn`` command line.

Every subcommand validates its flags before reading any file, writes its
outputs atomically and reports failures as one line on stderr::

    ppmgpn: error: <ErrorKind>: <message>

with exit status 1.  ``--config FILE`` supplies defaults from ``key = value``
lines (keys are flag names, dashes or underscores); relative paths in the
file resolve against its directory and explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpusio import atomic_write_text, phonemize_external, read_lines, write_lines
from .errors import ConfigError, CorpusError, PpmgpnError
from .gpn import prepare_gpn_training_data
from .kfold import (ConfusionRecognizer, FoldPlan, IdentityRecognizer, SubprocessRecognizer,
                    assemble_noisy_pairs, read_confusions, split_folds)
from .metrics import corpus_report
from .noise import TriphoneNoiseModel, align_sequences, analyze_sharded, apply_pseudo_noise
from .phonology import Phonology
from .pipeline import PipelineConfig, parse_config_text, run_pipeline
from .ppm import (build_language_vocab, build_merge_map, check_lang_id, coverage,
                  coverage_grid, merged_vocab_sets, read_merge_map, read_pivots,
                  read_vocab_dir, select_pivots, write_merge_map, write_pivots, write_vocab,
                  apply_merge_map)
from .synth import BUNDLED_LANGS, bundled_languages, make_language, near_phoneme_language, \
    write_language

DEFAULT_SEED = 0


class UsageError(PpmgpnError):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.path_dests: set[str] = set()

    def error(self, message):
        raise UsageError(message)


def _path(p: argparse.ArgumentParser, *flags: str, **kw) -> None:
    action = p.add_argument(*flags, **kw)
    p.path_dests.add(action.dest)


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) in (None, [])]
    if missing:
        raise UsageError("missing required flag(s): "
                         + ", ".join("--" + n.replace("_", "-") for n in missing))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _lang_file(spec: str) -> tuple[str, str]:
    lang, sep, path = spec.partition("=")
    if not sep or not path:
        raise argparse.ArgumentTypeError(f"expected LANG=FILE, got {spec!r}")
    return check_lang_id(lang), path


def _read_pairs(path) -> list[tuple[str, str]]:
    pairs = []
    for lineno, line in enumerate(read_lines(path), 1):
        cols = line.split("\t")
        if len(cols) != 2:
            raise CorpusError(f"{path}:{lineno}: expected 'clean<TAB>noisy'")
        pairs.append((cols[0], cols[1]))
    return pairs


def _write_pairs(path, pairs) -> None:
    write_lines(path, (f"{c}\t{n}" for c, n in pairs))


def _emit_json(obj, out) -> None:
    text = json.dumps(obj, ensure_ascii=False, indent=1, sort_keys=True) + "\n"
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# ---- subcommands ---------------------------------------------------------

def cmd_synth_make(args) -> None:
    _require(args, "out")
    if args.preset == "bundled":
        if args.lang not in BUNDLED_LANGS:
            raise UsageError(f"bundled languages are {', '.join(BUNDLED_LANGS)}")
        lang = bundled_languages(args.seed)[BUNDLED_LANGS.index(args.lang)]
    elif args.preset == "near":
        lang = near_phoneme_language(args.lang, args.seed)
    else:
        lang = make_language(args.lang, args.seed)
    write_language(lang, args.out, args.sentences, args.seed, args.confusion_rate,
                   args.test_sentences)


def cmd_vocab_build(args) -> None:
    _require(args, "lang", "out")
    check_lang_id(args.lang)
    phonology = Phonology()
    if args.phonemes:
        lines = read_lines(args.phonemes)
    elif args.graphemes and args.phonemizer:
        corpus = phonemize_external(args.phonemizer, read_lines(args.graphemes), args.lang,
                                    phonology.table)
        lines = corpus.phonemes
        if args.phonemes_out:
            write_lines(args.phonemes_out, lines)
    else:
        raise UsageError("give --phonemes, or --graphemes with --phonemizer")
    write_vocab(args.out, build_language_vocab(args.lang, lines, phonology))


def cmd_ppm_pivots(args) -> None:
    _require(args, "vocabs", "k", "out")
    write_pivots(args.out, select_pivots(read_vocab_dir(args.vocabs), args.k))


def cmd_ppm_merge(args) -> None:
    _require(args, "vocabs", "pivots", "t", "out")
    phonology = Phonology()
    vocabs = read_vocab_dir(args.vocabs, phonology)
    write_merge_map(args.out, build_merge_map(vocabs, read_pivots(args.pivots), args.t,
                                              phonology))


def cmd_ppm_coverage(args) -> None:
    if args.merge_map:
        per_lang, avg = coverage(merged_vocab_sets(read_merge_map(args.merge_map)))
        _emit_json({"per_language": per_lang, "average": avg}, args.out)
        return
    _require(args, "vocabs")
    phonology = Phonology()
    vocabs = read_vocab_dir(args.vocabs, phonology)
    per_lang, base = coverage({v.lang_id: v.tokens for v in vocabs})
    grid = coverage_grid(vocabs, args.k or [0], args.t or [0.0], phonology)
    _emit_json({"baseline": base, "baseline_per_language": per_lang,
                "grid": [{"k": k, "t": t, "coverage": c} for (k, t), c in grid.items()]},
               args.out)


def cmd_ppm_apply(args) -> None:
    _require(args, "merge_map", "lang", "inp", "out")
    mm = read_merge_map(args.merge_map)
    write_lines(args.out, list(apply_merge_map(mm, args.lang, read_lines(args.inp))))


def cmd_noise_align(args) -> None:
    _require(args, "clean", "noisy", "out")
    clean, noisy = read_lines(args.clean), read_lines(args.noisy)
    if len(clean) != len(noisy):
        raise CorpusError(f"{len(clean)} clean lines vs {len(noisy)} noisy lines")
    write_lines(args.out, (align_sequences(c.split(), n.split()).format()
                           for c, n in zip(clean, noisy)))


def cmd_noise_analyze(args) -> None:
    _require(args, "pairs", "out")
    pairs = [p for f in args.pairs for p in _read_pairs(f)]
    analyze_sharded(pairs, Phonology(), args.jobs).write(args.out)


def _noise_shard(job) -> list[str]:
    model, lines, seed, start = job
    return apply_pseudo_noise(lines, model, seed, start)


def cmd_noise_apply(args) -> None:
    _require(args, "model", "inp", "out")
    if args.volume < 1:
        raise UsageError("--volume must be >= 1")
    model = TriphoneNoiseModel.read(args.model)
    clean = read_lines(args.inp) * args.volume
    if args.jobs > 1 and len(clean) > 1:
        from concurrent.futures import ProcessPoolExecutor
        size = -(-len(clean) // args.jobs)
        jobs = [(model, clean[i:i + size], args.seed, i) for i in range(0, len(clean), size)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            noisy = [line for part in pool.map(_noise_shard, jobs) for line in part]
    else:
        noisy = apply_pseudo_noise(clean, model, args.seed)
    write_lines(args.out, noisy)
    if args.pairs_out:
        _write_pairs(args.pairs_out, zip(clean, noisy))


def cmd_kfold_split(args) -> None:
    _require(args, "folds", "out")
    if args.corpus:
        n = len(read_lines(args.corpus))
    elif args.n is not None:
        n = args.n
    else:
        raise UsageError("give --corpus or --n")
    try:
        plan = split_folds(n, args.folds, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    plan.write(args.out)


def cmd_kfold_run(args) -> None:
    _require(args, "corpus", "plan", "out")
    if args.recognizer == "confusion":
        _require(args, "confusions")
    if args.recognizer == "external":
        _require(args, "command")
    records = read_lines(args.corpus)
    plan = FoldPlan.read(args.plan)
    if args.recognizer == "identity":
        rec = IdentityRecognizer()
    elif args.recognizer == "confusion":
        rec = ConfusionRecognizer(read_confusions(args.confusions), args.seed)
    else:
        rec = SubprocessRecognizer(args.command)
    try:
        pairs = assemble_noisy_pairs(records, plan, rec, args.jobs)
    except ValueError as exc:
        raise CorpusError(str(exc)) from None
    _write_pairs(args.out, pairs)


def cmd_gpn_prepare(args) -> None:
    _require(args, "out")
    if not args.kfold and not args.triphone:
        raise UsageError("give at least one --kfold or --triphone LANG=FILE")
    kfold: dict[str, list] = {}
    triphone: dict[str, list] = {}
    for table, specs in ((kfold, args.kfold), (triphone, args.triphone)):
        for lang, path in specs:
            table.setdefault(lang, []).extend(_read_pairs(path))
    vocabularies = None
    if args.vocabs:
        vocabularies = {v.lang_id: set(v.tokens) for v in read_vocab_dir(args.vocabs)}
    data = prepare_gpn_training_data(kfold, triphone, args.seed, vocabularies)
    data.write(args.out)
    if args.manifest:
        data.write_manifest(args.manifest)


def cmd_eval(args) -> None:
    _require(args, "ref", "hyp")
    refs, hyps = read_lines(args.ref), read_lines(args.hyp)
    try:
        report = corpus_report(refs, hyps, args.level)
    except ValueError as exc:
        raise CorpusError(str(exc)) from None
    _emit_json(report.to_dict(), args.out)


def cmd_pipeline_run(args) -> None:
    _require(args, "out")
    keys = ("test_graphemes", "test_phonemes", "train_graphemes", "train_phonemes",
            "lexicon", "noise_model", "channel_model", "merge_map", "channel", "decoder",
            "lang")
    values = {k: str(getattr(args, k)) for k in keys if getattr(args, k) is not None}
    values["seed"] = str(args.seed)
    report = run_pipeline(PipelineConfig.from_mapping(values))
    report.write(args.out)


# ---- parser ----------------------------------------------------------------

def build_parser() -> _Parser:
    root = _Parser(prog="ppmgpn", description=(
        "Pivot phoneme merging, triphone noise modeling and noise-aware P2G evaluation."))
    root.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="key = value defaults for this subcommand")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--jobs", type=int, default=1, help="worker count; output is unaffected")
        p.set_defaults(fn=fn)
        return p

    synth = groups.add_parser("synth", help="synthetic toy languages").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(synth, "make", cmd_synth_make, "write a toy parallel corpus")
    p.add_argument("--preset", choices=("random", "near", "bundled"), default="random")
    p.add_argument("--lang", default="qa")
    p.add_argument("--sentences", type=int, default=1000)
    p.add_argument("--test-sentences", type=int, default=0, help="held-out test split size")
    p.add_argument("--confusion-rate", type=float, default=0.2)
    _path(p, "--out", help="output directory")

    vocab = groups.add_parser("vocab", help="phoneme vocabularies").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(vocab, "build", cmd_vocab_build, "count phoneme tokens of one language")
    p.add_argument("--lang")
    _path(p, "--phonemes")
    _path(p, "--graphemes")
    p.add_argument("--phonemizer", help="external command speaking --in --out --lang")
    _path(p, "--phonemes-out")
    _path(p, "--out")

    ppm = groups.add_parser("ppm", help="pivot phoneme merging").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(ppm, "pivots", cmd_ppm_pivots, "select the top-K pivots")
    _path(p, "--vocabs")
    p.add_argument("--k", type=int)
    _path(p, "--out")
    p = leaf(ppm, "merge", cmd_ppm_merge, "map each language's tokens onto pivots")
    _path(p, "--vocabs")
    _path(p, "--pivots")
    p.add_argument("--t", type=float)
    _path(p, "--out")
    p = leaf(ppm, "coverage", cmd_ppm_coverage, "coverage of a merge map or a K x T grid")
    _path(p, "--vocabs")
    _path(p, "--merge-map")
    p.add_argument("--k", type=_ints, help="comma-separated K values (0 = unmerged)")
    p.add_argument("--t", type=_floats, help="comma-separated T values")
    _path(p, "--out")
    p = leaf(ppm, "apply", cmd_ppm_apply, "rewrite a phoneme corpus through a merge map")
    _path(p, "--merge-map")
    p.add_argument("--lang")
    _path(p, "--in", dest="inp")
    _path(p, "--out")

    noise = groups.add_parser("noise", help="triphone noise model").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(noise, "align", cmd_noise_align, "align clean and noisy transcripts")
    _path(p, "--clean")
    _path(p, "--noisy")
    _path(p, "--out")
    p = leaf(noise, "analyze", cmd_noise_analyze, "mine a triphone noise model")
    _path(p, "--pairs", action="append", help="clean<TAB>noisy file; repeatable")
    _path(p, "--out")
    p = leaf(noise, "apply", cmd_noise_apply, "pseudo-label a clean corpus")
    _path(p, "--model")
    _path(p, "--in", dest="inp")
    _path(p, "--out")
    _path(p, "--pairs-out")
    p.add_argument("--volume", type=int, default=1, help="noisy copies per clean line")

    kfold = groups.add_parser("kfold", help="k-fold noisy transcripts").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(kfold, "split", cmd_kfold_split, "write a fold plan")
    _path(p, "--corpus")
    p.add_argument("--n", type=int)
    p.add_argument("--folds", type=int, default=5)
    _path(p, "--out")
    p = leaf(kfold, "run", cmd_kfold_run, "recognize each fold with the others as training")
    _path(p, "--corpus")
    _path(p, "--plan")
    p.add_argument("--recognizer", choices=("identity", "confusion", "external"),
                   default="confusion")
    _path(p, "--confusions")
    p.add_argument("--command", help="external recognizer (--train --infer --out)")
    _path(p, "--out")

    gpn = groups.add_parser("gpn", help="GPN training data").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(gpn, "prepare", cmd_gpn_prepare, "merge, tag and shuffle noisy pairs")
    p.add_argument("--kfold", type=_lang_file, action="append", default=[],
                   metavar="LANG=FILE")
    p.add_argument("--triphone", type=_lang_file, action="append", default=[],
                   metavar="LANG=FILE")
    _path(p, "--vocabs")
    _path(p, "--out")
    _path(p, "--manifest")

    ev = groups.add_parser("eval", help="error rates").add_subparsers(
        dest="level", required=True, parser_class=_Parser)
    for level in ("per", "wer"):
        p = leaf(ev, level, cmd_eval, f"{level.upper()} of line-aligned files")
        _path(p, "--ref")
        _path(p, "--hyp")
        _path(p, "--out")

    pipe = groups.add_parser("pipeline", help="two-pass evaluation").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = leaf(pipe, "run", cmd_pipeline_run, "channel + P2G decoding + scoring")
    for key in ("test-graphemes", "test-phonemes", "train-graphemes", "train-phonemes",
                "lexicon", "noise-model", "channel-model", "merge-map"):
        _path(p, "--" + key)
    p.add_argument("--channel", help="identity | statistical | external:<command>")
    p.add_argument("--decoder", help="noise-aware | noise-blind | external:<command>")
    p.add_argument("--lang")
    _path(p, "--out")
    return root


def _leaf_parser(root: _Parser, args) -> _Parser:
    p = root._subparsers._group_actions[0].choices[args.group]
    inner = p._subparsers._group_actions[0].choices
    return inner[getattr(args, "level", None) or args.action]


def _config_defaults(leaf: _Parser, path: str) -> dict:
    base = Path(path).parent
    values = parse_config_text("\n".join(read_lines(path)))
    actions = {a.dest: a for a in leaf._actions}
    out = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if dest == "in":
            dest = "inp"
        action = actions.get(dest)
        if action is None or dest in ("config", "help", "fn"):
            raise ConfigError(f"{path}: unknown key {key!r}")
        if action.type is not None or action.choices is not None:
            convert = action.type or str
            items = value.split() if isinstance(action, argparse._AppendAction) else [value]
            conv = []
            for item in items:
                if dest in leaf.path_dests and not Path(item).is_absolute():
                    item = str(base / item)
                try:
                    conv.append(convert(item))
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise ConfigError(f"{path}: bad value for {key!r}: {exc}") from None
            if action.choices is not None and any(c not in action.choices for c in conv):
                raise ConfigError(f"{path}: {key!r} must be one of {', '.join(action.choices)}")
            out[dest] = conv if isinstance(action, argparse._AppendAction) else conv[0]
        else:
            items = value.split() if isinstance(action, argparse._AppendAction) else [value]
            if dest in leaf.path_dests:
                items = [i if Path(i).is_absolute() else str(base / i) for i in items]
            out[dest] = items if isinstance(action, argparse._AppendAction) else items[0]
    return out


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    root = build_parser()
    args = root.parse_args(argv)
    if args.config:
        # config values become the leaf's defaults, so explicit flags still win
        _leaf_parser(root, args).set_defaults(**_config_defaults(_leaf_parser(root, args),
                                                                  args.config))
        args = root.parse_args(argv)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return args


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
        args.fn(args)
    except PpmgpnError as exc:
        kind = type(exc).__name__
        msg = " ".join(str(exc).split())
        print(f"ppmgpn: error: {kind}: {msg}", file=sys.stderr)
        return 1
    except OSError as exc:
        msg = " ".join(str(exc).split())
        print(f"ppmgpn: error: OSError: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
