"""Stand-in external commands for tests and toy workflows.

Each subcommand speaks one of the batch file protocols used by the toolkit::

    python -m ppmgpn.stubs phonemize  --rules R --in F --out G --lang xx
    python -m ppmgpn.stubs channel    --in F --out G --lang xx --seed N [--confusions C]
    python -m ppmgpn.stubs recognizer --train T --infer I --out O [--confusions C --seed N]
    python -m ppmgpn.stubs p2g        --lexicon L --in F --out G --lang xx

``--drop-line`` makes any of them write one line too few and ``--fail``
makes them exit with status 3, so error handling can be exercised.
"""

from __future__ import annotations

import argparse
import random
import sys

from .corpusio import ToyG2PRules, read_lines, toy_g2p, write_lines
from .kfold import ConfusionRecognizer, read_confusions
from .p2g import P2GDecoder, P2GLexicon


def _finish(args, lines: list[str]) -> int:
    if args.fail:
        print("stub: failing on request", file=sys.stderr)
        return 3
    if args.drop_line and lines:
        lines = lines[:-1]
    write_lines(args.out, lines)
    return 0


def _phonemize(args) -> int:
    rules = ToyG2PRules.read(args.rules)
    return _finish(args, [toy_g2p(rules, s) for s in read_lines(args.inp)])


def _channel(args) -> int:
    lines = read_lines(args.inp)
    if args.confusions:
        rec = ConfusionRecognizer(read_confusions(args.confusions), args.seed)
        lines = [rec.transcribe(u, random.Random(f"{args.seed}:{args.lang}:{i}"))
                 for i, u in enumerate(lines)]
    return _finish(args, lines)


def _recognizer(args) -> int:
    train = read_lines(args.train)
    infer = read_lines(args.infer)
    if args.confusions:
        rec = ConfusionRecognizer(read_confusions(args.confusions), args.seed)
        infer = rec.infer(rec.train(train), infer)
    return _finish(args, infer)


def _p2g(args) -> int:
    decoder = P2GDecoder(P2GLexicon.read(args.lexicon))
    return _finish(args, [decoder.decode(u) for u in read_lines(args.inp)])


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="python -m ppmgpn.stubs")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("phonemize")
    p.add_argument("--rules", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lang", required=True)
    p.set_defaults(fn=_phonemize)

    p = sub.add_parser("channel")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confusions")
    p.set_defaults(fn=_channel)

    p = sub.add_parser("recognizer")
    p.add_argument("--train", required=True)
    p.add_argument("--infer", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--confusions")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_recognizer)

    p = sub.add_parser("p2g")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lang", required=True)
    p.set_defaults(fn=_p2g)

    for p in sub.choices.values():
        p.add_argument("--drop-line", action="store_true")
        p.add_argument("--fail", action="store_true")

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
