"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--pairs N] [--repeat R]
"""

import argparse
import random
import timeit

from ppmgpn import kernels


def workload(n_pairs: int, seed: int = 0):
    rng = random.Random(seed)
    seqs = [[rng.choice("abcdefgh") for _ in range(rng.randint(5, 40))]
            for _ in range(2 * n_pairs)]
    pairs = list(zip(seqs[::2], seqs[1::2]))
    n_rows, n_feat = 60, 24
    features = bytes(rng.randrange(3) for _ in range(n_rows * n_feat))
    rows = [([rng.randrange(n_rows) for _ in range(rng.randint(1, 3))],
             [rng.randrange(n_rows) for _ in range(rng.randint(1, 3))])
            for _ in range(20 * n_pairs)]
    return {
        "edit_distance": lambda k: [k.edit_distance(a, b) for a, b in pairs],
        "align_opcodes": lambda k: [k.align_opcodes(a, b) for a, b in pairs],
        "feature_edit_distance": lambda k: [
            k.feature_edit_distance(a, b, features, n_feat) for a, b in rows],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.available_backends()
    jobs = workload(args.pairs)
    print(f"{'kernel':<24}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, job in jobs.items():
        times = {}
        for b in backends:
            impl = kernels.get_backend(b)
            times[b] = min(timeit.repeat(lambda: job(impl), number=1, repeat=args.repeat))
        row = f"{name:<24}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if "compiled" in times:
            row += f"   {times['python'] / times['compiled']:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
