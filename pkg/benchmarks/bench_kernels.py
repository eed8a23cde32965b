"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json] [--end-to-end]

Each kernel runs once to trigger compilation before timing. ``--end-to-end``
also times ``verify divergence --dim 4 --algebra su2`` in subprocesses with
``TOPOFORMS_NO_JIT`` set to 0 and 1.
"""
import argparse
import json
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from topoforms import _backend, kernels
from topoforms.epsilon import levi_civita, permutation_table


def cases(rng):
    p4, s4 = permutation_table(4)
    p3, s3 = permutation_table(3)
    f = levi_civita(3)
    n4 = 24 ** 4
    n3 = 64 ** 3
    F = rng.standard_normal((3, 4, 4, n4))
    F = F - np.swapaxes(F, 1, 2)
    A4 = rng.standard_normal((3, 4, n4))
    dA4 = rng.standard_normal((3, 4, 4, n4))
    grid3 = rng.standard_normal((9, 64, 64 * 64))
    p, q = rng.standard_normal((2, 4, n3))
    u = rng.standard_normal((3, 4, n3))
    x = rng.standard_normal(n3)
    return [
        ("central_diff 64^3 x9", "central_diff", (grid3, 0.1, True)),
        ("pairwise_sum 64^3", "pairwise_sum", (x,)),
        ("eps_pair_contract su2 24^4", "eps_pair_contract", (F, p4, s4, 0.25)),
        ("cs_contract su2 current 24^4", "cs_contract", (A4, dA4, f, p4, s4, 1, 4)),
        ("quat_mul 64^3", "quat_mul", (p, q)),
        ("trace_cubed 64^3", "trace_cubed", (u, p3, s3)),
    ]


def bench(repeat, number=1):
    rng = np.random.default_rng(0)
    rows = []
    for label, name, args in cases(rng):
        row = {"kernel": label}
        for tag in ("nb", "np"):
            fn = getattr(kernels, f"_{name}_{tag}")
            if tag == "nb" and not _backend.HAVE_NUMBA:
                row[tag] = None
                continue
            fn(*args)  # compile / warm caches
            times = timeit.repeat(lambda: fn(*args), repeat=repeat, number=number)
            row[tag] = min(times) / number
        row["speedup"] = row["np"] / row["nb"] if row["nb"] else None
        rows.append(row)
    return rows


def end_to_end():
    code = "from topoforms import verify; verify.divergence(4, 0, 'su2')"
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, TOPOFORMS_NO_JIT=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", code], env=env, check=True)
        out["numpy" if flag == "1" else "numba"] = time.perf_counter() - t0
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="PATH")
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)

    rows = bench(args.repeat)
    print(f"{'kernel':32s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for r in rows:
        nb = "n/a" if r["nb"] is None else f"{1e3 * r['nb']:.2f}"
        sp = "n/a" if r["speedup"] is None else f"{r['speedup']:.1f}x"
        print(f"{r['kernel']:32s} {nb:>11s} {1e3 * r['np']:11.2f} {sp:>8s}")
    result = {"threads": _backend.nb.get_num_threads() if _backend.HAVE_NUMBA else 1,
              "kernels": rows}
    if args.end_to_end:
        e2e = end_to_end()
        result["end_to_end"] = e2e
        print(f"verify divergence 4d su2: numba {e2e['numba']:.1f} s, numpy {e2e['numpy']:.1f} s"
              " (wall, incl. import)")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
