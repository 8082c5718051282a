"""Benchmark the compiled polynomial kernel against the pure-Python reference.

Two views:

  micro  seeded random sparse polynomials through the hot kernel ops
         (pmul, paddmul, padd, content), both implementations imported
         side by side in one process
  e2e    a family-1 Chern sweep in a subprocess per kernel, selected
         via QHOPF_KERNEL, so the whole pipeline runs on one kernel

Usage: python3 benchmarks/bench_kernel.py [--repeat N] [--size N] [--skip-e2e]
"""

import argparse
import os
import random
import statistics
import subprocess
import sys
import time

from qhopf import _kernel_cy, _kernel_py


def random_poly(rng, terms, max_exp):
    out = {}
    for _ in range(terms):
        key = _kernel_py.pack(rng.randrange(max_exp), rng.randrange(max_exp), rng.randrange(3))
        out[key] = rng.randint(-(10**6), 10**6) or 1
    return out


def time_op(fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def micro(repeat, size):
    rng = random.Random(12345)
    polys = [random_poly(rng, size, 12) for _ in range(40)]
    pairs = [(polys[i], polys[(i * 7 + 3) % len(polys)]) for i in range(len(polys))]
    cases = {
        "pmul": [(a, b) for a, b in pairs],
        "paddmul": [({}, a, b) for a, b in pairs],
        "padd": [(a, b) for a, b in pairs],
        "content": [(a,) for a, _ in pairs],
    }
    rows = []
    for name, args_list in cases.items():
        t_py = time_op(getattr(_kernel_py, name), args_list, repeat)
        t_cy = time_op(getattr(_kernel_cy, name), args_list, repeat)
        rows.append((name, t_py, t_cy))
    print(f"micro: {len(pairs)} ops/run, best of {repeat}, {size} terms/poly")
    print(f"  {'op':<10} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, t_py, t_cy in rows:
        print(f"  {name:<10} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_py / t_cy:>7.2f}x")
    return rows


E2E_SNIPPET = (
    "import time; t0 = time.perf_counter(); "
    "from qhopf.fredholm import chern_number; "
    "assert [chern_number(mu, 'heegaard') for mu in range(-3, 4)] == list(range(-3, 4)); "
    "from qhopf import _kernel; "
    "print(_kernel.IMPL, time.perf_counter() - t0)"
)


def e2e(repeat):
    print(f"e2e: family-1 chern sweep mu in -3..3, best of {repeat}")
    results = {}
    for impl in ("py", "cy"):
        env = dict(os.environ, QHOPF_KERNEL=impl)
        times = []
        for _ in range(repeat):
            out = subprocess.run(
                [sys.executable, "-c", E2E_SNIPPET],
                capture_output=True, text=True, env=env, check=True,
            )
            tag, secs = out.stdout.split()
            assert tag == impl, f"kernel selection failed: wanted {impl}, ran {tag}"
            times.append(float(secs))
        results[impl] = min(times)
        print(f"  {impl}: best {results[impl]:.3f}s  (median {statistics.median(times):.3f}s)")
    print(f"  speedup {results['py'] / results['cy']:.2f}x")
    return results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=60, help="terms per random polynomial")
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)
    assert _kernel_py.IMPL == "py" and _kernel_cy.IMPL == "cy"
    micro(args.repeat, args.size)
    if not args.skip_e2e:
        e2e(max(2, args.repeat // 2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
