#!/usr/bin/env python3
"""Compare the numba kernels with the numpy fallback.

The backend is fixed at import time, so each backend runs in its own
subprocess.  Run ``python3 benchmarks/bench_kernels.py`` for a table, or
``--json`` for machine-readable output.
"""
import argparse
import json
import os
import subprocess
import sys
import time

CASES = {
    # name: (catalog entry, what to time)
    "aut-cube": ("cube", "automorphisms"),
    "aut-n98-6": ("n98-6", "automorphisms"),
    "aut-t434": ("t434-4-0-0", "automorphisms"),
    "hereditary-cuboctahedron": ("cuboctahedron", "hereditary"),
    "hereditary-n98-6": ("n98-6", "hereditary"),
    "cosets-u5512": ("u5512", "cosets"),
    "cosets-chiral-4413": ("chiral-4413", "cosets"),
}


def _time(fn, runs):
    fn()  # warm-up; includes JIT compilation on the numba side
    best = float("inf")
    for _ in range(runs):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def worker(names, runs):
    from heredpoly import backend, catalog, symmetry
    from heredpoly.poset import FacePoset
    from heredpoly.presentation import coset_enumerate, read_presentation

    results = {"backend": backend(), "cases": {}}
    for name in names:
        entry, what = CASES[name]
        if what == "cosets":
            pres = read_presentation(catalog.presentation_path(entry))
            fn = lambda: coset_enumerate(pres, [])
        else:
            p = catalog.catalog_get(entry, check=False)
            # fresh poset each run so cached groups do not hide the work
            fresh = lambda: FacePoset(p.rank, p.counts, p.covers)
            if what == "automorphisms":
                fn = lambda: symmetry.automorphisms(fresh())
            else:
                fn = lambda: symmetry.is_hereditary(fresh())
        results["cases"][name] = _time(fn, runs)
    return results


def run_backend(no_numba, names, runs):
    env = dict(os.environ, HEREDPOLY_NO_NUMBA="1" if no_numba else "0")
    cmd = [sys.executable, __file__, "--worker", "--runs", str(runs), *names]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return json.loads(out)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("cases", nargs="*", help=f"subset of: {', '.join(CASES)}")
    parser.add_argument("--runs", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    names = args.cases or list(CASES)
    unknown = [n for n in names if n not in CASES]
    if unknown:
        parser.error(f"unknown case {unknown[0]!r}")

    if args.worker:
        print(json.dumps(worker(names, args.runs)))
        return

    fast = run_backend(False, names, args.runs)
    slow = run_backend(True, names, args.runs)
    if args.json:
        print(json.dumps({"numba": fast, "numpy": slow}, indent=2))
        return
    print(f"{'case':28s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}")
    for name in names:
        a, b = fast["cases"][name], slow["cases"][name]
        print(f"{name:28s} {a:10.4f} {b:10.4f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
