"""Time the flint backend against the pure Python fallback.

Each workload runs in a fresh interpreter so the backend is picked at
import from GERSTEN_LAB_BACKEND.  Usage:

    python benchmarks/bench_backends.py [--repeat N] [--backends flint,python]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import gersten_lab
from gersten_lab import suites

plan = json.loads(sys.argv[1])
out = {"backend": gersten_lab.BACKEND, "runs": []}
for ring, anchor, count in plan:
    cfg = suites.SuiteConfig(ring=ring, counts={anchor: count}, only=(anchor,))
    t = time.perf_counter()
    rep = suites.run_suites(cfg)
    out["runs"].append([ring, anchor, count, rep["passed"], time.perf_counter() - t])
print(json.dumps(out))
"""

PLAN = [
    ("Z@5", "algebra.smith-normal-form", 200),
    ("Z@5", "category.composition", 500),
    ("Z@5", "category.classify-roundtrip", 200),
    ("Z@5", "homotopy-nat.cylinder", 50),
    ("Q[t]@t", "category.composition", 200),
    ("Q[t]@t", "category.triangulation", 50),
]


def run(backend: str) -> dict:
    env = dict(os.environ, GERSTEN_LAB_BACKEND=backend)
    r = subprocess.run([sys.executable, "-c", WORKLOAD, json.dumps(PLAN)],
                       env=env, capture_output=True, text=True, check=True)
    return json.loads(r.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--backends", default="flint,python")
    args = ap.parse_args(argv)
    best: dict[str, dict[tuple, float]] = {}
    for backend in args.backends.split(","):
        for _ in range(args.repeat):
            res = run(backend)
            table = best.setdefault(res["backend"], {})
            for ring, anchor, count, passed, secs in res["runs"]:
                if not passed:
                    print(f"warning: {anchor} failed on {res['backend']}", file=sys.stderr)
                key = (ring, anchor, count)
                table[key] = min(secs, table.get(key, secs))
    names = list(best)
    print(f"{'ring':8} {'check':32} {'n':>5} " + " ".join(f"{n:>9}" for n in names))
    for ring, anchor, count in PLAN:
        row = " ".join(f"{best[n][(ring, anchor, count)]:9.3f}" for n in names)
        print(f"{ring:8} {anchor:32} {count:5d} {row}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
