#!/usr/bin/env python3
"""Run the full method comparison over every generated dataset config."""
import argparse
import subprocess
import sys
import time
from pathlib import Path

from fair_topk import load_spec, run_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="data", help="directory from make_datasets.py")
    parser.add_argument("--out", default="results", help="where to write report CSVs")
    parser.add_argument("--cache", default=None, help="mtable/adjustment cache dir")
    args = parser.parse_args()

    data = Path(args.data)
    if not data.is_dir():
        print(f"{data} missing; generating it first", file=sys.stderr)
        subprocess.run(
            [sys.executable, Path(__file__).with_name("make_datasets.py"), "--out", str(data)],
            check=True,
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = Path(args.cache) if args.cache else None

    for config in sorted(data.glob("*.yaml")):
        spec = load_spec(config)
        started = time.perf_counter()
        report = run_experiment(spec, cache_dir=cache)
        elapsed = time.perf_counter() - started
        target = out / f"{spec.name}.csv"
        with open(target, "w", newline="") as fh:
            report.to_csv(fh)
        print(f"{spec.name}: {len(report.rows)} rows in {elapsed:.1f}s -> {target}")


if __name__ == "__main__":
    main()
