"""
sympgrass - Suite Runner
========================
Runs every experiment suite with its default configuration by calling the
engine directly. Saves one JSON report per suite to tests/results/ plus a
summary.json, and prints a pass/fail table.

Usage:
    cd sympgrass
    python -X utf8 tests/run_tests.py [--seed N] [--only charts,metrics]
"""

import sys
import io
import json
import time
import argparse
import traceback
from pathlib import Path
from datetime import datetime

# Force UTF-8 for Windows terminals
if hasattr(sys.stdout, "buffer") and sys.stdout.encoding != "utf-8":
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding="utf-8", errors="replace")
if hasattr(sys.stderr, "buffer") and sys.stderr.encoding != "utf-8":
    sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding="utf-8", errors="replace")

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from sympgrass.config import make_config
from sympgrass.engine.errors import SympGrassError
from sympgrass.engine.suites import run_suite, suite_names

RESULTS_DIR = ROOT / "tests" / "results"


def _ts():
    return datetime.now().strftime("%H:%M:%S")


def run_one(name: str, seed: int) -> dict:
    print(f"\n  [{_ts()}] [SUITE] {name}...")
    t0 = time.time()
    try:
        cfg = make_config(seed=seed, output_path=RESULTS_DIR / f"{name}.json")
        report = run_suite(name, cfg)
        elapsed = round(time.time() - t0, 2)
        failed = int(report.metrics["failed_trials"])
        status = "PASS" if report.passed else "FAIL"
        print(f"    [{status}] {int(report.metrics['trials'])} trials, {failed} failed, {elapsed}s")
        return {"suite": name, "pass": report.passed, "failed_trials": failed, "seconds": elapsed}
    except SympGrassError as e:
        print(f"    [ERROR] {e}")
        traceback.print_exc()
        return {"suite": name, "pass": False, "error": str(e), "seconds": round(time.time() - t0, 2)}


def main():
    parser = argparse.ArgumentParser(description="Run every sympgrass suite with defaults.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--only", default="", help="Comma-separated suite names")
    args = parser.parse_args()

    names = [s for s in args.only.split(",") if s] or suite_names()
    RESULTS_DIR.mkdir(parents=True, exist_ok=True)

    print("=" * 60)
    print(f"  sympgrass suite run  (seed {args.seed}, {len(names)} suites)")
    print("=" * 60)

    rows = [run_one(name, args.seed) for name in names]

    summary_path = RESULTS_DIR / "summary.json"
    summary_path.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")

    print("\n" + "=" * 60)
    for row in rows:
        mark = "PASS" if row["pass"] else "FAIL"
        print(f"  {row['suite']:<18} {mark:<5} {row['seconds']:>8}s")
    print("=" * 60)
    print(f"  [SAVED] {summary_path.relative_to(ROOT)}")

    sys.exit(0 if all(r["pass"] for r in rows) else 1)


if __name__ == "__main__":
    main()
