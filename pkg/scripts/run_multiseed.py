#!/usr/bin/env python3
"""Seed sweep: run the full pipeline per seed and report mean/std macro
metrics plus the full report of the median-macro-F1 seed."""

import argparse
import sys
from pathlib import Path

if __package__ is None:
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from aisoc.evaluate import multi_seed
from aisoc.pipeline import ExperimentConfig, seeded_runner


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", default="1,2,3,4,5")
    args = parser.parse_args()

    seeds = [int(s) for s in args.seeds.split(",")]
    report = multi_seed(seeded_runner(ExperimentConfig()), seeds)
    print(f"seeds: {report.seeds}")
    print(f"fused macro-F1 per seed: {[round(v, 4) for v in report.macro_f1_per_seed]}")
    print(f"mean {report.macro_f1_mean:.4f}  std {report.macro_f1_std:.4f}")
    print(f"median seed: {report.median_seed}")
    print()
    print(report.median_report.render_table())
    return 0


if __name__ == "__main__":
    sys.exit(main())
