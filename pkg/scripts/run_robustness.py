#!/usr/bin/env python3
"""Robustness sweep: probe the log model and the fused system under
keyword obfuscation and character noise at several mutation rates, then
evaluate the complementary-error manifest where the two modalities fail
on different items.
"""

import argparse
import sys
from pathlib import Path

if __package__ is None:
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from aisoc.corpus import AugmentOp
from aisoc.evaluate import robustness_probe, run_baselines
from aisoc.pipeline import ExperimentConfig, complementary_error_manifest, run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--rates", default="0.25,0.5,1.0")
    args = parser.parse_args()

    result = run_experiment(ExperimentConfig(seed=args.seed))
    ops = [AugmentOp.KEYWORD_OBFUSCATION, AugmentOp.CHAR_NOISE]
    print(f"{'rate':>6} {'log F1':>16} {'fused F1':>16} {'HIGH->NORMAL':>13}")
    for rate in (float(r) for r in args.rates.split(",")):
        probe = robustness_probe(result.scorer, result.test_items, ops,
                                 rate=rate, seed=args.seed)
        print(f"{rate:>6.2f} {probe.log_macro_f1_before:7.4f}->{probe.log_macro_f1_after:7.4f} "
              f"{probe.fused_macro_f1_before:7.4f}->{probe.fused_macro_f1_after:7.4f} "
              f"{probe.high_degraded_to_normal:>10d}/{probe.high_with_stable_malware}")

    print("\ncomplementary-error manifest (stealthy malware + suspicious-looking admin lines):")
    patched = complementary_error_manifest(result)
    reports = run_baselines(result.scorer, patched, split="complementary")
    for name in ("logs", "malware", "fused"):
        print(f"  {name:<8} macro-F1 {reports[name].macro_f1:.4f}")
    fused = reports["fused"].macro_f1
    best_single = max(reports["logs"].macro_f1, reports["malware"].macro_f1)
    print(f"  fused >= best single modality: {fused >= best_single}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
