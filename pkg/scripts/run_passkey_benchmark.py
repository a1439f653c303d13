#!/usr/bin/env python3
"""Passkey-retrieval survival across context lengths, at the compression stage.

Generates seeded passkey cases at several target lengths, compresses each
with the offline stub backends, and reports how often the passkey is still
extractable from the compressed text.

Example:
    python scripts/run_passkey_benchmark.py --cases 25 --lengths 10000,30000
"""

import argparse
import time

from semcomp.benchmarks import extract_passkey, generate_passkey_case
from semcomp.pipeline import PipelineConfig, compress_document


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=25, help="cases per length")
    parser.add_argument(
        "--lengths", default="10000,20000,30000", help="comma-separated target lengths"
    )
    parser.add_argument("--alpha", type=float, default=0.15)
    parser.add_argument("--digits", type=int, default=5)
    args = parser.parse_args()

    config = PipelineConfig(alpha=args.alpha)
    print(f"{'target_len':>10} {'survived':>8} {'accuracy':>8} {'mean_ratio':>10} {'secs':>6}")
    for target in (int(part) for part in args.lengths.split(",")):
        survived = 0
        ratios = []
        t0 = time.perf_counter()
        for seed in range(args.cases):
            case = generate_passkey_case(seed, target, digits=args.digits)
            out, _ = compress_document(case.context, config)
            ratios.append(out.realized_ratio)
            if extract_passkey(out.text) == case.passkey:
                survived += 1
        elapsed = time.perf_counter() - t0
        print(
            f"{target:>10} {survived:>5}/{args.cases:<3} {survived/args.cases:>8.2f} "
            f"{sum(ratios)/len(ratios):>10.3f} {elapsed:>6.1f}"
        )


if __name__ == "__main__":
    main()
