#!/usr/bin/env python3
"""Run the wire-protocol conformance suite against a live model gateway.

Example:
    python scripts/check_gateway.py --url http://127.0.0.1:8900
"""

import argparse
import os
import sys

from semcomp.gateway_client import run_conformance_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--url",
        default=os.environ.get("SEMCOMP_GATEWAY_URL", "http://127.0.0.1:8900"),
    )
    parser.add_argument("--timeout", type=float, default=10.0)
    parser.add_argument("--batch-cap", type=int, default=256)
    args = parser.parse_args()

    results = run_conformance_suite(args.url, timeout=args.timeout, batch_cap=args.batch_cap)
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        detail = f"  {result.detail}" if result.detail and not result.passed else ""
        print(f"{status}  {result.name}{detail}")
        failures += 0 if result.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
