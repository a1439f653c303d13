#!/usr/bin/env python3
"""Compress a document (or a generated synthetic one) and print the report.

Examples:
    python scripts/run_compression_demo.py --seed 3 --alpha 0.14
    python scripts/run_compression_demo.py --input article.txt --alpha 0.15
"""

import argparse
import json

from semcomp.pipeline import PipelineConfig, compress_document, run_report
from semcomp.synthetic import synthetic_topic_document


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", help="document to compress (default: synthetic)")
    parser.add_argument("--seed", type=int, default=0, help="synthetic doc seed")
    parser.add_argument("--topics", type=int, default=4)
    parser.add_argument("--alpha", type=float, default=0.15)
    parser.add_argument("--show-text", action="store_true", help="print compressed text")
    args = parser.parse_args()

    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    else:
        doc = synthetic_topic_document(seed=args.seed, n_topics=args.topics)
        text = doc.text
        print(f"synthetic document: {doc.total_words} words, {args.topics} topics")

    timings = {}
    out, cost = compress_document(
        text, PipelineConfig(alpha=args.alpha), timings_ms=timings
    )
    print(
        f"compressed {out.total_original_length} -> {out.total_compressed_length} words "
        f"(ratio {out.realized_ratio:.3f}, {len(out.segments)} segments)"
    )
    print(json.dumps(run_report(out, cost, timings_ms=timings), indent=2))
    if args.show_text:
        print(out.text)


if __name__ == "__main__":
    main()
