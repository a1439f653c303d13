"""Command-line surface: compress, analyze, passkey-gen, passkey-eval, ppl.

Exit codes: 0 success, 1 usage error, 2 backend failure that forced
degraded output. Flag overrides beat config-file values, which beat
defaults; the config file is flat JSON mirroring PipelineConfig keys.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .benchmarks import (
    generate_passkey_case,
    perplexity,
    read_cases_jsonl,
    score_retrieval,
    write_cases_jsonl,
)
from .pipeline import PipelineConfig, complexity_report, compress_document, run_report

ENV_GATEWAY_URL = "SEMCOMP_GATEWAY_URL"
ENV_GATEWAY_TIMEOUT = "SEMCOMP_GATEWAY_TIMEOUT"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGRADED = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _fail(message: str) -> int:
    print(f"semcomp: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _config_from(args: argparse.Namespace) -> PipelineConfig:
    # precedence: flags > config file > env vars > defaults
    values = {f.name: f.default for f in dataclasses.fields(PipelineConfig)}
    if os.environ.get(ENV_GATEWAY_URL):
        values["gateway_url"] = os.environ[ENV_GATEWAY_URL]
    if os.environ.get(ENV_GATEWAY_TIMEOUT):
        values["gateway_timeout"] = float(os.environ[ENV_GATEWAY_TIMEOUT])
    if args.config:
        loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a flat JSON object")
        unknown = set(loaded) - set(values)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for name in values:
        override = getattr(args, name, None)
        if override is not None:
            values[name] = override
    return PipelineConfig(**values)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat JSON config file mirroring PipelineConfig")
    parser.add_argument("--target-block-len", type=int, dest="target_block_len")
    parser.add_argument("--gamma1", type=float, dest="gamma1")
    parser.add_argument("--gamma2", type=float, dest="gamma2")
    parser.add_argument("--alpha", type=float, dest="alpha")
    parser.add_argument("--s-max", type=float, dest="s_max")
    parser.add_argument("--max-depth", type=int, dest="max_depth")
    parser.add_argument(
        "--contiguous-chunks",
        action=argparse.BooleanOptionalAction,
        default=None,
        dest="contiguous_chunks",
    )
    parser.add_argument(
        "--passthrough-threshold", type=int, dest="passthrough_threshold"
    )
    parser.add_argument("--embedder", choices=["stub", "gateway"])
    parser.add_argument("--embed-dim", type=int, dest="embed_dim")
    parser.add_argument("--compressor", choices=["fallback", "identity", "gateway"])
    parser.add_argument("--dedup-threshold", type=float, dest="dedup_threshold")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--separator", dest="separator")
    parser.add_argument("--gateway-url", dest="gateway_url")
    parser.add_argument("--gateway-timeout", type=float, dest="gateway_timeout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semcomp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compress = sub.add_parser("compress", help="compress a document")
    p_compress.add_argument("--input", default="-", help="input path or - for stdin")
    p_compress.add_argument("--output", default="-", help="output path or - for stdout")
    p_compress.add_argument(
        "--report",
        help="run-report path (default: <output>.report.json when output is a file)",
    )
    p_compress.add_argument(
        "--timings", action="store_true", help="include wall-clock timings in the report"
    )
    _add_config_flags(p_compress)

    p_analyze = sub.add_parser("analyze", help="cost report for given chunk lengths")
    p_analyze.add_argument("--lengths", required=True, help="comma-separated chunk lengths")
    p_analyze.add_argument("--alpha", type=float, required=True)
    p_analyze.add_argument("--gamma1", type=float, required=True)
    p_analyze.add_argument("--gamma2", type=float, required=True)

    p_gen = sub.add_parser("passkey-gen", help="generate passkey cases as JSONL")
    p_gen.add_argument("--count", type=int, default=10)
    p_gen.add_argument("--start-seed", type=int, default=0)
    p_gen.add_argument("--target-len", type=int, default=30000)
    p_gen.add_argument("--digits", type=int, default=5)
    p_gen.add_argument("--output", default="-")

    p_eval = sub.add_parser("passkey-eval", help="score answers against cases")
    p_eval.add_argument("--cases", required=True, help="JSONL cases file")
    p_eval.add_argument("--answers", required=True, help="one answer text per line")

    p_ppl = sub.add_parser("ppl", help="perplexity from a file of log-probabilities")
    p_ppl.add_argument("--input", default="-", help="one logprob per line, or - for stdin")

    return parser


def _cmd_compress(args: argparse.Namespace) -> int:
    try:
        config = _config_from(args)
    except (ValueError, json.JSONDecodeError) as exc:
        return _fail(f"bad configuration: {exc}")
    try:
        text = _read_text(args.input)
    except OSError as exc:
        return _fail(f"cannot read input: {exc}")

    timings: dict | None = {} if args.timings else None
    try:
        doc, cost = compress_document(text, config, timings_ms=timings)
    except ValueError as exc:
        return _fail(str(exc))

    _write_text(args.output, doc.text)
    report = run_report(doc, cost, timings_ms=timings)
    report_path = args.report
    if report_path is None and args.output != "-":
        report_path = args.output + ".report.json"
    if report_path:
        _write_text(report_path, json.dumps(report, indent=2, sort_keys=True))

    if any(s.warning for s in doc.segments):
        for segment in doc.segments:
            if segment.warning:
                print(
                    f"semcomp: chunk {segment.chunk_id} degraded: {segment.warning}",
                    file=sys.stderr,
                )
        return EXIT_DEGRADED
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        lengths = [float(part) for part in args.lengths.split(",") if part.strip()]
        report = complexity_report(lengths, args.alpha, args.gamma1, args.gamma2)
    except ValueError as exc:
        return _fail(str(exc))
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_passkey_gen(args: argparse.Namespace) -> int:
    if args.count < 1:
        return _fail("--count must be >= 1")
    try:
        cases = [
            generate_passkey_case(seed, args.target_len, args.digits)
            for seed in range(args.start_seed, args.start_seed + args.count)
        ]
    except ValueError as exc:
        return _fail(str(exc))
    if args.output == "-":
        for case in cases:
            print(
                json.dumps(
                    {
                        "seed": case.seed,
                        "target_len": case.target_len,
                        "passkey": case.passkey,
                        "context": case.context,
                        "query": case.query,
                        "answer": case.answer,
                    }
                )
            )
    else:
        write_cases_jsonl(cases, args.output)
    return EXIT_OK


def _cmd_passkey_eval(args: argparse.Namespace) -> int:
    try:
        cases = read_cases_jsonl(args.cases)
        answers = Path(args.answers).read_text(encoding="utf-8").splitlines()
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        return _fail(f"cannot load cases/answers: {exc}")
    try:
        score = score_retrieval(cases, answers)
    except ValueError as exc:
        return _fail(str(exc))
    print(
        json.dumps(
            {
                "n_cases": score.n_cases,
                "n_correct": score.n_correct,
                "accuracy": score.accuracy,
            }
        )
    )
    return EXIT_OK


def _cmd_ppl(args: argparse.Namespace) -> int:
    try:
        raw = _read_text(args.input)
        values = [float(line) for line in raw.split() if line.strip()]
    except (OSError, ValueError) as exc:
        return _fail(f"cannot read logprobs: {exc}")
    try:
        value = perplexity(values)
    except ValueError as exc:
        return _fail(str(exc))
    print(json.dumps({"perplexity": value}))
    return EXIT_OK


_COMMANDS = {
    "compress": _cmd_compress,
    "analyze": _cmd_analyze,
    "passkey-gen": _cmd_passkey_gen,
    "passkey-eval": _cmd_passkey_eval,
    "ppl": _cmd_ppl,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
