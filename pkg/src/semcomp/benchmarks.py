"""Synthetic passkey-retrieval benchmark and the perplexity metric.

The passkey task hides a digit string at a seeded random position inside
filler text; the harness scores whether the digits can be recovered after
whatever transformation (compression, an LLM round-trip, ...) sits in the
middle. Perplexity takes externally supplied token log-probabilities so
it stays model-free.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .segmentation import count_length

__all__ = [
    "PasskeyCase",
    "RetrievalScore",
    "generate_passkey_case",
    "extract_passkey",
    "score_retrieval",
    "perplexity",
    "write_cases_jsonl",
    "read_cases_jsonl",
]

PREAMBLE = (
    "Below is a long and mostly repetitive report. Somewhere inside it one "
    "short line contains a numeric passkey that you must remember."
)

# All filler sentences are exactly 10 words so case length is predictable.
FILLER_SENTENCES = (
    "The grass keeps growing and the sky stays mostly blue.",
    "People walk along the harbour while boats drift slowly past.",
    "Morning traffic hums through town as shops open their doors.",
    "Rain falls gently on rooftops and gardens through the night.",
)

PASSKEY_TEMPLATE = (
    "The secret passkey is {key}. Keep {key} in mind, it matters later."
)

QUERY = "Now answer: what is the secret passkey? Reply with the digits only."

_FILLER_WORDS = count_length(FILLER_SENTENCES[0])


@dataclass(frozen=True)
class PasskeyCase:
    """One synthetic retrieval case: context, query, and ground truth."""

    seed: int
    target_len: int
    passkey: str
    context: str
    query: str
    answer: str
    # filler sentences before the passkey line; None when read back from
    # JSONL (not part of the wire format)
    insertion_position: int | None = None


@dataclass(frozen=True)
class RetrievalScore:
    n_cases: int
    n_correct: int
    accuracy: float


def generate_passkey_case(
    seed: int, target_len: int, digits: int = 5
) -> PasskeyCase:
    """Build one passkey case of roughly ``target_len`` words, seeded.

    The context is preamble, filler, one passkey line (stating the key
    twice), more filler, then the query; the filler split is drawn from
    the seeded RNG. Identical seeds reproduce the context bitwise.
    """
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    rng = random.Random(seed)
    passkey = str(rng.randrange(10 ** (digits - 1), 10 ** digits))
    key_line = PASSKEY_TEMPLATE.format(key=passkey)
    base_words = (
        count_length(PREAMBLE) + count_length(key_line) + count_length(QUERY)
    )
    n_filler = round((target_len - base_words) / _FILLER_WORDS)
    if n_filler < 1:
        raise ValueError(
            f"target_len={target_len} too small: needs at least "
            f"{base_words + _FILLER_WORDS} words"
        )
    before = rng.randint(0, n_filler)
    fillers = [FILLER_SENTENCES[i % len(FILLER_SENTENCES)] for i in range(n_filler)]
    parts = [PREAMBLE, *fillers[:before], key_line, *fillers[before:], QUERY]
    return PasskeyCase(
        seed=seed,
        target_len=target_len,
        passkey=passkey,
        context=" ".join(parts),
        query=QUERY,
        answer=passkey,
        insertion_position=before,
    )


def extract_passkey(answer_text: str) -> str | None:
    """First maximal contiguous digit run in the text, or None."""
    run_start = None
    for i, ch in enumerate(answer_text):
        if ch.isdigit():
            if run_start is None:
                run_start = i
        elif run_start is not None:
            return answer_text[run_start:i]
    if run_start is not None:
        return answer_text[run_start:]
    return None


def score_retrieval(
    cases: Sequence[PasskeyCase], answers: Sequence[str]
) -> RetrievalScore:
    """Exact-match scoring of extracted digits against ground truth."""
    if len(cases) != len(answers):
        raise ValueError(f"{len(cases)} cases but {len(answers)} answers")
    n_correct = sum(
        1
        for case, answer in zip(cases, answers)
        if extract_passkey(answer) == case.answer
    )
    return RetrievalScore(
        n_cases=len(cases),
        n_correct=n_correct,
        accuracy=n_correct / len(cases) if cases else 0.0,
    )


def perplexity(token_logprobs: Sequence[float]) -> float:
    """Exponential of the average negative log-likelihood."""
    if not token_logprobs:
        raise ValueError("token_logprobs must be non-empty")
    return math.exp(-math.fsum(token_logprobs) / len(token_logprobs))


def write_cases_jsonl(cases: Iterable[PasskeyCase], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for case in cases:
            fh.write(
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
            fh.write("\n")


def read_cases_jsonl(path) -> list[PasskeyCase]:
    cases = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            cases.append(
                PasskeyCase(
                    seed=row["seed"],
                    target_len=row["target_len"],
                    passkey=row["passkey"],
                    context=row["context"],
                    query=row["query"],
                    answer=row["answer"],
                )
            )
    return cases
