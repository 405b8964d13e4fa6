"""Offline NDJSON batch scoring: one output object per input line, in order."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..errors import LoadError
from .scorer import RequestError, Scorer

_BATCH_FIELDS = ("entity_id", "s_m", "s_l", "label")


def score_lines(scorer: Scorer, lines: Iterable[str]) -> list[dict]:
    """Score NDJSON request lines; malformed lines yield error objects in place."""
    results = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            request = json.loads(line)
            response = scorer.score_request(request)
            results.append({k: response[k] for k in _BATCH_FIELDS if k in response})
        except (json.JSONDecodeError, RequestError) as exc:
            results.append({"error": str(exc), "line": lineno})
    return results


def score_batch(scorer: Scorer, input_path: str | Path,
                output_path: str | Path | None = None) -> list[dict]:
    """Score an NDJSON request file; optionally write the NDJSON results."""
    try:
        text = Path(input_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read batch input {input_path}: {exc}") from exc
    results = score_lines(scorer, text.split("\n"))
    if output_path is not None:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            for obj in results:
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return results
