"""JSON-lines corpus and prediction files.

A corpus record is ``{"id": ..., "text": ..., "labels": [...]}``; text
may be empty and labels may be absent for decode-only input. Ids must be
unique within a file.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusFormatError


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    text: str = ""
    labels: frozenset[str] | None = None

    def to_dict(self) -> dict:
        row: dict = {"id": self.id, "text": self.text}
        if self.labels is not None:
            row["labels"] = sorted(self.labels)
        return row


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"{path}:{lineno}: bad JSON ({err})") from None
            if not isinstance(row, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected a JSON object")
            rows.append(row)
    return rows


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")


def read_documents(path: str | Path) -> list[DocumentRecord]:
    """Load corpus records, enforcing unique string ids."""
    documents = []
    seen: set[str] = set()
    for index, row in enumerate(read_jsonl(path), start=1):
        if "id" not in row:
            raise CorpusFormatError(f"{path}: record {index} has no id")
        doc_id = str(row["id"])
        if doc_id in seen:
            raise CorpusFormatError(f"{path}: record {index} has duplicate id {doc_id!r}")
        seen.add(doc_id)
        labels = row.get("labels")
        documents.append(
            DocumentRecord(
                id=doc_id,
                text=str(row.get("text", "")),
                labels=None if labels is None else frozenset(str(l) for l in labels),
            )
        )
    return documents
