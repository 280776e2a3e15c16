"""Depth-first linearization: label sets to token sequences and back.

Run from the repository root:  python3 demos/02_linearization.py
"""

import json
from pathlib import Path

from treedecode import delinearize, linearize, parse_taxonomy, render_sequence, validate_sequence

DATA = Path(__file__).parent / "data"

tax = parse_taxonomy((DATA / "media.tsv").read_text())

print("every corpus document, linearized and inverted:\n")
for line in (DATA / "corpus.jsonl").read_text().splitlines():
    record = json.loads(line)
    labels = set(record["labels"])
    sequence = linearize(tax, labels)
    assert delinearize(tax, sequence) == labels  # lossless round trip
    print(f"  {record['id']}: {render_sequence(sequence)}")

print("\nthe POP token backtracks one level; a two-path set needs three POPs")
print("to climb from the Documentary leaf back to the root before Business starts.")

# The sequence length is always 2*|labels| + 1: one slot per label push,
# one per pop, plus the root anchor.
for labels in ({"Entertainment"}, {"Business", "Company"}):
    sequence = linearize(tax, labels)
    print(f"\n|labels|={len(labels)} -> {len(sequence)} tokens: {render_sequence(sequence)}")

# Sequences are checked by replaying a stack automaton.
bad = ["Root", "Entertainment", "POP", "POP"]
report = validate_sequence(tax, bad)
print(f"\n{render_sequence(bad)!r} -> position {report.position}, {report.code}")
