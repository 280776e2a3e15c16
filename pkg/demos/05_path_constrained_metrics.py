"""Path-constrained F1: correct nodes earn no credit when ancestors are missed.

Run from the repository root:  python3 demos/05_path_constrained_metrics.py
"""

from pathlib import Path

from treedecode import evaluate, parse_taxonomy

DATA = Path(__file__).parent / "data"
tax = parse_taxonomy((DATA / "media.tsv").read_text())

gold = [{"Entertainment", "Movie", "Documentary", "Business", "Company"}]
pred = [{"Entertainment", "Documentary", "Company"}]

print("gold:", sorted(gold[0]))
print("pred:", sorted(pred[0]), "(Documentary and Company are isolated)")

report = evaluate(tax, gold, pred)
print()
print(report.format_table())
print(
    "\nStandard micro-F1 rewards all three predicted nodes (tp=3, fn=2)."
    "\nThe path-constrained variant denies Documentary (Movie missing) and"
    "\nCompany (Business missing): tp=1, fp=2, fn=4, so 0.25 instead of 0.75."
)

closed = [tax.ancestor_closure(p) for p in pred]
print("\nafter ancestor-closure post-processing:", sorted(closed[0]))
repaired = evaluate(tax, gold, closed)
print()
print(repaired.format_table())
print(
    "\nClosure forces consistency, so both variants agree; whether the score"
    "\nimproves depends on whether the added ancestors are actually gold."
)

print("\nper-label rows (label, f1, c_f1, support):")
for row in report.per_label:
    print(f"  {row.label:<14} {row.f1:6.4f} {row.c_f1:6.4f} {row.support}")
