"""Parse a taxonomy file, query it, and repair inconsistent label sets.

Run from the repository root:  python3 demos/01_taxonomy_basics.py
"""

from pathlib import Path

from treedecode import parse_taxonomy, validate_taxonomy

DATA = Path(__file__).parent / "data"

text = (DATA / "media.tsv").read_text()
print("validation report:", validate_taxonomy(text).to_dict())

tax = parse_taxonomy(text)
print(f"\nroot={tax.root}  nodes={len(tax)}  max depth={tax.max_depth}")
print("assignable labels:", ", ".join(tax.labels))

print("\nchildren of Movie:", tax.children("Movie"))
print("ancestors of Documentary (nearest first):", tax.ancestors("Documentary"))

# A prediction with isolated nodes: Documentary and Company are claimed,
# but their parents are not.
isolated = {"Documentary", "Company"}
print("\nisolated prediction:", sorted(isolated))
print("consistent?", tax.is_consistent(isolated))
closed = tax.ancestor_closure(isolated)
print("after ancestor closure:", sorted(closed))
print("consistent now?", tax.is_consistent(closed))

# Structural problems are reported all at once, never as a partial tree.
broken = "A\tB\nB\tA\nRoot\tPOP\n"
report = validate_taxonomy(broken)
print("\nbroken edge list issues:")
for issue in report.issues:
    print(f"  {issue.code}: {issue.message}")
