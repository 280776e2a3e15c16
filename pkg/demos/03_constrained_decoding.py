"""Dynamic-vocabulary decoding: legal next tokens only, for any scorer.

Run from the repository root:  python3 demos/03_constrained_decoding.py
"""

from pathlib import Path

from treedecode import (
    RandomScorer,
    UniformScorer,
    constrained_beam_search,
    dynamic_vocabulary,
    parse_taxonomy,
    render_sequence,
    state_from_prefix,
)

DATA = Path(__file__).parent / "data"
tax = parse_taxonomy((DATA / "media.tsv").read_text())

# The decoder walks a stack automaton. After generating Movie, the only
# legal continuations are Movie's children and the POP backtrack.
prefix = ["Root", "Entertainment", "Movie"]
state = state_from_prefix(tax, prefix)
print("prefix:", render_sequence(prefix))
print("dynamic vocabulary:", sorted(dynamic_vocabulary(tax, state)))

print("\nstep-by-step vocabularies along one sequence:")
walk = ["Root", "Entertainment", "Movie", "Documentary", "POP", "POP", "POP"]
for end in range(1, len(walk) + 1):
    state = state_from_prefix(tax, walk[:end])
    print(f"  after {render_sequence(walk[:end]):<55} -> {sorted(dynamic_vocabulary(tax, state))}")

# Beam search restricted to those vocabularies. Even a hostile random
# scorer cannot produce an isolated node: whatever it prefers, only
# consistent sequences are reachable.
print("\nadversarial random scorers, beam width 4:")
for seed in range(5):
    result = constrained_beam_search(tax, RandomScorer(seed), "any document", beam_width=4)[0]
    print(
        f"  seed {seed}: {render_sequence(result.tokens):<60}"
        f" labels={sorted(result.labels)} consistent={tax.is_consistent(result.labels)}"
    )

print("\nuniform scorer, beam width 4 (ties broken lexicographically):")
for rank, result in enumerate(constrained_beam_search(tax, UniformScorer(), "", 4), start=1):
    print(f"  #{rank} logprob={result.logprob:8.4f}  {render_sequence(result.tokens)}")
