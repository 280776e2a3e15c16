"""Desk-scale scorer implementations for exercising the decoder.

None of these look at a neural model: uniform is the null model, the
oracle teacher-forces a known target, the random scorer is a
deterministic adversary for consistency testing, and the bigram scorer
is a deliberately weak count model fitted on linearized label sequences
(it ignores the document text; that limitation is the point, it exists
so constrained-vs-unconstrained comparisons are cheap to run).
"""

from __future__ import annotations

import hashlib
import json
import math
from collections.abc import Iterable, Sequence
from itertools import pairwise
from pathlib import Path

from .decoding import full_alphabet
from .errors import EmptyCorpusError, InconsistentLabelSetError
from .linearizer import linearize
from .taxonomy import Taxonomy
from .tokens import EOS


class UniformScorer:
    """Equal raw score (0.0) for every candidate."""

    def score(self, text, prefix, candidates):
        return {token: 0.0 for token in candidates}


class OracleScorer:
    """Teacher scorer for one target sequence.

    While the prefix tracks the target, the next target token (the
    terminal ``<eos>`` included) gets raw score ``margin`` and everything
    else 0; off-target prefixes are scored uniformly. With the default
    margin the target token dominates any realistic candidate set, so a
    width-1 beam recovers the target exactly. Margin 0 degenerates to
    the uniform scorer.
    """

    def __init__(self, target: Sequence[str], margin: float = 10.0):
        self.target = tuple(target) + (EOS,)
        self.margin = margin

    def score(self, text, prefix, candidates):
        position = len(prefix)
        on_target = tuple(prefix) == self.target[:position] and position < len(self.target)
        wanted = self.target[position] if on_target else None
        return {token: self.margin if token == wanted else 0.0 for token in candidates}


class RandomScorer:
    """Adversarial but reproducible scorer: scores are seeded hashes of the inputs.

    Unlike a stateful RNG, hashing keeps the scorer deterministic for
    fixed inputs, as the scoring contract requires.
    """

    def __init__(self, seed: int = 0, scale: float = 5.0):
        self.seed = seed
        self.scale = scale

    def _draw(self, text: str, prefix: Sequence[str], token: str) -> float:
        payload = f"{self.seed}\x1f{text}\x1f{' '.join(prefix)}\x1f{token}"
        digest = hashlib.blake2b(payload.encode("utf-8"), digest_size=8).digest()
        unit = int.from_bytes(digest, "big") / 2**64
        return (2.0 * unit - 1.0) * self.scale

    def score(self, text, prefix, candidates):
        return {token: self._draw(text, prefix, token) for token in candidates}


class BigramScorer:
    """Add-one-smoothed transition model over the token alphabet.

    Raw scores are log P(next | previous token); the document text is
    ignored. Probabilities over the full alphabet sum to 1 for every
    context before any vocabulary restriction.
    """

    def __init__(
        self,
        alphabet: Sequence[str],
        counts: dict[str, dict[str, int]],
        repaired_docs: int = 0,
    ):
        self.alphabet = tuple(alphabet)
        self.counts = counts
        self.repaired_docs = repaired_docs
        self._totals = {prev: sum(nxt.values()) for prev, nxt in counts.items()}

    def probability(self, prev: str, token: str) -> float:
        context = self.counts.get(prev, {})
        total = self._totals.get(prev, 0)
        return (context.get(token, 0) + 1) / (total + len(self.alphabet))

    def score(self, text, prefix, candidates):
        prev = prefix[-1]
        return {token: math.log(self.probability(prev, token)) for token in candidates}

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "counts": {
                prev: dict(sorted(nxt.items())) for prev, nxt in sorted(self.counts.items())
            },
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "BigramScorer":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        counts = {prev: {t: int(n) for t, n in nxt.items()} for prev, nxt in data["counts"].items()}
        return cls(tuple(data["alphabet"]), counts)


def fit_bigram_scorer(
    tax: Taxonomy,
    corpus: Iterable[tuple[str, Iterable[str]]],
    *,
    closure: bool = False,
) -> BigramScorer:
    """Count token transitions over the linearized gold sets of a corpus.

    Each document contributes the transitions of its canonical sequence,
    terminal ``<eos>`` included. Inconsistent label sets are an error
    unless ``closure=True``, which repairs them with the ancestor closure
    and reports how many documents needed it via ``repaired_docs``.
    """
    counts: dict[str, dict[str, int]] = {}
    repaired = 0
    documents = 0
    for text, labels in corpus:
        documents += 1
        label_set = set(labels)
        if not tax.is_consistent(label_set):
            if not closure:
                raise InconsistentLabelSetError(
                    "corpus contains an inconsistent label set; pass closure=True to repair"
                )
            label_set = tax.ancestor_closure(label_set)
            repaired += 1
        sequence = linearize(tax, label_set) + [EOS]
        for prev, nxt in pairwise(sequence):
            context = counts.setdefault(prev, {})
            context[nxt] = context.get(nxt, 0) + 1
    if documents == 0:
        raise EmptyCorpusError("cannot fit a bigram scorer on an empty corpus")
    return BigramScorer(full_alphabet(tax), counts, repaired)
