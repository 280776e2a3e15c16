"""Constrained decoding over the taxonomy automaton.

The decoder walks the same stack automaton that linearization uses. At
every step the set of legal next tokens (the dynamic vocabulary) is:

* the stack top's children that have not been emitted anywhere earlier
  in the sequence (labels are never generated twice),
* plus POP whenever the stack holds more than the root,
* plus ``<eos>`` exactly when the stack is back down to the root.

The vocabulary is never empty: once every child of the root has been
visited and the stack is at the root, only ``<eos>`` remains. Raw scores
from a pluggable scorer are normalized with a softmax over just this
vocabulary, which is what guarantees that any decoded label set is
consistent no matter how adversarial the scorer is.

The root token opens every sequence deterministically and carries no
probability mass.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Protocol

from .errors import (
    DecodeOverflowError,
    IllegalStateError,
    IllegalTokenError,
    InvalidScoreError,
    InvalidSequenceError,
)
from .linearizer import validate_sequence
from .taxonomy import Taxonomy
from .tokens import EOS, POP, sequence_sort_key, token_sort_key


class Scorer(Protocol):
    """Next-token scoring contract standing in for a learned model.

    Given the document text, the already-generated token prefix (root
    anchor included) and a candidate set, return a finite raw score for
    every candidate; higher means more likely. Scores need not be
    normalized, must be deterministic for fixed inputs, and must not
    depend on tokens outside the supplied candidate set. Returning
    scores for extra tokens is allowed; the decoder masks the mapping
    down to the candidates.
    """

    def score(
        self, text: str, prefix: Sequence[str], candidates: Sequence[str]
    ) -> Mapping[str, float]: ...


@dataclass(frozen=True)
class DecoderState:
    """Automaton state after consuming a token prefix.

    The stack bottom is always the root; ``visited`` holds every
    non-root label emitted so far; ``terminal`` marks that ``<eos>`` was
    consumed and no further step is legal.
    """

    stack: tuple[str, ...]
    visited: frozenset[str]
    prefix_len: int
    terminal: bool = False


@dataclass(frozen=True)
class Hypothesis:
    """A partial decode: token prefix, automaton state, accumulated log probability."""

    tokens: tuple[str, ...]
    state: DecoderState
    logprob: float
    complete: bool


@dataclass(frozen=True)
class DecodedSequence:
    """A finished decode in stored form: no ``<eos>``, root token first.

    ``logprob`` does include the terminal ``<eos>`` step. ``labels`` is
    the raw set of label tokens emitted (for constrained decoding this
    equals delinearize of ``tokens`` and is consistent by construction;
    for unconstrained decoding it may not be).
    """

    tokens: tuple[str, ...]
    labels: frozenset[str]
    logprob: float

    def to_dict(self, doc_id: str) -> dict:
        return {
            "id": doc_id,
            "sequence": list(self.tokens),
            "labels": sorted(self.labels),
            "logprob": self.logprob,
        }


def initial_state(tax: Taxonomy) -> DecoderState:
    """State after the forced root token."""
    return DecoderState(stack=(tax.root,), visited=frozenset(), prefix_len=1)


def dynamic_vocabulary(tax: Taxonomy, state: DecoderState) -> frozenset[str]:
    """Legal next tokens for ``state``; see the module docstring for the rule."""
    if state.terminal or not state.stack or state.stack[0] != tax.root:
        raise IllegalStateError(f"no vocabulary for state {state!r}")
    top = state.stack[-1]
    entries = {c for c in tax.children(top) if c not in state.visited}
    if len(state.stack) > 1:
        entries.add(POP)
    else:
        entries.add(EOS)
    return frozenset(entries)


def step(tax: Taxonomy, state: DecoderState, token: str) -> DecoderState:
    """Advance the automaton by one token drawn from its dynamic vocabulary."""
    vocab = dynamic_vocabulary(tax, state)
    if token not in vocab:
        raise IllegalTokenError(f"token {token!r} not in dynamic vocabulary {sorted(vocab)}")
    if token == POP:
        return DecoderState(state.stack[:-1], state.visited, state.prefix_len + 1)
    if token == EOS:
        return DecoderState(state.stack, state.visited, state.prefix_len + 1, terminal=True)
    return DecoderState(state.stack + (token,), state.visited | {token}, state.prefix_len + 1)


def state_from_prefix(tax: Taxonomy, tokens: Sequence[str]) -> DecoderState:
    """Replay a whole prefix (root first) into its automaton state."""
    if not tokens or tokens[0] != tax.root:
        raise InvalidSequenceError(0, "NOT_ROOT_FIRST", "prefix must start with the root token")
    state = initial_state(tax)
    for token in tokens[1:]:
        state = step(tax, state, token)
    return state


def restricted_log_softmax(
    raw_scores: Mapping[str, float], vocab: frozenset[str] | set[str]
) -> dict[str, float]:
    """Log-softmax over exactly the vocabulary entries.

    Numerically stable (max-shifted), hence exactly invariant under
    adding a constant to all scores. A singleton vocabulary yields log
    probability 0.0 exactly.
    """
    if not vocab:
        raise IllegalStateError("empty dynamic vocabulary")
    if set(raw_scores) != set(vocab):
        raise InvalidScoreError(
            f"scores cover {sorted(raw_scores)} but vocabulary is {sorted(vocab)}"
        )
    for token, value in raw_scores.items():
        if not math.isfinite(value):
            raise InvalidScoreError(f"non-finite score {value!r} for token {token!r}")
    # Work on max-relative logits only; absolute score levels never enter,
    # which is what makes constant shifts drop out exactly.
    peak = max(raw_scores.values())
    relative = {t: s - peak for t, s in raw_scores.items()}
    log_norm = math.log(math.fsum(math.exp(r) for r in relative.values()))
    return {t: r - log_norm for t, r in relative.items()}


def restricted_softmax(
    raw_scores: Mapping[str, float], vocab: frozenset[str] | set[str]
) -> dict[str, float]:
    """Probabilities over the vocabulary: positive, order-preserving, summing to 1."""
    return {t: math.exp(lp) for t, lp in restricted_log_softmax(raw_scores, vocab).items()}


def _step_log_probs(
    tax: Taxonomy,
    scorer: Scorer,
    text: str,
    prefix: tuple[str, ...],
    state: DecoderState,
) -> dict[str, float]:
    vocab = dynamic_vocabulary(tax, state)
    candidates = sorted(vocab, key=token_sort_key)
    raw = scorer.score(text, prefix, candidates)
    try:
        masked = {t: raw[t] for t in candidates}
    except KeyError as missing:
        raise InvalidScoreError(f"scorer returned no score for candidate {missing}") from None
    return restricted_log_softmax(masked, vocab)


def sequence_nll(tax: Taxonomy, scorer: Scorer, text: str, gold: Sequence[str]) -> float:
    """Negative log likelihood of a stored gold sequence under the scorer.

    Factorizes over steps: each token's probability comes from the
    restricted softmax over that step's dynamic vocabulary, the terminal
    ``<eos>`` step included. The forced root contributes 0, so forced
    (singleton-vocabulary) paths cost exactly 0.
    """
    report = validate_sequence(tax, gold)
    if not report.ok:
        raise InvalidSequenceError(report.position, report.code, "gold sequence is invalid")
    state = initial_state(tax)
    prefix = (tax.root,)
    total = 0.0
    for token in tuple(gold[1:]) + (EOS,):
        log_probs = _step_log_probs(tax, scorer, text, prefix, state)
        total -= log_probs[token]
        state = step(tax, state, token)
        prefix = prefix + (token,)
    return total


def _strip_eos(tokens: tuple[str, ...]) -> tuple[str, ...]:
    return tokens[:-1] if tokens and tokens[-1] == EOS else tokens


def _hypothesis_order(hyp: Hypothesis):
    # Rank by log probability, then lexicographic token order for determinism.
    return (-hyp.logprob, sequence_sort_key(hyp.tokens))


def max_decode_length(tax: Taxonomy) -> int:
    """Token budget per decode: the longest valid sequence plus <eos> slack."""
    return 2 * len(tax) + 2


def constrained_beam_search(
    tax: Taxonomy, scorer: Scorer, text: str, beam_width: int = 4
) -> list[DecodedSequence]:
    """Beam search where each expansion is limited to the dynamic vocabulary.

    Hypotheses that emit ``<eos>`` inside a step's top-``beam_width`` cut
    are banked as complete and stop holding beam slots. Log probabilities
    only decrease as tokens are appended, so the search ends once
    ``beam_width`` completes are banked and no active hypothesis can
    still beat the worst of them (ties keep searching so tie-breaks stay
    lexicographic), when no active hypotheses remain, or at the length
    budget. Returns up to ``beam_width`` banked hypotheses, best first.
    Every result passes sequence validation, so the top label set is
    consistent for any scorer.
    """
    if beam_width < 1:
        raise ValueError(f"beam_width must be >= 1, got {beam_width}")
    limit = max_decode_length(tax)
    active = [Hypothesis((tax.root,), initial_state(tax), 0.0, complete=False)]
    banked: list[Hypothesis] = []
    while active:
        if len(active[0].tokens) >= limit:
            raise DecodeOverflowError(
                f"no <eos> within {limit} tokens; taxonomy has {len(tax)} nodes"
            )
        expansions: list[Hypothesis] = []
        for hyp in active:
            log_probs = _step_log_probs(tax, scorer, text, hyp.tokens, hyp.state)
            for token, lp in log_probs.items():
                expansions.append(
                    Hypothesis(
                        tokens=hyp.tokens + (token,),
                        state=step(tax, hyp.state, token),
                        logprob=hyp.logprob + lp,
                        complete=token == EOS,
                    )
                )
        expansions.sort(key=_hypothesis_order)
        active = []
        for hyp in expansions[:beam_width]:
            if hyp.complete:
                banked.append(hyp)
            else:
                active.append(hyp)
        banked.sort(key=_hypothesis_order)
        del banked[beam_width:]
        if len(banked) == beam_width and active and active[0].logprob < banked[-1].logprob:
            break
    results = []
    for hyp in banked:
        stored = _strip_eos(hyp.tokens)
        labels = frozenset(t for t in stored if t != POP and t != tax.root)
        results.append(DecodedSequence(stored, labels, hyp.logprob))
    return results


def greedy_decode(tax: Taxonomy, scorer: Scorer, text: str) -> DecodedSequence:
    """Beam width 1: follow the argmax token at every step."""
    return constrained_beam_search(tax, scorer, text, beam_width=1)[0]


def full_alphabet(tax: Taxonomy) -> tuple[str, ...]:
    """Every candidate token: non-root labels plus POP and <eos>, in tie-break order."""
    return tuple(sorted(tax.labels, key=token_sort_key)) + (EOS, POP)


def unconstrained_decode(
    tax: Taxonomy, scorer: Scorer, text: str, beam_width: int = 4
) -> DecodedSequence:
    """Ablation baseline: softmax over the full alphabet, no validity filter.

    The root still anchors the sequence, but any label (or POP) may
    follow anything, labels may repeat, and hypotheses finish at ``<eos>``
    or the length budget (no overflow error here; truncation is part of
    the baseline's contract). The decoded label set is every label token
    emitted and is NOT guaranteed consistent. The banking and stop rules
    mirror constrained_beam_search.
    """
    if beam_width < 1:
        raise ValueError(f"beam_width must be >= 1, got {beam_width}")
    alphabet = full_alphabet(tax)
    vocab = frozenset(alphabet)
    limit = max_decode_length(tax)

    def order(entry: tuple[tuple[str, ...], float]):
        return (-entry[1], sequence_sort_key(entry[0]))

    active: list[tuple[tuple[str, ...], float]] = [((tax.root,), 0.0)]
    banked: list[tuple[tuple[str, ...], float]] = []
    while active:
        expansions: list[tuple[tuple[str, ...], float]] = []
        for tokens, logprob in active:
            raw = scorer.score(text, tokens, alphabet)
            try:
                masked = {t: raw[t] for t in alphabet}
            except KeyError as missing:
                raise InvalidScoreError(f"scorer returned no score for candidate {missing}") from None
            for token, lp in restricted_log_softmax(masked, vocab).items():
                expansions.append((tokens + (token,), logprob + lp))
        expansions.sort(key=order)
        active = []
        for tokens, logprob in expansions[:beam_width]:
            if tokens[-1] == EOS or len(tokens) >= limit:
                banked.append((tokens, logprob))
            else:
                active.append((tokens, logprob))
        banked.sort(key=order)
        del banked[beam_width:]
        if len(banked) == beam_width and active and active[0][1] < banked[-1][1]:
            break
    tokens, logprob = banked[0]
    stored = _strip_eos(tokens)
    labels = frozenset(t for t in stored if t != POP and t != tax.root)
    return DecodedSequence(stored, labels, logprob)
