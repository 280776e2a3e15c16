"""Rooted label tree: parsing, validation, and label-set queries.

The on-disk format is a UTF-8 TSV edge list, one ``parent<TAB>child`` per
line; lines starting with ``#`` and blank lines are ignored. The root is
the unique node that never appears as a child. Child order is the order
of first appearance in the file and is what makes linearization and
decoder tie-breaking reproducible.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import InvalidTaxonomyError, UnknownLabelError
from .tokens import RESERVED_TOKENS

if TYPE_CHECKING:
    from .corpus import DocumentRecord


@dataclass(frozen=True)
class Issue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of structural validation; ``ok`` is true iff no issues were found."""

    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def codes(self) -> set[str]:
        return {issue.code for issue in self.issues}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "issues": [{"code": i.code, "message": i.message} for i in self.issues],
        }


class Taxonomy:
    """Immutable rooted tree of label names.

    All queries are read-only and safe for concurrent use. Construct via
    :func:`parse_taxonomy` or :meth:`Taxonomy.from_edges`; direct
    construction skips validation and is not supported.
    """

    __slots__ = ("_root", "_parent", "_children", "_depth", "_nodes")

    def __init__(self, root: str, children: Mapping[str, tuple[str, ...]], nodes: tuple[str, ...]):
        self._root = root
        self._children = dict(children)
        self._nodes = nodes
        self._parent: dict[str, str] = {}
        self._depth: dict[str, int] = {root: 0}
        # BFS assigns depths; the input is already known acyclic here.
        frontier = [root]
        while frontier:
            nxt = []
            for node in frontier:
                for child in self._children.get(node, ()):
                    self._parent[child] = node
                    self._depth[child] = self._depth[node] + 1
                    nxt.append(child)
            frontier = nxt

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[str, str]]) -> "Taxonomy":
        """Build and validate from (parent, child) pairs; raises InvalidTaxonomyError."""
        report = _validate_edges(edges)
        if not report.ok:
            raise InvalidTaxonomyError(report)
        nodes: list[str] = []
        seen: set[str] = set()
        children: dict[str, list[str]] = {}
        for parent, child in edges:
            for name in (parent, child):
                if name not in seen:
                    seen.add(name)
                    nodes.append(name)
            children.setdefault(parent, []).append(child)
        roots = [n for n in nodes if n not in {c for _, c in edges}]
        return cls(roots[0], {p: tuple(cs) for p, cs in children.items()}, tuple(nodes))

    # -- queries -----------------------------------------------------------

    @property
    def root(self) -> str:
        return self._root

    @property
    def nodes(self) -> tuple[str, ...]:
        """All node names, root included, in first-appearance order."""
        return self._nodes

    @property
    def labels(self) -> tuple[str, ...]:
        """Assignable labels: every node except the root."""
        return tuple(n for n in self._nodes if n != self._root)

    @property
    def max_depth(self) -> int:
        return max(self._depth.values())

    def __contains__(self, node: str) -> bool:
        return node in self._depth

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Taxonomy):
            return NotImplemented
        return self._root == other._root and self._children == other._children

    def __hash__(self) -> int:
        return hash((self._root, tuple(sorted(self._children.items()))))

    def __repr__(self) -> str:
        return f"Taxonomy(root={self._root!r}, nodes={len(self._nodes)})"

    def _require(self, node: str) -> None:
        if node not in self._depth:
            raise UnknownLabelError(node)

    def parent(self, node: str) -> str | None:
        """Parent name, or None for the root."""
        self._require(node)
        return self._parent.get(node)

    def children(self, node: str) -> tuple[str, ...]:
        """Children in input order; empty for leaves."""
        self._require(node)
        return self._children.get(node, ())

    def is_leaf(self, node: str) -> bool:
        self._require(node)
        return not self._children.get(node)

    def depth(self, node: str) -> int:
        """Edge distance from the root (root = 0)."""
        self._require(node)
        return self._depth[node]

    def ancestors(self, node: str) -> tuple[str, ...]:
        """Strict ancestors from parent upward, excluding the root."""
        self._require(node)
        chain = []
        current = self._parent.get(node)
        while current is not None and current != self._root:
            chain.append(current)
            current = self._parent.get(current)
        return tuple(chain)

    # -- label sets --------------------------------------------------------

    def is_consistent(self, labels: Iterable[str]) -> bool:
        """True iff every member's ancestors (root excluded) are also members."""
        members = set(labels)
        for label in members:
            self._require(label)
        for label in members:
            if any(a not in members for a in self.ancestors(label)):
                return False
        return True

    def ancestor_closure(self, labels: Iterable[str]) -> set[str]:
        """Smallest consistent superset: the union of all members' ancestor paths."""
        closed = set(labels)
        for label in tuple(closed):
            self._require(label)
            closed.update(self.ancestors(label))
        return closed

    def render_edges(self) -> str:
        """TSV edge list; parsing it back reconstructs an equal taxonomy."""
        lines = []
        frontier = [self._root]
        while frontier:
            nxt = []
            for node in frontier:
                for child in self._children.get(node, ()):
                    lines.append(f"{node}\t{child}")
                    nxt.append(child)
            frontier = nxt
        return "\n".join(lines) + "\n"


def _parse_edge_lines(text: str) -> tuple[list[tuple[str, str]], list[Issue]]:
    edges: list[tuple[str, str]] = []
    issues: list[Issue] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 2:
            issues.append(Issue("EMPTY", f"line {lineno}: expected parent<TAB>child, got {len(fields)} fields"))
        elif not fields[0] or not fields[1]:
            issues.append(Issue("EMPTY", f"line {lineno}: empty label name"))
        else:
            edges.append((fields[0], fields[1]))
    return edges, issues


def _validate_edges(edges: Sequence[tuple[str, str]]) -> ValidationReport:
    issues: list[Issue] = []
    if not edges:
        issues.append(Issue("EMPTY", "no edges found"))
        return ValidationReport(tuple(issues))

    nodes: list[str] = []
    seen: set[str] = set()
    for parent, child in edges:
        for name in (parent, child):
            if name not in seen:
                seen.add(name)
                nodes.append(name)

    for name in nodes:
        if name in RESERVED_TOKENS:
            issues.append(Issue("RESERVED_NAME", f"{name!r} is a reserved token name"))

    seen_edges: set[tuple[str, str]] = set()
    for edge in edges:
        if edge in seen_edges:
            issues.append(Issue("DUPLICATE_EDGE", f"duplicate edge {edge[0]!r} -> {edge[1]!r}"))
        seen_edges.add(edge)

    parents_of: dict[str, set[str]] = {}
    for parent, child in seen_edges:
        parents_of.setdefault(child, set()).add(parent)
    for child, parents in sorted(parents_of.items()):
        if len(parents) > 1:
            issues.append(Issue("MULTIPLE_PARENTS", f"{child!r} has parents {sorted(parents)}"))

    roots = [n for n in nodes if n not in parents_of]
    if not roots:
        issues.append(Issue("NO_ROOT", "no node is parent-only; every node appears as a child"))
    elif len(roots) > 1:
        issues.append(Issue("MULTIPLE_ROOTS", f"multiple root candidates: {roots}"))

    # Kahn peel: anything left with surviving in-edges sits on a cycle.
    indegree = {n: len(parents_of.get(n, ())) for n in nodes}
    children_adj: dict[str, list[str]] = {}
    for parent, child in seen_edges:
        children_adj.setdefault(parent, []).append(child)
    queue = [n for n in nodes if indegree[n] == 0]
    peeled = 0
    while queue:
        node = queue.pop()
        peeled += 1
        for child in children_adj.get(node, ()):
            indegree[child] -= 1
            if indegree[child] == 0:
                queue.append(child)
    if peeled != len(nodes):
        cyclic = sorted(n for n in nodes if indegree[n] > 0)
        issues.append(Issue("CYCLE", f"cycle involving {cyclic}"))

    return ValidationReport(tuple(issues))


def validate_taxonomy(text: str) -> ValidationReport:
    """Check edge-list text and report every violation found; never raises."""
    edges, issues = _parse_edge_lines(text)
    if not edges and not issues:
        return ValidationReport((Issue("EMPTY", "no edges found"),))
    structural = _validate_edges(edges) if edges else ValidationReport()
    return ValidationReport(tuple(issues) + structural.issues)


def parse_taxonomy(text: str) -> Taxonomy:
    """Parse edge-list text into a Taxonomy.

    Raises InvalidTaxonomyError carrying the full ValidationReport if any
    structural rule is violated; a partial taxonomy is never returned.
    """
    edges, issues = _parse_edge_lines(text)
    if issues:
        structural = _validate_edges(edges) if edges else ValidationReport()
        raise InvalidTaxonomyError(ValidationReport(tuple(issues) + structural.issues))
    return Taxonomy.from_edges(edges)


@dataclass(frozen=True)
class DatasetStats:
    """Corpus-level statistics: label inventory size, tree depth, mean labels per document."""

    label_count: int
    depth: int
    avg_labels: float
    split_sizes: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "label_count": self.label_count,
            "depth": self.depth,
            "avg_labels": self.avg_labels,
            "split_sizes": dict(self.split_sizes),
        }


def dataset_stats(tax: Taxonomy, corpora: Mapping[str, Sequence["DocumentRecord"]]) -> DatasetStats:
    """Summarize a taxonomy plus per-split document collections.

    label_count excludes the root; avg_labels is the mean label-set
    cardinality over all splits combined (0 for an empty corpus).
    """
    total_labels = 0
    total_docs = 0
    split_sizes: dict[str, int] = {}
    for split, docs in corpora.items():
        split_sizes[split] = len(docs)
        for doc in docs:
            for label in doc.labels or ():
                if label not in tax:
                    raise UnknownLabelError(label, context=f"document {doc.id!r}")
            total_labels += len(doc.labels or ())
            total_docs += 1
    avg = total_labels / total_docs if total_docs else 0.0
    return DatasetStats(
        label_count=len(tax) - 1,
        depth=tax.max_depth,
        avg_labels=avg,
        split_sizes=split_sizes,
    )
