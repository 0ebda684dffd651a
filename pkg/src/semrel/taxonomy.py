"""Immutable concept taxonomy: loading, validation and hierarchy queries.

Relation lines read ``source REL target``.  ``A PAR B`` means A is a parent
of B, ``A RB B`` means A is broader than B.  Only one direction needs to be
present in the file; inverses are materialized on load.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping


class TaxonomyError(ValueError):
    pass


class UnknownConcept(TaxonomyError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class UnreachablePair(TaxonomyError):
    pass


class Relation(str, enum.Enum):
    PAR = "PAR"
    CHD = "CHD"
    RB = "RB"
    RN = "RN"
    TERM = "TERM"

    @property
    def inverse(self) -> "Relation":
        return _INVERSE[self]


_INVERSE = {
    Relation.PAR: Relation.CHD,
    Relation.CHD: Relation.PAR,
    Relation.RB: Relation.RN,
    Relation.RN: Relation.RB,
    Relation.TERM: Relation.TERM,
}


class EdgeSet(str, enum.Enum):
    PAR_CHD = "PAR_CHD"
    RB_RN = "RB_RN"
    BOTH = "BOTH"


class DepthMode(str, enum.Enum):
    MIN = "MIN"
    MAX = "MAX"


@dataclass(frozen=True)
class HierarchyConfig:
    edge_set: EdgeSet = EdgeSet.PAR_CHD
    # longest root path: an ancestor is then always strictly shallower, which
    # keeps wup within [0, 1] and zhong >= 1 on multi-parent graphs
    depth_mode: DepthMode = DepthMode.MAX

    def __post_init__(self):
        object.__setattr__(self, "edge_set", EdgeSet(self.edge_set))
        object.__setattr__(self, "depth_mode", DepthMode(self.depth_mode))

    @property
    def parent_relations(self) -> frozenset:
        """Relations whose source is the parent of the target."""
        return {
            EdgeSet.PAR_CHD: frozenset({Relation.PAR}),
            EdgeSet.RB_RN: frozenset({Relation.RB}),
            EdgeSet.BOTH: frozenset({Relation.PAR, Relation.RB}),
        }[self.edge_set]


_BAD_ID = re.compile(r"\s")


class Taxonomy:
    """A rooted concept DAG with definitions and a surface-term index.

    All closures are computed once at construction; the object is read-only
    afterwards.
    """

    def __init__(
        self,
        concepts: Mapping[str, str],
        edges: Iterable[tuple],
        definitions: Mapping[str, list] | None = None,
        index: Mapping[str, Iterable[str]] | None = None,
        config: HierarchyConfig | None = None,
    ):
        self.config = config or HierarchyConfig()
        for cid in concepts:
            if not cid or _BAD_ID.search(cid):
                raise TaxonomyError(f"invalid ConceptId {cid!r}")
        self.concepts = dict(concepts)

        normalized = set()
        for src, rel, tgt in edges:
            rel = Relation(rel)
            self._check_declared(src)
            self._check_declared(tgt)
            normalized.add((src, rel, tgt))
            normalized.add((tgt, rel.inverse, src))
        self.edges = frozenset(normalized)
        links = {}
        for src, rel, tgt in normalized:
            if src != tgt:
                links.setdefault(src, {}).setdefault(tgt, set()).add(rel)
        self._links = {
            c: {n: frozenset(r) for n, r in ns.items()} for c, ns in links.items()
        }

        self.definitions = {}
        for cid, texts in (definitions or {}).items():
            self._check_declared(cid)
            self.definitions[cid] = list(texts)

        self.index = {}
        for term, cids in (index or {}).items():
            cids = frozenset(cids)
            for cid in cids:
                self._check_declared(cid)
            key = term.lower()
            self.index[key] = self.index.get(key, frozenset()) | cids

        self._build_hierarchy()

    def _check_declared(self, cid):
        if cid not in self.concepts:
            raise TaxonomyError(f"undeclared ConceptId {cid}")

    def _build_hierarchy(self):
        parent_rels = self.config.parent_relations
        parents = {c: set() for c in self.concepts}
        children = {c: set() for c in self.concepts}
        for src, rel, tgt in self.edges:
            if rel in parent_rels:
                if src == tgt:
                    raise TaxonomyError(f"cycle detected at {src}")
                parents[tgt].add(src)
                children[src].add(tgt)

        # Kahn's algorithm, sorted for a deterministic order
        pending = {c: len(p) for c, p in parents.items()}
        queue = deque(sorted(c for c, n in pending.items() if n == 0))
        roots = list(queue)
        order = []
        while queue:
            c = queue.popleft()
            order.append(c)
            for d in sorted(children[c]):
                pending[d] -= 1
                if pending[d] == 0:
                    queue.append(d)
        if len(order) != len(self.concepts):
            stuck = sorted(c for c, n in pending.items() if n > 0)
            raise TaxonomyError(f"cycle detected among {', '.join(stuck[:10])}")
        if not roots:
            raise TaxonomyError("zero roots: taxonomy is empty")
        if len(roots) > 1:
            raise TaxonomyError(f"multiple roots: {', '.join(roots[:10])}")

        self.root = roots[0]
        self._parents = {c: frozenset(p) for c, p in parents.items()}
        self._children = {c: frozenset(p) for c, p in children.items()}
        self._order = order

        anc = {}
        for c in order:
            s = {c}
            for p in parents[c]:
                s |= anc[p]
            anc[c] = frozenset(s)
        self._ancestors = anc

        desc = {}
        for c in reversed(order):
            s = set()
            for d in children[c]:
                s.add(d)
                s |= desc[d]
            desc[c] = frozenset(s)
        self._descendants = desc

        depth = {}
        if self.config.depth_mode is DepthMode.MIN:
            depth[self.root] = 1
            queue = deque([self.root])
            while queue:
                c = queue.popleft()
                for d in children[c]:
                    if d not in depth:
                        depth[d] = depth[c] + 1
                        queue.append(d)
        else:
            for c in order:
                depth[c] = 1 + max((depth[p] for p in parents[c]), default=0)
        self._depth = depth

        self._leaves = frozenset(c for c in self.concepts if not children[c])
        adj = {c: parents[c] | children[c] for c in self.concepts}
        self._adjacent = {c: tuple(sorted(n)) for c, n in adj.items()}

    def __contains__(self, cid):
        return cid in self.concepts

    def __len__(self):
        return len(self.concepts)

    def __repr__(self):
        return f"<Taxonomy {len(self.concepts)} concepts, root={self.root}>"

    def _require(self, cid):
        if cid not in self.concepts:
            raise UnknownConcept(f"unknown ConceptId {cid}")

    def parents(self, c: str) -> frozenset:
        self._require(c)
        return self._parents[c]

    def children(self, c: str) -> frozenset:
        self._require(c)
        return self._children[c]

    def ancestors(self, c: str) -> frozenset:
        """Reflexive ancestor closure; always contains ``c`` and the root."""
        self._require(c)
        return self._ancestors[c]

    def descendants(self, c: str) -> frozenset:
        """Strict descendant closure (``c`` itself excluded)."""
        self._require(c)
        return self._descendants[c]

    def depth(self, c: str) -> int:
        """Node count of the root path (longest by default, shortest under MIN); root is 1."""
        self._require(c)
        return self._depth[c]

    @property
    def leaves(self) -> frozenset:
        return self._leaves

    def is_leaf(self, c: str) -> bool:
        self._require(c)
        return c in self._leaves

    def spath(self, c1: str, c2: str) -> int:
        """Node count of the shortest undirected hierarchy path between two concepts."""
        self._require(c1)
        self._require(c2)
        if c1 == c2:
            return 1
        seen = {c1: 1}
        queue = deque([c1])
        while queue:
            c = queue.popleft()
            for n in self._adjacent[c]:
                if n not in seen:
                    if n == c2:
                        return seen[c] + 1
                    seen[n] = seen[c] + 1
                    queue.append(n)
        raise UnreachablePair(f"unreachable pair {c1} {c2}")

    def lcs_set(self, c1: str, c2: str) -> frozenset:
        """Shared ancestors that have no child among the shared ancestors."""
        shared = self.ancestors(c1) & self.ancestors(c2)
        return frozenset(
            a for a in shared if not (self._children[a] & shared)
        )

    def leaf_stats(self, c: str) -> tuple[int, int, int]:
        """(leaf descendants, reflexive ancestor count, leaves in taxonomy)."""
        desc = self.descendants(c)
        return len(desc & self._leaves), len(self._ancestors[c]), len(self._leaves)

    def neighbors(self, c: str) -> dict:
        """Concepts linked to ``c`` by any relation, with the linking kinds."""
        self._require(c)
        return dict(self._links.get(c, {}))

    def senses(self, term: str) -> frozenset:
        """Concepts a surface term maps to (empty if unmapped)."""
        return self.index.get(term.strip().lower(), frozenset())

    def resolve(self, term_or_id: str) -> frozenset:
        """A declared ConceptId resolves to itself, anything else through the index."""
        if term_or_id in self.concepts:
            return frozenset({term_or_id})
        return self.senses(term_or_id)


def _read_tsv(path, ncols, split_max=None):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TaxonomyError(f"{path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise TaxonomyError(f"{path}: invalid UTF-8 at byte {e.start}") from e
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t", split_max if split_max else -1)
        if len(fields) != ncols or not all(f.strip() for f in fields):
            raise TaxonomyError(f"{path}:{lineno}: malformed line {line!r}")
        yield lineno, [f.strip() for f in fields]


def load_taxonomy(
    concepts_file,
    relations_file,
    definitions_file=None,
    index_file=None,
    config: HierarchyConfig | None = None,
) -> Taxonomy:
    concepts = {}
    for lineno, (cid, term) in _read_tsv(concepts_file, 2, 1):
        if cid in concepts:
            raise TaxonomyError(f"{concepts_file}:{lineno}: duplicate ConceptId {cid}")
        concepts[cid] = term

    edges = []
    for lineno, (src, rel, tgt) in _read_tsv(relations_file, 3):
        if rel not in Relation.__members__:
            raise TaxonomyError(f"{relations_file}:{lineno}: unknown relation {rel!r}")
        edges.append((src, Relation(rel), tgt))

    definitions = {}
    if definitions_file is not None:
        for _, (cid, text) in _read_tsv(definitions_file, 2, 1):
            definitions.setdefault(cid, []).append(text)

    index = {}
    if index_file is not None:
        for _, (term, cid) in _read_tsv(index_file, 2):
            index.setdefault(term.lower(), set()).add(cid)

    return Taxonomy(concepts, edges, definitions, index, config)


TAXONOMY_FILES = ("concepts.tsv", "relations.tsv", "definitions.tsv", "index.tsv")


def load_taxonomy_dir(directory, config: HierarchyConfig | None = None) -> Taxonomy:
    """Load the four standard files from one directory."""
    d = Path(directory)
    return load_taxonomy(*(d / name for name in TAXONOMY_FILES), config=config)
