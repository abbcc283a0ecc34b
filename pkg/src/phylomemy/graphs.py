"""Per-period similarity graphs and field detection.

Operators 2 and 3: the co-occurrence matrix becomes a confidence-weighted
similarity graph, whose meaningful sub-units (fields) are detected either
as maximal cliques or as maximal frequent term sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import CoocMatrix

__all__ = [
    "SimilarityGraph",
    "Group",
    "PeriodTooDenseError",
    "confidence",
    "build_similarity_graph",
    "detect_fields_cliques",
    "detect_fields_itemsets",
    "assemble_groups",
]


class PeriodTooDenseError(RuntimeError):
    pass


@dataclass
class SimilarityGraph:
    period_id: str
    nodes: set[str]
    edges: dict[tuple[str, str], float]  # keys sorted pairs, weights in [0, 1]

    def neighbors(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for x, y in self.edges:
            adj[x].add(y)
            adj[y].add(x)
        return adj


@dataclass(frozen=True)
class Group:
    """A field: a set of root terms localized in one period."""

    id: str
    period_id: str
    period_index: int
    terms: frozenset[str]
    support: int


def confidence(matrix: CoocMatrix, x: str, y: str, symmetrize: str = "max") -> float:
    """Confidence similarity of two terms, symmetrized.

    The directional rule-based confidence is cooc/occ; taking the max keeps
    hypernym/hyponym pairs strongly linked, min gives stricter graphs.
    """
    ox, oy = matrix.occ(x), matrix.occ(y)
    if ox == 0 or oy == 0:
        absent = x if ox == 0 else y
        raise ValueError(f"term absent from period: {absent!r}")
    c = matrix.cooc(x, y)
    pick = max if symmetrize == "max" else min
    return pick(c / ox, c / oy)


def build_similarity_graph(
    matrix: CoocMatrix, edge_threshold: float, symmetrize: str = "max"
) -> SimilarityGraph:
    """Edges are exactly the co-occurring pairs with confidence >= threshold."""
    nodes = set(matrix.terms())
    edges: dict[tuple[str, str], float] = {}
    for (x, y), c in matrix.pairs().items():
        if c <= 0:
            continue
        w = confidence(matrix, x, y, symmetrize)
        if w >= edge_threshold:
            edges[(x, y)] = w
    return SimilarityGraph(period_id=matrix.period_id, nodes=nodes, edges=edges)


def _bron_kerbosch(adj: dict[str, set[str]]) -> list[frozenset[str]]:
    """Maximal clique enumeration with pivoting."""
    cliques: list[frozenset[str]] = []

    def expand(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            cliques.append(frozenset(r))
            return
        # pivot: vertex of P|X with most neighbors in P (deterministic tie-break)
        pivot = max(sorted(p | x), key=lambda v: len(adj[v] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(adj), set())
    return cliques


def detect_fields_cliques(
    graph: SimilarityGraph,
    keep_singletons: bool = False,
    max_cliques: int = 100_000,
) -> list[frozenset[str]]:
    """Fields as maximal cliques of the similarity graph.

    Isolated nodes become singleton fields only if keep_singletons is set.
    Raises PeriodTooDenseError past the clique cap (advising a higher
    edge threshold).
    """
    adj = graph.neighbors()
    cliques = [c for c in _bron_kerbosch(adj) if len(c) >= 2 or keep_singletons]
    if len(cliques) > max_cliques:
        raise PeriodTooDenseError(
            f"period {graph.period_id}: {len(cliques)} cliques exceed cap {max_cliques}; "
            "raise the edge threshold"
        )
    return sorted(cliques, key=lambda c: tuple(sorted(c)))


def detect_fields_itemsets(
    doc_term_sets: Sequence[frozenset[str]], min_support: int
) -> list[frozenset[str]]:
    """Fields as maximal frequent term sets of one period's documents.

    A term set is frequent when contained in >= min_support documents;
    maximal when no frequent proper superset exists.
    """
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    items: dict[str, int] = {}
    for i, terms in enumerate(doc_term_sets):
        for t in terms:
            items[t] = items.get(t, 0) | (1 << i)

    def support(mask: int) -> int:
        return bin(mask).count("1")

    frequent_items = sorted(t for t, m in items.items() if support(m) >= min_support)
    found: list[tuple[frozenset[str], int]] = []

    def dfs(prefix: list[str], mask: int, candidates: list[str]) -> None:
        extended = False
        for i, item in enumerate(candidates):
            new_mask = mask & items[item]
            if support(new_mask) >= min_support:
                extended = True
                dfs(prefix + [item], new_mask, candidates[i + 1:])
        if not extended and prefix:
            found.append((frozenset(prefix), support(mask)))

    all_mask = (1 << len(doc_term_sets)) - 1
    dfs([], all_mask, frequent_items)

    # the DFS only guards against supersets later in item order; filter globally
    maximal = [
        s for s, _ in found
        if not any(s < other for other, _ in found)
    ]
    return sorted(set(maximal), key=lambda c: tuple(sorted(c)))


def _clique_support(terms: frozenset[str], edges: Iterable[tuple[str, str]],
                    doc_term_sets: Sequence[frozenset[str]]) -> int:
    """Documents witnessing at least one internal edge (diagnostic proxy)."""
    internal = [(x, y) for x, y in edges if x in terms and y in terms]
    if not internal:
        (only,) = terms if len(terms) == 1 else (None,)
        if only is not None:
            return sum(1 for d in doc_term_sets if only in d)
        return 0
    count = 0
    for d in doc_term_sets:
        if any(x in d and y in d for x, y in internal):
            count += 1
    return count


def assemble_groups(
    per_period_fields: Sequence[tuple[str, int, list[frozenset[str]], Sequence[frozenset[str]], dict]],
    mode: str,
) -> list[Group]:
    """Assign phylomemy-wide deterministic group ids.

    Input entries are (period_id, period_index, fields, doc term sets,
    edges-or-{}); fields are sorted by period then lexicographic term set
    before id assignment so parallel period processing merges identically.
    """
    flat: list[tuple[int, str, frozenset[str], int]] = []
    for period_id, period_index, fields, doc_term_sets, edges in per_period_fields:
        for terms in fields:
            if mode == "itemsets":
                sup = sum(1 for d in doc_term_sets if terms <= d)
            else:
                sup = _clique_support(terms, edges, doc_term_sets)
            flat.append((period_index, period_id, terms, sup))
    flat.sort(key=lambda e: (e[0], tuple(sorted(e[2]))))
    width = max(4, len(str(len(flat))))
    return [
        Group(id=f"g{i:0{width}d}", period_id=pid, period_index=pidx, terms=terms, support=sup)
        for i, (pidx, pid, terms, sup) in enumerate(flat)
    ]
