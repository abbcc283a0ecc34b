"""Sea level rise: the recursive foliation of the kinship graph.

Starting from the continents (weakly connected components at threshold 0),
the similarity threshold rises branch-locally through the observed link
weights. A split is committed only when the level-parameterized quality
of the finer partition strictly improves; cut links become ghost links
recording the similarity gap between sibling branches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graphs import Group
from .matching import KinshipGraph, KinshipLink

__all__ = [
    "Branch",
    "GhostLink",
    "SplitNode",
    "SplitTree",
    "Phylomemy",
    "branch_quality",
    "initial_continent",
    "rise",
    "foliation_slice",
]

QUALITY_TOLERANCE = 1e-12
TOP_EPSILON = 1e-9


@dataclass(frozen=True)
class Branch:
    id: str  # tree address over digits and '.', encoding the split history
    group_ids: frozenset[str]
    elevation: float
    parent_branch: Optional[str] = None


@dataclass(frozen=True)
class GhostLink:
    child: str
    parent: str
    weight: float  # original Delta of the cut kinship link
    cut_level: float  # threshold at which the link was removed


@dataclass
class SplitNode:
    id: str
    group_ids: frozenset[str]
    elevation: float  # threshold at which this branch came into being
    split_level: Optional[float] = None  # set on internal (split) nodes
    children: list[str] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class SplitTree:
    nodes: dict[str, SplitNode]
    roots: list[str]

    def leaves(self) -> list[SplitNode]:
        """Leaves in drift order: DFS, children in creation (id) order."""
        out: list[SplitNode] = []

        def walk(node_id: str) -> None:
            node = self.nodes[node_id]
            if node.is_leaf:
                out.append(node)
            for child in node.children:
                walk(child)

        for root in self.roots:
            walk(root)
        return out

    def parent_of(self, node_id: str) -> Optional[str]:
        if "." not in node_id:
            return None
        return node_id.rsplit(".", 1)[0]

    def lca_split_level(self, a: str, b: str) -> float:
        """Split level at which two leaves separated; 0 across roots."""
        pa, pb = a.split("."), b.split(".")
        common: list[str] = []
        for x, y in zip(pa, pb):
            if x != y:
                break
            common.append(x)
        if not common:
            return 0.0
        lca = ".".join(common)
        level = self.nodes[lca].split_level
        return level if level is not None else 0.0


@dataclass
class Phylomemy:
    groups: dict[str, Group]
    links: list[KinshipLink]  # surviving kinship links
    ghost_links: list[GhostLink]
    tree: SplitTree
    level: float  # lambda, the level of observation
    config: dict = field(default_factory=dict)
    committed_levels: list[float] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)
    dropped_links: list[KinshipLink] = field(default_factory=list)

    def leaf_branches(self) -> list[Branch]:
        return [
            Branch(
                id=n.id,
                group_ids=n.group_ids,
                elevation=n.elevation,
                parent_branch=self.tree.parent_of(n.id),
            )
            for n in self.tree.leaves()
        ]

    def branch_of(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for leaf in self.tree.leaves():
            for gid in leaf.group_ids:
                out[gid] = leaf.id
        return out


def _components(group_ids: Iterable[str], links: Sequence[KinshipLink]) -> list[frozenset[str]]:
    adj: dict[str, set[str]] = {g: set() for g in group_ids}
    for l in links:
        adj[l.child].add(l.parent)
        adj[l.parent].add(l.child)
    seen: set[str] = set()
    comps: list[frozenset[str]] = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _order_components(comps: Iterable[frozenset[str]], groups: dict[str, Group]) -> list[frozenset[str]]:
    """Deterministic order: earliest period of any member, then smallest id."""
    return sorted(comps, key=lambda c: (min(groups[g].period_index for g in c), min(c)))


def branch_quality(partition: Sequence[Iterable[frozenset[str]]], level: float) -> float:
    """Quality of a partition of groups into branches at a given level.

    For each term x with group-frequency g(x) across the partition, each
    branch b scores accuracy A = n_xb/|b| and recall R = n_xb/g(x), blended
    as f = level*A + (1-level)*R. The total is the g(x)-weighted sum of
    recall-weighted blends: sum_x g(x)/G * sum_b n_xb/g(x) * f(x, b).

    One all-embracing branch scores 1 at level 0; all-singleton branches
    score 1 at level 1.
    """
    if not 0.0 <= level <= 1.0:
        raise ValueError("level must lie in [0, 1]")
    blocks = [list(b) for b in partition]
    if not blocks or any(not b for b in blocks):
        raise ValueError("empty branch in partition")
    freq: dict[str, int] = {}
    for block in blocks:
        for terms in block:
            for t in terms:
                freq[t] = freq.get(t, 0) + 1
    total = sum(freq.values())
    if total == 0:
        raise ValueError("partition carries no terms")
    score = 0.0
    for x, g in freq.items():
        inner = 0.0
        for block in blocks:
            n = sum(1 for terms in block if x in terms)
            if n == 0:
                continue
            accuracy = n / len(block)
            recall = n / g
            inner += (n / g) * (level * accuracy + (1.0 - level) * recall)
        score += (g / total) * inner
    return score


def initial_continent(graph: KinshipGraph) -> SplitTree:
    """One root branch per weakly connected component at threshold 0."""
    comps = _order_components(
        _components(graph.groups.keys(), graph.links), graph.groups
    )
    nodes = {
        str(i): SplitNode(id=str(i), group_ids=comp, elevation=0.0)
        for i, comp in enumerate(comps)
    }
    return SplitTree(nodes=nodes, roots=sorted(nodes, key=int))


def _local_quality(blocks: Sequence[frozenset[str]], groups: dict[str, Group], level: float) -> float:
    return branch_quality([[groups[g].terms for g in sorted(block)] for block in blocks], level)


def rise(
    graph: KinshipGraph,
    level: float,
    mode: str = "adaptive",
    fixed_delta: Optional[float] = None,
    config: Optional[dict] = None,
    keep_trace: bool = False,
) -> Phylomemy:
    """Run the foliation and return the reconstructed phylomemy.

    Adaptive mode raises the branch-local threshold through the distinct
    link weights; at the first weight whose removal actually disconnects
    the branch, the split is committed iff the branch-restricted quality
    strictly improves (tolerance 1e-12), else the branch freezes at its
    current elevation. The tentative threshold sits half-way to the next
    distinct weight so equal-weight links are cut simultaneously.

    Fixed mode cuts every link below fixed_delta in one global sweep.
    """
    if not 0.0 <= level <= 1.0:
        raise ValueError("level must lie in [0, 1]")
    groups = graph.groups
    tree = initial_continent(graph)
    ghost_links: list[GhostLink] = []
    dropped: list[KinshipLink] = []
    committed: list[float] = []
    trace: list[dict] = []

    def links_within(gids: frozenset[str], links: Sequence[KinshipLink]) -> list[KinshipLink]:
        return [l for l in links if l.child in gids and l.parent in gids]

    def commit_split(
        node: SplitNode, delta: float, comps: list[frozenset[str]], branch_links: list[KinshipLink]
    ) -> list[tuple[SplitNode, list[KinshipLink]]]:
        node.split_level = delta
        committed.append(delta)
        removed = [l for l in branch_links if l.weight < delta]
        kept = [l for l in branch_links if l.weight >= delta]
        member_of = {g: i for i, c in enumerate(comps) for g in c}
        for l in removed:
            if member_of[l.child] != member_of[l.parent]:
                ghost_links.append(
                    GhostLink(child=l.child, parent=l.parent, weight=l.weight, cut_level=delta)
                )
            else:
                dropped.append(l)
        children: list[tuple[SplitNode, list[KinshipLink]]] = []
        for k, comp in enumerate(comps):
            child = SplitNode(id=f"{node.id}.{k}", group_ids=comp, elevation=delta)
            tree.nodes[child.id] = child
            node.children.append(child.id)
            children.append((child, links_within(comp, kept)))
        return children

    if mode == "fixed":
        if fixed_delta is None or not 0.0 <= fixed_delta <= 1.0:
            raise ValueError("fixed mode requires fixed_delta in [0, 1]")
        surviving: list[KinshipLink] = []
        for root_id in list(tree.roots):
            node = tree.nodes[root_id]
            branch_links = links_within(node.group_ids, graph.links)
            kept = [l for l in branch_links if l.weight >= fixed_delta]
            comps = _order_components(_components(node.group_ids, kept), groups)
            if len(comps) == 1:
                node.elevation = fixed_delta
                surviving.extend(branch_links)
                continue
            committed_children = commit_split(node, fixed_delta, comps, branch_links)
            for child, child_links in committed_children:
                surviving.extend(child_links)
        surviving.sort(key=lambda l: (l.child, l.parent))
        return Phylomemy(
            groups=groups, links=surviving, ghost_links=ghost_links, tree=tree,
            level=level, config=dict(config or {}), committed_levels=committed,
            trace=trace, dropped_links=dropped,
        )

    if mode != "adaptive":
        raise ValueError(f"unknown sea-level mode {mode!r}")

    surviving = []
    stack: list[tuple[SplitNode, list[KinshipLink]]] = [
        (tree.nodes[r], links_within(tree.nodes[r].group_ids, graph.links)) for r in tree.roots
    ]
    while stack:
        node, branch_links = stack.pop()
        weights = sorted({l.weight for l in branch_links})
        children: Optional[list[tuple[SplitNode, list[KinshipLink]]]] = None
        for i, w in enumerate(weights):
            nxt = weights[i + 1] if i + 1 < len(weights) else None
            eps = (nxt - w) / 2.0 if nxt is not None else TOP_EPSILON
            delta = w + eps
            if delta > 1.0:
                break  # cutting weight-1 links would require a threshold above 1
            kept = [l for l in branch_links if l.weight >= delta]
            comps = _order_components(_components(node.group_ids, kept), groups)
            if len(comps) == 1:
                continue  # non-splitting event: the sea keeps rising
            f_before = _local_quality([node.group_ids], groups, level)
            f_after = _local_quality(comps, groups, level)
            accepted = f_after > f_before + QUALITY_TOLERANCE
            if keep_trace:
                trace.append(
                    {
                        "branch": node.id,
                        "delta": delta,
                        "quality_before": f_before,
                        "quality_after": f_after,
                        "committed": accepted,
                    }
                )
            if accepted:
                children = commit_split(node, delta, comps, branch_links)
            break  # a rejected split freezes the branch at its current elevation
        if children is None:
            surviving.extend(branch_links)
        else:
            stack.extend(reversed(children))

    surviving.sort(key=lambda l: (l.child, l.parent))
    return Phylomemy(
        groups=groups, links=surviving, ghost_links=ghost_links, tree=tree,
        level=level, config=dict(config or {}), committed_levels=committed,
        trace=trace, dropped_links=dropped,
    )


def foliation_slice(phylomemy: Phylomemy, delta: float) -> list[frozenset[str]]:
    """Partition of groups at any historical threshold: components of the
    kinship graph keeping all (surviving plus ghost) links of weight >= delta."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    links = [l for l in phylomemy.links if l.weight >= delta]
    links += [
        KinshipLink(child=g.child, parent=g.parent, weight=g.weight)
        for g in phylomemy.ghost_links
        if g.weight >= delta
    ]
    return _components(phylomemy.groups.keys(), links)
