"""Inter-temporal matching: kinship links between groups across periods.

Operator 4. Every group looks upstream and downstream for the best single
or pair of candidate groups under a Jaccard similarity, with automatic
window extension across empty stretches. The resulting graph is a DAG by
construction and the raw input of the sea-level foliation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .graphs import Group

__all__ = [
    "KinshipLink",
    "KinshipGraph",
    "Candidate",
    "jaccard",
    "enumerate_candidates",
    "match_group",
    "build_kinship_graph",
    "brute_force_oracle",
]


@dataclass(frozen=True)
class KinshipLink:
    child: str  # group in the later period
    parent: str  # group in the strictly earlier period
    weight: float  # Jaccard similarity in (0, 1]


@dataclass
class KinshipGraph:
    groups: dict[str, Group]
    links: list[KinshipLink]
    window: int
    # (group id, direction) -> effective window actually used, when extended
    extensions: dict[tuple[str, str], int] = field(default_factory=dict)

    def link_weights(self) -> dict[tuple[str, str], float]:
        return {(l.child, l.parent): l.weight for l in self.links}


@dataclass(frozen=True)
class Candidate:
    members: tuple[Group, ...]  # one group or an unordered pair
    terms: frozenset[str]  # union of member term sets


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        raise ValueError("jaccard of two empty sets")
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _window_periods(period_index: int, direction: str, window: int, n_periods: int) -> range:
    if direction == "upstream":
        return range(max(0, period_index - window), period_index)
    if direction == "downstream":
        return range(period_index + 1, min(n_periods - 1, period_index + window) + 1)
    raise ValueError(f"unknown direction {direction!r}")


def enumerate_candidates(
    group: Group,
    groups_by_period: dict[int, list[Group]],
    direction: str,
    window: int,
    n_periods: int,
) -> list[Candidate]:
    """All singles plus all unordered pairs drawn from the window's periods."""
    pool: list[Group] = []
    for idx in _window_periods(group.period_index, direction, window, n_periods):
        pool.extend(groups_by_period.get(idx, ()))
    pool.sort(key=lambda g: g.id)
    singles = [Candidate((g,), g.terms) for g in pool]
    pairs = [Candidate((a, b), a.terms | b.terms) for a, b in combinations(pool, 2)]
    return singles + pairs


def _candidate_key(group: Group, cand: Candidate, delta: float) -> tuple:
    """Ranking key: best Delta, then smaller period gap, larger term
    overlap, lexicographic member ids."""
    gap = min(abs(group.period_index - m.period_index) for m in cand.members)
    overlap = len(group.terms & cand.terms)
    ids = tuple(sorted(m.id for m in cand.members))
    return (-delta, gap, -overlap, ids)


def _links_for(group: Group, cand: Candidate, delta: float, direction: str) -> list[KinshipLink]:
    links = []
    for member in cand.members:
        if direction == "upstream":
            links.append(KinshipLink(child=group.id, parent=member.id, weight=delta))
        else:
            links.append(KinshipLink(child=member.id, parent=group.id, weight=delta))
    return links


def match_group(
    group: Group,
    groups_by_period: dict[int, list[Group]],
    direction: str,
    window: int,
    n_periods: int,
    floor: float = 0.0,
    all_above_floor: bool = False,
) -> tuple[list[KinshipLink], int]:
    """Best-candidate links of one group in one direction.

    Only candidates sharing at least one term can score above a zero floor,
    and a pair with a disjoint member strictly lowers the Jaccard score of
    its other member alone, unless that member's terms contain it entirely
    (the union is unchanged and the pair can still win the period-gap
    tie-break). Enumeration is restricted accordingly. When nothing clears
    the floor, the window grows one period at a time up to the corpus
    bound. Returns (links, effective window used).
    """
    w_eff = window
    while True:
        span = _window_periods(group.period_index, direction, w_eff, n_periods)
        pool = [g for idx in span for g in groups_by_period.get(idx, ())]
        overlapping = sorted((g for g in pool if g.terms & group.terms), key=lambda g: g.id)
        disjoint = sorted((g for g in pool if not (g.terms & group.terms)), key=lambda g: g.id)
        candidates = [Candidate((g,), g.terms) for g in overlapping]
        candidates += [
            Candidate((a, b), a.terms | b.terms) for a, b in combinations(overlapping, 2)
        ]
        candidates += [
            Candidate((a, b), a.terms)
            for a in overlapping
            for b in disjoint
            if b.terms <= a.terms
        ]
        scored = []
        for cand in candidates:
            delta = jaccard(group.terms, cand.terms)
            if delta > floor:
                scored.append((_candidate_key(group, cand, delta), cand, delta))
        if scored:
            scored.sort(key=lambda e: e[0])
            if all_above_floor:
                links = [
                    l for _, cand, delta in scored for l in _links_for(group, cand, delta, direction)
                ]
            else:
                _, cand, delta = scored[0]
                links = _links_for(group, cand, delta, direction)
            return links, w_eff
        if direction == "upstream":
            exhausted = group.period_index - w_eff <= 0
        else:
            exhausted = group.period_index + w_eff >= n_periods - 1
        if exhausted:
            return [], w_eff
        w_eff += 1


def _merge_links(per_group: Sequence[tuple[Group, str, list[KinshipLink], int]],
                 window: int) -> tuple[list[KinshipLink], dict[tuple[str, str], int]]:
    best: dict[tuple[str, str], float] = {}
    extensions: dict[tuple[str, str], int] = {}
    for group, direction, links, w_eff in per_group:
        if w_eff != window:
            extensions[(group.id, direction)] = w_eff
        for l in links:
            key = (l.child, l.parent)
            if key not in best or l.weight > best[key]:
                best[key] = l.weight
    merged = [KinshipLink(child=c, parent=p, weight=w) for (c, p), w in best.items()]
    merged.sort(key=lambda l: (l.child, l.parent))
    return merged, extensions


def build_kinship_graph(
    groups: Sequence[Group],
    window: int,
    n_periods: int,
    floor: float = 0.0,
    all_above_floor: bool = False,
    jobs: int = 1,
) -> KinshipGraph:
    """Union of per-group matches in both directions, deduplicated on
    (child, parent) keeping the max weight. Deterministic under any
    parallel schedule (results are reduced in submission order)."""
    by_period: dict[int, list[Group]] = {}
    for g in groups:
        by_period.setdefault(g.period_index, []).append(g)
    for lst in by_period.values():
        lst.sort(key=lambda g: g.id)

    tasks = [(g, d) for g in sorted(groups, key=lambda g: g.id) for d in ("upstream", "downstream")]

    def run(task: tuple[Group, str]) -> tuple[Group, str, list[KinshipLink], int]:
        group, direction = task
        links, w_eff = match_group(
            group, by_period, direction, window, n_periods,
            floor=floor, all_above_floor=all_above_floor,
        )
        return group, direction, links, w_eff

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    links, extensions = _merge_links(results, window)
    return KinshipGraph(
        groups={g.id: g for g in groups}, links=links, window=window, extensions=extensions
    )


def brute_force_oracle(
    groups: Sequence[Group],
    window: int,
    n_periods: int,
    floor: float = 0.0,
    cap: int = 50,
) -> KinshipGraph:
    """Unpruned exhaustive reference with the same contract; tests only."""
    if len(groups) > cap:
        raise ValueError(f"oracle cap exceeded: {len(groups)} groups > {cap}")
    by_period: dict[int, list[Group]] = {}
    for g in groups:
        by_period.setdefault(g.period_index, []).append(g)

    per_group = []
    for group in sorted(groups, key=lambda g: g.id):
        for direction in ("upstream", "downstream"):
            w_eff = window
            chosen: Optional[tuple[Candidate, float]] = None
            while True:
                candidates = enumerate_candidates(group, by_period, direction, w_eff, n_periods)
                ranked = sorted(
                    (
                        (_candidate_key(group, c, jaccard(group.terms, c.terms)), c,
                         jaccard(group.terms, c.terms))
                        for c in candidates
                        if jaccard(group.terms, c.terms) > floor
                    ),
                    key=lambda e: e[0],
                )
                if ranked:
                    chosen = (ranked[0][1], ranked[0][2])
                    break
                if direction == "upstream":
                    exhausted = group.period_index - w_eff <= 0
                else:
                    exhausted = group.period_index + w_eff >= n_periods - 1
                if exhausted:
                    break
                w_eff += 1
            links = _links_for(group, chosen[0], chosen[1], direction) if chosen else []
            per_group.append((group, direction, links, w_eff))

    links, extensions = _merge_links(per_group, window)
    return KinshipGraph(
        groups={g.id: g for g in groups}, links=links, window=window, extensions=extensions
    )
