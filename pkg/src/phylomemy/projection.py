"""Projection of a reconstructed phylomemy into its pre-spatialized export.

Extract, sort, filter and label the branches; compute per-term dynamics
(emergence, decline, corpus frequencies); lay out the synchronic seabed
peaks and the diachronic kinship coordinates; write a canonical JSON file
the viewer can render without recomputing any semantics.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .corpus import DocumentSet, PeriodSet
from .matching import KinshipLink
from .sealevel import Branch, Phylomemy

__all__ = [
    "TermDynamics",
    "extract_network",
    "filter_minor_branches",
    "compute_term_dynamics",
    "label_branch",
    "seabed_coordinates",
    "kinship_layout",
    "count_crossings",
    "build_projection",
    "export",
    "load_export",
]

GROUP_COUNT_WARNING = 1000
GLYPH_DIAMETER = 0.01  # normalized minimum same-row spacing
BARYCENTER_ROUNDS = 4


@dataclass
class TermDynamics:
    term: str
    first_period: str
    last_period: str
    emerging_groups: frozenset[str]
    decreasing_groups: frozenset[str]
    freq_by_period: dict[str, int]
    freq_last: int
    cross_branch: bool
    group_count: int
    emergence_x: Optional[float] = None  # barycenter of emergence groups, set by layout
    emergence_period_index: int = 0


def extract_network(phylomemy: Phylomemy) -> list[Branch]:
    """Leaf branches with final elevations, in drift (DFS) order."""
    return phylomemy.leaf_branches()


def filter_minor_branches(
    branches: Sequence[Branch], phylomemy: Phylomemy, min_periods: int
) -> tuple[list[Branch], list[dict]]:
    """Keep branches spanning at least min_periods distinct periods.

    Removed branches are reported (never silently dropped); raises when
    nothing survives, advising a smaller floor.
    """
    if min_periods < 1:
        raise ValueError("min_periods must be >= 1")
    kept: list[Branch] = []
    removed: list[dict] = []
    for b in branches:
        span = len({phylomemy.groups[g].period_index for g in b.group_ids})
        if span >= min_periods:
            kept.append(b)
        else:
            removed.append({"id": b.id, "span": span, "group_count": len(b.group_ids)})
    if not kept:
        raise ValueError(
            f"all {len(branches)} branches span fewer than {min_periods} periods; "
            "lower min_periods"
        )
    return kept, removed


def compute_term_dynamics(
    branches: Sequence[Branch],
    phylomemy: Phylomemy,
    periods: PeriodSet,
    docs: Optional[DocumentSet] = None,
) -> dict[str, TermDynamics]:
    """Per-term table over the post-filter phylomemy.

    Emergence/decline come from the groups (global first/last period of
    use; a one-period term is both). Per-period frequencies count corpus
    documents when a corpus is supplied, groups otherwise; freq_last reads
    the corpus's most recent period.
    """
    branch_of = {g: b.id for b in branches for g in b.group_ids}
    period_ids = [p.id for p in periods.periods]

    usage: dict[str, list[str]] = {}  # term -> group ids (post-filter)
    for b in branches:
        for gid in sorted(b.group_ids):
            for t in phylomemy.groups[gid].terms:
                usage.setdefault(t, []).append(gid)

    counts: dict[str, dict[str, int]] = {t: {pid: 0 for pid in period_ids} for t in usage}
    if docs is not None:
        by_id = docs.by_id()
        for period in periods.periods:
            for doc_id in period.document_ids:
                for t in by_id[doc_id].terms:
                    if t in counts:
                        counts[t][period.id] += 1
    else:
        for t, gids in usage.items():
            for gid in gids:
                counts[t][phylomemy.groups[gid].period_id] += 1

    table: dict[str, TermDynamics] = {}
    last_pid = period_ids[-1]
    for t, gids in usage.items():
        indices = [phylomemy.groups[g].period_index for g in gids]
        first_idx, last_idx = min(indices), max(indices)
        emerging = frozenset(g for g in gids if phylomemy.groups[g].period_index == first_idx)
        decreasing = frozenset(g for g in gids if phylomemy.groups[g].period_index == last_idx)
        table[t] = TermDynamics(
            term=t,
            first_period=period_ids[first_idx],
            last_period=period_ids[last_idx],
            emerging_groups=emerging,
            decreasing_groups=decreasing,
            freq_by_period=counts[t],
            freq_last=counts[t][last_pid],
            cross_branch=len({branch_of[g] for g in gids}) >= 2,
            group_count=len(gids),
            emergence_period_index=first_idx,
        )
    return table


def _branch_term_counts(branch: Branch, phylomemy: Phylomemy) -> dict[str, int]:
    tf: dict[str, int] = {}
    for gid in branch.group_ids:
        for t in phylomemy.groups[gid].terms:
            tf[t] = tf.get(t, 0) + 1
    return tf


def label_branch(
    branch: Branch,
    phylomemy: Phylomemy,
    dynamics: dict[str, TermDynamics],
    all_branches: Sequence[Branch],
) -> tuple[list[str], bool]:
    """Two-term label: most frequently emerging term, then the top
    branch-scoped tf-idf term (natural log, branch-count idf).

    Falls back to the two best tf-idf terms when nothing emerges here.
    Returns (label, flagged) where flagged marks a single-term vocabulary.
    """
    tf = _branch_term_counts(branch, phylomemy)
    if not tf:
        raise ValueError(f"branch {branch.id} is empty")

    n_branches = len(all_branches)
    containing: dict[str, int] = {}
    for b in all_branches:
        for t in {t for g in b.group_ids for t in phylomemy.groups[g].terms}:
            containing[t] = containing.get(t, 0) + 1

    def tfidf(t: str) -> float:
        return tf[t] * math.log(n_branches / containing[t])

    emergence_events = {
        t: len(dynamics[t].emerging_groups & branch.group_ids)
        for t in tf
        if t in dynamics and dynamics[t].emerging_groups & branch.group_ids
    }
    ranked_tfidf = sorted(tf, key=lambda t: (-tfidf(t), -tf[t], t))

    if emergence_events:
        first = min(emergence_events, key=lambda t: (-emergence_events[t], -tf[t], t))
        rest = [t for t in ranked_tfidf if t != first]
        label = [first, rest[0]] if rest else [first]
    else:
        label = ranked_tfidf[:2]
    return label, len(label) < 2


def seabed_coordinates(phylomemy: Phylomemy, leaves: Sequence[Branch]) -> dict[str, tuple[float, float]]:
    """Peak coordinates: y is the final elevation; x spreads the leaves in
    drift order by cumulative similarity gaps (1 - split level of the
    latest common split), normalized into [0, 1]."""
    if not leaves:
        raise ValueError("no leaves to place")
    if len(leaves) == 1:
        return {leaves[0].id: (0.5, leaves[0].elevation)}
    gaps = [
        1.0 - phylomemy.tree.lca_split_level(leaves[i - 1].id, leaves[i].id)
        for i in range(1, len(leaves))
    ]
    total = sum(gaps)
    peaks: dict[str, tuple[float, float]] = {}
    cum = 0.0
    for i, leaf in enumerate(leaves):
        if i > 0:
            cum += gaps[i - 1]
        x = cum / total if total > 0 else i / (len(leaves) - 1)
        peaks[leaf.id] = (x, leaf.elevation)
    return peaks


def _segments_cross(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> bool:
    """Proper intersection of two open segments (shared endpoints excluded)."""
    (ax1, ay1, ax2, ay2), (bx1, by1, bx2, by2) = a, b
    if (ax1, ay1) in ((bx1, by1), (bx2, by2)) or (ax2, ay2) in ((bx1, by1), (bx2, by2)):
        return False

    def orient(px, py, qx, qy, rx, ry) -> float:
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    d1 = orient(ax1, ay1, ax2, ay2, bx1, by1)
    d2 = orient(ax1, ay1, ax2, ay2, bx2, by2)
    d3 = orient(bx1, by1, bx2, by2, ax1, ay1)
    d4 = orient(bx1, by1, bx2, by2, ax2, ay2)
    return d1 * d2 < 0 and d3 * d4 < 0


def count_crossings(
    links: Sequence[KinshipLink], coords: dict[str, tuple[float, float]]
) -> int:
    total = 0
    segs = [
        (*coords[l.parent], *coords[l.child]) for l in links
        if l.parent in coords and l.child in coords
    ]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if _segments_cross(segs[i], segs[j]):
                total += 1
    return total


def _band_layout(
    branch: Branch,
    phylomemy: Phylomemy,
    links: Sequence[KinshipLink],
    band: tuple[float, float],
    glyph_diameter: float,
) -> dict[str, tuple[float, float]]:
    """Coordinates of one branch's groups inside its horizontal band.

    Rows are periods (y = period index, earliest at top); per-row order is
    refined by median-of-neighbors sweeps, kept only if it does not add
    crossings; x respects the glyph-diameter separation."""
    left, width = band
    rows: dict[int, list[str]] = {}
    for gid in sorted(branch.group_ids):
        rows.setdefault(phylomemy.groups[gid].period_index, []).append(gid)
    row_keys = sorted(rows)
    branch_links = [l for l in links if l.child in branch.group_ids and l.parent in branch.group_ids]
    parents_of: dict[str, list[str]] = {}
    children_of: dict[str, list[str]] = {}
    for l in branch_links:
        parents_of.setdefault(l.child, []).append(l.parent)
        children_of.setdefault(l.parent, []).append(l.child)

    def positions(order: dict[int, list[str]]) -> dict[str, tuple[float, float]]:
        coords: dict[str, tuple[float, float]] = {}
        for pidx in row_keys:
            row = order[pidx]
            sep = max(width / len(row), glyph_diameter)
            start = left + width / 2.0 - sep * (len(row) - 1) / 2.0
            start = min(max(start, 0.0), 1.0 - sep * (len(row) - 1)) if sep * (len(row) - 1) <= 1 else 0.0
            for j, gid in enumerate(row):
                coords[gid] = (start + j * sep, float(pidx))
        return coords

    initial = {k: list(v) for k, v in rows.items()}
    order = {k: list(v) for k, v in rows.items()}

    def sweep(row_sequence: list[int], neighbor_map: dict[str, list[str]]) -> None:
        coords = positions(order)
        for pidx in row_sequence:
            keys = {}
            for j, gid in enumerate(order[pidx]):
                nbrs = [coords[n][0] for n in neighbor_map.get(gid, ()) if n in coords]
                keys[gid] = statistics.median(nbrs) if nbrs else coords[gid][0]
            order[pidx].sort(key=lambda g: (keys[g], g))
            coords = positions(order)

    for _ in range(BARYCENTER_ROUNDS):
        sweep(row_keys, parents_of)  # down: settle each row under its parents
        sweep(list(reversed(row_keys)), children_of)  # up

    refined_coords = positions(order)
    initial_coords = positions(initial)
    if count_crossings(branch_links, refined_coords) <= count_crossings(branch_links, initial_coords):
        return refined_coords
    return initial_coords


def kinship_layout(
    leaves: Sequence[Branch],
    phylomemy: Phylomemy,
    peaks: dict[str, tuple[float, float]],
    glyph_diameter: float = GLYPH_DIAMETER,
) -> dict[str, tuple[float, float]]:
    """Group coordinates: each branch owns a band in seabed order, band
    widths proportional to group counts with a floor."""
    n = len(leaves)
    floor = 0.5 / n
    raw = [max(len(b.group_ids), 1) for b in leaves]
    total = sum(raw)
    widths = [max(r / total, floor) for r in raw]
    scale = sum(widths)
    widths = [w / scale for w in widths]

    coords: dict[str, tuple[float, float]] = {}
    edge = 0.0
    for leaf, w in zip(leaves, widths):
        coords.update(_band_layout(leaf, phylomemy, phylomemy.links, (edge, w), glyph_diameter))
        edge += w
    return coords


def _r6(x: float) -> float:
    return round(float(x), 6)


def build_projection(
    phylomemy: Phylomemy,
    periods: PeriodSet,
    docs: Optional[DocumentSet] = None,
    min_periods: int = 2,
    config: Optional[dict] = None,
) -> dict:
    """Assemble the full pre-spatialized projection as a plain dict."""
    leaves = extract_network(phylomemy)
    kept, removed = filter_minor_branches(leaves, phylomemy, min_periods)
    kept_ids = {b.id for b in kept}
    kept_groups = {g for b in kept for g in b.group_ids}

    ghost_links = [
        g for g in phylomemy.ghost_links if g.child in kept_groups and g.parent in kept_groups
    ]
    links = [l for l in phylomemy.links if l.child in kept_groups and l.parent in kept_groups]

    dynamics = compute_term_dynamics(kept, phylomemy, periods, docs)
    peaks = seabed_coordinates(phylomemy, kept)
    coords = kinship_layout(kept, phylomemy, peaks)

    for dyn in dynamics.values():
        xs = [coords[g][0] for g in sorted(dyn.emerging_groups)]
        dyn.emergence_x = sum(xs) / len(xs)

    period_ids = [p.id for p in periods.periods]
    warnings: list[str] = []
    group_warning = len(kept_groups) > GROUP_COUNT_WARNING
    if group_warning:
        warnings.append(
            f"projection holds {len(kept_groups)} groups (> {GROUP_COUNT_WARNING}); "
            "interactive rendering may struggle"
        )

    branches_out = []
    label_flags = []
    for b in kept:
        label, flagged = label_branch(b, phylomemy, dynamics, kept)
        if flagged:
            label_flags.append(b.id)
        indices = sorted({phylomemy.groups[g].period_index for g in b.group_ids})
        x, y = peaks[b.id]
        branches_out.append(
            {
                "id": b.id,
                "label": label,
                "peak": {"x": _r6(x), "y": _r6(y)},
                "elevation": _r6(b.elevation),
                "span": [period_ids[indices[0]], period_ids[indices[-1]]],
            }
        )
    if label_flags:
        warnings.append("single-term label on branches: " + ", ".join(label_flags))

    groups_out = []
    branch_of = {g: b.id for b in kept for g in b.group_ids}
    for gid in sorted(kept_groups):
        group = phylomemy.groups[gid]
        x, y = coords[gid]
        groups_out.append(
            {
                "id": gid,
                "branch": branch_of[gid],
                "period": group.period_id,
                "x": _r6(x),
                "y": _r6(y),
                "terms": [
                    {
                        "id": t,
                        "emerging": gid in dynamics[t].emerging_groups,
                        "decreasing": gid in dynamics[t].decreasing_groups,
                    }
                    for t in sorted(group.terms)
                ],
            }
        )

    terms_out = []
    for t in sorted(dynamics):
        dyn = dynamics[t]
        terms_out.append(
            {
                "id": t,
                "first_period": dyn.first_period,
                "last_period": dyn.last_period,
                "emerging_groups": sorted(dyn.emerging_groups),
                "decreasing_groups": sorted(dyn.decreasing_groups),
                "freq_by_period": {k: v for k, v in dyn.freq_by_period.items() if v},
                "freq_last": dyn.freq_last,
                "cross_branch": dyn.cross_branch,
                "group_count": dyn.group_count,
                "emergence": {"x": _r6(dyn.emergence_x), "period": dyn.first_period},
            }
        )

    search_index = {}
    for t, dyn in dynamics.items():
        search_index[t] = sorted(
            g for b in kept for g in b.group_ids if t in phylomemy.groups[g].terms
        )

    return {
        "metadata": {
            "level": _r6(phylomemy.level),
            "config": dict(config or phylomemy.config),
            "min_periods": min_periods,
            "period_count": len(period_ids),
            "group_count": len(kept_groups),
            "branch_count": len(kept),
            "link_count": len(links),
            "ghost_link_count": len(ghost_links),
            "removed_branches": removed,
            "committed_levels": [_r6(d) for d in phylomemy.committed_levels],
            "group_warning": group_warning,
            "warnings": warnings,
        },
        "periods": [
            {"id": p.id, "start": p.start.isoformat(), "end": p.end.isoformat()}
            for p in periods.periods
        ],
        "branches": branches_out,
        "groups": groups_out,
        "links": [
            {"parent": l.parent, "child": l.child, "weight": _r6(l.weight)} for l in links
        ],
        "ghost_links": [
            {
                "parent": g.parent,
                "child": g.child,
                "weight": _r6(g.weight),
                "cut_level": _r6(g.cut_level),
            }
            for g in ghost_links
        ],
        "terms": terms_out,
        "search_index": search_index,
    }


def _canonical_json(value, indent: int = 0) -> str:
    """Canonical serialization: sorted keys, floats at 6 decimal places."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {_canonical_json(v, indent + 1)}"
            for k, v in sorted(value.items())
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_canonical_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    if value is None:
        return "null"
    return json.dumps(value, ensure_ascii=False)


def export(projection: dict, path: str) -> str:
    """Write the projection; identical inputs yield byte-identical files."""
    text = _canonical_json(projection) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def load_export(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
