import random
import time

import pytest

from phylomemy.graphs import Group
from phylomemy.matching import (
    brute_force_oracle,
    build_kinship_graph,
    enumerate_candidates,
    jaccard,
    match_group,
)
from synthgen import random_groups


def _group(gid, period, terms):
    return Group(id=gid, period_id=f"T{period:03d}", period_index=period,
                 terms=frozenset(terms), support=1)


def _by_period(groups):
    out = {}
    for g in groups:
        out.setdefault(g.period_index, []).append(g)
    return out


class TestJaccard:
    def test_identity(self):
        assert jaccard(frozenset("abc"), frozenset("abc")) == 1.0

    def test_disjoint(self):
        assert jaccard(frozenset("ab"), frozenset("cd")) == 0.0

    def test_half(self):
        assert jaccard(frozenset("abc"), frozenset("bcd")) == 0.5

    def test_both_empty(self):
        with pytest.raises(ValueError):
            jaccard(frozenset(), frozenset())


class TestEnumerateCandidates:
    def test_two_upstream_groups(self):
        child = _group("gc", 1, "ab")
        ups = [_group("g0", 0, "a"), _group("g1", 0, "b")]
        cands = enumerate_candidates(child, _by_period(ups), "upstream", 1, 2)
        assert len(cands) == 3  # 2 singles + 1 pair

    def test_no_upstream_groups(self):
        child = _group("gc", 0, "ab")
        assert enumerate_candidates(child, {}, "upstream", 1, 2) == []

    def test_four_groups_across_two_periods(self):
        child = _group("gc", 2, "ab")
        pool = [_group(f"g{i}", i % 2, "a") for i in range(4)]
        cands = enumerate_candidates(child, _by_period(pool), "upstream", 2, 3)
        assert len(cands) == 4 + 6


class TestMatchGroup:
    def test_best_single_wins(self):
        child = _group("gc", 1, "abc")
        ups = [_group("g0", 0, "ab"), _group("g1", 0, "ad")]
        # singles: {a,b} -> 2/3, {a,d} -> 1/4; pair union {a,b,d} -> 2/4
        links, w = match_group(child, _by_period(ups), "upstream", 1, 2)
        assert len(links) == 1
        assert links[0].parent == "g0"
        assert links[0].weight == pytest.approx(2 / 3)

    def test_no_shared_terms_no_links(self):
        child = _group("gc", 1, "ab")
        ups = [_group("g0", 0, "xy")]
        links, _ = match_group(child, _by_period(ups), "upstream", 1, 2)
        assert links == []

    def test_winning_pair_emits_two_links(self):
        child = _group("gc", 1, "abcd")
        ups = [_group("g0", 0, "ab"), _group("g1", 0, "cd")]
        links, _ = match_group(child, _by_period(ups), "upstream", 1, 2)
        assert len(links) == 2
        assert {l.parent for l in links} == {"g0", "g1"}
        assert all(l.weight == 1.0 for l in links)

    def test_window_extension_over_empty_period(self):
        child = _group("gc", 3, "ab")
        ups = [_group("g0", 0, "ab")]
        links, w_eff = match_group(child, _by_period(ups), "upstream", 1, 4)
        assert len(links) == 1
        assert w_eff == 3

    def test_all_above_floor_keeps_every_candidate(self):
        child = _group("gc", 1, "ab")
        ups = [_group("g0", 0, "a"), _group("g1", 0, "b")]
        links, _ = match_group(child, _by_period(ups), "upstream", 1, 2,
                               all_above_floor=True)
        assert {l.parent for l in links} == {"g0", "g1"}


class TestBuildKinshipGraph:
    def test_identical_chain(self):
        groups = [_group(f"g{i}", i, "abc") for i in range(4)]
        graph = build_kinship_graph(groups, window=1, n_periods=4)
        weights = graph.link_weights()
        assert set(weights) == {("g1", "g0"), ("g2", "g1"), ("g3", "g2")}
        assert all(w == 1.0 for w in weights.values())

    def test_disjoint_groups_no_links(self):
        groups = [_group("g0", 0, "ab"), _group("g1", 1, "cd"), _group("g2", 2, "ef")]
        graph = build_kinship_graph(groups, window=1, n_periods=3)
        assert graph.links == []

    def test_dag_property(self):
        rng = random.Random(41)
        groups = random_groups(rng, 25, 5)
        graph = build_kinship_graph(groups, window=2, n_periods=5)
        for l in graph.links:
            assert graph.groups[l.parent].period_index < graph.groups[l.child].period_index
            assert 0.0 < l.weight <= 1.0

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(99)
        for _ in range(10):
            n = rng.randint(2, 30)
            periods = rng.randint(2, 6)
            groups = random_groups(rng, n, periods)
            fast = build_kinship_graph(groups, window=1, n_periods=periods)
            slow = brute_force_oracle(groups, window=1, n_periods=periods)
            assert fast.link_weights() == slow.link_weights()
            assert fast.extensions == slow.extensions

    def test_oracle_cap(self):
        rng = random.Random(1)
        groups = random_groups(rng, 51, 4)
        with pytest.raises(ValueError, match="cap"):
            brute_force_oracle(groups, window=1, n_periods=4)

    def test_oracle_degenerate_cases(self):
        assert brute_force_oracle([], window=1, n_periods=2).links == []
        one_period = [_group("g0", 0, "ab"), _group("g1", 0, "ab")]
        assert brute_force_oracle(one_period, window=1, n_periods=1).links == []

    def test_deterministic_across_parallel_schedules(self):
        rng = random.Random(7)
        groups = random_groups(rng, 40, 6)
        serial = build_kinship_graph(groups, window=1, n_periods=6, jobs=1)
        parallel = build_kinship_graph(groups, window=1, n_periods=6, jobs=4)
        assert serial.link_weights() == parallel.link_weights()
        assert serial.extensions == parallel.extensions
