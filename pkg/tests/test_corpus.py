import datetime as dt
import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from phylomemy.corpus import (
    CorpusError,
    Document,
    DocumentSet,
    cooccurrence,
    index_documents,
    parse_corpus,
    parse_rootlist,
    periodize,
    tokenize,
)


def _docset(entries):
    return DocumentSet(
        documents=[
            Document(id=i, date=d, text=t, terms=frozenset(terms))
            for i, d, t, terms in entries
        ]
    )


class TestParseCorpus:
    def test_well_formed_record(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,date,title,abstract\nd1,2001-05-02,x,y\n")
        docs = parse_corpus(str(path), "csv")
        assert len(docs) == 1
        doc = docs.documents[0]
        assert doc.id == "d1"
        assert doc.date == dt.date(2001, 5, 2)
        assert doc.text == "x y"

    def test_empty_file_is_an_error(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,date,title,abstract\n")
        with pytest.raises(CorpusError, match="zero valid records"):
            parse_corpus(str(path), "csv")

    def test_duplicate_id_is_an_error(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("id,date,title,abstract\nd1,2001-05-02,x,y\nd1,2001-05-03,z,w\n")
        with pytest.raises(CorpusError, match="duplicate"):
            parse_corpus(str(path), "csv")

    def test_malformed_records_are_collected_not_dropped(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text(
            "id,date,title,abstract\n"
            "d1,2001-05-02,x,y\n"
            ",2001-05-02,x,y\n"
            "d2,not-a-date,x,y\n"
            "d3,2001-05-02,,\n"
        )
        docs = parse_corpus(str(path), "csv")
        assert len(docs) == 1
        assert len(docs.rejects) == 3

    def test_jsonl(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"id": "d1", "date": "2001-05-02", "title": "x", "abstract": "y"}\n'
            "not json\n"
        )
        docs = parse_corpus(str(path), "jsonl")
        assert len(docs) == 1
        assert docs.rejects[0][1].endswith("invalid json")


class TestParseRootlist:
    def test_plain_roots(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("immune response\nvaccination\n")
        roots = parse_rootlist(str(path))
        assert len(roots) == 2
        assert all(not r[2] for r in roots.roots)

    def test_variants(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("co-word|coword|co word\n")
        roots = parse_rootlist(str(path))
        assert len(roots) == 1
        assert roots.roots[0][2] == ("coword", "co word")

    def test_duplicate_canonical(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("alpha\nAlpha\n")
        with pytest.raises(CorpusError, match="duplicate canonical"):
            parse_rootlist(str(path))

    def test_variant_claimed_twice(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("alpha|shared\nbeta|shared\n")
        with pytest.raises(CorpusError, match="claimed"):
            parse_rootlist(str(path))


def _oracle_index(text, roots):
    """Naive window scanner with the same leftmost-longest-consume rule,
    written without the first-token index."""
    tokens = tokenize(text)
    patterns = sorted(
        ((tuple(tokenize(form)), root_id)
         for root_id, canonical, variants in roots.roots
         for form in (canonical, *variants)),
        key=lambda p: (-len(p[0]), p[0]),
    )
    taken = set()
    hits = set()
    for pos in range(len(tokens)):
        if pos in taken:
            continue
        for pat, rid in patterns:
            window = list(range(pos, pos + len(pat)))
            if window[-1] >= len(tokens):
                continue
            if any(i in taken for i in window):
                continue
            if [tokens[i] for i in window] == list(pat):
                taken.update(window)
                hits.add(rid)
                break
    return frozenset(hits)


class TestIndexing:
    def test_whole_token_match(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("immune response\n")
        roots = parse_rootlist(str(path))
        docs = _docset([("d1", dt.date(2001, 1, 1), "the immune response of mice", [])])
        out = index_documents(docs, roots)
        assert out.documents[0].terms == frozenset({"immune response"})

    def test_variant_hit(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("co-word|coword\n")
        roots = parse_rootlist(str(path))
        docs = _docset([("d1", dt.date(2001, 1, 1), "coword maps", [])])
        out = index_documents(docs, roots)
        assert out.documents[0].terms == frozenset({"co-word"})

    def test_no_partial_token_match(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("cow\n")
        roots = parse_rootlist(str(path))
        docs = _docset([("d1", dt.date(2001, 1, 1), "coword maps", [])])
        out = index_documents(docs, roots)
        assert out.documents[0].terms == frozenset()

    def test_matches_brute_force_scanner(self, tmp_path):
        rng = random.Random(3)
        words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]
        lines = ["alpha beta", "beta gamma", "gamma", "alpha beta gamma|abg", "delta epsilon"]
        path = tmp_path / "roots.txt"
        path.write_text("\n".join(lines) + "\n")
        roots = parse_rootlist(str(path))
        entries = []
        for i in range(10):
            text = " ".join(rng.choice(words) for _ in range(rng.randint(3, 12)))
            entries.append((f"d{i}", dt.date(2001, 1, 1), text, []))
        docs = index_documents(_docset(entries), roots)
        for doc in docs.documents:
            assert doc.terms == _oracle_index(doc.text, roots)

    def test_idempotent(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("alpha\nbeta gamma\n")
        roots = parse_rootlist(str(path))
        docs = _docset([("d1", dt.date(2001, 1, 1), "alpha beta gamma", [])])
        once = index_documents(docs, roots)
        twice = index_documents(once, roots)
        assert [d.terms for d in once.documents] == [d.terms for d in twice.documents]

    def test_zero_match_documents_are_kept_and_flagged(self, tmp_path):
        path = tmp_path / "roots.txt"
        path.write_text("alpha\n")
        roots = parse_rootlist(str(path))
        docs = index_documents(_docset([("d1", dt.date(2001, 1, 1), "nothing here", [])]), roots)
        assert len(docs) == 1
        assert docs.unmatched_ids() == ["d1"]


class TestPeriodize:
    def test_three_year_periods(self):
        docs = _docset([
            ("d1", dt.date(1980, 5, 1), "x", []),
            ("d2", dt.date(1985, 5, 1), "x", []),
        ])
        periods = periodize(docs, "year", 3, dt.date(1980, 1, 1))
        assert len(periods) == 2
        assert periods.periods[0].start == dt.date(1980, 1, 1)
        assert periods.periods[0].end == dt.date(1983, 1, 1)

    def test_weekly_periods(self):
        docs = _docset([
            ("d1", dt.date(2020, 3, 2), "x", []),
            ("d2", dt.date(2020, 9, 1), "x", []),
        ])
        periods = periodize(docs, "week", 1, dt.date(2020, 3, 2))
        assert len(periods) == 27  # one per deposit week over the span
        for p in periods.periods:
            assert (p.end - p.start).days == 7

    def test_origin_after_earliest_is_an_error(self):
        docs = _docset([("d1", dt.date(1980, 5, 1), "x", [])])
        with pytest.raises(CorpusError, match="origin"):
            periodize(docs, "year", 1, dt.date(1981, 1, 1))

    def test_membership_matches_interval_check(self):
        rng = random.Random(11)
        entries = [
            (f"d{i}", dt.date(2000, 1, 1) + dt.timedelta(days=rng.randrange(3650)), "x", [])
            for i in range(100)
        ]
        docs = _docset(entries)
        periods = periodize(docs, "year", 1, dt.date(2000, 1, 1))
        by_id = docs.by_id()
        seen = []
        for p in periods.periods:
            for doc_id in p.document_ids:
                assert p.start <= by_id[doc_id].date < p.end
            seen.extend(p.document_ids)
        # partition property: every document in exactly one period
        assert sorted(seen) == sorted(by_id)

    def test_empty_periods_are_kept(self):
        docs = _docset([
            ("d1", dt.date(2000, 5, 1), "x", []),
            ("d2", dt.date(2004, 5, 1), "x", []),
        ])
        periods = periodize(docs, "year", 1, dt.date(2000, 1, 1))
        assert len(periods) == 5
        assert periods.periods[1].document_ids == ()


class TestCooccurrence:
    def _period(self, docsets):
        entries = [
            (f"d{i}", dt.date(2000, 6, 1), "x", terms) for i, terms in enumerate(docsets)
        ]
        docs = _docset(entries)
        periods = periodize(docs, "year", 1, dt.date(2000, 1, 1))
        return cooccurrence(periods.periods[0], docs)

    def test_basic_counts(self):
        m = self._period([{"a", "b"}, {"a", "c"}])
        assert m.cooc("a", "b") == 1
        assert m.cooc("b", "c") == 0
        assert m.occ("a") == 2

    def test_single_doc(self):
        m = self._period([{"a"}])
        assert m.occ("a") == 1
        assert m.cooc("a", "b") == 0

    def test_matches_nested_loop_counter(self):
        rng = random.Random(5)
        vocab = list("abcdefgh")
        docsets = [set(rng.sample(vocab, rng.randint(1, 5))) for _ in range(20)]
        m = self._period(docsets)
        for x in vocab:
            assert m.occ(x) == sum(1 for d in docsets if x in d)
            for y in vocab:
                expected = sum(1 for d in docsets if x in d and y in d)
                if x != y:
                    assert m.cooc(x, y) == expected
                    assert m.cooc(x, y) == m.cooc(y, x)
                    assert m.cooc(x, y) <= min(m.occ(x), m.occ(y))

    @given(st.lists(st.sets(st.sampled_from("abcde"), min_size=1, max_size=4), max_size=12))
    def test_symmetry_and_bound_property(self, docsets):
        m = self._period(docsets) if docsets else None
        if m is None:
            return
        for x, y in combinations("abcde", 2):
            assert m.cooc(x, y) == m.cooc(y, x)
            assert m.cooc(x, y) <= min(m.occ(x), m.occ(y))
