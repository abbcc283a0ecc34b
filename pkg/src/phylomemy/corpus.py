"""Corpus ingestion: parsing, root-term indexing, periodization, co-occurrence.

The first reconstruction operator. Documents are timestamped text units;
a curated root list supplies the vocabulary; time is discretized into
contiguous calendar periods; each period yields a co-occurrence matrix.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import re
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Optional, Sequence

__all__ = [
    "Document",
    "DocumentSet",
    "RootList",
    "Period",
    "PeriodSet",
    "CoocMatrix",
    "CorpusError",
    "parse_corpus",
    "parse_rootlist",
    "index_documents",
    "periodize",
    "cooccurrence",
    "tokenize",
]


class CorpusError(ValueError):
    """Raised on unrecoverable ingest problems (empty corpus, duplicate ids...)."""


_NON_TOKEN = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    """Case-fold and normalize punctuation to whitespace, then split.

    "Co-Word Maps" -> ["co", "word", "maps"]; matching is whole-token only.
    """
    return [t for t in _NON_TOKEN.split(text.lower()) if t]


@dataclass(frozen=True)
class Document:
    id: str
    date: dt.date
    text: str
    terms: frozenset[str] = frozenset()


@dataclass
class DocumentSet:
    documents: list[Document]
    rejects: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.documents)

    def by_id(self) -> dict[str, Document]:
        return {d.id: d for d in self.documents}

    def unmatched_ids(self) -> list[str]:
        """Ids of documents with zero indexed terms (kept, but flagged)."""
        return [d.id for d in self.documents if not d.terms]


@dataclass
class RootList:
    """Curated vocabulary: (root id, canonical form, variants).

    The root id is the canonical form itself; variants are alternative
    surface forms that resolve to the same root.
    """

    roots: list[tuple[str, str, tuple[str, ...]]]

    def __len__(self) -> int:
        return len(self.roots)

    def ids(self) -> list[str]:
        return [r[0] for r in self.roots]

    def patterns(self) -> list[tuple[tuple[str, ...], str]]:
        """All (token pattern, root id) pairs, canonical forms and variants."""
        out = []
        for root_id, canonical, variants in self.roots:
            for form in (canonical, *variants):
                toks = tuple(tokenize(form))
                if toks:
                    out.append((toks, root_id))
        return out


@dataclass(frozen=True)
class Period:
    id: str
    start: dt.date  # inclusive
    end: dt.date  # exclusive
    document_ids: tuple[str, ...]


@dataclass
class PeriodSet:
    periods: list[Period]

    def __len__(self) -> int:
        return len(self.periods)

    def index_of(self, period_id: str) -> int:
        for i, p in enumerate(self.periods):
            if p.id == period_id:
                return i
        raise KeyError(period_id)


def _parse_date(value: str) -> dt.date:
    return dt.date.fromisoformat(value.strip())


def _record_to_document(record: dict, line_no: int) -> tuple[Optional[Document], Optional[str]]:
    doc_id = (record.get("id") or "").strip()
    if not doc_id:
        return None, f"line {line_no}: missing id"
    raw_date = (record.get("date") or "").strip()
    if not raw_date:
        return None, f"line {line_no}: missing date"
    try:
        date = _parse_date(raw_date)
    except ValueError:
        return None, f"line {line_no}: unparseable date {raw_date!r}"
    title = (record.get("title") or "").strip()
    abstract = (record.get("abstract") or "").strip()
    text = " ".join(part for part in (title, abstract) if part)
    if not text:
        return None, f"line {line_no}: no text field"
    return Document(id=doc_id, date=date, text=text), None


def parse_corpus(path: str, format: str = "csv") -> DocumentSet:
    """Parse a corpus file into a DocumentSet.

    CSV columns or JSONL keys: id, date, title, abstract. Malformed records
    are collected in ``rejects`` (line number, reason) and never silently
    dropped. Raises CorpusError on duplicate ids or zero valid records.
    """
    documents: list[Document] = []
    rejects: list[tuple[int, str]] = []
    seen: set[str] = set()

    def take(doc: Optional[Document], err: Optional[str], line_no: int) -> None:
        if doc is None:
            rejects.append((line_no, err or "malformed record"))
            return
        if doc.id in seen:
            raise CorpusError(f"duplicate document id {doc.id!r} at line {line_no}")
        seen.add(doc.id)
        documents.append(doc)

    with open(path, "r", encoding="utf-8", newline="") as fh:
        if format == "csv":
            reader = csv.DictReader(fh)
            for line_no, row in enumerate(reader, start=2):
                doc, err = _record_to_document(row, line_no)
                take(doc, err, line_no)
        elif format == "jsonl":
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    rejects.append((line_no, f"line {line_no}: invalid json"))
                    continue
                if not isinstance(record, dict):
                    rejects.append((line_no, f"line {line_no}: not an object"))
                    continue
                record = {k: (str(v) if v is not None else "") for k, v in record.items()}
                doc, err = _record_to_document(record, line_no)
                take(doc, err, line_no)
        else:
            raise CorpusError(f"unknown corpus format {format!r}")

    if not documents:
        raise CorpusError(f"zero valid records in {path}")
    return DocumentSet(documents=documents, rejects=rejects)


def write_rejects_report(docs: DocumentSet, path: str) -> None:
    """Sidecar report of rejected records; ingest is never lossy-silent."""
    with open(path, "w", encoding="utf-8") as fh:
        for line_no, reason in docs.rejects:
            fh.write(f"{reason}\n")


def parse_rootlist(path: str) -> RootList:
    """Parse a root list: one root per line, variants separated by '|'.

    Canonical forms must be unique after case-folding; a variant may belong
    to exactly one root.
    """
    roots: list[tuple[str, str, tuple[str, ...]]] = []
    seen_canonical: dict[str, int] = {}
    claimed: dict[tuple[str, ...], str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split("|") if p.strip()]
            if not parts:
                continue
            canonical = parts[0].lower()
            key = " ".join(tokenize(canonical))
            if key in seen_canonical:
                raise CorpusError(
                    f"duplicate canonical form {canonical!r} at line {line_no} "
                    f"(first seen at line {seen_canonical[key]})"
                )
            seen_canonical[key] = line_no
            variants = tuple(p.lower() for p in parts[1:])
            for form in (canonical, *variants):
                toks = tuple(tokenize(form))
                owner = claimed.get(toks)
                if owner is not None and owner != canonical:
                    raise CorpusError(
                        f"form {form!r} (line {line_no}) already claimed by root {owner!r}"
                    )
                claimed[toks] = canonical
            roots.append((canonical, canonical, variants))
    if not roots:
        raise CorpusError(f"empty root list {path}")
    return RootList(roots=roots)


def _match_tokens(tokens: Sequence[str], patterns: list[tuple[tuple[str, ...], str]]) -> frozenset[str]:
    """Leftmost-longest greedy matching with token consumption.

    At each position the longest matching pattern wins and consumes its
    window, so a variant never double-counts inside a longer root.
    """
    by_first: dict[str, list[tuple[tuple[str, ...], str]]] = {}
    for toks, root_id in sorted(patterns, key=lambda p: (-len(p[0]), p[0])):
        by_first.setdefault(toks[0], []).append((toks, root_id))
    n = len(tokens)
    consumed = [False] * n
    hits: set[str] = set()
    for pos in range(n):
        if consumed[pos]:
            continue
        for toks, root_id in by_first.get(tokens[pos], ()):
            m = len(toks)
            if pos + m > n:
                continue
            window = range(pos, pos + m)
            if any(consumed[i] for i in window):
                continue
            if all(tokens[i] == toks[i - pos] for i in window):
                for i in window:
                    consumed[i] = True
                hits.add(root_id)
                break
    return frozenset(hits)


def index_documents(docs: DocumentSet, roots: RootList) -> DocumentSet:
    """Fill each document's term set from the root list. Idempotent."""
    patterns = roots.patterns()
    indexed = [replace(d, terms=_match_tokens(tokenize(d.text), patterns)) for d in docs.documents]
    return DocumentSet(documents=indexed, rejects=list(docs.rejects))


def _add_months(date: dt.date, months: int) -> dt.date:
    month0 = date.month - 1 + months
    year = date.year + month0 // 12
    month = month0 % 12 + 1
    # clamp day for short months
    day = min(date.day, [31, 29 if year % 4 == 0 and (year % 100 != 0 or year % 400 == 0) else 28,
                         31, 30, 31, 30, 31, 31, 30, 31, 30, 31][month - 1])
    return dt.date(year, month, day)


def periodize(docs: DocumentSet, unit: str, length: int, origin: dt.date) -> PeriodSet:
    """Discretize the corpus into contiguous aligned periods from the origin.

    Empty periods are kept (lineage gaps count calendar periods); the
    trailing partial period is kept.
    """
    if length < 1:
        raise CorpusError("period length must be >= 1")
    if not docs.documents:
        raise CorpusError("cannot periodize an empty corpus")
    dates = [d.date for d in docs.documents]
    earliest, latest = min(dates), max(dates)
    if origin > earliest:
        raise CorpusError(
            f"origin {origin.isoformat()} is after the earliest document ({earliest.isoformat()})"
        )

    def boundary(k: int) -> dt.date:
        if unit == "week":
            return origin + dt.timedelta(days=7 * length * k)
        if unit == "month":
            return _add_months(origin, length * k)
        if unit == "year":
            return _add_months(origin, 12 * length * k)
        raise CorpusError(f"unknown period unit {unit!r}")

    bounds = [boundary(0)]
    k = 1
    while bounds[-1] <= latest:
        bounds.append(boundary(k))
        k += 1

    periods: list[Period] = []
    width = max(3, len(str(len(bounds))))
    for i in range(len(bounds) - 1):
        start, end = bounds[i], bounds[i + 1]
        members = tuple(sorted(d.id for d in docs.documents if start <= d.date < end))
        periods.append(Period(id=f"T{i:0{width}d}", start=start, end=end, document_ids=members))
    return PeriodSet(periods=periods)


class CoocMatrix:
    """Symmetric document-presence co-occurrence counts for one period.

    Entry (x, y) counts documents containing both terms; the diagonal is
    the occurrence count occ(x). Presence is 0/1 per document, regardless
    of how often a term repeats inside one text.
    """

    def __init__(self, period_id: str):
        self.period_id = period_id
        self._occ: dict[str, int] = {}
        self._pairs: dict[tuple[str, str], int] = {}

    def add_document(self, terms: Iterable[str]) -> None:
        uniq = sorted(set(terms))
        for t in uniq:
            self._occ[t] = self._occ.get(t, 0) + 1
        for x, y in combinations(uniq, 2):
            self._pairs[(x, y)] = self._pairs.get((x, y), 0) + 1

    def occ(self, x: str) -> int:
        return self._occ.get(x, 0)

    def cooc(self, x: str, y: str) -> int:
        if x == y:
            return self.occ(x)
        key = (x, y) if x < y else (y, x)
        return self._pairs.get(key, 0)

    def terms(self) -> list[str]:
        return sorted(self._occ)

    def pairs(self) -> dict[tuple[str, str], int]:
        return dict(self._pairs)


def cooccurrence(period: Period, docs: DocumentSet) -> CoocMatrix:
    """Co-occurrence matrix of one period (empty period -> zero matrix)."""
    by_id = docs.by_id()
    matrix = CoocMatrix(period.id)
    for doc_id in period.document_ids:
        matrix.add_document(by_id[doc_id].terms)
    return matrix
