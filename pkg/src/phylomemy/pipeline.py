"""End-to-end orchestration: ingest, period graphs, matching, foliation,
projection, export. Multi-level builds share every stage up to matching
and fork only at the sea level, since the level affects the foliation
alone."""

from __future__ import annotations

import logging
import os
import time
from typing import Optional

from . import corpus as corpus_mod
from . import graphs as graphs_mod
from .config import BuildConfig
from .matching import build_kinship_graph
from .projection import build_projection, export
from .sealevel import rise

__all__ = ["run_build", "PipelineError"]

log = logging.getLogger("phylomemy")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause


def _timed(stage: str):
    class _Timer:
        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None:
                raise PipelineError(stage, exc) from exc
            log.info("stage %-12s %.2fs", stage, time.perf_counter() - self.t0)

    return _Timer()


def _level_output_path(output: str, level: float, multi: bool) -> str:
    if not multi:
        return output
    stem, ext = os.path.splitext(output)
    return f"{stem}_level{level:.2f}{ext or '.json'}"


def run_build(config: BuildConfig) -> list[str]:
    """Execute the full pipeline; returns the export path(s), one per level."""
    errors = config.validate()
    if errors:
        raise PipelineError("config", ValueError("; ".join(errors)))

    with _timed("ingest"):
        docs = corpus_mod.parse_corpus(config.corpus, config.format)
        roots = corpus_mod.parse_rootlist(config.rootlist)
        docs = corpus_mod.index_documents(docs, roots)
        if docs.rejects:
            sidecar = config.output + ".rejects.txt"
            corpus_mod.write_rejects_report(docs, sidecar)
            log.warning("%d rejected records written to %s", len(docs.rejects), sidecar)
        origin = config.origin_date() or min(d.date for d in docs.documents)
        periods = corpus_mod.periodize(docs, config.unit, config.length, origin)
        log.info(
            "ingest: %d documents, %d roots, %d periods, %d unmatched documents",
            len(docs), len(roots), len(periods), len(docs.unmatched_ids()),
        )

    with _timed("fields"):
        by_id = docs.by_id()
        per_period = []
        for idx, period in enumerate(periods.periods):
            matrix = corpus_mod.cooccurrence(period, docs)
            doc_terms = [by_id[d].terms for d in period.document_ids]
            if config.mode == "cliques":
                graph = graphs_mod.build_similarity_graph(
                    matrix, config.edge_threshold, config.symmetrize
                )
                fields = graphs_mod.detect_fields_cliques(
                    graph, config.keep_singletons, config.max_cliques
                )
                edges = graph.edges
                if config.diagnostics:
                    _dump_edges(config.output, period.id, graph)
            else:
                fields = graphs_mod.detect_fields_itemsets(doc_terms, config.min_support)
                edges = {}
            per_period.append((period.id, idx, fields, doc_terms, edges))
        groups = graphs_mod.assemble_groups(per_period, config.mode)
        log.info("fields: %d groups across %d periods", len(groups), len(periods))

    with _timed("matching"):
        kinship = build_kinship_graph(
            groups,
            window=config.window,
            n_periods=len(periods),
            floor=config.floor,
            all_above_floor=config.all_above_floor,
            jobs=config.jobs,
        )
        log.info("matching: %d kinship links", len(kinship.links))
        if config.diagnostics:
            _dump_links(config.output, kinship)

    outputs: list[str] = []
    multi = len(config.levels) > 1
    for level in config.levels:
        with _timed(f"level {level:g}"):
            phylo = rise(
                kinship,
                level,
                mode=config.sea_mode,
                fixed_delta=config.fixed_delta,
                config=config.echo(),
                keep_trace=config.diagnostics,
            )
            projection = build_projection(
                phylo, periods, docs, min_periods=config.min_periods, config=config.echo()
            )
            path = _level_output_path(config.output, level, multi)
            export(projection, path)
            if config.diagnostics:
                _dump_trace(path, phylo)
            log.info(
                "level %g: %d branches, %d ghost links -> %s",
                level, projection["metadata"]["branch_count"],
                projection["metadata"]["ghost_link_count"], path,
            )
            outputs.append(path)
    return outputs


def _dump_edges(output: str, period_id: str, graph) -> None:
    path = f"{output}.{period_id}.edges.txt"
    with open(path, "w", encoding="utf-8") as fh:
        for (x, y), w in sorted(graph.edges.items()):
            fh.write(f"{x}\t{y}\t{w:.6f}\n")


def _dump_links(output: str, kinship) -> None:
    with open(output + ".links.txt", "w", encoding="utf-8") as fh:
        for l in kinship.links:
            fh.write(f"{l.parent}\t{l.child}\t{l.weight:.6f}\n")
        for (gid, direction), w_eff in sorted(kinship.extensions.items()):
            fh.write(f"# window extension {gid} {direction} -> {w_eff}\n")


def _dump_trace(path: str, phylo) -> None:
    with open(path + ".trace.txt", "w", encoding="utf-8") as fh:
        for entry in phylo.trace:
            fh.write(
                "branch {branch} delta {delta:.6f} quality {quality_before:.12f} "
                "-> {quality_after:.12f} committed {committed}\n".format(**entry)
            )
