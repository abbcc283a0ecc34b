"""Reconstruction of inheritance networks of knowledge from timestamped
corpora, and their projection into a pre-spatialized exploration artifact."""

from .config import BuildConfig, load_config
from .corpus import (
    CoocMatrix,
    Document,
    DocumentSet,
    Period,
    PeriodSet,
    RootList,
    cooccurrence,
    index_documents,
    parse_corpus,
    parse_rootlist,
    periodize,
)
from .graphs import (
    Group,
    SimilarityGraph,
    build_similarity_graph,
    confidence,
    detect_fields_cliques,
    detect_fields_itemsets,
)
from .matching import (
    KinshipGraph,
    KinshipLink,
    brute_force_oracle,
    build_kinship_graph,
    jaccard,
    match_group,
)
from .pipeline import run_build
from .projection import build_projection, export, load_export
from .sealevel import (
    Branch,
    GhostLink,
    Phylomemy,
    SplitTree,
    branch_quality,
    foliation_slice,
    initial_continent,
    rise,
)

__version__ = "0.1.0"
