"""Cross-domain fake news pipeline: domain discovery, diverse selection,
and a dual-subspace adversarial classifier."""

from .domains import DomainEmbedding, baseline_jaccard_embed, domain_embed, soft_membership
from .hetero import RecordContent, WeightedGraph, build_cooccurrence_graph, content_views
from .louvain import Partition, louvain, modularity, partition_fingerprint
from .model import LossBreakdown, ModelParams, forward, init_model, losses
from .records import (
    CascadeNode,
    NewsRecord,
    RecordError,
    RecordSet,
    load_records,
    parse_records,
    split_dataset,
)
from .selection import (
    HashKey,
    ProjectionBank,
    SelectionResult,
    coverage_lambda,
    farthest_point_select,
    hash_record,
    lsh_select,
    random_select,
    sample_projections,
)
from .stats import welch_t_test
from .synthetic import DomainSpec, SyntheticConfig, generate_synthetic
from .training import OptimizerState, fit, grad_check, init_optimizer, train_step

__version__ = "0.1.0"
