"""Resumable pipeline stages over a working directory.

Every stage writes its artifacts plus a manifest (stage name, hash of the
config fields it consumes, input-file hashes, stage seed).  Re-running a
stage whose manifest still matches is a no-op; a changed config hash is an
error unless forced.  All stage seeds derive from the single master seed by
fixed offsets.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .domains import (
    DomainEmbedding,
    domain_embed,
    read_embedding_csv,
    write_embedding_csv,
    write_partition_csv,
)
from .evaluation import EvalReport, evaluate
from .hetero import WeightedGraph, build_cooccurrence_graph, content_views, from_edge_weights
from .lexicon import default_lexicon, load_lexicon
from .louvain import Partition, louvain, partition_fingerprint
from .model import init_model
from .propagation import build_propagation_graph, global_feature_names, network_feature_names, network_features
from .records import RecordSet, dump_records, load_records, split_dataset
from .selection import SelectionResult, RoundStats, farthest_point_select, lsh_select, random_select
from .stats import welch_t_test
from .synthetic import demo_config, generate_synthetic, load_synthetic_config
from .textfeat import hashed_text_features, load_embedding_table, lookup_text_features
from .training import fit, grad_check
from .vectors import Standardizer, assemble_input, read_matrix_csv, write_matrix_csv


class PipelineError(Exception):
    """Data or dependency problem while running a stage."""


@dataclass(frozen=True)
class PipelineConfig:
    corpus: str = ""
    synth_config: str = ""
    delta_t: int = 18000
    text_dim: int = 256
    latent_dim: int = 512
    n_hashes: int = 10
    budget: int = 0
    budget_frac: float = 0.5
    lambda1: float = 1.0
    lambda2: float = 10.0
    lambda3: float = 5.0
    epochs: int = 300
    batch_size: int = 64
    learning_rate: float = 0.001
    train_fraction: float = 0.75
    method: str = "lsh"
    text_mode: str = "hashing"
    embeddings_file: str = ""
    lexicon_file: str = ""
    hop_levels: int = 5
    aggregate_iters: int = 3
    ttest_domains: str = ""
    coverage_seeds: int = 20
    seed: int = 0


_CONFIG_TYPES = {f.name: f.type for f in PipelineConfig.__dataclass_fields__.values()}  # type: ignore[attr-defined]


def load_pipeline_config(path) -> PipelineConfig:
    """Read a [pipeline] section of key = value lines."""
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_string(fh.read())
    if "pipeline" not in parser:
        raise PipelineError(f"{path}: missing [pipeline] section")
    kwargs: dict = {}
    for key, value in parser.items("pipeline"):
        if key not in _CONFIG_TYPES:
            raise PipelineError(f"{path}: unknown config key '{key}'")
        kind = _CONFIG_TYPES[key]
        if kind == "int":
            kwargs[key] = int(value)
        elif kind == "float":
            kwargs[key] = float(value)
        else:
            kwargs[key] = value
    return PipelineConfig(**kwargs)


SEED_OFFSETS = {
    "synth": 1000,
    "split": 2000,
    "text": 3000,
    "select": 4000,
    "train": 5000,
    "grad-check": 6000,
    "coverage": 7000,
}


def stage_seed(cfg: PipelineConfig, name: str) -> int:
    return cfg.seed + SEED_OFFSETS[name]


# Config fields each stage consumes; the per-stage hash covers only these.
STAGE_FIELDS: dict[str, tuple[str, ...]] = {
    "synth": ("synth_config", "seed"),
    "ingest": ("corpus", "train_fraction", "seed"),
    "features": (
        "delta_t", "text_mode", "text_dim", "embeddings_file", "lexicon_file",
        "hop_levels", "aggregate_iters", "seed",
    ),
    "domains": ("delta_t", "seed"),
    "embed": ("delta_t", "seed"),
    "select": ("method", "budget", "budget_frac", "n_hashes", "seed"),
    "coverage": ("n_hashes", "coverage_seeds", "seed"),
    "train": (
        "latent_dim", "lambda1", "lambda2", "lambda3", "epochs", "batch_size",
        "learning_rate", "seed",
    ),
    "eval": ("seed",),
    "ttest": ("delta_t", "ttest_domains", "seed"),
    "grad-check": ("seed",),
    "report": (),
}

# Artifact -> stage that produces it.
PRODUCERS = {
    "corpus.jsonl": "synth",
    "train.jsonl": "ingest",
    "test.jsonl": "ingest",
    "features_train.csv": "features",
    "features_test.csv": "features",
    "network_globals.csv": "features",
    "standardizer.json": "features",
    "cooccurrence_edges.csv": "domains",
    "partition.csv": "domains",
    "domain_meta.json": "domains",
    "embeddings_train.csv": "embed",
    "embeddings_test.csv": "embed",
    "selected_ids.txt": "select",
    "selection_rounds.csv": "select",
    "coverage.csv": "coverage",
    "checkpoint.json": "train",
    "history.csv": "train",
    "metrics.csv": "eval",
    "ttest.csv": "ttest",
    "gradcheck.csv": "grad-check",
}


def config_hash(cfg: PipelineConfig, stage: str) -> str:
    payload = {k: v for k, v in asdict(cfg).items() if k in STAGE_FIELDS[stage]}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _require_inputs(workdir: Path, cfg: PipelineConfig, names: list[str]) -> dict[str, str]:
    hashes: dict[str, str] = {}
    for name in names:
        path = Path(name) if Path(name).is_absolute() else workdir / name
        if not path.exists():
            producer = PRODUCERS.get(name)
            if producer is not None:
                raise PipelineError(f"missing artifact '{name}': run {producer} first")
            raise PipelineError(f"missing input file '{name}'")
        hashes[name] = _sha256_file(path)
    return hashes


def _manifest_path(workdir: Path, stage: str) -> Path:
    return workdir / "manifests" / f"{stage}.json"


def _load_manifest(workdir: Path, stage: str) -> dict | None:
    path = _manifest_path(workdir, stage)
    if not path.exists():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def _write_manifest(
    workdir: Path, stage: str, cfg: PipelineConfig, inputs: dict[str, str], outputs: list[str]
) -> None:
    path = _manifest_path(workdir, stage)
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest = {
        "stage": stage,
        "config_hash": config_hash(cfg, stage),
        "inputs": inputs,
        "outputs": {name: _sha256_file(workdir / name) for name in outputs},
        "seed": stage_seed(cfg, stage) if stage in SEED_OFFSETS else cfg.seed,
    }
    path.write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _corpus_path(workdir: Path, cfg: PipelineConfig) -> str:
    return cfg.corpus if cfg.corpus else "corpus.jsonl"


def _resolve(workdir: Path, name: str) -> Path:
    path = Path(name)
    return path if path.is_absolute() else workdir / name


def _text_vector(cfg: PipelineConfig, record_id: str, title: str, table) -> np.ndarray:
    if cfg.text_mode == "lookup":
        return lookup_text_features(record_id, table)
    return hashed_text_features(title, cfg.text_dim, stage_seed(cfg, "text"))


def _budget_for(cfg: PipelineConfig, pool_size: int) -> int:
    if cfg.budget > 0:
        return cfg.budget
    return max(1, round(cfg.budget_frac * pool_size))


# ---------------------------------------------------------------------------
# stage bodies
# ---------------------------------------------------------------------------

def _stage_synth(workdir: Path, cfg: PipelineConfig) -> list[str]:
    synth_cfg = load_synthetic_config(cfg.synth_config) if cfg.synth_config else demo_config()
    rs = generate_synthetic(synth_cfg, stage_seed(cfg, "synth"))
    dump_records(rs, workdir / "corpus.jsonl")
    return ["corpus.jsonl"]


def _stage_ingest(workdir: Path, cfg: PipelineConfig) -> list[str]:
    rs = load_records(_resolve(workdir, _corpus_path(workdir, cfg)))
    if len(rs) == 0:
        raise PipelineError("corpus is empty")
    train, test = split_dataset(rs, cfg.train_fraction, stage_seed(cfg, "split"))
    dump_records(train, workdir / "train.jsonl")
    dump_records(test, workdir / "test.jsonl")
    return ["train.jsonl", "test.jsonl"]


def _feature_block(
    cfg: PipelineConfig, rs: RecordSet, lexicon, table
) -> tuple[list[str], np.ndarray, np.ndarray, np.ndarray]:
    """(ids, text matrix, raw network matrix, global-features matrix)."""
    ids, texts, nets, globs = [], [], [], []
    n_globals = len(global_feature_names(cfg.hop_levels))
    for record in rs:
        net = build_propagation_graph(record, cfg.delta_t, lexicon=lexicon)
        feats = network_features(net, cfg.hop_levels, cfg.aggregate_iters)
        ids.append(record.id)
        texts.append(_text_vector(cfg, record.id, record.title, table))
        nets.append(feats)
        globs.append(feats[:n_globals])
    return ids, np.array(texts), np.array(nets), np.array(globs)


def _stage_features(workdir: Path, cfg: PipelineConfig) -> list[str]:
    train = load_records(workdir / "train.jsonl")
    test = load_records(workdir / "test.jsonl")
    lexicon = load_lexicon(cfg.lexicon_file) if cfg.lexicon_file else default_lexicon()
    table = load_embedding_table(_resolve(workdir, cfg.embeddings_file)) if cfg.text_mode == "lookup" else None
    tr_ids, tr_text, tr_net, tr_glob = _feature_block(cfg, train, lexicon, table)
    te_ids, te_text, te_net, te_glob = _feature_block(cfg, test, lexicon, table)
    scaler = Standardizer.fit(tr_net)
    x_train = assemble_input(tr_text, scaler.apply(tr_net))
    x_test = assemble_input(te_text, scaler.apply(te_net))
    d_t = tr_text.shape[1]
    columns = [f"text_{i:03d}" for i in range(d_t)] + list(network_feature_names(cfg.hop_levels))
    write_matrix_csv(workdir / "features_train.csv", tr_ids, x_train, columns)
    write_matrix_csv(workdir / "features_test.csv", te_ids, x_test, columns)
    glob_cols = list(global_feature_names(cfg.hop_levels))
    write_matrix_csv(
        workdir / "network_globals.csv",
        tr_ids + te_ids,
        np.vstack([tr_glob, te_glob]),
        glob_cols,
    )
    payload = {"mean": scaler.mean.tolist(), "std": scaler.std.tolist()}
    (workdir / "standardizer.json").write_text(
        json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8"
    )
    return ["features_train.csv", "features_test.csv", "network_globals.csv", "standardizer.json"]


def _stage_domains(workdir: Path, cfg: PipelineConfig) -> list[str]:
    train = load_records(workdir / "train.jsonl")
    views = content_views(train, cfg.delta_t)
    graph = build_cooccurrence_graph(views)
    partition = louvain(graph)
    with open(workdir / "cooccurrence_edges.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_a", "node_b", "weight"])
        seen = set()
        for i in range(graph.n_nodes):
            for k in range(graph.indptr[i], graph.indptr[i + 1]):
                j = int(graph.indices[k])
                if (j, i) in seen:
                    continue
                seen.add((i, j))
                writer.writerow([graph.node_ids[i], graph.node_ids[j], int(graph.weights[k])])
    write_partition_csv(workdir / "partition.csv", partition)
    meta = {
        "communities": partition.community_count,
        "fingerprint": partition_fingerprint(partition),
        "phase_modularity": list(partition.phase_modularity),
        "nodes": graph.n_nodes,
    }
    (workdir / "domain_meta.json").write_text(
        json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8"
    )
    return ["cooccurrence_edges.csv", "partition.csv", "domain_meta.json"]


def _load_domain_artifacts(workdir: Path) -> tuple[WeightedGraph, Partition]:
    edge_weights: dict[tuple[str, str], float] = {}
    with open(workdir / "cooccurrence_edges.csv", "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for a, b, w in reader:
            edge_weights[(a, b)] = float(w)
    graph = from_edge_weights(edge_weights)
    labels_by_node: dict[str, int] = {}
    with open(workdir / "partition.csv", "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for node, label in reader:
            labels_by_node[node] = int(label)
    groups: dict[int, list[str]] = {}
    for node, label in labels_by_node.items():
        groups.setdefault(label, []).append(node)
    communities = tuple(
        tuple(sorted(groups[label])) for label in sorted(groups)
    )
    partition = Partition(
        node_ids=graph.node_ids,
        labels=tuple(labels_by_node[n] for n in graph.node_ids),
        communities=communities,
    )
    return graph, partition


def _stage_embed(workdir: Path, cfg: PipelineConfig) -> list[str]:
    graph, partition = _load_domain_artifacts(workdir)
    train = load_records(workdir / "train.jsonl")
    test = load_records(workdir / "test.jsonl")
    emb_train = domain_embed(content_views(train, cfg.delta_t), graph, partition)
    emb_test = domain_embed(content_views(test, cfg.delta_t), graph, partition)
    write_embedding_csv(workdir / "embeddings_train.csv", emb_train)
    write_embedding_csv(workdir / "embeddings_test.csv", emb_test)
    return ["embeddings_train.csv", "embeddings_test.csv"]


def _select_with_method(
    method: str, embeddings: DomainEmbedding, budget: int, n_hashes: int, seed: int
) -> SelectionResult:
    if method == "lsh":
        return lsh_select(embeddings, budget, n_hashes=n_hashes, seed=seed)
    if method == "random":
        return random_select(list(embeddings.ids), budget, seed=seed)
    if method == "farthest":
        ids = farthest_point_select(embeddings, budget, seed=seed)
        return SelectionResult(
            ids=ids, rounds=1, round_stats=(RoundStats(round=0, bins=1, picked=budget),)
        )
    raise PipelineError(f"unknown selection method '{method}'")


def _stage_select(workdir: Path, cfg: PipelineConfig) -> list[str]:
    embeddings = read_embedding_csv(workdir / "embeddings_train.csv")
    budget = _budget_for(cfg, len(embeddings))
    if budget > len(embeddings):
        raise PipelineError(f"budget {budget} exceeds pool size {len(embeddings)}")
    result = _select_with_method(
        cfg.method, embeddings, budget, cfg.n_hashes, stage_seed(cfg, "select")
    )
    with open(workdir / "selected_ids.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(rid + "\n" for rid in result.ids))
    with open(workdir / "selection_rounds.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["round", "bins", "picked"])
        for st in result.round_stats:
            writer.writerow([st.round, st.bins, st.picked])
    return ["selected_ids.txt", "selection_rounds.csv"]


def _stage_coverage(workdir: Path, cfg: PipelineConfig) -> list[str]:
    from .selection import coverage_lambda

    embeddings = read_embedding_csv(workdir / "embeddings_train.csv")
    base = stage_seed(cfg, "coverage")
    rows = []
    for method in ("lsh", "random"):
        for frac in (0.1, 0.2, 0.3, 0.4, 0.5):
            budget = max(2, round(frac * len(embeddings)))
            lams = []
            for k in range(cfg.coverage_seeds):
                result = _select_with_method(
                    method, embeddings, budget, cfg.n_hashes, base + k
                )
                lams.append(coverage_lambda(embeddings.subset(result.ids)))
            rows.append((method, frac, budget, float(np.mean(lams))))
    with open(workdir / "coverage.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "budget_frac", "budget", "lambda_mean"])
        for method, frac, budget, lam in rows:
            writer.writerow([method, repr(frac), budget, repr(lam)])
    return ["coverage.csv"]


def _stage_train(workdir: Path, cfg: PipelineConfig) -> list[str]:
    ids, x, _ = read_matrix_csv(workdir / "features_train.csv")
    embeddings = read_embedding_csv(workdir / "embeddings_train.csv")
    selected = [
        line.strip()
        for line in (workdir / "selected_ids.txt").read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    train = load_records(workdir / "train.jsonl")
    labels = {r.id: r.label for r in train}
    missing = [rid for rid in selected if labels.get(rid) is None]
    if missing:
        raise PipelineError(f"selected record '{missing[0]}' has no label")
    pos = {rid: i for i, rid in enumerate(ids)}
    rows = [pos[rid] for rid in selected]
    x_sel = x[rows]
    y_sel = np.array([labels[rid] for rid in selected], dtype=np.float64)
    f_sel = embeddings.subset(selected).matrix
    meta = json.loads((workdir / "domain_meta.json").read_text(encoding="utf-8"))
    m = init_model(x.shape[1], cfg.latent_dim, embeddings.dim, stage_seed(cfg, "train"))
    m, history = fit(
        m, x_sel, y_sel, f_sel,
        epochs=cfg.epochs, batch_size=cfg.batch_size,
        lambda1=cfg.lambda1, lambda2=cfg.lambda2, lambda3=cfg.lambda3,
        seed=stage_seed(cfg, "train"), learning_rate=cfg.learning_rate,
    )
    scaler_payload = json.loads((workdir / "standardizer.json").read_text(encoding="utf-8"))
    scaler = Standardizer(
        mean=np.array(scaler_payload["mean"]), std=np.array(scaler_payload["std"])
    )
    save_checkpoint(workdir / "checkpoint.json", m, scaler, meta["fingerprint"])
    with open(workdir / "history.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "l_pred", "l_recon", "l_specific", "l_shared", "l_final"])
        for epoch, bd in enumerate(history, start=1):
            writer.writerow([
                epoch, repr(bd.l_pred), repr(bd.l_recon), repr(bd.l_specific),
                repr(bd.l_shared), repr(bd.l_final),
            ])
    return ["checkpoint.json", "history.csv"]


def write_metrics_csv(path, report: EvalReport) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([
            "group", "accuracy", "precision", "recall", "f1", "tp", "fp", "fn", "tn", "support",
        ])
        groups = [("overall", report.overall)] + sorted(report.per_domain.items())
        for name, g in groups:
            writer.writerow([
                name, repr(g.accuracy), repr(g.precision), repr(g.recall), repr(g.f1),
                g.tp, g.fp, g.fn, g.tn, g.support,
            ])


def _stage_eval(workdir: Path, cfg: PipelineConfig) -> list[str]:
    m, _, fingerprint = load_checkpoint(workdir / "checkpoint.json")
    meta = json.loads((workdir / "domain_meta.json").read_text(encoding="utf-8"))
    if fingerprint != meta["fingerprint"]:
        raise PipelineError(
            "checkpoint was trained against a different partition: rerun train"
        )
    ids, x, _ = read_matrix_csv(workdir / "features_test.csv")
    test = load_records(workdir / "test.jsonl")
    by_id = {r.id: r for r in test}
    y = np.array([by_id[rid].label for rid in ids])
    if any(v is None for v in y.tolist()):
        raise PipelineError("every test record needs a label for eval")
    tags = [by_id[rid].domain_tag for rid in ids]
    report = evaluate(m, x, y.astype(np.int64), tags)
    write_metrics_csv(workdir / "metrics.csv", report)
    return ["metrics.csv"]


TTEST_FEATURES = ("depth", "propagation_speed", "wiener_index", "max_outdegree")


def _stage_ttest(workdir: Path, cfg: PipelineConfig) -> list[str]:
    ids, matrix, columns = read_matrix_csv(workdir / "network_globals.csv")
    tags: dict[str, str | None] = {}
    for name in ("train.jsonl", "test.jsonl"):
        for record in load_records(workdir / name):
            tags[record.id] = record.domain_tag
    present = sorted({t for t in (tags.get(rid) for rid in ids) if t})
    if cfg.ttest_domains:
        pair = [s.strip() for s in cfg.ttest_domains.split(",")]
        if len(pair) != 2:
            raise PipelineError("ttest_domains must name two domains, comma separated")
    else:
        if len(present) < 2:
            raise PipelineError("need at least two domain tags for the t-test report")
        pair = present[:2]
    for name in pair:
        if name not in present:
            raise PipelineError(f"domain tag '{name}' not present in the corpus")
    col_idx = {c: k for k, c in enumerate(columns)}
    rows = []
    for feature in TTEST_FEATURES:
        xs = [matrix[i, col_idx[feature]] for i, rid in enumerate(ids) if tags.get(rid) == pair[0]]
        ys = [matrix[i, col_idx[feature]] for i, rid in enumerate(ids) if tags.get(rid) == pair[1]]
        res = welch_t_test(xs, ys)
        rows.append((feature, res.t, res.df, res.p))
    with open(workdir / "ttest.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature", "t", "df", "p"])
        for feature, t, df, p in rows:
            writer.writerow([feature, repr(t), repr(df), repr(p)])
    return ["ttest.csv"]


GRADCHECK_TOLERANCE = 1e-4


def _stage_gradcheck(workdir: Path, cfg: PipelineConfig) -> list[str]:
    seed = stage_seed(cfg, "grad-check")
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    for trial in range(5):
        m = init_model(d_in=10, d_latent=6, n_domains=3, seed=seed + trial)
        x = rng.normal(size=(4, 10))
        y = rng.integers(0, 2, size=4).astype(np.float64)
        f = rng.dirichlet(np.ones(3), size=4)
        errs = grad_check(m, x, y, f, cfg.lambda1, cfg.lambda2, cfg.lambda3)
        for name, err in errs.items():
            worst[name] = max(worst.get(name, 0.0), err)
    with open(workdir / "gradcheck.csv", "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["block", "max_rel_error"])
        for name in sorted(worst):
            writer.writerow([name, repr(worst[name])])
    bad = {k: v for k, v in worst.items() if v >= GRADCHECK_TOLERANCE}
    if bad:
        raise PipelineError(f"gradient check failed: {bad}")
    return ["gradcheck.csv"]


def _markdown_table(path: Path) -> list[str]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return []
    out = ["| " + " | ".join(rows[0]) + " |", "|" + "---|" * len(rows[0])]
    out.extend("| " + " | ".join(r) + " |" for r in rows[1:])
    return out


def _stage_report(workdir: Path, cfg: PipelineConfig) -> list[str]:
    lines = ["# Pipeline report", ""]
    lines.append("## Classification metrics")
    lines.append("")
    lines.extend(_markdown_table(workdir / "metrics.csv"))
    for title, name in (
        ("Coverage by method and budget", "coverage.csv"),
        ("Training loss history", "history.csv"),
        ("Propagation-feature t-tests", "ttest.csv"),
    ):
        path = workdir / name
        if path.exists():
            lines.extend(["", f"## {title}", ""])
            lines.extend(_markdown_table(path))
    (workdir / "report.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return ["report.md"]


STAGES = {
    "synth": (_stage_synth, []),
    "ingest": (_stage_ingest, ["@corpus"]),
    "features": (_stage_features, ["train.jsonl", "test.jsonl"]),
    "domains": (_stage_domains, ["train.jsonl"]),
    "embed": (_stage_embed, ["cooccurrence_edges.csv", "partition.csv", "train.jsonl", "test.jsonl"]),
    "select": (_stage_select, ["embeddings_train.csv"]),
    "coverage": (_stage_coverage, ["embeddings_train.csv"]),
    "train": (
        _stage_train,
        ["features_train.csv", "embeddings_train.csv", "selected_ids.txt", "train.jsonl",
         "domain_meta.json", "standardizer.json"],
    ),
    "eval": (_stage_eval, ["checkpoint.json", "features_test.csv", "test.jsonl", "domain_meta.json"]),
    "ttest": (_stage_ttest, ["network_globals.csv", "train.jsonl", "test.jsonl"]),
    "grad-check": (_stage_gradcheck, []),
    "report": (_stage_report, ["metrics.csv"]),
}


def run_stage(stage: str, cfg: PipelineConfig, workdir, force: bool = False) -> str:
    """Run one stage; returns 'ran' or 'skipped'."""
    if stage not in STAGES:
        raise PipelineError(f"unknown stage '{stage}'")
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    body, input_names = STAGES[stage]
    resolved_inputs = [
        _corpus_path(workdir, cfg) if name == "@corpus" else name for name in input_names
    ]
    input_hashes = _require_inputs(workdir, cfg, resolved_inputs)
    manifest = _load_manifest(workdir, stage)
    current_hash = config_hash(cfg, stage)
    if manifest is not None and not force:
        if manifest["config_hash"] != current_hash:
            raise PipelineError(
                f"stage '{stage}' was run with a different config; pass --force to redo"
            )
        if manifest["inputs"] == input_hashes:
            return "skipped"
    outputs = body(workdir, cfg)
    _write_manifest(workdir, stage, cfg, input_hashes, outputs)
    return "ran"


FULL_SEQUENCE = (
    "synth", "ingest", "features", "domains", "embed",
    "select", "coverage", "train", "eval", "ttest", "report",
)


def run_all(cfg: PipelineConfig, workdir, force: bool = False, skip_synth: bool = False) -> dict[str, str]:
    results = {}
    for stage in FULL_SEQUENCE:
        if stage == "synth" and (skip_synth or cfg.corpus):
            continue
        results[stage] = run_stage(stage, cfg, workdir, force=force)
    return results
