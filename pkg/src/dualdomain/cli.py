"""Command-line entry point: one subcommand per pipeline stage.

Exit status: 0 ok, 1 usage error, 2 data/dependency error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .pipeline import (
    FULL_SEQUENCE,
    PipelineConfig,
    PipelineError,
    load_pipeline_config,
    run_all,
    run_stage,
)
from .records import RecordError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; we reserve 2 for data errors
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


_OVERRIDES: tuple[tuple[str, type], ...] = (
    ("corpus", str),
    ("synth_config", str),
    ("delta_t", int),
    ("text_dim", int),
    ("latent_dim", int),
    ("n_hashes", int),
    ("budget", int),
    ("budget_frac", float),
    ("lambda1", float),
    ("lambda2", float),
    ("lambda3", float),
    ("epochs", int),
    ("batch_size", int),
    ("learning_rate", float),
    ("train_fraction", float),
    ("method", str),
    ("text_mode", str),
    ("embeddings_file", str),
    ("lexicon_file", str),
    ("hop_levels", int),
    ("aggregate_iters", int),
    ("ttest_domains", str),
    ("coverage_seeds", int),
)


def _build_parser() -> _Parser:
    parser = _Parser(prog="dualdomain", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands = list(FULL_SEQUENCE) + ["grad-check", "run"]
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--workdir", default="workdir", help="artifact directory")
        p.add_argument("--config", default=None, help="pipeline config file (.ini)")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--force", action="store_true", help="redo even if manifests match")
        for key, kind in _OVERRIDES:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=kind, default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_pipeline_config(args.config) if args.config else PipelineConfig()
    updates = {key: getattr(args, key) for key, _ in _OVERRIDES if getattr(args, key) is not None}
    if args.seed is not None:
        updates["seed"] = args.seed
    return replace(cfg, **updates) if updates else cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        cfg = _config_from_args(args)
        if args.command == "run":
            results = run_all(cfg, args.workdir, force=args.force)
            for stage, status in results.items():
                print(f"[{stage}] {status}")
        else:
            status = run_stage(args.command, cfg, args.workdir, force=args.force)
            print(f"[{args.command}] {status}")
    except (PipelineError, RecordError, ValueError, OSError) as exc:
        print(f"dualdomain: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
