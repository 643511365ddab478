"""Command line for the trainer glue: emit configs, run toy-scale training."""

from __future__ import annotations

import argparse
import json
import sys

from .config import TrainConfig, ValidationError, emit_train_config
from .tokenizer_ext import TokenCollisionError
from .toy import TINY_RANDOM, toy_run


def _parse_override(item: str):
    key, sep, raw = item.partition("=")
    if not sep:
        raise ValidationError(f"bad --set entry {item!r}, expected key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqltrainer",
        description="Produce fine-tuning configs from corpus artifacts and "
        "run toy-scale training.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    emit = sub.add_parser("emit-config")
    emit.add_argument("--corpus", required=True, help="corpus JSONL path")
    emit.add_argument("--manifest", required=True, help="token manifest path")
    emit.add_argument("--out", required=True, help="config output (.json or .yaml)")
    emit.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one field (JSON-typed value), repeatable",
    )

    run = sub.add_parser("toy-run")
    run.add_argument("--config", required=True, help="training config file")
    run.add_argument("--out-dir", required=True, help="checkpoint/log directory")
    run.add_argument("--steps", type=int, default=20)
    run.add_argument("--model", default=TINY_RANDOM,
                     help=f"local model dir or {TINY_RANDOM!r}")
    run.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.subcommand == "emit-config":
            overrides = dict(_parse_override(item) for item in args.set)
            config = emit_train_config(
                args.corpus, args.manifest, overrides, out_path=args.out
            )
            print(f"config written -> {args.out}")
            print(json.dumps(config.to_dict(), indent=2, sort_keys=True))
            return 0
        result = toy_run(
            TrainConfig.read(args.config),
            tiny_model_ref=args.model,
            steps=args.steps,
            out_dir=args.out_dir,
            seed=args.seed,
        )
        print(
            f"ran {result.steps_run} steps; loss {result.losses[0]:.3f} -> "
            f"{result.losses[-1]:.3f}; vocabulary grew by {result.vocab_added}"
        )
        if result.stopped_early:
            print("stopped early on rising eval loss")
        print(f"checkpoint and loss log -> {result.checkpoint_dir}")
        return 0
    except (ValidationError, TokenCollisionError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
