"""CLI: fine-tune a transformer encoder, export probability TSVs."""

from __future__ import annotations

import argparse
import sys

from .export import export_probabilities
from .training import FineTuneSpec, fine_tune


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transformer-adapter",
        description="Fine-tune transformer encoders with a sigmoid head on "
        "tweet corpora and export probabilities for ensemble fusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fine-tune", help="train encoder + sigmoid head")
    p.add_argument("corpus", help="labeled corpus TSV")
    p.add_argument("--model-id", required=True,
                   help="hub name or local checkpoint path")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=3e-5)
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--max-length", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fine_tune)

    p = sub.add_parser("export", help="write id<TAB>probability TSV")
    p.add_argument("checkpoint")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--batch-size", type=int, default=32)
    p.set_defaults(func=_cmd_export)
    return parser


def _cmd_fine_tune(args) -> int:
    spec = FineTuneSpec(
        model_id=args.model_id,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        max_length=args.max_length,
        seed=args.seed,
    )
    out = fine_tune(args.corpus, spec, args.out_dir)
    print(f"checkpoint written to {out}")
    return 0


def _cmd_export(args) -> int:
    export_probabilities(
        args.checkpoint,
        args.corpus,
        args.out,
        labeled=not args.unlabeled,
        batch_size=args.batch_size,
    )
    print(f"predictions written to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
