"""timage-trainer command line: ``train`` and ``predict`` subcommands."""

from __future__ import annotations

import argparse
import json
import sys

from .data import TrainerError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timage-trainer",
        description="Fine-tune a residual network on recurrence-image manifests.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("train", help="fine-tune on a manifest's train split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--images", required=True, help="encode output root")
    p.add_argument("--out", required=True, help="directory for checkpoint + log")
    p.add_argument("--architecture", choices=["resnet50", "resnet152"], default="resnet50")
    p.add_argument(
        "--init",
        choices=["image_corpus_pretrained", "ac_pretrained", "dataset_sep_pretrained", "random"],
        default="image_corpus_pretrained",
    )
    p.add_argument("--base-checkpoint", help="prior checkpoint for ac/dataset-sep init")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--no-class-weights", action="store_true")
    p.add_argument("--device", help="cpu or cuda (default: auto)")

    p = sub.add_parser("predict", help="write predictions CSV for the test split")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.add_argument("--scope", choices=["global", "dataset-masked"], default="global")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--device")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "train":
            from .train import TrainConfig, train

            kwargs = dict(
                manifest_path=args.manifest,
                images_root=args.images,
                output_dir=args.out,
                architecture=args.architecture,
                init=args.init,
                base_checkpoint=args.base_checkpoint,
                epochs=args.epochs,
                batch_size=args.batch_size,
                learning_rate=args.learning_rate,
                momentum=args.momentum,
                use_class_weights=not args.no_class_weights,
            )
            if args.device:
                kwargs["device"] = args.device
            result = train(TrainConfig(**kwargs))
            last = result.history[-1]
            print(f"epochs={last.epoch} loss={last.loss:.4f} train_acc={last.accuracy:.4f}")
            print(f"checkpoint: {result.checkpoint_path}")
            return 0

        from .predict import predict

        rows = predict(
            args.checkpoint,
            args.manifest,
            args.out,
            args.images,
            scope=args.scope.replace("-", "_"),
            batch_size=args.batch_size,
            device=args.device,
        )
        print(f"{len(rows)} predictions -> {args.out}")
        return 0
    except TrainerError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
