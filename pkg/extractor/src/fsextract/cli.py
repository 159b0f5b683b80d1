"""Command-line entry points: extract, corrupt, finetune."""

from __future__ import annotations

import argparse
import sys

from .backbones import FEATURE_DIMS
from .errors import ExtractError


def _add_extract(sub):
    p = sub.add_parser("extract", help="extract features/logits into an FSET1 file")
    p.add_argument("image_root", help="directory with one subdirectory per class")
    p.add_argument("-o", "--output", required=True, help="FSET1 output path")
    p.add_argument("--backbone", default="resnet18", choices=sorted(FEATURE_DIMS))
    p.add_argument("--weights", default="random-init",
                   help='"random-init", "pretrained-default", or a state_dict path')
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--split-manifest", default=None,
                   help="optional CSV of filename,split rows")
    p.add_argument("--split", default=None, help="split name to keep from the manifest")
    p.add_argument("--seed", type=int, default=0)


def _add_corrupt(sub):
    p = sub.add_parser("corrupt", help="make synthetic validation-OOD images")
    p.add_argument("in_dir")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rect-area-frac", nargs=2, type=float, default=[0.1, 0.5],
                   metavar=("LO", "HI"),
                   help="uniform range for the occluded-rectangle area fraction")
    p.add_argument("--speckle-sigma", type=float, default=0.3)


def _add_finetune(sub):
    p = sub.add_parser("finetune", help="fine-tune a backbone on an image folder")
    p.add_argument("image_root")
    p.add_argument("-o", "--output", required=True, help="state_dict output path")
    p.add_argument("--backbone", default="resnet18", choices=sorted(FEATURE_DIMS))
    p.add_argument("--weights", default="random-init")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fsextract",
        description="Image-to-feature bridge for the feature-space OOD toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_extract(sub)
    _add_corrupt(sub)
    _add_finetune(sub)
    args = parser.parse_args(argv)

    try:
        if args.command == "extract":
            from .extract import ExtractionJob, extract
            out = extract(ExtractionJob(
                image_root=args.image_root, backbone=args.backbone,
                weights=args.weights, batch_size=args.batch_size,
                output=args.output, split_manifest=args.split_manifest,
                split=args.split, seed=args.seed))
            print(f"wrote {out}")
        elif args.command == "corrupt":
            from .corrupt import corrupt
            written = corrupt(args.in_dir, args.out_dir, args.seed,
                              tuple(args.rect_area_frac), args.speckle_sigma)
            print(f"wrote {len(written)} images under {args.out_dir}")
        else:
            from .finetune import FinetuneJob, finetune
            out = finetune(FinetuneJob(
                image_root=args.image_root, backbone=args.backbone,
                weights=args.weights, epochs=args.epochs,
                batch_size=args.batch_size, learning_rate=args.learning_rate,
                output=args.output, seed=args.seed))
            print(f"wrote {out}")
    except ExtractError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
