"""Command-line entry points.

Five subcommands: ``decompose`` splits one image into low/high
frequency parts, ``augment`` runs a batch augmentation mode over an
image folder, ``metrics-mce`` and ``metrics-auroc`` score prediction
and detector outputs, and ``toy-train`` runs the synthetic shortcut
experiment.

Exit codes: 0 on success, 2 for usage errors, 1 for anything else
(unreadable inputs, malformed files, failed invariants).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .hybrid import MODES, AugmentConfig, augment_batch, LabeledBatch, make_rng
from .metrics import (
    CORRUPTIONS,
    SEVERITIES,
    CorruptionErrorTable,
    MetricsError,
    MissingDataError,
    ScoreSet,
    auroc,
    corruption_error,
    mce,
)
from .spectral import decompose, gaussian_kernel
from .toytrain import TrainingDivergedError, run_experiment

IMAGE_SUFFIXES = (".png", ".hat")
AUG_PREFIX = "aug_"


def _odd_positive_int(text: str) -> int:
    value = int(text)
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"must be an odd positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqaug",
        description="Frequency-spectrum image augmentation and robustness metrics.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("decompose", help="split an image into low/high frequency parts")
    p.add_argument("--input", required=True, help="input image (.png or .hat)")
    p.add_argument("--out-lf", required=True, help="output path for the low-frequency part")
    p.add_argument("--out-hf", required=True, help="output path for the high-frequency part")
    p.add_argument("--kernel-size", type=_odd_positive_int, default=3)
    p.add_argument("--sigma", type=_positive_float, default=0.5)
    p.set_defaults(run=cmd_decompose)

    p = commands.add_parser("augment", help="augment an image folder")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--input-dir", required=True)
    p.add_argument("--labels", required=True, help="CSV mapping image_id to label")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--seed", type=_non_negative_int, default=0)
    p.add_argument("--batch-size", type=_positive_int, default=128)
    p.add_argument("--kernel-size", type=_odd_positive_int, default=3)
    p.add_argument("--sigma", type=_positive_float, default=0.5)
    p.add_argument("--p-paired", type=_probability, default=0.6)
    p.add_argument("--p-single", type=_probability, default=0.5)
    p.add_argument("--p-inner-apr", type=_probability, default=0.6)
    p.set_defaults(run=cmd_augment)

    p = commands.add_parser("metrics-mce", help="mean corruption error from prediction CSVs")
    p.add_argument("--pred-dir", required=True, help="directory of <corruption>_<severity>.csv files")
    p.add_argument("--truth", required=True, help="CSV mapping image_id to label")
    p.add_argument("--reference", required=True, help="reference error table CSV")
    p.add_argument("--report", help="optional JSON report path")
    p.set_defaults(run=cmd_metrics_mce)

    p = commands.add_parser("metrics-auroc", help="rank separability of two score lists")
    p.add_argument("--id-scores", required=True, help="CSV of in-distribution scores")
    p.add_argument("--ood-scores", required=True, help="CSV of out-of-distribution scores")
    p.set_defaults(run=cmd_metrics_auroc)

    p = commands.add_parser("toy-train", help="run the synthetic shortcut experiment")
    p.add_argument("--augment", default="ha_p", choices=("none", "ha_p", "ha_pp_p"))
    p.add_argument("--seeds", type=_positive_int, default=5, help="number of seeds (0..n-1)")
    p.add_argument("--report", help="optional JSON report path")
    p.add_argument("--epochs", type=_positive_int, default=60)
    p.add_argument("--n-train", type=_positive_int, default=512)
    p.add_argument("--n-test", type=_positive_int, default=512)
    p.set_defaults(run=cmd_toy_train)

    return parser


def cmd_decompose(args: argparse.Namespace) -> int:
    image = fio.load_image(args.input)
    kernel = gaussian_kernel(args.kernel_size, args.sigma)
    parts = decompose(image, kernel)
    fio.save_image(parts.lf, args.out_lf)
    # Residuals are signed; recenter them for quantized output.
    hf_offset = 0.5 if Path(args.out_hf).suffix.lower() == ".png" else 0.0
    fio.save_image(parts.hf, args.out_hf, offset=hf_offset)
    norm = float(np.linalg.norm(parts.hf.astype(np.float64)))
    print(f"hf_l2={norm:.8g}")
    return 0


def _collect_images(input_dir: Path) -> list[Path]:
    files = sorted(
        p for p in input_dir.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
    if not files:
        raise fio.FormatError(f"{input_dir}: no .png or .hat images found")
    return files


def cmd_augment(args: argparse.Namespace) -> int:
    config = AugmentConfig(
        kernel_size=args.kernel_size,
        sigma=args.sigma,
        p_paired=args.p_paired,
        p_single=args.p_single,
        p_inner_apr=args.p_inner_apr,
        seed=args.seed,
    )
    input_dir = Path(args.input_dir)
    output_dir = Path(args.output_dir)
    files = _collect_images(input_dir)
    labels_by_id = fio.load_label_csv(args.labels)

    images = []
    labels = []
    for path in files:
        image_id = path.stem
        if image_id not in labels_by_id:
            raise fio.FormatError(f"{args.labels}: no label for image {image_id!r}")
        images.append(fio.load_image(path))
        labels.append(labels_by_id[image_id])
    shapes = {img.shape for img in images}
    if len(shapes) > 1:
        raise ValueError(f"images must share one shape, found {sorted(shapes)}")

    output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    out_labels: dict[str, int] = {}
    try:
        n_batches = (len(files) + args.batch_size - 1) // args.batch_size
        for b in range(n_batches):
            chunk = slice(b * args.batch_size, (b + 1) * args.batch_size)
            batch = LabeledBatch(images=np.stack(images[chunk]), labels=labels[chunk])
            rng = make_rng(args.seed, b)
            augmented = augment_batch(batch, args.mode, config, rng)
            for i, path in enumerate(files[chunk]):
                out_path = output_dir / f"{AUG_PREFIX}{path.name}"
                fio.save_image(augmented.images[i], out_path)
                written.append(out_path)
                out_labels[f"{AUG_PREFIX}{path.stem}"] = int(augmented.labels[i])
            print(f"batch {b + 1}/{n_batches}: {len(batch)} images")
        labels_path = output_dir / "labels.csv"
        fio.save_label_csv(out_labels, labels_path)
        written.append(labels_path)
    except BaseException:
        for path in written:
            try:
                path.unlink()
            except FileNotFoundError:
                pass
        raise
    print(f"wrote {len(written) - 1} images to {output_dir}")
    return 0


def cmd_metrics_mce(args: argparse.Namespace) -> int:
    pred_dir = Path(args.pred_dir)
    truth = fio.load_label_csv(args.truth)
    reference = fio.load_error_table(args.reference)

    missing = [
        f"{corruption}_{severity}.csv"
        for corruption in CORRUPTIONS
        for severity in SEVERITIES
        if not (pred_dir / f"{corruption}_{severity}.csv").is_file()
    ]
    if missing:
        raise MissingDataError(f"{pred_dir}: missing prediction files: {', '.join(missing)}")

    entries: dict[tuple[str, int], float] = {}
    for corruption in CORRUPTIONS:
        for severity in SEVERITIES:
            records = fio.load_predictions(pred_dir / f"{corruption}_{severity}.csv")
            wrong = 0
            for record in records:
                if record.image_id not in truth:
                    raise fio.FormatError(
                        f"{args.truth}: no label for image {record.image_id!r}"
                    )
                if record.true_label != truth[record.image_id]:
                    raise fio.FormatError(
                        f"{corruption}_{severity}.csv: true_label for {record.image_id!r} "
                        f"disagrees with {args.truth}"
                    )
                wrong += record.pred_label != record.true_label
            entries[(corruption, severity)] = wrong / len(records)

    model = CorruptionErrorTable(entries=entries)
    ratios = {name: corruption_error(model, reference, name) for name in CORRUPTIONS}
    mean_ce = mce(model, reference)
    for name in CORRUPTIONS:
        print(f"{name}: {ratios[name] * 100.0:.1f}")
    print(f"mCE: {mean_ce * 100.0:.1f}")
    if args.report:
        payload = {"corruption_errors": ratios, "mce": mean_ce}
        fio.atomic_write_bytes(args.report, (json.dumps(payload, indent=2) + "\n").encode())
    return 0


def cmd_metrics_auroc(args: argparse.Namespace) -> int:
    scores = ScoreSet(
        in_distribution=fio.load_scores(args.id_scores),
        out_of_distribution=fio.load_scores(args.ood_scores),
    )
    print(f"AUROC: {auroc(scores) * 100.0:.1f}")
    return 0


def cmd_toy_train(args: argparse.Namespace) -> int:
    per_seed = []
    for seed in range(args.seeds):
        result = run_experiment(
            seed,
            augment_mode=args.augment,
            n_train=args.n_train,
            n_test=args.n_test,
            epochs=args.epochs,
        )
        per_seed.append(result)
        line = (
            f"seed {seed}: baseline clean={result['clean_acc_baseline']:.4f} "
            f"shifted={result['shifted_acc_baseline']:.4f}"
        )
        if args.augment != "none":
            line += (
                f" | {args.augment} clean={result['clean_acc_augmented']:.4f} "
                f"shifted={result['shifted_acc_augmented']:.4f}"
            )
        print(line)

    summary_keys = ["clean_acc_baseline", "shifted_acc_baseline"]
    if args.augment != "none":
        summary_keys += ["clean_acc_augmented", "shifted_acc_augmented"]
    means = {key: float(np.mean([r[key] for r in per_seed])) for key in summary_keys}
    for key in summary_keys:
        print(f"mean_{key}: {means[key]:.4f}")
    if args.augment != "none":
        gap = means["shifted_acc_augmented"] - means["shifted_acc_baseline"]
        print(f"mean_shifted_gap: {gap:.4f}")
    if args.report:
        payload = {"augment_mode": args.augment, "per_seed": per_seed, "mean": means}
        fio.atomic_write_bytes(args.report, (json.dumps(payload, indent=2) + "\n").encode())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (OSError, ValueError, MetricsError, TrainingDivergedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
