# This script runs the desk scale CIFAR comparison of SmallNet against its ExpandNet variants.
# Variants are labels like "CK", "CL+FC" or "CL+Init" ("+Init" trains the nonlinear counterpart
# first and copies its weights). Every ExpandNet is compressed before evaluation and its predictions
# are compared with the expanded model, the compressed model must agree on every eval image.
# Writes one JSONL report per run, summary.jsonl and a plot of eval accuracy per epoch.
#
# Usage: python experiments/desk_scale_trend.py <cifar directory> [output directory]
# The cifar directory defaults to $EXPANDNET_DATA_DIR.

import json
import os
import sys
from pathlib import Path

import matplotlib.pyplot as plt  # For plotting accuracy curves

from expand_nets import (CifarFlavor, TrainConfig, VariantSpec, build_smallnet, load_cifar, run_variant,
                         summarize_results)

# ===== USER CONFIGURATION =====
seeds = [0, 1, 2]
epochs = 30
subset = 10000   # stratified train subset, 1000 images per class
flavor = CifarFlavor.CIFAR10
kernel_size = 7
expand_rate = 4
milestones = (10, 20)   # CIFAR schedule (50, 100 of 150) scaled to 30 epochs
# first entry is the reference, each following variant is compared with it
variants = ["SmallNet", "CK", "CL", "CL+Init"]
# full variant sweep:
# variants = ["SmallNet", "FC", "CL", "CL+FC", "CL+FC+Init", "CK", "CK+FC", "CK+FC+Init"]
counterpart_slope = None   # None for ReLU, e.g. 0.1 for LeakyReLU
# ==============================


def main():
    data_dir = sys.argv[1] if len(sys.argv) > 1 else os.environ.get("EXPANDNET_DATA_DIR")
    if not data_dir:
        print("Usage: desk_scale_trend.py <cifar directory> [output directory]")
        sys.exit(2)
    out_dir = Path(sys.argv[2] if len(sys.argv) > 2 else "desk_scale_results")
    out_dir.mkdir(parents=True, exist_ok=True)
    specs = [VariantSpec.parse(x) for x in variants]

    results = []
    for seed in seeds:
        train_data, eval_data = load_cifar(data_dir, flavor, subset, seed)
        cfg = TrainConfig.cifar_protocol(epochs=epochs, lr_milestones=milestones, seed=seed)
        for spec in specs:
            base = build_smallnet(kernel_size, flavor.num_classes, seed=seed)
            results.append(run_variant(base, spec, train_data, eval_data, cfg, expand_rate, counterpart_slope, out_dir))
    (out_dir / "summary.jsonl").write_text("".join(json.dumps(x.to_dict()) + "\n" for x in results), encoding="utf-8")

    summary = summarize_results(results)
    reference = specs[0].label
    for label, entry in summary.items():
        print(f"{label}: mean top-1 {entry['mean']:.4f} +- {entry['std']:.4f} over {entry['runs']} seeds")
    for label, entry in list(summary.items())[1:]:
        delta = entry["mean"] - summary[reference]["mean"]
        print(f"{label} - {reference}: {100 * delta:+.2f}pp (trend holds if >= -0.5pp)")
    for x in results:
        if x.counterpart_accuracy is not None:
            print(f"{x.variant} seed {x.seed}: counterpart top-1 {x.counterpart_accuracy:.4f}")
    print(f"Compressed predictions agree on all eval images: {all(x.agreement in (None, 1.0) for x in results)}")

    # Plot eval accuracy per epoch, one color per variant
    fig, ax = plt.subplots(figsize=(8, 5))
    colors = dict(zip(summary, plt.rcParams["axes.prop_cycle"].by_key()["color"] * 2))
    for x in results:
        ax.plot(range(1, epochs + 1), x.curve, color=colors[x.variant], alpha=0.7,
                label=x.variant if x.seed == seeds[0] else None)
    ax.set_xlabel("Epoch")
    ax.set_ylabel("Eval top-1 accuracy")
    ax.set_title(f"SmallNet-{kernel_size}x{kernel_size} variants, r={expand_rate}, {subset} images")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_dir / "accuracy.png")
    plt.show()


if __name__ == "__main__":
    main()
