# This script runs the kernel size and expansion rate grid on the 4-conv SmallNet with the ablation
# protocol (CIFAR schedule plus weight decay 0.0005). For every kernel size the compact network is
# trained once, every ExpandNet variant is trained for each expansion rate and evaluated after
# compression. CK needs kernels larger than 3, those cells are reported as N/A.
# Writes one JSONL report per run, summary.jsonl and a plot of accuracy over expansion rate.
#
# Usage: python experiments/ablation_grid.py <cifar directory> [output directory]
# The cifar directory defaults to $EXPANDNET_DATA_DIR.

import json
import os
import sys
from pathlib import Path

import matplotlib.pyplot as plt  # For plotting accuracy over expansion rate

from expand_nets import (CifarFlavor, TrainConfig, VariantSpec, build_smallnet, load_cifar, run_variant,
                         summarize_results)

# ===== USER CONFIGURATION =====
seed = 0
epochs = 30
subset = 10000   # stratified train subset
flavor = CifarFlavor.CIFAR10
kernel_sizes = [3, 5, 7, 9]
expand_rates = [2, 4, 8]
milestones = (10, 20)   # CIFAR schedule (50, 100 of 150) scaled to 30 epochs
variants = ["CL", "CK"]   # add e.g. "CL+FC" or "CK+Init"
# ==============================


def main():
    data_dir = sys.argv[1] if len(sys.argv) > 1 else os.environ.get("EXPANDNET_DATA_DIR")
    if not data_dir:
        print("Usage: ablation_grid.py <cifar directory> [output directory]")
        sys.exit(2)
    out_dir = Path(sys.argv[2] if len(sys.argv) > 2 else "ablation_results")
    out_dir.mkdir(parents=True, exist_ok=True)

    train_data, eval_data = load_cifar(data_dir, flavor, subset, seed)
    cfg = TrainConfig.ablation_protocol(epochs=epochs, lr_milestones=milestones, seed=seed)
    compact = VariantSpec.parse("SmallNet")
    specs = [VariantSpec.parse(x) for x in variants]

    results = []
    for kernel_size in kernel_sizes:
        k_dir = out_dir / f"k{kernel_size}"
        k_dir.mkdir(exist_ok=True)
        result = run_variant(build_smallnet(kernel_size, flavor.num_classes, 4, seed), compact, train_data,
                             eval_data, cfg, report_dir=k_dir)
        result.extra.update(kernel_size=kernel_size, rate=None)
        results.append(result)
        for spec in specs:
            if spec.expansion.startswith("CK") and kernel_size <= 3:
                print(f"k={kernel_size} {spec.label}: N/A")
                continue
            for rate in expand_rates:
                r_dir = k_dir / f"r{rate}"
                r_dir.mkdir(exist_ok=True)
                result = run_variant(build_smallnet(kernel_size, flavor.num_classes, 4, seed), spec, train_data,
                                     eval_data, cfg, rate, report_dir=r_dir)
                result.extra.update(kernel_size=kernel_size, rate=rate)
                results.append(result)
    (out_dir / "summary.jsonl").write_text("".join(json.dumps(x.to_dict()) + "\n" for x in results), encoding="utf-8")

    # Print the grid, one row per kernel size
    print(f"{'k':>3} {'SmallNet':>9} " + " ".join(f"{s.label + ' r' + str(r):>12}" for s in specs for r in expand_rates))
    for kernel_size in kernel_sizes:
        row = {(x.variant, x.extra["rate"]): x.accuracy for x in results if x.extra["kernel_size"] == kernel_size}
        cells = [f"{row[(s.label, r)]:>12.4f}" if (s.label, r) in row else f"{'N/A':>12}"
                 for s in specs for r in expand_rates]
        print(f"{kernel_size:>3} {row[(compact.label, None)]:>9.4f} " + " ".join(cells))
    print(f"Compressed predictions agree on all eval images: {all(x.agreement in (None, 1.0) for x in results)}")
    run_counts = ", ".join(f"{label} {entry['runs']}" for label, entry in summarize_results(results).items())
    print(f"Runs per variant: {run_counts}")

    # Plot accuracy over expansion rate, one subplot per kernel size
    fig, axes = plt.subplots(1, len(kernel_sizes), figsize=(4 * len(kernel_sizes), 4), sharey=True, squeeze=False)
    for ax, kernel_size in zip(axes[0], kernel_sizes):
        runs = [x for x in results if x.extra["kernel_size"] == kernel_size]
        baseline = next(x.accuracy for x in runs if x.variant == compact.label)
        ax.axhline(baseline, color="gray", linestyle="--", label=compact.label)
        for spec in specs:
            points = [(x.extra["rate"], x.accuracy) for x in runs if x.variant == spec.label]
            if points:
                ax.plot(*zip(*points), marker="o", label=spec.label)
        ax.set_title(f"k={kernel_size}")
        ax.set_xlabel("Expansion rate")
        ax.set_xticks(expand_rates)
    axes[0][0].set_ylabel("Eval top-1 accuracy")
    axes[0][0].legend()
    fig.tight_layout()
    fig.savefig(out_dir / "ablation.png")
    plt.show()


if __name__ == "__main__":
    main()
