#!/usr/bin/env python3
"""
Write the UCI datasets bundled with scikit-learn as varsmooth dataset CSVs.

Each dataset gets a CSV (features plus a "label" column) and a manifest
naming the label column and the cluster count. No network access is needed.
"""

import argparse
import sys
from pathlib import Path

from sklearn.datasets import load_breast_cancer, load_iris, load_wine

sys.path.insert(0, str(Path(__file__).parent.parent))

from varsmooth.bench.io import write_dataset  # noqa: E402
from varsmooth.bench.ssc import Dataset  # noqa: E402

LOADERS = {
    "iris": load_iris,
    "wine": load_wine,
    "breast_cancer": load_breast_cancer,
}


def main() -> int:
    parser = argparse.ArgumentParser(description="Export bundled UCI datasets")
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).parent.parent / "data" / "datasets",
        help="output directory",
    )
    parser.add_argument("--only", choices=sorted(LOADERS), action="append", help="restrict to a dataset (repeatable)")
    args = parser.parse_args()

    for name in args.only or sorted(LOADERS):
        bunch = LOADERS[name]()
        K = len(bunch.target_names)
        dataset = Dataset(bunch.data, bunch.target, K, name)
        path = write_dataset(args.out / f"{name}.csv", dataset)
        print(f"{name}: {dataset.N} points, {bunch.data.shape[1]} features, K={K} -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
