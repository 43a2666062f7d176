#!/usr/bin/env python3
"""
Compare a benchmark summary CSV against the published reference values.

This script:
1. Loads data/reference_tables.json
2. Loads a summary.csv written by `varsmooth spca` or `varsmooth ssc`
3. Matches rows by (algorithm, N, p) or (dataset, method)
4. Reports relative deviations per metric
5. Optionally saves the comparison as JSON
"""

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

REFERENCE_PATH = Path(__file__).parent.parent / "data" / "reference_tables.json"


def load_reference(path: Path, experiment: str) -> List[Dict[str, Any]]:
    """Load the reference rows of one experiment."""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return data[experiment]["rows"]


def load_summary(path: Path) -> List[Dict[str, str]]:
    """Load a summary CSV."""
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def row_key(row: Dict[str, Any], experiment: str, dataset: Optional[str]) -> Tuple:
    """Key used to match summary rows with reference rows."""
    if experiment == "spca":
        return (str(row["algorithm"]), int(row["N"]), int(row["p"]))
    return (dataset if dataset is not None else row.get("dataset"), str(row["method"]))


def compare_rows(
    summary: List[Dict[str, str]],
    reference: List[Dict[str, Any]],
    experiment: str,
    metrics: List[str],
    dataset: Optional[str] = None,
) -> List[Dict[str, Any]]:
    """Relative deviation |observed - reference| / |reference| for every matched row.

    Returns:
        One entry per matched summary row
    """
    by_key = {row_key(r, experiment, r.get("dataset")): r for r in reference}
    results = []
    for row in summary:
        key = row_key(row, experiment, dataset)
        ref = by_key.get(key)
        if ref is None:
            continue
        deviations = {}
        for metric in metrics:
            if metric not in row or row[metric] == "":
                continue
            observed = float(row[metric])
            expected = float(ref[metric])
            deviations[metric] = {
                "observed": observed,
                "reference": expected,
                "relative_deviation": abs(observed - expected) / abs(expected) if expected else abs(observed),
            }
        results.append({"key": list(key), "deviations": deviations})
    return results


def generate_report(results: List[Dict[str, Any]], tolerance: float, output_file: Optional[Path] = None) -> bool:
    """Print the comparison and return whether every deviation is within tolerance."""
    print("\n" + "=" * 70)
    print("REFERENCE COMPARISON")
    print("=" * 70)

    within = True
    for entry in results:
        print(f"\n  {' / '.join(str(k) for k in entry['key'])}")
        for metric, d in entry["deviations"].items():
            ok = d["relative_deviation"] <= tolerance
            within &= ok
            mark = "ok " if ok else "DEV"
            print(
                f"    [{mark}] {metric:<10} observed {d['observed']:.5e}  reference {d['reference']:.5e}"
                f"  rel. dev. {d['relative_deviation']:.3e}"
            )

    print(f"\n{'=' * 70}")
    if not results:
        print("No summary rows matched the reference table")
    elif within:
        print(f"All matched values within relative tolerance {tolerance:g}")
    else:
        print(f"Some values deviate by more than {tolerance:g} (reference values are soft targets)")
    print("=" * 70)

    if output_file:
        with open(output_file, "w", encoding="utf-8") as f:
            json.dump({"tolerance": tolerance, "results": results}, f, indent=2)
        print(f"\nDetailed comparison saved to: {output_file}")
    return within and bool(results)


def main() -> int:
    """Main comparison function."""
    parser = argparse.ArgumentParser(description="Compare a summary CSV with published reference values")
    parser.add_argument("summary", type=Path, help="summary.csv of a benchmark run")
    parser.add_argument("--experiment", choices=["spca", "ssc"], default="spca")
    parser.add_argument("--dataset", help="dataset name for ssc summaries (e.g. iris)")
    parser.add_argument("--reference", type=Path, default=REFERENCE_PATH, help="reference tables JSON")
    parser.add_argument("--metrics", nargs="+", help="metrics to compare (default: fval sparsity / NMI_mean ARI_mean)")
    parser.add_argument("--tolerance", type=float, default=0.02, help="relative tolerance")
    parser.add_argument("--output", type=Path, help="Path to save the comparison JSON")
    args = parser.parse_args()

    if args.experiment == "ssc" and args.dataset is None:
        parser.error("--dataset is required for ssc summaries")
    metrics = args.metrics or (["fval", "sparsity"] if args.experiment == "spca" else ["NMI_mean", "ARI_mean"])

    print(f"Loading reference from: {args.reference}")
    reference = load_reference(args.reference, args.experiment)
    print(f"Loading summary from: {args.summary}")
    summary = load_summary(args.summary)

    results = compare_rows(summary, reference, args.experiment, metrics, args.dataset)
    return 0 if generate_report(results, args.tolerance, args.output) else 1


if __name__ == "__main__":
    sys.exit(main())
