"""CSV and JSON readers/writers for datasets, instances and result rows."""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from varsmooth.bench.spca import SpcaInstance
from varsmooth.bench.ssc import Dataset
from varsmooth.core.errors import DatasetParseError, ResultWriteError
from varsmooth.core.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def ensure_dir(path: PathLike) -> Path:
    """Create an output directory or raise ResultWriteError."""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    if not path.is_dir():
        raise ResultWriteError(str(path), "not a directory")
    return path


def write_rows(path: PathLike, rows: Sequence[BaseModel], columns: List[str]) -> Path:
    """Write pydantic rows (dumped by alias) to CSV in the given column order."""
    path = Path(path)
    ensure_dir(path.parent)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for row in rows:
                data = row.model_dump(by_alias=True)
                writer.writerow({k: "" if data.get(k) is None else data[k] for k in columns})
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    return path


def write_json(path: PathLike, obj: Dict[str, Any]) -> Path:
    path = Path(path)
    ensure_dir(path.parent)
    try:
        path.write_text(json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    return path


def write_labels(path: PathLike, labels: np.ndarray) -> Path:
    """One row per point: index,label."""
    path = Path(path)
    ensure_dir(path.parent)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["index", "label"])
            writer.writerows([i, int(label)] for i, label in enumerate(labels))
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    return path


def manifest_path(path: PathLike) -> Path:
    """Dataset manifest location: data.csv -> data.manifest.json."""
    path = Path(path)
    return path.with_name(path.stem + ".manifest.json")


def read_dataset(path: PathLike, label_column: Optional[str] = None, K: Optional[int] = None) -> Dataset:
    """Read a dataset CSV, taking the label column and K from its manifest when present.

    Args:
        path: CSV with a header row, numeric feature columns and an optional integer label column
        label_column: Overrides the manifest's label column
        K: Overrides the cluster count (default: number of distinct labels)

    Returns:
        Dataset with labels remapped to 0..K-1 in sorted order of the raw labels
    """
    path = Path(path)
    manifest = manifest_path(path)
    if manifest.exists():
        meta = json.loads(manifest.read_text(encoding="utf-8"))
        label_column = label_column or meta.get("label_column")
        K = K or meta.get("K")

    try:
        with path.open(newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise DatasetParseError(str(path), 0, str(e)) from e
    if not rows:
        raise DatasetParseError(str(path), 1, "missing header row")

    header = [name.strip() for name in rows[0]]
    if label_column is not None and label_column not in header:
        raise DatasetParseError(str(path), 1, f"label column '{label_column}' not in header")
    label_index = header.index(label_column) if label_column is not None else None

    features: List[List[float]] = []
    raw_labels: List[int] = []
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DatasetParseError(str(path), line, f"expected {len(header)} fields, found {len(row)}")
        try:
            if label_index is not None:
                label_text = row[label_index].strip()
                label = float(label_text)
                if label != int(label):
                    raise ValueError(f"non-integer label {label_text!r}")
                raw_labels.append(int(label))
            features.append([float(cell) for i, cell in enumerate(row) if i != label_index])
        except ValueError as e:
            raise DatasetParseError(str(path), line, str(e)) from e

    if not features:
        raise DatasetParseError(str(path), len(rows), "no data rows")

    labels = None
    if label_index is not None:
        classes, labels = np.unique(np.array(raw_labels), return_inverse=True)
        K = K or int(classes.size)
    if K is None:
        raise DatasetParseError(str(path), 1, "cluster count unknown: no label column and no K")

    logger.info("Dataset loaded", path=str(path), N=len(features), K=K, labeled=labels is not None)
    return Dataset(np.array(features), labels, int(K), path.stem)


def write_dataset(path: PathLike, dataset: Dataset, label_column: str = "label") -> Path:
    """Write a dataset CSV and its manifest."""
    path = Path(path)
    ensure_dir(path.parent)
    columns = [f"x{i}" for i in range(dataset.points.shape[1])]
    header = columns + ([label_column] if dataset.labels is not None else [])
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for i, point in enumerate(dataset.points):
                row: List[Any] = [repr(float(x)) for x in point]
                if dataset.labels is not None:
                    row.append(int(dataset.labels[i]))
                writer.writerow(row)
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    meta = {"label_column": label_column if dataset.labels is not None else None, "K": dataset.K, "name": dataset.name}
    write_json(manifest_path(path), meta)
    return path


def save_instance(path: PathLike, instance: SpcaInstance) -> Path:
    """Row-major CSV of Xi, full double precision."""
    path = Path(path)
    ensure_dir(path.parent)
    try:
        np.savetxt(path, instance.Xi, delimiter=",", fmt="%.17g")
    except OSError as e:
        raise ResultWriteError(str(path), str(e)) from e
    return path


def load_instance(path: PathLike, lam: float, p: int) -> SpcaInstance:
    """Inverse of `save_instance`."""
    try:
        Xi = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as e:
        raise DatasetParseError(str(path), 0, str(e)) from e
    return SpcaInstance(Xi, lam, p)
