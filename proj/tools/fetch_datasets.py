#!/usr/bin/env python3
"""Export the Iris and Wine benchmark datasets as CSV (features..., label).

Both datasets ship inside scikit-learn, so no network access is needed.
Glass is not bundled there; see README.md for where to get it.
"""
import csv
import pathlib
import sys


def export(out_dir: pathlib.Path) -> int:
    try:
        from sklearn import datasets
    except ImportError:
        print("scikit-learn is not installed; cannot export datasets", file=sys.stderr)
        return 1
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, loader in (("iris", datasets.load_iris), ("wine", datasets.load_wine)):
        bunch = loader()
        path = out_dir / f"{name}.csv"
        with path.open("w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow([c.replace(" ", "_").replace("(", "").replace(")", "") for c in bunch.feature_names]
                       + ["label"])
            for row, label in zip(bunch.data, bunch.target):
                w.writerow([repr(float(v)) for v in row] + [int(label)])
        print(f"wrote {path} ({len(bunch.target)} rows)")
    return 0


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    sys.exit(export(target))
