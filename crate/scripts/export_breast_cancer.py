"""Write the Wisconsin diagnostic breast cancer data bundled with
scikit-learn as a CSV with a header and a trailing 0/1 label column
(1 = malignant)."""

import csv
import sys

from sklearn.datasets import load_breast_cancer


def main(path):
    data = load_breast_cancer()
    names = [n.replace(" ", "_") for n in data.feature_names]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(names + ["malignant"])
        for row, target in zip(data.data, data.target):
            # sklearn encodes benign as 1.
            w.writerow([repr(float(v)) for v in row] + [1 - int(target)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/breast_cancer.csv")
