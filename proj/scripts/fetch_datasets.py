#!/usr/bin/env python3
# Copyright 2026 The opfdist Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes data/wine.csv and data/sonar.csv for the desk-scale benchmark.

Wine comes from scikit-learn's bundled copy of the UCI file. Sonar comes from
the KEEL repository snapshot shipped inside the `keel-ds` wheel, fetched with
`pip download`.
"""

import argparse
import csv
import pathlib
import subprocess
import sys
import tempfile
import zipfile

KEEL_WHEEL = "keel-ds==0.2.5"
SONAR_MEMBER = "keel_ds/data/balanced/raw/sonar.dat"


def write_rows(path, n_features, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(n_features)] + ["label"])
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)", file=sys.stderr)


def fetch_wine(out):
    from sklearn.datasets import load_wine

    data = load_wine()
    rows = [[repr(float(v)) for v in x] + [str(int(y) + 1)] for x, y in zip(data.data, data.target)]
    write_rows(out / "wine.csv", data.data.shape[1], rows)


def parse_keel(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        fields = [t.strip() for t in line.split(",")]
        rows.append(fields)
    return rows


def fetch_sonar(out):
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--quiet", "-d", tmp, KEEL_WHEEL],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("keel_ds-*.whl"))
        with zipfile.ZipFile(wheel) as z:
            text = z.read(SONAR_MEMBER).decode("utf-8")
    rows = parse_keel(text)
    write_rows(out / "sonar.csv", len(rows[0]) - 1, rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data", type=pathlib.Path)
    ap.add_argument("--force", action="store_true", help="overwrite existing files")
    args = ap.parse_args()
    for name, fetch in (("wine.csv", fetch_wine), ("sonar.csv", fetch_sonar)):
        if (args.out / name).exists() and not args.force:
            print(f"{args.out / name} exists, skipping", file=sys.stderr)
            continue
        fetch(args.out)


if __name__ == "__main__":
    main()
