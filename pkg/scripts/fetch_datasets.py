#!/usr/bin/env python3
"""Write the canonical UCI benchmark files into a data directory.

The library itself never touches the network; this script is the separate
acquisition step. For each dataset it first tries the UCI archive. When the
archive is unreachable it falls back to copies redistributed on PyPI:

* haberman.data                  <- KEEL ``haberman.dat`` (package ``keel-ds``).
  KEEL stores the same 306 rows in a different order and spells the status
  as ``negative``/``positive``; these map back to the UCI codes 1/2.
* breast-cancer-wisconsin.data   <- R MASS ``biopsy`` (package ``pydataset``).
  Same 699 rows in the original order; ``NA`` becomes ``?`` and
  ``benign``/``malignant`` become 2/4.
* seeds_dataset.txt              <- UCI only; no offline fallback is known.

Usage::

    python scripts/fetch_datasets.py [--out DIR]
"""

import argparse
import csv
import io
import logging
import subprocess
import sys
import tarfile
import tempfile
import urllib.request
import zipfile
from pathlib import Path

log = logging.getLogger("fetch_datasets")

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
SOURCES = {
    "haberman.data": f"{UCI}/haberman/haberman.data",
    "breast-cancer-wisconsin.data": f"{UCI}/breast-cancer-wisconsin/breast-cancer-wisconsin.data",
    "seeds_dataset.txt": "https://archive.ics.uci.edu/ml/machine-learning-databases/00236/seeds_dataset.txt",
}


def _fetch_url(url, timeout=20):
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read().decode("utf-8")


def _pip_download(package, dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", package, "-d", str(dest)],
        check=True,
    )
    return next(Path(dest).iterdir())


def _haberman_from_keel(tmp):
    wheel = _pip_download("keel-ds==0.2.5", tmp)
    raw = zipfile.ZipFile(wheel).read("keel_ds/data/imbalanced/raw/haberman.dat").decode()
    status = {"negative": "1", "positive": "2"}
    out = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        age, year, nodes, cls = (f.strip() for f in line.split(","))
        out.append(f"{age},{year},{nodes},{status[cls]}")
    return "\n".join(out) + "\n"


def _wisconsin_from_mass(tmp):
    sdist = _pip_download("pydataset==0.2.0", tmp)
    with tarfile.open(sdist) as outer:
        member = next(m for m in outer.getmembers() if m.name.endswith("resources.tar.gz"))
        inner_bytes = outer.extractfile(member).read()
    with tarfile.open(fileobj=io.BytesIO(inner_bytes)) as inner:
        text = inner.extractfile("resources/rdata/csv/MASS/biopsy.csv").read().decode()
    klass = {"benign": "2", "malignant": "4"}
    out = []
    for row in list(csv.reader(io.StringIO(text)))[1:]:
        _, ident, *features, cls = row
        features = ["?" if f == "NA" else f for f in features]
        out.append(",".join([ident, *features, klass[cls]]))
    return "\n".join(out) + "\n"


FALLBACKS = {
    "haberman.data": _haberman_from_keel,
    "breast-cancer-wisconsin.data": _wisconsin_from_mass,
}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src" / "qfdt" / "datasets")
    parser.add_argument("--offline-only", action="store_true", help="skip the UCI archive")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args.out.mkdir(parents=True, exist_ok=True)

    missing = []
    for name, url in SOURCES.items():
        text = None
        if not args.offline_only:
            try:
                text = _fetch_url(url)
                log.info("%s: downloaded from UCI", name)
            except OSError as exc:
                log.info("%s: UCI unreachable (%s)", name, exc)
        if text is None and name in FALLBACKS:
            with tempfile.TemporaryDirectory() as tmp:
                text = FALLBACKS[name](tmp)
            log.info("%s: rebuilt from PyPI redistribution", name)
        if text is None:
            missing.append(name)
            continue
        (args.out / name).write_text(text, encoding="utf-8")

    if missing:
        log.warning("not written: %s", ", ".join(missing))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
