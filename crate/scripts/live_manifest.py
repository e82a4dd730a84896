#!/usr/bin/env python3
"""Build a persim manifest from a LIVE release 2 directory.

Expects dmos.mat, refnames_all.mat, refimgs/ and the five distortion folders
(jp2k, jpeg, wn, gblur, fastfading) holding img1.bmp ... imgN.bmp. Rows flagged
as originals are dropped, leaving 779 pairs.
"""

import argparse
import csv
import os
import sys

import numpy as np
from scipy.io import loadmat

FOLDERS = [("jp2k", 227, "Jp2k"), ("jpeg", 233, "Jpeg"), ("wn", 174, "Wn"), ("gblur", 174, "Gblur"), ("fastfading", 174, "FF")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("root", help="LIVE release 2 directory")
    ap.add_argument("--out", default="live.csv", help="manifest to write")
    args = ap.parse_args()

    mat = loadmat(os.path.join(args.root, "dmos.mat"))
    dmos = np.ravel(mat["dmos"])
    orgs = np.ravel(mat["orgs"])
    refs = [str(np.ravel(r)[0]) for r in np.ravel(loadmat(os.path.join(args.root, "refnames_all.mat"))["refnames_all"])]
    if not (len(dmos) == len(orgs) == len(refs) == sum(n for _, n, _ in FOLDERS)):
        sys.exit("dmos.mat and refnames_all.mat disagree with the folder layout")

    base = os.path.dirname(os.path.abspath(args.out))
    rel = lambda *p: os.path.relpath(os.path.join(args.root, *p), base)
    rows, k = [], 0
    for folder, count, label in FOLDERS:
        for i in range(count):
            if not orgs[k]:
                rows.append([rel("refimgs", refs[k]), rel(folder, f"img{i + 1}.bmp"), repr(float(dmos[k])), folder, label])
            k += 1

    os.makedirs(base, exist_ok=True)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["ref", "dist", "score", "distortion", "category"])
        w.writerows(rows)
    print(f"{len(rows)} pairs -> {args.out} (evaluate with --convention dmos)")


if __name__ == "__main__":
    main()
