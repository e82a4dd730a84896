#!/usr/bin/env python3
"""Build a persim manifest from a TID2013 directory.

Reads mos_with_names.txt ("<mos> <file>" per line) and resolves files under
distorted_images/ and reference_images/ case-insensitively. The category is
the distortion code (d01 ... d24). With --groups, a JSON object mapping group
names to lists of distortion numbers adds those groups, separated by ';'.
"""

import argparse
import csv
import json
import os
import sys


def index(folder):
    return {name.lower(): name for name in os.listdir(folder)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("root", help="TID2013 directory")
    ap.add_argument("--out", default="tid2013.csv", help="manifest to write")
    ap.add_argument("--groups", help="JSON file: {\"Noise\": [1, 2, ...], ...}")
    args = ap.parse_args()

    groups = {}
    if args.groups:
        with open(args.groups) as f:
            groups = {name: {int(d) for d in ds} for name, ds in json.load(f).items()}

    dist_dir = os.path.join(args.root, "distorted_images")
    ref_dir = os.path.join(args.root, "reference_images")
    dists, refs = index(dist_dir), index(ref_dir)
    base = os.path.dirname(os.path.abspath(args.out))

    rows = []
    with open(os.path.join(args.root, "mos_with_names.txt")) as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            mos, name = parts[0], parts[1]
            image, dtype, _level = name.lower().rsplit(".", 1)[0].split("_")
            ref = refs.get(f"{image}.bmp")
            dist = dists.get(name.lower())
            if ref is None or dist is None:
                sys.exit(f"missing file for {name}")
            d = int(dtype)
            cats = [f"d{d:02d}"] + [g for g, ds in groups.items() if d in ds]
            rows.append([
                os.path.relpath(os.path.join(ref_dir, ref), base),
                os.path.relpath(os.path.join(dist_dir, dist), base),
                mos,
                f"d{d:02d}",
                ";".join(cats),
            ])

    os.makedirs(base, exist_ok=True)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["ref", "dist", "score", "distortion", "category"])
        w.writerows(rows)
    print(f"{len(rows)} pairs -> {args.out}")


if __name__ == "__main__":
    main()
