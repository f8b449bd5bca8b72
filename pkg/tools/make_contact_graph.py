"""Generate the bundled desk-scale weighted contact graph.

Deterministic construction of datasets/contact-1000.tsv: 1000 nodes on a
heavy ring (weights 900-1100) with 500 additional heavy chords, overlaid
with 6000 light weight-1 contacts. The heavy core carries the
percolation threshold, so MDL and disparity backbones that keep the heavy
edges preserve p_c while dropping roughly two thirds of the edges.
"""

import os

import numpy as np

N = 1000
N_CHORDS = 500
N_LIGHT = 6000
SEED = 20260823


def build_edges():
    rng = np.random.default_rng(SEED)
    seen = set()
    edges = []

    def add(i, j, w):
        if i == j:
            return False
        key = (min(i, j), max(i, j))
        if key in seen:
            return False
        seen.add(key)
        edges.append((key[0], key[1], w))
        return True

    for i in range(N):
        add(i, (i + 1) % N, int(rng.integers(900, 1101)))
    added = 0
    while added < N_CHORDS:
        i, j = rng.integers(0, N, size=2)
        if add(int(i), int(j), int(rng.integers(900, 1101))):
            added += 1
    added = 0
    while added < N_LIGHT:
        i, j = rng.integers(0, N, size=2)
        if add(int(i), int(j), 1):
            added += 1
    return edges


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "datasets", "contact-1000.tsv")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    edges = build_edges()
    with open(out, "w") as fh:
        for i, j, w in edges:
            fh.write(f"n{i:04d}\tn{j:04d}\t{w}\n")
    print(f"wrote {len(edges)} edges to {out}")


if __name__ == "__main__":
    main()
