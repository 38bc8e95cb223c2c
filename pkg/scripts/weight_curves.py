"""Per-frame weights of every scheme around a single gap, as CSV on stdout.

    python scripts/weight_curves.py --gap-ms 35 > weights.csv
"""

import argparse
import csv
import sys

import numpy as np

from gapfill.frame import GaborParams, build_tight_frame
from gapfill.gaps import GapSpec, reliable_mask
from gapfill.weights import compute_weights

SCHEMES = ("supp", "abs", "norm", "energy")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gap-ms", type=float, default=35.0)
    ap.add_argument("--rate", type=int, default=44100)
    ap.add_argument("--window", type=int, default=2800)
    ap.add_argument("--hop", type=int, default=700)
    args = ap.parse_args()

    L = 34 * args.window
    L -= L % args.hop
    h = int(round(args.gap_ms * args.rate / 1000))
    gap = GapSpec.from_length(L // 2 - h // 2, h)
    frame = build_tight_frame(GaborParams(args.window, args.hop, args.window, L))
    mask = reliable_mask(L, [gap])
    w = {s: compute_weights(frame, mask, s).values[:, 0] for s in SCHEMES}

    touching = [k for k, sup in enumerate(frame.frame_support) if not mask[sup].all()]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(("frame", "centre_minus_gap_centre") + SCHEMES)
    for k in range(touching[0] - 1, touching[-1] + 2):
        out.writerow([k, k * args.hop - (gap.center - 1)] + [f"{w[s][k]:.6f}" for s in SCHEMES])
    print("# variance over all frames: " + ", ".join(
        f"{s}={np.var(w[s]):.5f}" for s in SCHEMES), file=sys.stderr)


if __name__ == "__main__":
    main()
