"""Gap SNR against solver tolerance for both l1 models on the sinusoid.

Tight tolerances take minutes; pass --tolerances to trim the sweep.

    python scripts/convergence.py --tolerances 1e-4 1e-6
"""

import argparse
import time

from gapfill.gaps import GapSpec, snr
from gapfill.inpaint import Method, Settings, inpaint
from gapfill.signals import sine
from gapfill.solvers import SolverConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tolerances", type=float, nargs="+", default=[1e-4, 1e-6])
    ap.add_argument("--max-iterations", type=int, default=20000)
    ap.add_argument("--gap-ms", type=float, default=20.0)
    args = ap.parse_args()

    x = sine(1.0)
    gap = GapSpec.from_length(20000, int(round(args.gap_ms * 44.1)))
    print("model  weights  tolerance  snr_db  iterations  seconds")
    for model in ("syn", "ana"):
        for scheme in ("none", "energy"):
            for tol in args.tolerances:
                settings = Settings(solver=SolverConfig(tolerance=tol,
                                                        max_iterations=args.max_iterations))
                t0 = time.perf_counter()
                out, oc = inpaint(x, [gap], Method(model, scheme, "half"), settings)
                print(f"{model:<6} {scheme:<8} {tol:<10.0e} {snr(x, out, [gap]):6.2f}  "
                      f"{oc[0].iterations:>10d}  {time.perf_counter() - t0:7.1f}")


if __name__ == "__main__":
    main()
