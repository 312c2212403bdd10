#!/usr/bin/env python3
"""Compare designed and width-optimized uniform quantizers on one source.

Prints, per level count M: the designed error strength, the best uniform
width and its strength, the output entropy, and the distance to the D(R)
floor evaluated at that entropy.
"""

import argparse
import math

from stablerd import (
    cauchy_source,
    design_optimal,
    distortion_at_rate,
    gaussian_source,
    output_entropy,
)
from stablerd.quantizer import best_uniform_design


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--source", choices=("cauchy", "gaussian"), default="cauchy")
    ap.add_argument("--ms", default="2,3,4")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    if args.source == "cauchy":
        source, alpha, gamma_x = cauchy_source(1.0), 1.0, 1.0
    else:
        source, alpha, gamma_x = gaussian_source(1.0), 2.0, 1.0 / math.sqrt(2.0)

    print(f"{'M':>4} {'designed':>10} {'delta*':>9} {'uniform':>10} "
          f"{'H(V) nats':>10} {'gap':>10}")
    for m_str in args.ms.split(","):
        m = int(m_str)
        rep = design_optimal(source, alpha, m, seed=args.seed)
        h = output_entropy(rep.quantizer, source)
        gap = rep.error_strength - distortion_at_rate(alpha, gamma_x, h)
        delta, sol, h_u, _ = best_uniform_design(source, alpha, m)
        print(f"{m:>4} {rep.error_strength:>10.6f} {delta:>9.4f} "
              f"{sol.value:>10.6f} {h_u:>10.4f} {gap:>10.6f}")


if __name__ == "__main__":
    main()
