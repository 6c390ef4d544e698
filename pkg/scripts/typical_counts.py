#!/usr/bin/env python3
"""Exact typical-set counts for a biased binary source against the
asymptotic two-sided growth bracket (1-delta) e^{n(H-eps)} <= |T_n| <=
e^{n(H+eps)}.

The bracket is an asymptotic statement: at small n individual lengths can
fall outside it (the lower edge in particular), which this table makes
visible instead of hiding.
"""
import argparse
import math

import noisycomp as nk


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=20)
    args = ap.parse_args()

    src = nk.Source.iid([args.p, 1 - args.p])
    h = src.entropy_rate()
    print(f"H = {h:.9g} nats, eps = {args.eps}, delta = {args.delta}")
    print(f"{'n':>3} {'count':>9} {'lower':>12} {'upper':>14} {'in bracket':>10}")
    for n in range(args.n_min, args.n_max + 1):
        count = len(nk.typical_set(src, n, args.eps).members)
        lo = (1 - args.delta) * math.exp(n * (h - args.eps))
        hi = math.exp(n * (h + args.eps))
        print(f"{n:3d} {count:9d} {lo:12.1f} {hi:14.1f} "
              f"{'yes' if lo <= count <= hi else 'NO':>10}")


if __name__ == "__main__":
    main()
