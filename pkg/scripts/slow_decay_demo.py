#!/usr/bin/env python3
"""Build a slow-decay element whose approximation errors stay positive but
below a prescribed envelope, then verify every level with the solver."""

import argparse

from lethargy.scheme import build_scheme, list_schemes
from lethargy.seq import NullSequence
from lethargy.witness import construct_slow_decay, verify_slow_decay


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scheme", default="monomial-chain", choices=list_schemes())
    ap.add_argument("--i-max", type=int, default=8)
    ap.add_argument("--envelope", choices=["harmonic", "geometric"], default="harmonic")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    s = build_scheme(args.scheme)
    window = 4 * args.i_max + 8
    eps = (NullSequence.harmonic(window) if args.envelope == "harmonic"
           else NullSequence.geometric(0.5, window))
    w = construct_slow_decay(s, eps, args.i_max, rng_seed=args.seed)

    print("ladder:")
    for step in w.meta["ladder"]:
        print(f"  rung {step['j']}: level {step['level']}, step {step['delta']:.3g}, "
              f"direction quality {step['direction_quality']:.3g}")
    if w.meta["halted"]:
        print("halted:", w.meta["halted"])

    ok = verify_slow_decay(w)
    print(f"{'i':>3} {'E(x, A_i)':>14} {'envelope':>12}  status")
    for v in w.verifications:
        cap = next(c.upper for c in w.claims if c.level == v.level)
        print(f"{v.level:>3} {v.observed:>14.6e} {cap:>12.6g}  "
              f"{'ok' if v.passed else 'FAIL'}")
    print("verified:", ok)
    raise SystemExit(0 if ok else 2)


if __name__ == "__main__":
    main()
