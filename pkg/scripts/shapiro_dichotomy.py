#!/usr/bin/env python3
"""Run the Shapiro dichotomy across registered schemes and print a verdict table.

The quantizer family is expected to fail with its reciprocal-budget envelope;
the chains, the interleaved-c0 scheme, and orthonormal n-term approximation
keep unit-sphere certificates above the weak-gap threshold.
"""

import argparse
import json

from lethargy.analyze import shapiro_check
from lethargy.scheme import build_scheme, list_schemes

DEFAULT_SCHEMES = ["monomial-chain", "trig-chain", "interleaved-c0",
                   "orthonormal-nterm", "quantizer-linear", "quantizer-geometric"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schemes", nargs="*", default=DEFAULT_SCHEMES,
                    choices=list_schemes(), metavar="NAME")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="write verdicts as JSON")
    args = ap.parse_args()

    results = {}
    print(f"{'scheme':<24} {'verdict':<26} {'floor':>8} {'gamma':>10}")
    for name in args.schemes:
        s = build_scheme(name)
        v = shapiro_check(s, rng_seed=args.seed)
        results[name] = v.to_json()
        print(f"{name:<24} {v.verdict:<26} {v.constant:>8.4f} {v.gamma:>10.4g}")
        if v.envelope:
            env = ", ".join(f"{x:.4g}" for x in v.envelope["values"][:8])
            print(f"{'':<24}   envelope: {env} ...")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
