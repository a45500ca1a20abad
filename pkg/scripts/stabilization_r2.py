"""How far the rank sequence of V on Omega runs before it settles, for r = 1 and r = 2.

For r = 1 the ranks are constant from j = a + b on.  With r = 2 random modules
carry no endomorphisms and the sequence can keep dropping up to j = (a+b)r.
"""
import argparse
from collections import Counter

from muhasse import PelParams, hodge, random_module
from muhasse.hasse import ver_rank_sequence


def settle_index(seq):
    last = seq[-1]
    j = len(seq)
    while j > 1 and seq[j - 2] == last:
        j -= 1
    return j


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=300)
    args = ap.parse_args()
    for p in (PelParams(2, 1, 2), PelParams(3, 2, 3), PelParams(2, 1, 2, r=2), PelParams(3, 1, 2, r=2)):
        hist = Counter(settle_index(ver_rank_sequence(hodge(random_module(p, s))))
                       for s in range(args.count))
        print(f"(ell,a,b,r)=({p.ell},{p.a},{p.b},{p.r}) a+b={p.a + p.b} (a+b)r={p.n} "
              f"settles at j: {dict(sorted(hist.items()))}")


if __name__ == "__main__":
    main()
