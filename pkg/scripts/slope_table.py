"""Newton polygon, l-rank and Hasse value of the canonical module over a grid.

    python3 scripts/slope_table.py
"""
import time

from muhasse import PelParams, canonical_mu_ordinary, hodge, mu_ordinary_polygon, newton_polygon
from muhasse.hasse import ell_rank, mu_hasse

GRID = [(1, 2, 1), (2, 3, 1), (1, 3, 1), (1, 2, 2)]


def main():
    print("ell,a,b,r,np,matches_ord,ell_rank,mu_hasse,seconds")
    for a, b, r in GRID:
        for ell in (2, 3, 5):
            p = PelParams(ell, a, b, r)
            t = time.perf_counter()
            M = canonical_mu_ordinary(p)
            P = newton_polygon(M)
            H = hodge(M)
            row = [ell, a, b, r, f'"{P}"', P == mu_ordinary_polygon(p), ell_rank(H),
                   f'"{mu_hasse(H).value}"', f"{time.perf_counter() - t:.3f}"]
            print(",".join(str(x) for x in row))


if __name__ == "__main__":
    main()
