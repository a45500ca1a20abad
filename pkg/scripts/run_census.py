"""Random census over the acceptance grid; writes one text and one CSV report per point.

    python3 scripts/run_census.py --count 1000 --out results/
"""
import argparse
import pathlib
import time

from muhasse import PelParams, run_random_census

GRID = [(2, 1, 2), (3, 1, 2), (5, 1, 2), (2, 1, 3), (3, 2, 3)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for ell, a, b in GRID:
        for k in (1, 2):
            t = time.perf_counter()
            rep = run_random_census(PelParams(ell, a, b, k=k), args.count, jobs=args.jobs)
            stem = f"census_l{ell}_a{a}_b{b}_k{k}"
            (args.out / f"{stem}.txt").write_text(rep.to_text())
            (args.out / f"{stem}.csv").write_text(rep.to_csv())
            strata = ", ".join(f"rank {r} np {np}: {c}" for (r, np), c in rep.strata)
            print(f"{stem}: {'pass' if rep.passed else 'FAIL'} in {time.perf_counter() - t:.1f}s  [{strata}]")
            ok &= rep.passed
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
