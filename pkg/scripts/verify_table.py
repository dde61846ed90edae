"""Print the F_d(1) verification table and the labeling counts it rests on.

    python scripts/verify_table.py --dmin 3 --dmax 10
"""
import argparse
import time

from onetriangle.cli import run_verify
from onetriangle.labelings import TriangleType, enumerate_one_triangle_labelings


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dmin", type=int, default=3)
    ap.add_argument("--dmax", type=int, default=10)
    args = ap.parse_args()

    print("one-triangle labelings of K_n (up to vertex relabeling)")
    print("  n  " + "  ".join(f"{t.short:>11}" for t in TriangleType))
    for n in range(3, 8):
        counts = [enumerate_one_triangle_labelings(n, t).count for t in TriangleType]
        print(f"  {n}  " + "  ".join(f"{c:>11}" for c in counts))

    t0 = time.perf_counter()
    payload = run_verify(args.dmin, args.dmax)
    print(f"\n  d  {'type':<12} max  witnesses")
    for row in payload["rows"]:
        mark = "" if row["match"] else "  <-- mismatch"
        print(f" {row['d']:>2}  {row['type']:<12} {row['max_points']:>3}  "
              f"{', '.join(row['witness_families'])}{mark}")
    print(f"\nverdict {payload['verdict']} ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
