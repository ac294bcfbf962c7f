"""Detuning map of the dressed ground-state shift and figure of merit.

    python3 scripts/detuning_scan.py configs/working_1khz.yaml --out scan_1khz.csv --workers 4
"""
import argparse
import time

from rydchiral.config import load_config
from rydchiral.scan import ScanGrid, export_scan, find_optimal_regions, run_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--out", default="scan.csv")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--top", type=int, default=10, help="number of best points to print")
    args = ap.parse_args()

    cfg = load_config(args.config)
    cfg.require("dressing", "scan")
    sc = cfg.scan
    grid = ScanGrid(tuple(sc.delta1_hz), tuple(sc.delta2_hz), cfg.dressing_config(), sc.delta_rm_hz,
                    fringe_period=sc.fom_convention == "fringe_period")
    t0 = time.perf_counter()
    res = run_scan(grid, workers=args.workers)
    print(f"{res.ok.size} points in {time.perf_counter() - t0:.1f} s, {(~res.ok).sum()} masked")
    export_scan(res, args.out)

    pts = find_optimal_regions(res, sc.top_fraction)
    d1 = [p[0] for p in pts]
    d2 = [p[1] for p in pts]
    print(f"{len(pts)} points within {sc.top_fraction:.0%} of max FoM {pts[0][2]:.4f}")
    print(f"  delta1 in [{min(d1) / 1e9:.3f}, {max(d1) / 1e9:.3f}] GHz, "
          f"delta2 in [{min(d2) / 1e9:.3f}, {max(d2) / 1e9:.3f}] GHz")
    print("delta1_GHz  delta2_GHz  fom")
    for a, b, f in pts[:args.top]:
        print(f"{a / 1e9:10.4f}  {b / 1e9:10.4f}  {f:.4f}")


if __name__ == "__main__":
    main()
