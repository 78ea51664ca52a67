#!/usr/bin/env python3
"""Print the per-ensemble sharpness leaderboard from a campaign report.json."""

import argparse
import json
from pathlib import Path

from numrad.campaign import tightness_leaderboard


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("report", help="path to report.json or its directory")
    p.add_argument("--top", type=int, default=5, help="rows per ensemble")
    p.add_argument("--ensemble", default=None, help="substring filter on ensemble labels")
    args = p.parse_args()
    path = Path(args.report)
    if path.is_dir():
        path = path / "report.json"
    rows = tightness_leaderboard(json.loads(path.read_text()))
    current = None
    for r in rows:
        if args.ensemble and args.ensemble not in r["ensemble"]:
            continue
        if r["rank"] > args.top:
            continue
        if r["ensemble"] != current:
            current = r["ensemble"]
            print(f"\n{current}")
        print(f"  {r['rank']:3d}  {r['bound']:48s} {r['median_tightness']:.6f}  (n={r['samples']})")


if __name__ == "__main__":
    main()
