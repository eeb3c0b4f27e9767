"""Write full verification reports for a range of p into a directory."""

import argparse
import sys
from pathlib import Path

from dehnfill import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--out-dir", default="reports")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for p in args.p:
        code = cli.main(["report", "all", "--p", str(p), "--out", str(out / f"report_p{p}.json")])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
