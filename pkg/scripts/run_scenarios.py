"""Run every verification scenario and write one report JSON per scenario.

    python3 scripts/run_scenarios.py --out results/reports
"""

import argparse
import json
from pathlib import Path

from prsa.scenarios import SCENARIOS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/reports"))
    ap.add_argument("--only", nargs="*", default=None, help="subset of scenario names")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name, fn in SCENARIOS.items():
        if args.only and name not in args.only:
            continue
        rep = fn()
        (args.out / f"{name}.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n")
        print(f"{'PASS' if rep.passed else 'FAIL'} {name:18s} {rep.runtime_s:6.1f} s")
        failed += not rep.passed
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
