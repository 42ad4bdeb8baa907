"""Run the d = 1 identity audit and print one line per identity."""

import argparse
import json

from sfvoa.identities import IdentityAudit
from sfvoa.zhu import Zhu


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cutoff", default="6")
    p.add_argument("--json", action="store_true", help="print the full records as JSON")
    args = p.parse_args()
    checks = IdentityAudit(Zhu(), args.cutoff).run()
    if args.json:
        print(json.dumps([c.to_json() for c in checks], indent=2))
        return
    for c in checks:
        print(f"{'PASS' if c.holds else 'FAIL'}  {c.name}")
        if not c.holds:
            print(f"      computed: {c.computed}")
            print(f"      expected: {c.expected}")
            if c.extra.get("coefficients"):
                print(f"      coefficients of L_-1^2 h1, L_-1 h1, h1: {c.extra['coefficients']}")


if __name__ == "__main__":
    main()
