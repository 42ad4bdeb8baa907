"""Print the fusion table with the bounds and witnesses behind each entry."""

import argparse

from sfvoa.fusion import fusion_table, klein_four_check


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--verbose", action="store_true", help="print the provenance of every nonzero entry")
    args = p.parse_args()
    t = fusion_table(args.d)
    print(t.text())
    print()
    print("Klein four:", klein_four_check(t))
    if args.verbose:
        for triple, e in t.entries.items():
            if e.dim:
                print(", ".join(m.label for m in triple), "->", "; ".join(e.provenance))


if __name__ == "__main__":
    main()
