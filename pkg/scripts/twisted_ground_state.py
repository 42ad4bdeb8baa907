"""Print L_0|theta> for d = 1..4 under both Delta conventions."""

import argparse

from sfvoa.vertex import DELTA_LITERAL, DELTA_SYMMETRIC, VertexEngine


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dmax", type=int, default=4)
    args = p.parse_args()
    print(f"{'d':>3}  {'symmetric':>10}  {'literal':>10}")
    for d in range(1, args.dmax + 1):
        s = VertexEngine(d, DELTA_SYMMETRIC).ground_energy()
        l = VertexEngine(d, DELTA_LITERAL).ground_energy()
        print(f"{d:>3}  {str(s):>10}  {str(l):>10}")


if __name__ == "__main__":
    main()
