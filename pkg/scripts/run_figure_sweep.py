#!/usr/bin/env python3
"""Reproduce the slice-sweep figure sequence.

Writes one CSV (and optionally SVG) per b value plus summary.json mapping
each b to its component count, using the package defaults (box a,c in
[-3.6, 3.6], strict membership, eta = 0).

Usage:
    python scripts/run_figure_sweep.py [--res 800] [--out sweep_out] [--svg]
"""
import argparse
import sys

from pt_horizon import cli


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--res", type=int, default=800)
    parser.add_argument("--out", default="sweep_out")
    parser.add_argument("--svg", action="store_true")
    parser.add_argument("--b-list", default=None)
    args = parser.parse_args()
    argv = ["sweep", "--res", str(args.res), "--out", args.out]
    if args.svg:
        argv.append("--svg")
    if args.b_list:
        argv += ["--b-list", args.b_list]
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
