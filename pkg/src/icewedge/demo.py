"""Write the synthetic two-arm demo dataset: ``python -m icewedge.demo demo.csv --seed 42``."""

import argparse
import sys

from .data_model import generate_demo_data, write_csv


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m icewedge.demo", description=__doc__)
    parser.add_argument("out", help="output CSV path")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)
    records = generate_demo_data(args.seed)
    write_csv(records, args.out)
    print(f"wrote {len(records)} patients to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
