#!/usr/bin/env python3
"""Print the domain-length upper-bound table (text and CSV)."""
import argparse

from axsim import table1_generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--format", choices=("text", "csv"), default="text")
    args = ap.parse_args()
    table = table1_generate()
    print(table.render_text() if args.format == "text" else table.render_csv())


if __name__ == "__main__":
    main()
