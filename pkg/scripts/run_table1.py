"""Reproduce the squeezed-even-cat fit table for a squeezed-vacuum input.

Writes results/table1/table1.csv with columns g, gamma, alpha, F.
"""

from opaherald.cli import main

ARGS = [
    "table1", "--r", "1.0", "--dim", "64",
    "--g", "1.0", "--g", "1.5", "--g", "2.5",
    "--g", "5.0", "--g", "7.5", "--g", "10.0",
    "--out", "results/table1",
]

if __name__ == "__main__":
    main(ARGS, standalone_mode=False)
    print("done: results/table1/table1.csv")
