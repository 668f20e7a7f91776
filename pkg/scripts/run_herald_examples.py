"""Herald the three canonical inputs and dump output states, success
probabilities, closed-form agreement, Wigner grids and named-target fits.
"""

from opaherald.cli import main

RUNS = [
    ["herald", "--input", "sv", "--r", "1.0", "--g", "2.5", "--dim", "96",
     "--out", "results/herald_sv"],
    ["herald", "--input", "cat-even", "--alpha", "1.01", "--g", "critical",
     "--dim", "64", "--out", "results/herald_even_cat"],
    ["herald", "--input", "cat-odd", "--alpha", "1.5", "--g", "critical",
     "--dim", "64", "--out", "results/herald_odd_cat"],
    ["wigner", "--input", "sv", "--r", "1.0", "--g", "2.5", "--dim", "96",
     "--out", "results/wigner_sv_output"],
    ["targets", "--input", "cat-even", "--alpha", "1.01", "--g", "critical",
     "--dim", "64", "--out", "results/targets_even_cat"],
    ["targets", "--input", "cat-odd", "--alpha", "1.5", "--g", "critical",
     "--dim", "64", "--out", "results/targets_odd_cat"],
]

if __name__ == "__main__":
    for args in RUNS:
        print("running:", " ".join(args))
        main(args, standalone_mode=False)
    print("done: see results/")
