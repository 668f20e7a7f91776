"""Photon-loss decay of the three reference heralded outputs: negativity
curves and density-matrix snapshots at kt = 0.1, 0.5, 1.0.
"""

from opaherald.cli import main

KT = ["--kappa-t", "0.1", "--kappa-t", "0.5", "--kappa-t", "1.0"]

RUNS = [
    ["loss", "--input", "sv", "--r", "1.0", "--g", "2.5", "--dim", "96",
     "--out", "results/loss_sv"] + KT,
    ["loss", "--input", "cat-even", "--alpha", "1.2", "--g", "critical",
     "--dim", "48", "--out", "results/loss_even_cat"] + KT,
    ["loss", "--input", "cat-odd", "--alpha", "1.5", "--g", "critical",
     "--dim", "48", "--out", "results/loss_odd_cat"] + KT,
]

if __name__ == "__main__":
    for args in RUNS:
        print("running:", " ".join(args))
        main(args, standalone_mode=False)
    print("done: results/loss_*/negativity_decay.csv")
