"""Negativity-volume sweeps behind the two sweep figures:
squeezed-vacuum inputs over r for several gains, and even/odd cat inputs
over alpha.  Expect a few minutes; the g = 1 squeezed-vacuum rows evaluate
wide anti-squeezed Gaussians at large single-mode cutoffs.
"""

from opaherald.cli import main

SWEEPS = [
    ["sweep", "--family", "sv", "--param", "0:1.5:0.1",
     "--g", "1.0", "--g", "1.5", "--g", "2.5", "--g", "5.0",
     "--out", "results/sweep_sv"],
    ["sweep", "--family", "even_cat", "--param", "0.4:2.0:0.2",
     "--g", "1.0", "--g", "1.4", "--g", "2.0", "--g", "5.0",
     "--out", "results/sweep_even_cat"],
    ["sweep", "--family", "odd_cat", "--param", "1.05:2.0:0.1",
     "--g", "1.2", "--g", "1.4", "--g", "1.7", "--g", "2.0",
     "--out", "results/sweep_odd_cat"],
]

if __name__ == "__main__":
    for args in SWEEPS:
        print("running:", " ".join(args))
        main(args, standalone_mode=False)
    print("done: results/sweep_*/negativity_sweep.csv")
