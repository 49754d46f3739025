"""Evaluate the misclassification bounds across superpixel sizes.

Shows where each bound stops being vacuous, how the two variants trade
off against alphabet size, and the minimum superpixel size rule.
"""

from pathlib import Path

import numpy as np

from dglseg import BoundParams, error_bound_alternate, error_bound_primary, min_superpixel_size

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

M, ALPHABET, V = 4, 64, 0.5
ALPHA = 50.0  # training sets 50x larger than the test superpixel

print(f"M={M} regions, |alphabet|={ALPHABET}, v_min={V}, alpha={ALPHA}\n")

ns = np.unique(np.geomspace(8, 20000, 40).astype(int))
rows = []
for n in ns:
    p = BoundParams(M, ALPHABET, int(n), int(n * ALPHA), V)
    rows.append((int(n), error_bound_primary(p), error_bound_alternate(p)))

print(f"{'n':>7} {'primary':>12} {'alternate':>12}")
for n, b1, b2 in rows[::5]:
    flag1 = " (vacuous)" if b1.vacuous else ""
    flag2 = " (vacuous)" if b2.vacuous else ""
    print(f"{n:>7} {min(b1.value, 9e9):>12.3e}{flag1:<10} {min(b2.value, 9e9):>12.3e}{flag2}")

p = BoundParams(M, ALPHABET, 100, int(100 * ALPHA), V)
n_star = min_superpixel_size(p)
print(f"\nsmallest superpixel with a positive primary exponent: n = {n_star}")
print("...so the image should be cut into at most N /", n_star, "superpixels")

for alphabet in (16, 64, 256, 1024):
    p = BoundParams(M, alphabet, 100, int(100 * ALPHA), V)
    print(f"  |alphabet|={alphabet:>5} -> n_min = {min_superpixel_size(p)}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(ns, [min(r[1].value, 1e6) for r in rows], label="primary")
    ax.loglog(ns, [min(r[2].value, 1e6) for r in rows], label="alternate")
    ax.axhline(1.0, color="gray", ls="--", lw=0.8, label="vacuous above")
    ax.set_xlabel("superpixel size n")
    ax.set_ylabel("error-probability bound")
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "bounds.png", dpi=130)
    print(f"\nplot written to {OUT / 'bounds.png'}")
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
