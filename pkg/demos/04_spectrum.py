"""Bottom spectrum of the linearized operator across the coupling range.

For the kink background the interface coefficient is Z = -q, so q > 0
digs an attractive delta well into the translation mode and produces the
single negative eigenvalue (Morse index 1, instability), while q < 0
pushes it up into (0, 1] (index 0, stability).  The pinned wave shows
the same dichotomy on |q| > 2.  Growth rate: sigma = sqrt(-lam1).
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sgdelta import (
    assemble_linearized,
    eigen_bottom,
    ground_state,
    kink_profile,
    make_grid,
    zero_state,
)

OUT = pathlib.Path("demo_output")
OUT.mkdir(exist_ok=True)

grid = make_grid(40.0, 4001)

fig, axes = plt.subplots(1, 3, figsize=(13, 3.8))

qs = np.linspace(-4, 4, 33)
lam_k = [eigen_bottom(assemble_linearized(kink_profile(grid), q), k=1).eigenvalues[0]
         for q in qs]
axes[0].plot(qs, lam_k, "o-", ms=3, label="kink background")
qs_q = [q for q in np.linspace(-8, 8, 33) if abs(q) > 2.05]
lam_q = [eigen_bottom(assemble_linearized(ground_state(grid, q), q), k=1).eigenvalues[0]
         for q in qs_q]
axes[0].plot(qs_q, lam_q, "s", ms=3, label="pinned wave")
axes[0].axhline(0, color="k", lw=0.5)
axes[0].axhline(1, color="0.6", lw=0.5, ls=":")
axes[0].set_xlabel("q")
axes[0].set_ylabel("lam1")
axes[0].set_title("bottom eigenvalue vs coupling")
axes[0].legend(fontsize=8)

sig = [np.sqrt(max(0.0, -l)) for l in lam_k]
axes[1].plot(qs, sig, "o-", ms=3)
axes[1].set_xlabel("q")
axes[1].set_ylabel("growth rate sigma")
axes[1].set_title("kink: linear instability rate for q > 0")

rep = eigen_bottom(assemble_linearized(kink_profile(grid), 1.0), k=3)
for i in range(3):
    axes[2].plot(grid.x, rep.eigenvectors[:, i],
                 label=f"lam={rep.eigenvalues[i]:+.3f}")
axes[2].set_xlim(-15, 15)
axes[2].set_xlabel("x")
axes[2].set_title("lowest modes, kink at q = 1")
axes[2].legend(fontsize=8)

fig.tight_layout()
fig.savefig(OUT / "04_spectrum.png", dpi=130)
print(f"wrote {OUT / '04_spectrum.png'}")

rep = eigen_bottom(assemble_linearized(zero_state(grid), -1.0), k=1)
print(f"zero background, q=-1: lam1 = {rep.eigenvalues[0]:.6f} "
      f"(delta bound state 1-(q/2)^2 = 0.75)")
