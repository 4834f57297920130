"""Stationary waves of the impurity model and the interface algebra.

Builds the centered kink and the pinned wave Q for several couplings,
shows the matching-equation geometry (why |q| > 2 is the existence
boundary), and scans the gluing residual of shifted kinks to exhibit
the unique degree-1 stationary profile at x0 = 0.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sgdelta import (
    gluing_residual,
    ground_state,
    kink_profile,
    make_grid,
    matching_root,
)

OUT = "demo_output"

grid = make_grid(20.0, 4001)

fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))

ax = axes[0]
ax.plot(grid.x, kink_profile(grid).u1, "k--", label="kink (any q)")
for q in (-6.0, -4.0, -2.5, 2.5, 4.0, 6.0):
    ax.plot(grid.x, ground_state(grid, q).u1, label=f"Q, q={q:g}")
ax.set_xlim(-8, 8)
ax.set_xlabel("x")
ax.set_ylabel("u")
ax.set_title("stationary waves")
ax.legend(fontsize=7)

ax = axes[1]
y = np.linspace(1e-3, 4.0, 400)
ax.plot(y, (1 - y**2) / (1 + y**2), "k")
for q in (-4.0, 6.0):
    root = matching_root(q)
    ax.axhline(-2.0 / q, color="tab:red", lw=0.8)
    ax.plot([root.y], [-2.0 / q], "o", label=f"q={q:g}: y={root.y:.3f}")
ax.axhspan(-1, 1, color="0.9")
ax.set_xlabel("y = exp(-x0)")
ax.set_ylabel("(1-y^2)/(1+y^2)")
ax.set_title("matching equation: solvable iff |2/q| < 1")
ax.legend(fontsize=8)

ax = axes[2]
shifts = np.linspace(-3, 3, 151)
for q in (-4.0, -1.0, 1.0):
    r = [gluing_residual(kink_profile(grid, x0=s), q) for s in shifts]
    ax.plot(shifts, r, label=f"q={q:g}")
ax.axhline(0, color="k", lw=0.5)
ax.set_xlabel("kink shift x0")
ax.set_ylabel("gluing residual")
ax.set_title("only the centered kink satisfies the jump condition")
ax.legend(fontsize=8)

fig.tight_layout()
import pathlib

pathlib.Path(OUT).mkdir(exist_ok=True)
fig.savefig(f"{OUT}/01_stationary_waves.png", dpi=130)
print(f"wrote {OUT}/01_stationary_waves.png")

for q in (-4.0, 6.0):
    root = matching_root(q)
    s = ground_state(grid, q)
    print(
        f"q={q:+.1f}: y={root.y:.6f}, Q(0)={s.u1[grid.zero_index]:.6f}, "
        f"|gluing residual| (finite differences) = "
        f"{abs(gluing_residual(s, q)):.2e}"
    )
