"""The Bessel-kernel propagator as an independent check of the stepper.

The linear Klein-Gordon problem u_tt = u_xx - u has an explicit light-
cone kernel; evolving a Gaussian velocity datum with the leapfrog in
linear mode must agree with that quadrature to O(dx^2).  The error is
halved-squared under mesh halving (ratio 4).
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sgdelta import ImpurityParams, evolve, linear_kg_reference, make_grid, make_state

OUT = pathlib.Path("demo_output")
OUT.mkdir(exist_ok=True)

fig, axes = plt.subplots(1, 2, figsize=(10, 3.6))

grid = make_grid(20.0, 4001)
datum = make_state(grid, np.zeros(grid.node_count), np.exp(-grid.x**2))
for t in (1.0, 4.0, 8.0):
    ref = linear_kg_reference(datum, t)
    axes[0].plot(grid.x, ref.u1, label=f"t={t:g}")
axes[0].set_xlabel("x")
axes[0].set_ylabel("u")
axes[0].set_title("kernel solution of the Gaussian datum")
axes[0].legend()

sizes = [1001, 2001, 4001, 8001]
errors = []
for n in sizes:
    g = make_grid(20.0, n)
    s = make_state(g, np.zeros(g.node_count), np.exp(-g.x**2))
    ref = linear_kg_reference(s, 1.0)
    num = evolve(s, ImpurityParams(q=0.0), 1.0, dt=g.spacing / 2, linear=True).final_state
    errors.append(np.max(np.abs(num.u1 - ref.u1)))
dx = [40.0 / (n - 1) for n in sizes]
axes[1].loglog(dx, errors, "o-", label="stepper vs kernel")
axes[1].loglog(dx, [errors[0] * (d / dx[0]) ** 2 for d in dx], "k--", label="slope 2")
axes[1].set_xlabel("dx")
axes[1].set_ylabel("sup error at t=1")
axes[1].legend()
axes[1].set_title("second-order agreement")

fig.tight_layout()
fig.savefig(OUT / "03_linear_oracle.png", dpi=130)
print(f"wrote {OUT / '03_linear_oracle.png'}")
for n, e in zip(sizes, errors):
    print(f"N={n:5d}: sup error {e:.3e}")
print("ratios:", ", ".join(f"{a/b:.2f}" for a, b in zip(errors, errors[1:])))
