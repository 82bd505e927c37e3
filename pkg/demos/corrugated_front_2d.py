"""A corrugated HR(4) front in a periodic strip flattens and is tracked by the graph equation."""

import numpy as np

from pushfront import ExperimentConfig, gamma_vs_V
from pushfront.harness import standard_2d_run

c, p, run = standard_2d_run(ExperimentConfig.default("E6").params)
d = run.diagnostics
for t in (0, 10, 50, 100, 200):
    k = int(np.argmin(np.abs(run.t - t)))
    print(f"t={run.t[k]:6.1f}  residual={d['residual'][k]:.2e}  sup|G_x|={d['sup_gx'][k]:.2e}  "
          f"min(-u_z)={d['min_minus_uz'][k]:.3e}")
for tau in (20.0, 40.0):
    print(f"tau={tau:4.0f}  sup |Gamma - V| = {gamma_vs_V(run.t, run.gamma, run.x, tau, c, 200.0).max_gap:.4f}")
