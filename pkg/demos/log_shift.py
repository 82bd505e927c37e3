"""Level position of pushed and pulled fronts: only the pulled one lags by a log term."""

import numpy as np

from pushfront import Grid1D, fit_log_shift, make_hadeler_rothe, make_kpp, run_front_convergence, step_data

g = Grid1D.from_spacing(-60, 60, 0.05)
ts = np.geomspace(50, 500, 120)
for label, f, c in (("HR(4)", make_hadeler_rothe(4.0), 3 / np.sqrt(2)), ("KPP", make_kpp(), 2.0)):
    tr = run_front_convergence(f, c, step_data(g), 500, 0.02, sample_times=ts)
    fit = fit_log_shift(tr.t, tr.sigma)
    print(f"{label:5s} sigma(t) ~ {fit.c_fit:.4f} t + ({fit.r:+.3f}) ln t + {fit.s:.3f}   rms={fit.rms:.1e}")
