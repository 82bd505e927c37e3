"""Minimal speeds, front classification and tail decay for KPP and HR(nu)."""

import numpy as np

from pushfront import (classify_front, exact_hadeler_rothe, find_min_speed, lambda_roots, make_hadeler_rothe,
                       make_kpp, measure_decay_exponent, solve_profile)

for label, f in (("KPP", make_kpp()), ("HR(1)", make_hadeler_rothe(1.0)), ("HR(4)", make_hadeler_rothe(4.0))):
    c = find_min_speed(f)
    p = solve_profile(f, c)
    roots = lambda_roots(f, c, tol=1e-8)
    print(f"{label:6s} c*={c:.9f}  class={classify_front(f, c, p).value:7s} "
          f"tail={measure_decay_exponent(p):+.4f}  roots=({roots.lambda_minus:+.4f}, {roots.lambda_plus:+.4f})")

# the shot HR(4) front against its closed form
f = make_hadeler_rothe(4.0)
shot, exact = solve_profile(f, find_min_speed(f)), exact_hadeler_rothe(4.0)
z = np.linspace(-20, 20, 4001)
print(f"HR(4) sup |shot - closed form| = {np.max(np.abs(shot(z) - exact(z))):.2e}")
