"""Sign certificates for the comparison-function families on HR(4) and KPP fronts."""

from pushfront import (check_exponential_pair, check_main_pair, check_rothe_pair, check_wang_pair, find_min_speed,
                       fourier_graph, make_hadeler_rothe, make_kpp, solve_profile)

f = make_hadeler_rothe(4.0)
p = solve_profile(f, find_min_speed(f))
reps = [*check_rothe_pair(f, p, 0.005), *check_exponential_pair(f, p),
        *check_main_pair(f, p, fourier_graph(20, 32, [(1, 0.05, 0.0)]))]
kpp = make_kpp()
reps += check_wang_pair(kpp, solve_profile(kpp, 2.5), 0.05)
for rep in reps:
    print(rep.summary())
