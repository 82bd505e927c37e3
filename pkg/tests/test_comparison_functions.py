import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pushfront.comparison_functions import (ROTHE_BETAS, ROTHE_CS, CutoffPsi, ExponentialCandidate, ModulatedCandidate, ProfileCandidate,
                                            ResidualGrid, RotheCandidate, ZeroCandidate, build_modulation, check_exponential_pair,
                                            check_main_pair, check_rothe_pair, check_wang_pair, chi, default_lambda1,
                                            eval_psi, exponential_speed_bound, residual_L, tail_ratio_bound)
from pushfront.errors import DomainTooSmall, EpsilonBudget, SearchExhausted
from pushfront.front_dynamics import fourier_graph, make_graph
from pushfront.pde1d import Field1D, Grid1D, evolve
from pushfront.reaction_terms import make_hadeler_rothe, make_kpp

HR4 = make_hadeler_rothe(4.0)
GRID = ResidualGrid.uniform()


def refined_stable(rep, again):
    """Same verdict and certifying extremum moved by < 10 tol under grid halving."""
    key = "min" if rep.expected == "super" else "max"
    return again.passed == rep.passed and abs(getattr(again, key) - getattr(rep, key)) < 10 * rep.tol


# ------------------------------------------------------------------ cutoff

def test_psi_examples():
    psi = CutoffPsi(0.5)
    assert eval_psi(psi, -10.0, 0) == pytest.approx(np.exp(-5.0), abs=1e-15)
    assert eval_psi(psi, -10.0, 0) == pytest.approx(0.00673794699, abs=1e-11)
    assert eval_psi(psi, 10.0, 0) == 1.0
    with pytest.raises(ValueError):
        CutoffPsi(0.0)


def test_chi_junctions_continuous():
    for y0 in (0.5, 1.0):
        a, b = y0, np.nextafter(y0, 2.0)
        for order in (0, 1, 2):
            assert abs(chi(a, order) - chi(b, order)) <= 1e-12
            a2 = np.nextafter(y0, 0.0)
            assert abs(chi(a2, order) - chi(b, order)) <= 1e-12


def test_psi_derivatives_match_finite_differences():
    psi = CutoffPsi(-1.06)
    # psi''' jumps at y = 1, so the one-sided error there is about h max|psi'''|
    h = 1e-6
    # junctions at s = ln(1/2)/lambda1 and s = 0, plus interior points
    for s in (np.log(0.5) / -1.06, 0.0, 0.3, -2.0, 2.0):
        v, d1, d2 = eval_psi(psi, np.array([s - h, s, s + h]), 2)
        assert (v[2] - v[0]) / (2 * h) == pytest.approx(d1[1], abs=1e-8)
        assert (d1[2] - d1[0]) / (2 * h) == pytest.approx(d2[1], abs=1e-4)


def test_chi_shape():
    y = np.linspace(0, 2, 2001)
    v = chi(y)
    assert np.all(np.diff(v) >= 0) and v.max() == 1.0
    assert np.all(chi(y, 1) >= 0)


@given(lam=st.floats(-3.0, 3.0).filter(lambda v: abs(v) > 1e-3), s=st.floats(-30.0, 30.0))
def test_psi_sandwich(lam, s):
    e = np.exp(lam * s)
    v = eval_psi(CutoffPsi(lam), s, 0)
    lower = e if e <= 0.5 else 0.0
    assert lower <= v * (1 + 1e-12) + 1e-300
    assert v <= min(1.0, 2 * e) * (1 + 1e-12)


# -------------------------------------------------------------- modulation

def test_build_modulation_example():
    m = build_modulation(4.0, 1.0, 1.0, 1.0, 1.0, check_times=[0, 0.5, 1, 2, 10])
    assert float(m.p(0.0)) == 2.0
    assert m.q_inf == pytest.approx(np.pi, abs=1e-15)
    assert m.q_inf <= 4.0
    assert float(m.q(0.0)) == 0.0
    t = np.geomspace(1e-3, 1e3, 1000)
    assert np.all(m.p(t) <= 2 * m.C1 / m.K)
    # q' = C0 p
    h = 1e-6
    assert (m.q(1 + h) - m.q(1 - h)) / (2 * h) == pytest.approx(float(m.dq(1.0)), rel=1e-8)


def test_build_modulation_errors():
    with pytest.raises(EpsilonBudget):
        build_modulation(1.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        build_modulation(1.0, 1.0, 0.5, 1e-3, 1e-2)
    with pytest.raises(ValueError):
        build_modulation(1.0, 1.0, 1.0, -1.0, 1.0)


@given(C1=st.floats(1e-5, 1.0), ratio=st.floats(1.0, 1e4), K=st.floats(0.1, 1.0))
def test_modulation_bracket(C1, ratio, K):
    C2 = C1 * ratio
    m = build_modulation(1e12, K, 1.0, C1, C2)
    t = np.geomspace(1e-4, 1e4, 10_000)
    Kp, P = K * m.p(t), m.P(t)
    assert np.all(P <= Kp * (1 + 1e-12))
    assert np.all(Kp <= 2 * P * (1 + 1e-12))


# -------------------------------------------------------------- residual_L

def test_residual_of_exact_wave(hr4_profile):
    rep = residual_L(ProfileCandidate(hr4_profile), HR4, hr4_profile.c, GRID)
    assert max(abs(rep.min), abs(rep.max)) <= 1e-6
    assert rep.verdict == "zero"


def test_residual_of_lifted_wave(hr4_profile):
    grid = ResidualGrid.uniform(z_lo=-40, z_hi=-10, nz=301, nt=3)
    rep = residual_L(ProfileCandidate(hr4_profile, lift=0.1), HR4, hr4_profile.c, grid)
    # [DERIVED] the profile equation leaves L = f(Phi) - f(Phi + 0.1), positive where f decreases
    phi = hr4_profile(grid.z)
    oracle = HR4(phi) - HR4(phi + 0.1)
    assert rep.min > 0
    assert rep.min == pytest.approx(oracle.min(), abs=1e-6)


def test_residual_of_zero():
    rep = residual_L(ZeroCandidate(), HR4, 2.0, GRID)
    assert rep.min == rep.max == 0.0


def test_residual_domain_guard(hr4_profile):
    with pytest.raises(DomainTooSmall):
        residual_L(ProfileCandidate(hr4_profile), HR4, hr4_profile.c, ResidualGrid.uniform(z_hi=200))


def test_report_summary(hr4_profile):
    rep = residual_L(ProfileCandidate(hr4_profile), HR4, hr4_profile.c, GRID, expected="super")
    assert "profile" in rep.summary() and rep.passed and rep.violation <= 1e-15


# -------------------------------------------------------------- Rothe pair

def test_rothe_super_at_q01(hr4_profile):
    psi = CutoffPsi(default_lambda1(HR4, hr4_profile.c))

    def report(b, C, grid):
        return residual_L(RotheCandidate(hr4_profile, psi, 0.1, 0, 0, b, C, 1), HR4, hr4_profile.c, grid, "super")

    plus = next((r for r in (report(b, C, GRID) for b in ROTHE_BETAS for C in ROTHE_CS) if r.passed), None)
    assert plus is not None and plus.min >= -1e-8
    k = plus.constants
    assert refined_stable(plus, report(k["beta"], k["C"], GRID.refined()))


def test_rothe_pair_small_q0(hr4_profile):
    plus, minus = check_rothe_pair(HR4, hr4_profile, 0.005)
    assert plus.verdict in ("super", "zero") and minus.verdict in ("sub", "zero")
    assert plus.min >= 0 and minus.max <= 0
    for rep in (plus, minus):
        k = rep.constants
        s = 1 if rep.expected == "super" else -1
        cand = RotheCandidate(hr4_profile, CutoffPsi(k["lambda1"]), 0.005, 0, 0, k["beta"], k["C"], s)
        assert refined_stable(rep, residual_L(cand, HR4, hr4_profile.c, GRID.refined(), rep.expected))


def test_rothe_q0_zero_is_profile(hr4_profile):
    plus, minus = check_rothe_pair(HR4, hr4_profile, 0.0, beta=1.0, C=0.0)
    for rep in (plus, minus):
        assert max(abs(rep.min), abs(rep.max)) <= 1e-6


def test_rothe_long_time_limit(hr4_profile):
    psi = CutoffPsi(default_lambda1(HR4, hr4_profile.c))
    cand = RotheCandidate(hr4_profile, psi, 0.1, 0.3, 0.0, 0.5, 2.0, 1)
    z = np.linspace(-20, 20, 201)
    late = cand.values(None, z, np.full_like(z, 200.0))
    assert np.max(np.abs(late - hr4_profile(z - 0.3 - 2.0))) <= 1e-12
    T, Z = np.meshgrid([200.0], z, indexing="ij")
    assert np.max(np.abs(cand.residual(HR4, hr4_profile.c, None, Z, T))) <= 1e-6


# --------------------------------------------------------------- Wang pair

def test_wang_pair(kpp_profile_25):
    kpp = make_kpp()
    plus, minus = check_wang_pair(kpp, kpp_profile_25, 0.05, grid=GRID)
    assert plus.min >= 0 and minus.max <= 0
    for rep, s in ((plus, 1), (minus, -1)):
        k = rep.constants
        again = check_wang_pair(kpp, kpp_profile_25, 0.05, grid=GRID.refined(), sigma=k["sigma"], beta=k["beta"])
        assert refined_stable(rep, again[0 if s > 0 else 1])


def test_wang_eps_zero_is_profile(kpp_profile_25):
    for rep in check_wang_pair(make_kpp(), kpp_profile_25, 0.0, sigma=1.0, beta=1.0):
        assert max(abs(rep.min), abs(rep.max)) <= 1e-6


def test_wang_requires_kpp_structure(hr4_profile):
    with pytest.raises(ValueError):
        check_wang_pair(HR4, hr4_profile, 0.05)


# -------------------------------------------------------- exponential pair

def test_tail_ratio(hr4_profile, hr4_exact):
    # [DERIVED] |Phi'|/Phi = b (1 - Phi) <= b = sqrt(2); oracle: grid max of the ratio
    k = tail_ratio_bound(hr4_profile)
    assert k == pytest.approx(np.sqrt(2), abs=1e-4)
    assert k == pytest.approx(float(np.max(-hr4_exact.phi_prime / hr4_exact.phi)), abs=1e-4)


def test_exponential_pair(hr4_profile):
    plus, minus = check_exponential_pair(HR4, hr4_profile)
    assert plus.passed and minus.passed
    a = exponential_speed_bound(HR4, hr4_profile)
    assert a == pytest.approx(2 * np.sqrt(2) - 1 - hr4_profile.c + 5.0, abs=1e-4)


def test_exponential_pair_far_field(hr4_profile):
    a = exponential_speed_bound(HR4, hr4_profile)
    z = np.linspace(30, 40, 101)
    T, Z = np.meshgrid([0.0, 1.0], z, indexing="ij")
    for s in (1, -1):
        L = ExponentialCandidate(hr4_profile, a, 0.0, s).residual(HR4, hr4_profile.c, None, Z, T)
        assert np.max(np.abs(L)) <= 1e-8


def test_exponential_pair_undersized_a(hr4_profile):
    k = tail_ratio_bound(hr4_profile)
    plus, minus = check_exponential_pair(HR4, hr4_profile, a=0.5 * (2 * k + 1 - hr4_profile.c))
    assert not (plus.passed and minus.passed)
    assert max(plus.violation, minus.violation) > 0


# --------------------------------------------------------------- main pair

def test_main_degenerate(hr4_profile):
    V0 = make_graph(20, 16, 0.0)
    cand = ModulatedCandidate(hr4_profile, CutoffPsi(default_lambda1(HR4, hr4_profile.c)), V0, None, 1)
    grid = ResidualGrid.uniform(nz=401, nt=11, t_hi=10, x=V0.x)
    rep = residual_L(cand, HR4, hr4_profile.c, grid)
    assert max(abs(rep.min), abs(rep.max)) <= 1e-6


def test_main_flat_graph(hr4_profile):
    V0 = make_graph(20, 16, 3.0)
    mod = build_modulation(1.0, 1.0, 10.0, 1e-4, 1e-2)
    grid = ResidualGrid.uniform(nz=401, x=V0.x)
    plus, minus = check_main_pair(HR4, hr4_profile, V0, grid=grid, mod=mod)
    assert plus.min >= -1e-8 and minus.max <= 1e-8
    assert max(abs(plus.diagnostics["I_min"]), abs(plus.diagnostics["I_max"])) <= 1e-6


def test_main_corrugated_graph(hr4_profile):
    V0 = fourier_graph(20, 32, [(1, 0.05, 0.0)])
    grid = ResidualGrid.uniform(nz=401, x=V0.x)
    plus, minus = check_main_pair(HR4, hr4_profile, V0, grid=grid)
    assert plus.passed and minus.passed
    # [DERIVED] oracle: refinement in z, t and x keeps the verdicts
    k = plus.constants
    mod = build_modulation(k["eps"], k["K"], k["C0"], k["C1"], k["C2"])
    V1 = fourier_graph(20, 64, [(1, 0.05, 0.0)])
    fine = grid.refined()
    assert np.allclose(fine.x, V1.x)
    again = check_main_pair(HR4, hr4_profile, V1, grid=fine, mod=mod)
    assert refined_stable(plus, again[0]) and refined_stable(minus, again[1])


def test_main_grid_must_match_graph(hr4_profile):
    V0 = fourier_graph(20, 32, [(1, 0.05, 0.0)])
    cand = ModulatedCandidate(hr4_profile, CutoffPsi(-1.0), V0, None, 1)
    with pytest.raises(ValueError):
        residual_L(cand, HR4, hr4_profile.c, ResidualGrid.uniform(nz=101, x=np.arange(16.0)))


# ------------------------------------------------- comparison corroboration

def test_pde_stays_below_supersolution(hr4_profile):
    plus, _ = check_rothe_pair(HR4, hr4_profile, 0.005)
    k = plus.constants
    cand = RotheCandidate(hr4_profile, CutoffPsi(k["lambda1"]), 0.005, 0, 0, k["beta"], k["C"], 1)
    g = Grid1D.from_spacing(-40, 40, 0.02)
    u = Field1D(g, cand.values(None, g.z, np.zeros_like(g.z)))
    for T in (1.0, 5.0, 20.0):
        u = evolve(u, HR4, hr4_profile.c, 0.02, T - u.time)
        assert np.all(u.values <= cand.values(None, g.z, np.full_like(g.z, T)) + 1e-4)
