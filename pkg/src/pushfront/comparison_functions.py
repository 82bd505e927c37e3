"""Explicit super- and subsolutions and a grid checker for their sign.

The operator is ``L[w] = w_t - w_zz - w_xx - c w_z - f(w)`` in the moving
frame.  Every candidate below is a closed-form composition of the profile
``Phi``, the cutoff ``psi`` and scalar functions of time, so ``L`` is
evaluated from exact chain-rule derivatives, with ``Phi''`` taken from the
profile equation.  The only numerical derivatives are the x-derivatives of
the graph ``V`` in the modulated pair, computed spectrally on its periodic
grid.  A verdict is a grid certificate, not a proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainTooSmall, EpsilonBudget, SearchExhausted
from .front_dynamics import GraphField, step_semilinear, stable_dt
from .profile import FrontProfile
from .reaction_terms import ReactionTerm, lambda_roots, satisfies_kpp_bound

__all__ = [
    "CutoffPsi",
    "ModulationPair",
    "ResidualGrid",
    "ResidualReport",
    "eval_psi",
    "chi",
    "build_modulation",
    "residual_L",
    "ProfileCandidate",
    "ZeroCandidate",
    "RotheCandidate",
    "WangCandidate",
    "ExponentialCandidate",
    "ModulatedCandidate",
    "default_lambda1",
    "tail_ratio_bound",
    "exponential_speed_bound",
    "check_rothe_pair",
    "check_wang_pair",
    "check_exponential_pair",
    "check_main_pair",
    "evolve_graph_samples",
]

ANALYTIC_TOL = 1e-8
GRAPH_TOL = 1e-6


# ---------------------------------------------------------------- cutoff psi

def _blend_coefficients() -> np.ndarray:
    # quintic in y on [1/2, 1]: value, slope, curvature matched to y and to 1
    rows, rhs = [], []
    for y0, vals in ((0.5, (0.5, 1.0, 0.0)), (1.0, (1.0, 0.0, 0.0))):
        for d, v in enumerate(vals):
            row = np.zeros(6)
            for k in range(d, 6):
                row[k] = np.prod(np.arange(k - d + 1, k + 1)) * y0 ** (k - d)
            rows.append(row)
            rhs.append(v)
    return np.linalg.solve(np.array(rows), np.array(rhs))


_CHI = _blend_coefficients()
_CHI1 = np.polynomial.polynomial.polyder(_CHI)
_CHI2 = np.polynomial.polynomial.polyder(_CHI, 2)


@dataclass(frozen=True)
class CutoffPsi:
    """``psi(s) = chi(exp(lambda1 s))`` with ``chi(y) = y`` for ``y <= 1/2``, ``1`` for ``y >= 1``.

    On ``[1/2, 1]`` ``chi`` is the quintic matching value, slope and
    curvature of both branches, so ``psi`` is C^2.  The quintic is
    increasing there and stays in ``[1/2, 1]``.
    """

    lambda1: float

    def __post_init__(self):
        if self.lambda1 == 0:
            raise ValueError("lambda1 must be nonzero")


def chi(y, order: int = 0):
    """``chi`` or its first or second derivative."""
    from numpy.polynomial import polynomial as P

    y = np.asarray(y, dtype=float)
    coeffs = (_CHI, _CHI1, _CHI2)[order]
    lo = (y, np.ones_like(y), np.zeros_like(y))[order]
    hi = (np.ones_like(y), np.zeros_like(y), np.zeros_like(y))[order]
    mid = P.polyval(y, coeffs)
    return np.where(y <= 0.5, lo, np.where(y >= 1.0, hi, mid))


def eval_psi(psi: CutoffPsi, s, order: int = 2):
    """``(psi, psi', psi'')`` at ``s`` (fewer entries for smaller ``order``)."""
    lam = psi.lambda1
    arg = np.clip(lam * np.asarray(s, dtype=float), -745.0, 50.0)
    y = np.exp(arg)
    out = [chi(y)]
    if order >= 1:
        d1 = chi(y, 1)
        out.append(lam * y * d1)
        if order >= 2:
            out.append(lam * lam * y * (d1 + y * chi(y, 2)))
    return tuple(out) if order else out[0]


def default_lambda1(f: ReactionTerm, c: float) -> float:
    """Midpoint of the characteristic roots, where ``lambda^2 + c lambda + f'(0)`` is most negative."""
    ex = lambda_roots(f, c, tol=1e-8)
    return 0.5 * (ex.lambda_minus + ex.lambda_plus)


# ------------------------------------------------------------- modulation p, q

@dataclass(frozen=True)
class ModulationPair:
    """``p(t) = (2/K) C1 C2 / (C2 + C1 t^2)`` and ``q(t) = C0 int_0^t p``.

    ``P(t) = min(C2 / t^2, C1)`` and ``K p`` is the harmonic mean
    ``2 C1 (C2/t^2) / (C1 + C2/t^2)``, which lies between ``P`` and ``2P``.
    """

    eps: float
    K: float
    C0: float
    C1: float
    C2: float

    def p(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 / self.K * self.C1 * self.C2 / (self.C2 + self.C1 * t * t)

    def dp(self, t):
        t = np.asarray(t, dtype=float)
        return -4.0 / self.K * self.C1**2 * self.C2 * t / (self.C2 + self.C1 * t * t) ** 2

    def q(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 * self.C0 / self.K * np.sqrt(self.C1 * self.C2) * np.arctan(t * np.sqrt(self.C1 / self.C2))

    def dq(self, t):
        return self.C0 * self.p(t)

    def P(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.minimum(self.C2 / (t * t), self.C1)

    @property
    def q_inf(self) -> float:
        return float(self.C0 * np.pi * np.sqrt(self.C1 * self.C2) / self.K)

    @property
    def log_rate_bound(self) -> float:
        """``sup |p'/p| = sqrt(C1/C2)``."""
        return float(np.sqrt(self.C1 / self.C2))


def build_modulation(eps: float, K: float, C0: float, C1: float, C2: float,
                     check_times=None) -> ModulationPair:
    """Closed-form ``p, q`` with every bound checked.

    Raises
    ------
    EpsilonBudget
        ``q(inf)`` or ``p(0)`` exceeds ``eps``.
    ValueError
        A constant is out of range, or the bracket ``P <= K p <= 2P`` fails
        at one of ``check_times`` (default: 10^4 log-spaced points).
    """
    if min(eps, K, C0, C1, C2) <= 0:
        raise ValueError("all constants must be positive")
    if C0 < 1 or K > 1:
        raise ValueError("need C0 >= 1 and K <= 1")
    m = ModulationPair(float(eps), float(K), float(C0), float(C1), float(C2))
    if m.q_inf > eps:
        raise EpsilonBudget(f"q(inf) = {m.q_inf:.4g} exceeds eps = {eps}")
    if m.p(0.0) > eps:
        raise EpsilonBudget(f"p(0) = {float(m.p(0.0)):.4g} exceeds eps = {eps}")
    t = np.geomspace(1e-6, 1e6, 10_000) * np.sqrt(C2 / C1) if check_times is None else np.asarray(check_times)
    Kp, P = K * m.p(t), m.P(t)
    if np.any(Kp < P * (1 - 1e-12)) or np.any(Kp > 2 * P * (1 + 1e-12)):
        raise ValueError("bracket P <= K p <= 2P violated")
    return m


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class ResidualGrid:
    """Tensor grid; ``x`` is ``None`` for one-dimensional candidates."""

    z: np.ndarray
    t: np.ndarray
    x: np.ndarray | None = None

    @classmethod
    def uniform(cls, z_lo=-40.0, z_hi=40.0, nz=801, t_hi=50.0, nt=51, x=None):
        return cls(np.linspace(z_lo, z_hi, nz), np.linspace(0.0, t_hi, nt), x)

    def refined(self) -> "ResidualGrid":
        """Every spacing halved (x stays periodic)."""
        def half(a):
            return np.linspace(a[0], a[-1], 2 * len(a) - 1)
        x = None
        if self.x is not None:
            nx = len(self.x)
            x = np.arange(2 * nx) * (self.x[1] - self.x[0]) / 2
        return ResidualGrid(half(self.z), half(self.t), x)

    @property
    def extents(self) -> dict:
        e = {"z": (float(self.z[0]), float(self.z[-1]), len(self.z)),
             "t": (float(self.t[0]), float(self.t[-1]), len(self.t))}
        if self.x is not None:
            e["x"] = (float(self.x[0]), float(self.x[-1]), len(self.x))
        return e


@dataclass
class ResidualReport:
    """Extrema of ``L[candidate]`` over a grid with a sign verdict.

    ``expected`` is ``"super"`` (needs ``min >= -tol``) or ``"sub"``
    (needs ``max <= tol``); ``None`` reports extrema only.
    """

    candidate: str
    extents: dict
    min: float
    max: float
    argmin: dict
    argmax: dict
    tol: float
    expected: str | None = None
    constants: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_super(self) -> bool:
        return self.min >= -self.tol

    @property
    def is_sub(self) -> bool:
        return self.max <= self.tol

    @property
    def verdict(self) -> str:
        if self.is_super and self.is_sub:
            return "zero"
        if self.is_super:
            return "super"
        if self.is_sub:
            return "sub"
        return "none"

    @property
    def passed(self) -> bool:
        if self.expected == "super":
            return self.is_super
        if self.expected == "sub":
            return self.is_sub
        return True

    @property
    def violation(self) -> float:
        """How far the expected inequality is missed (0 when it holds)."""
        if self.expected == "super":
            return max(0.0, -self.min)
        if self.expected == "sub":
            return max(0.0, self.max)
        return 0.0

    def summary(self) -> str:
        consts = ", ".join(f"{k}={v:.6g}" for k, v in self.constants.items())
        return (f"{self.candidate}: expected={self.expected} verdict={self.verdict} "
                f"min={self.min:.3e} at {self.argmin} max={self.max:.3e} at {self.argmax} "
                f"tol={self.tol:g} [{consts}]")


# --------------------------------------------------------------- candidates

class _Candidate:
    name = "candidate"
    tol = ANALYTIC_TOL
    constants: dict = {}

    def residual(self, f: ReactionTerm, c: float, X, Z, T):
        raise NotImplementedError

    def values(self, X, Z, T):
        raise NotImplementedError


@dataclass
class ZeroCandidate(_Candidate):
    """``w = 0``."""

    name: str = "zero"

    def values(self, X, Z, T):
        return np.zeros(np.broadcast_shapes(np.shape(Z), np.shape(T)))

    def residual(self, f, c, X, Z, T):
        return -f(self.values(X, Z, T))


@dataclass
class ProfileCandidate(_Candidate):
    """``w = Phi(z - shift) + lift``."""

    profile: FrontProfile
    shift: float = 0.0
    lift: float = 0.0
    name: str = "profile"

    @property
    def constants(self):
        return {"shift": self.shift, "lift": self.lift}

    def values(self, X, Z, T):
        return self.profile(Z - self.shift) + self.lift + 0.0 * T

    def residual(self, f, c, X, Z, T):
        phi, d1, d2 = self.profile.derivatives(Z - self.shift, 2)
        w = phi + self.lift
        return 0.0 * T - d2 - c * d1 - f(w)


@dataclass
class RotheCandidate(_Candidate):
    """``Phi(z - z1 - s C (1 - e^{-bt})) + s q0 e^{-bt} psi(z - z2)``, ``s = +1`` or ``-1``."""

    profile: FrontProfile
    psi: CutoffPsi
    q0: float
    z1: float
    z2: float
    beta: float
    C: float
    sign: int = 1
    name: str = "rothe"

    @property
    def constants(self):
        return {"q0": self.q0, "z1": self.z1, "z2": self.z2, "beta": self.beta, "C": self.C,
                "lambda1": self.psi.lambda1}

    def _parts(self, Z, T):
        s = self.sign
        e = np.exp(-self.beta * T)
        zeta = Z - self.z1 - s * self.C * (1 - e)
        ps = eval_psi(self.psi, Z - self.z2, 2)
        return s, e, zeta, ps

    def values(self, X, Z, T):
        s, e, zeta, ps = self._parts(Z, T)
        return self.profile(zeta) + s * self.q0 * e * ps[0]

    def residual(self, f, c, X, Z, T):
        s, e, zeta, (psi, dpsi, ddpsi) = self._parts(Z, T)
        phi, d1 = self.profile.derivatives(zeta, 1)
        w = phi + s * self.q0 * e * psi
        return (-s * d1 * self.C * self.beta * e
                - s * self.q0 * e * (self.beta * psi + ddpsi + c * dpsi)
                + f(phi) - f(w))


@dataclass
class WangCandidate(_Candidate):
    """``(1 + s eps e^{-bt}) Phi(z - s sigma eps (1 - e^{-bt}))``."""

    profile: FrontProfile
    eps: float
    sigma: float
    beta: float
    sign: int = 1
    name: str = "wang"

    @property
    def constants(self):
        return {"eps": self.eps, "sigma": self.sigma, "beta": self.beta}

    def _parts(self, Z, T):
        s = self.sign
        e = np.exp(-self.beta * T)
        A = 1 + s * self.eps * e
        zeta = Z - s * self.sigma * self.eps * (1 - e)
        return s, e, A, zeta

    def values(self, X, Z, T):
        s, e, A, zeta = self._parts(Z, T)
        return A * self.profile(zeta)

    def residual(self, f, c, X, Z, T):
        s, e, A, zeta = self._parts(Z, T)
        phi, d1 = self.profile.derivatives(zeta, 1)
        dA = -s * self.beta * self.eps * e
        dshift = s * self.sigma * self.eps * self.beta * e
        # A (Phi'' + c Phi') = -A f(Phi)
        return dA * phi - A * d1 * dshift + A * f(phi) - f(A * phi)


@dataclass
class ExponentialCandidate(_Candidate):
    """``(1 + s e^{-(z - a t)}) Phi(z - z0)``."""

    profile: FrontProfile
    a: float
    z0: float = 0.0
    sign: int = 1
    name: str = "exponential"

    @property
    def constants(self):
        return {"a": self.a, "z0": self.z0}

    def values(self, X, Z, T):
        E = np.exp(-(Z - self.a * T))
        return (1 + self.sign * E) * self.profile(Z - self.z0)

    def residual(self, f, c, X, Z, T):
        s = self.sign
        E = np.exp(-(Z - self.a * T))
        phi, d1 = self.profile.derivatives(Z - self.z0, 1)
        return (s * E * (self.a - 1 + c) * phi + 2 * s * E * d1
                + (1 + s * E) * f(phi) - f((1 + s * E) * phi))


def _spectral_derivatives(V: np.ndarray, period: float, orders=(1, 2, 3)):
    n = V.shape[-1]
    k = 2j * np.pi * np.fft.rfftfreq(n, d=period / n)
    if n % 2 == 0:
        k[-1] = 0.0  # drop the unpaired Nyquist mode for odd derivatives
    Vh = np.fft.rfft(V, axis=-1)
    out = []
    for m in orders:
        km = k**m
        if n % 2 == 0 and m % 2 == 0:
            km[-1] = (np.pi * n / period * 1j) ** m
        out.append(np.fft.irfft(Vh * km, n=n, axis=-1))
    return out


def evolve_graph_samples(V0: GraphField, c: float, times, dt: float | None = None) -> np.ndarray:
    """Drift-free semilinear graph sampled at ``times`` (rows)."""
    times = np.asarray(times, dtype=float)
    dt0 = dt if dt is not None else stable_dt(V0.dx, 0.8)
    out = np.empty((len(times), len(V0.x)))
    V, tcur = V0, 0.0
    for i, tk in enumerate(times):
        gap = tk - tcur
        if gap > 0:
            n = int(np.ceil(gap / dt0 - 1e-12))
            h = gap / n
            for _ in range(n):
                V = step_semilinear(V, c, h, with_drift=False)
            tcur = tk
        out[i] = V.values
    return out


@dataclass
class ModulatedCandidate(_Candidate):
    """``Phi((z - V)/sqrt(1 + V_x^2) - s q(t)) + s p(t) psi(z)``.

    ``V`` solves ``V_t = V_xx + (c/2) V_x^2`` from ``V0``.  Its
    x-derivatives are spectral; ``V_t`` and ``V_xt`` come from the equation.
    ``split`` returns the two parts ``L = I + J`` where ``J`` gathers the
    ``p, q`` terms and ``I`` the graph-geometry terms, with
    ``eta = (z - V)/sqrt(1 + V_x^2)``.
    """

    profile: FrontProfile
    psi: CutoffPsi
    V0: GraphField
    mod: ModulationPair | None
    sign: int = 1
    name: str = "modulated"
    tol: float = GRAPH_TOL

    @property
    def constants(self):
        if self.mod is None:
            return {"lambda1": self.psi.lambda1}
        m = self.mod
        return {"eps": m.eps, "K": m.K, "C0": m.C0, "C1": m.C1, "C2": m.C2, "lambda1": self.psi.lambda1}

    def _graph(self, t, c):
        key = (tuple(np.ravel(t)), c)
        cache = self.__dict__.setdefault("_cache", {})
        if key not in cache:
            V = evolve_graph_samples(self.V0, c, np.ravel(t))
            d1, d2, d3 = _spectral_derivatives(V, self.V0.period)
            cache.clear()
            cache[key] = (V, d1, d2, d3)
        return cache[key]

    def _pq(self, t):
        if self.mod is None:
            z = np.zeros_like(t)
            return z, z, z, z
        m = self.mod
        return m.p(t), m.dp(t), m.q(t), m.dq(t)

    def split(self, f, c, t, z):
        """``(L, I, J)`` on the grid ``t x x x z`` (array axes in that order)."""
        t = np.asarray(t, dtype=float)
        V, Vx, Vxx, Vxxx = self._graph(t, c)
        Vt = Vxx + 0.5 * c * Vx**2
        Vxt = Vxxx + c * Vx * Vxx
        g = np.sqrt(1 + Vx**2)
        gx = Vx * Vxx / g
        gxx = (Vxx**2 + Vx * Vxxx) / g - Vx**2 * Vxx**2 / g**3
        gt = Vx * Vxt / g
        sh = (slice(None), slice(None), None)
        V, Vx, Vxx, Vt, g, gx, gxx, gt = (a[sh] for a in (V, Vx, Vxx, Vt, g, gx, gxx, gt))
        Z = z[None, None, :]
        d = Z - V
        eta = d / g
        eta_t = -Vt / g - eta * gt / g
        eta_x = -Vx / g - eta * gx / g
        eta_xx = -Vxx / g + 2 * Vx * gx / g**2 - d * (gxx / g**2 - 2 * gx**2 / g**3)
        p, dp, q, dq = (a[:, None, None] for a in self._pq(t))
        s = self.sign
        phi, d1, d2 = self.profile.derivatives(eta - s * q, 2)
        ps, dps, ddps = (a[None, None, :] for a in eval_psi(self.psi, z, 2))
        w = phi + s * p * ps
        J = -s * d1 * dq + s * dp * ps - s * p * (ddps + c * dps) - (f(w) - f(phi))
        I = d1 * eta_t - d2 * (eta_x**2 + 1 / g**2 - 1) - d1 * eta_xx - c * d1 * (1 / g - 1)
        L = (d1 * (eta_t - s * dq) + s * dp * ps - d2 * (eta_x**2 + 1 / g**2) - d1 * eta_xx
             - s * p * ddps - c * d1 / g - s * c * p * dps - f(w))
        return L, I, J


# ------------------------------------------------------------- residual_L

def _loc(grid: ResidualGrid, idx) -> dict:
    if grid.x is None:
        it, iz = idx
        return {"t": float(grid.t[it]), "z": float(grid.z[iz])}
    it, ix, iz = idx
    return {"t": float(grid.t[it]), "x": float(grid.x[ix]), "z": float(grid.z[iz])}


def residual_L(candidate, f: ReactionTerm, c: float, grid: ResidualGrid, expected: str | None = None,
               tol: float | None = None, max_extension: float = 60.0) -> ResidualReport:
    """Evaluate ``L[candidate]`` on ``grid`` and report extrema.

    Raises :class:`DomainTooSmall` when the grid reaches further than
    ``max_extension`` beyond the stored profile, where only the
    exponential continuation would be sampled.
    """
    p = getattr(candidate, "profile", None)
    if p is not None:
        if grid.z[0] < p.z_lo - max_extension or grid.z[-1] > p.z_hi + max_extension:
            raise DomainTooSmall(
                f"grid z in [{grid.z[0]}, {grid.z[-1]}] exceeds the profile range "
                f"[{p.z_lo:.1f}, {p.z_hi:.1f}] by more than {max_extension}")
    diagnostics = {}
    if isinstance(candidate, ModulatedCandidate):
        if grid.x is None or len(grid.x) != len(candidate.V0.x) or not np.allclose(grid.x, candidate.V0.x):
            raise ValueError("grid x-axis must match the graph's x nodes")
        L, I, J = candidate.split(f, c, grid.t, grid.z)
        diagnostics = {"I_min": float(I.min()), "I_max": float(I.max()),
                       "J_min": float(J.min()), "J_max": float(J.max()),
                       "eta": "(z - V)/sqrt(1 + V_x^2), inferred"}
    else:
        T, Z = np.meshgrid(grid.t, grid.z, indexing="ij")
        L = candidate.residual(f, c, None, Z, T)
    if not np.all(np.isfinite(L)):
        raise FloatingPointError(f"non-finite residual for {candidate.name}")
    imin = np.unravel_index(np.argmin(L), L.shape)
    imax = np.unravel_index(np.argmax(L), L.shape)
    return ResidualReport(
        candidate=candidate.name + ("+" if getattr(candidate, "sign", 1) > 0 else "-"),
        extents=grid.extents, min=float(L[imin]), max=float(L[imax]),
        argmin=_loc(grid, imin), argmax=_loc(grid, imax),
        tol=candidate.tol if tol is None else tol, expected=expected,
        constants=dict(candidate.constants), diagnostics=diagnostics,
    )


def _search(make, ladder, f, c, grid, expected, label):
    worst = None
    for consts in ladder:
        rep = residual_L(make(*consts), f, c, grid, expected)
        if rep.passed:
            return rep
        if worst is None or rep.violation < worst.violation:
            worst = rep
    raise SearchExhausted(f"{label}: no constants in the ladder certify the sign; best "
                          f"violation {worst.violation:.3e}", worst=worst)


ROTHE_BETAS = tuple(np.geomspace(1e-3, 10.0, 13))
ROTHE_CS = tuple(np.geomspace(0.1, 1e3, 13))


def check_rothe_pair(f: ReactionTerm, p: FrontProfile, q0: float, z1: float = 0.0, z2: float = 0.0,
                     grid: ResidualGrid | None = None, lambda1: float | None = None,
                     betas=ROTHE_BETAS, Cs=ROTHE_CS, beta=None, C=None):
    """Certify ``L[w+] >= 0`` and ``L[w-] <= 0`` for the shifted-profile pair.

    ``(beta, C)`` are searched over ``betas x Cs`` in ascending order, each
    sign separately, unless both are given.  Returns ``(plus, minus)``.
    """
    c = p.c
    grid = grid or ResidualGrid.uniform()
    psi = CutoffPsi(lambda1 if lambda1 is not None else default_lambda1(f, c))
    ladder = [(beta, C)] if beta is not None and C is not None else list(itertools.product(betas, Cs))
    out = []
    for sign, expected in ((1, "super"), (-1, "sub")):
        def make(b, CC, sign=sign):
            return RotheCandidate(p, psi, q0, z1, z2, float(b), float(CC), sign)
        out.append(_search(make, ladder, f, c, grid, expected, f"rothe{'+' if sign > 0 else '-'}"))
    return tuple(out)


WANG_SIGMAS = tuple(np.geomspace(0.1, 1e3, 13))
# beta starts at 1e-2: below that the true violation for undersized sigma
# (about eps beta^2) drops under the 1e-8 tolerance and would pass spuriously
WANG_BETAS = tuple(np.geomspace(1e-2, 1e2, 13))


def check_wang_pair(f: ReactionTerm, p: FrontProfile, eps: float, grid: ResidualGrid | None = None,
                    M: float = 1.0, alpha: float = 1.0, sigmas=WANG_SIGMAS, betas=WANG_BETAS,
                    sigma=None, beta=None):
    """Certify the multiplicatively perturbed pair ``(1 +- eps e^{-bt}) Phi(z -+ sigma eps (1 - e^{-bt}))``.

    Requires ``0 < f'(0) u - f(u) <= M u^(1+alpha)`` on ``(0, 1)``.
    Returns ``(plus, minus)``.
    """
    if not satisfies_kpp_bound(f, M, alpha):
        raise ValueError(f"f does not satisfy 0 < f'(0)u - f(u) <= {M} u^(1+{alpha})")
    c = p.c
    grid = grid or ResidualGrid.uniform()
    ladder = ([(sigma, beta)] if sigma is not None and beta is not None
              else [(s, b) for b in betas for s in sigmas])
    out = []
    for sign, expected in ((1, "super"), (-1, "sub")):
        def make(s, b, sign=sign):
            return WangCandidate(p, eps, float(s), float(b), sign)
        out.append(_search(make, ladder, f, c, grid, expected, f"wang{'+' if sign > 0 else '-'}"))
    return tuple(out)


def tail_ratio_bound(p: FrontProfile) -> float:
    """``k = max |Phi'| / Phi`` over the stored profile.

    Raises :class:`DomainTooSmall` if the stored tail ends above ``1e-4``,
    where the ratio has not settled to its limit.
    """
    if p.phi[-1] > 1e-4:
        raise DomainTooSmall("profile tail too short to bound |Phi'|/Phi")
    return float(np.max(-p.phi_prime / p.phi))


def exponential_speed_bound(f: ReactionTerm, p: FrontProfile) -> float:
    """``2k - 1 - c + max_[0,1] |f'|`` with ``k`` from :func:`tail_ratio_bound`."""
    return 2 * tail_ratio_bound(p) - 1 - p.c + f.fprime_sup(0.0, 1.0)


def check_exponential_pair(f: ReactionTerm, p: FrontProfile, a: float | None = None, z0: float = 0.0,
                           grid: ResidualGrid | None = None, z_lo: float = -40.0, z_hi: float = 40.0,
                           nz: int = 801, nt: int = 51):
    """Sign check of ``(1 +- e^{-(z - a t)}) Phi(z - z0)``.

    ``a`` defaults to :func:`exponential_speed_bound`.  The default grid is
    ``z in [z_lo, z_hi]``, ``t in [0, (z_hi - 10)/a]``.  Returns
    ``(plus, minus)``; no search, the reports carry the verdicts.
    """
    a = exponential_speed_bound(f, p) if a is None else float(a)
    grid = grid or ResidualGrid(np.linspace(z_lo, z_hi, nz), np.linspace(0.0, (z_hi - 10.0) / a, nt))
    return tuple(residual_L(ExponentialCandidate(p, a, z0, s), f, p.c, grid, e)
                 for s, e in ((1, "super"), (-1, "sub")))


MAIN_C0 = (1.0, 3.0, 10.0, 30.0, 100.0)
MAIN_C1 = (1e-3, 1e-4, 1e-5)
MAIN_RATIO = (100.0, 1000.0)


def check_main_pair(f: ReactionTerm, p: FrontProfile, V0: GraphField, grid: ResidualGrid | None = None,
                    mod: ModulationPair | None = None, lambda1: float | None = None, eps: float = 1.0,
                    K: float = 1.0, C0s=MAIN_C0, C1s=MAIN_C1, ratios=MAIN_RATIO):
    """Certify the graph-modulated pair built on ``V`` from ``V0``.

    With ``mod`` given it is used as is; otherwise ``(C0, C1, C2/C1)`` are
    searched, skipping combinations that break the ``eps`` budget.
    Returns ``(plus, minus)`` with the ``I``/``J`` split in ``diagnostics``.
    """
    c = p.c
    if grid is None:
        grid = ResidualGrid.uniform(nz=401, x=V0.x)
    psi = CutoffPsi(lambda1 if lambda1 is not None else default_lambda1(f, c))
    if mod is not None:
        ladder = [(mod,)]
    else:
        ladder = []
        for C0, C1, r in itertools.product(C0s, C1s, ratios):
            try:
                ladder.append((build_modulation(eps, K, C0, C1, r * C1),))
            except EpsilonBudget:
                continue
    out = []
    for sign, expected in ((1, "super"), (-1, "sub")):
        def make(m, sign=sign):
            return ModulatedCandidate(p, psi, V0, m, sign)
        out.append(_search(make, ladder, f, c, grid, expected, f"main{'+' if sign > 0 else '-'}"))
    return tuple(out)
