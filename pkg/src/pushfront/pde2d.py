"""Two-dimensional moving-frame equation, periodic in x.

``u_t = u_xx + u_zz + c u_z + f(u)`` on ``[0, Lx) x [z_lo, z_hi]``.  The
implicit half of each IMEX step is diagonalized in x by a real FFT: the
periodic second difference has eigenvalues ``kappa_m = (4/dx^2) sin^2(pi m/nx)``,
which only shift the diagonal of the z-operator.  All modes are stacked into
one block-tridiagonal system and solved together, real and imaginary parts as
two right-hand sides.  For x-independent data only the ``m = 0`` block is
excited and the step reproduces :func:`pushfront.pde1d.step` column by column.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_banded

from ._stencil import boundary_rhs, implicit_banded, step_contract
from .errors import InstabilityError, MultipleCrossings, NoCrossing
from .pde1d import min_descent
from .profile import FrontProfile
from .reaction_terms import ReactionTerm

__all__ = [
    "Grid2D",
    "Field2D",
    "LevelSet",
    "DecaySeries",
    "Run2D",
    "step2d",
    "evolve2d",
    "extract_level_set",
    "profile_residual",
    "monotonicity_check",
    "default_band_margin",
    "x_derivative_decay",
    "periodic_derivative",
    "gamma_derivatives",
    "corrugated_data",
    "run_2d",
]


@dataclass(frozen=True)
class Grid2D:
    Lx: float
    nx: int
    z_lo: float
    z_hi: float
    nz: int

    def __post_init__(self):
        if self.nx < 4 or self.nz < 64:
            raise ValueError("need nx >= 4 and nz >= 64")
        if not (self.Lx > 0 and self.z_hi > self.z_lo):
            raise ValueError("extents must be positive")

    @classmethod
    def from_spacing(cls, Lx: float, nx: int, z_lo: float, z_hi: float, dz: float) -> "Grid2D":
        return cls(float(Lx), int(nx), float(z_lo), float(z_hi), int(round((z_hi - z_lo) / dz)) + 1)

    @property
    def dx(self) -> float:
        return self.Lx / self.nx

    @property
    def dz(self) -> float:
        return (self.z_hi - self.z_lo) / (self.nz - 1)

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * self.dx

    @property
    def z(self) -> np.ndarray:
        return np.linspace(self.z_lo, self.z_hi, self.nz)

    @property
    def kappas(self) -> tuple:
        m = np.arange(self.nx // 2 + 1)
        return tuple(4.0 / self.dx**2 * np.sin(np.pi * m / self.nx) ** 2)


@dataclass(frozen=True, eq=False)
class Field2D:
    """Values indexed ``[i_x, j_z]``."""

    grid: Grid2D
    values: np.ndarray
    time: float = 0.0
    bc: str = "dirichlet"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.nx, self.grid.nz):
            raise ValueError(f"values have shape {v.shape}, grid is {(self.grid.nx, self.grid.nz)}")
        object.__setattr__(self, "values", v)


def step2d(u: Field2D, f: ReactionTerm, c: float, dt: float, *, check: bool = True) -> Field2D:
    """One IMEX Euler step; same stability contract as the 1D step."""
    g = u.grid
    if check:
        step_contract(f, c, g.dz, dt)
    kap = g.kappas
    ab = implicit_banded(g.nz, g.dz, float(dt), float(c), kap, u.bc)
    rhs = u.values + dt * f(u.values)
    boundary_rhs(rhs, u.bc)
    R = np.fft.rfft(rhs, axis=0)
    B = np.stack([R.real.ravel(), R.imag.ravel()], axis=1)
    S = solve_banded((1, 1), ab, B, overwrite_b=True, check_finite=False)
    R = (S[:, 0] + 1j * S[:, 1]).reshape(len(kap), g.nz)
    v = np.fft.irfft(R, n=g.nx, axis=0)
    if not np.all(np.abs(v) <= 10.0):
        raise InstabilityError(f"|u| exceeded 10 at t={u.time + dt:.4g}")
    return replace(u, values=v, time=u.time + dt)


def evolve2d(u: Field2D, f: ReactionTerm, c: float, dt: float, T: float) -> Field2D:
    step_contract(f, c, u.grid.dz, dt)
    for _ in range(int(round(T / dt))):
        u = step2d(u, f, c, dt, check=False)
    return u


@dataclass(frozen=True, eq=False)
class LevelSet:
    """Graph ``z = gamma(x)`` of the ``level`` set with the smallest crossing slope."""

    x: np.ndarray
    gamma: np.ndarray
    level: float
    min_slope: float
    time: float = 0.0


def extract_level_set(u: Field2D, level: float = 0.5, band=None) -> LevelSet:
    """Per-column linear interpolation of the unique downward crossing.

    ``band`` restricts the search to ``band[0] <= z <= band[1]``; by default
    it is ``[z_lo + 5, z_hi - 5]``.

    Raises
    ------
    MultipleCrossings
        Some column crosses the level more than once in the band.
    NoCrossing
        Some column does not cross it.
    """
    g = u.grid
    z = g.z
    lo, hi = band if band is not None else (g.z_lo + 5.0, g.z_hi - 5.0)
    jl = int(np.searchsorted(z, lo))
    jh = int(np.searchsorted(z, hi, side="right"))
    v = u.values[:, jl:jh]
    above = v >= level
    down = above[:, :-1] & ~above[:, 1:]
    up = ~above[:, :-1] & above[:, 1:]
    n_down = down.sum(axis=1)
    n_up = up.sum(axis=1)
    bad = np.flatnonzero((n_down > 1) | (n_up > 0))
    if bad.size:
        raise MultipleCrossings(int(bad[0]))
    if np.any(n_down == 0):
        raise NoCrossing(f"column {int(np.flatnonzero(n_down == 0)[0])} does not cross {level}")
    j = np.argmax(down, axis=1)
    rows = np.arange(g.nx)
    a, b = v[rows, j], v[rows, j + 1]
    gamma = z[jl + j] + (a - level) / (a - b) * g.dz
    slope = (a - b) / g.dz
    return LevelSet(g.x, gamma, float(level), float(slope.min()), u.time)


def profile_residual(u: Field2D, ls: LevelSet, p: FrontProfile) -> float:
    """``sup |u(x, z) - Phi(z - Gamma(x))|`` over all grid nodes."""
    g = u.grid
    model = p(g.z[None, :] - ls.gamma[:, None])
    return float(np.max(np.abs(u.values - model)))


def default_band_margin(p: FrontProfile, level: float = 0.5) -> float:
    """``min(1 - level, level)`` pulled in by ``1e-3`` relative, away from the flat states."""
    return min(1.0 - level, level) * (1.0 - 1e-3)


def monotonicity_check(u: Field2D, level: float = 0.5, margin: float = 0.4995) -> float:
    """``min(-u_z)`` over nodes with ``|u - level| <= margin`` (centered differences).

    Raises ``ValueError`` when no node lies in the band.
    """
    return min_descent(u.values, u.grid.dz, level, margin)


def periodic_derivative(w: np.ndarray, dx: float, order: int = 1, axis: int = 0) -> np.ndarray:
    """Second-order centered periodic differences of order 1, 2 or 3."""
    r = lambda k: np.roll(w, -k, axis=axis)
    if order == 1:
        return (r(1) - r(-1)) / (2 * dx)
    if order == 2:
        return (r(1) - 2 * w + r(-1)) / dx**2
    if order == 3:
        return (r(2) - 2 * r(1) + 2 * r(-1) - r(-2)) / (2 * dx**3)
    raise ValueError("order must be 1, 2 or 3")


@dataclass
class DecaySeries:
    t: np.ndarray
    sup_ux: np.ndarray
    sup_uxx: np.ndarray

    @property
    def ratio_ux(self) -> float:
        return float(self.sup_ux[-1] / self.sup_ux[0]) if self.sup_ux[0] > 0 else 0.0

    @property
    def ratio_uxx(self) -> float:
        return float(self.sup_uxx[-1] / self.sup_uxx[0]) if self.sup_uxx[0] > 0 else 0.0


def _sup_x_derivatives(u: Field2D, R: float):
    g = u.grid
    sel = np.abs(g.z) <= R
    v = u.values[:, sel]
    return (float(np.max(np.abs(periodic_derivative(v, g.dx, 1)))),
            float(np.max(np.abs(periodic_derivative(v, g.dx, 2)))))


def x_derivative_decay(fields, R: float = 10.0) -> DecaySeries:
    """Sup norms of ``u_x`` and ``u_xx`` over ``|z| <= R`` for each snapshot."""
    t, ux, uxx = [], [], []
    for u in fields:
        a, b = _sup_x_derivatives(u, R)
        t.append(u.time)
        ux.append(a)
        uxx.append(b)
    return DecaySeries(np.array(t), np.array(ux), np.array(uxx))


def gamma_derivatives(ls: LevelSet) -> tuple[float, float, float]:
    """``sup|Gamma_x|``, ``sup|Gamma_xx|``, ``sup|Gamma_xxx|`` by periodic differences."""
    dx = ls.x[1] - ls.x[0]
    return tuple(float(np.max(np.abs(periodic_derivative(ls.gamma, dx, k)))) for k in (1, 2, 3))


def corrugated_data(grid: Grid2D, p: FrontProfile, A: float = 1.0, mode: int = 1) -> Field2D:
    """``Phi(z - A cos(2 pi mode x / Lx))`` with exact boundary values."""
    shift = A * np.cos(2 * np.pi * mode * grid.x / grid.Lx)
    v = p(grid.z[None, :] - shift[:, None])
    v[:, 0], v[:, -1] = 1.0, 0.0
    return Field2D(grid, v)


@dataclass
class Run2D:
    """Sampled output of :func:`run_2d`.

    ``gamma[k]`` is the level set at ``t[k]`` (NaN rows before it exists);
    ``diagnostics`` maps column names to arrays aligned with ``t``.
    """

    c: float
    level: float
    x: np.ndarray
    t: np.ndarray
    gamma: np.ndarray
    diagnostics: dict
    final: Field2D
    snapshots: dict

    DIAG_COLUMNS = ("residual", "min_minus_uz", "sup_ux", "sup_uxx", "sup_gx", "sup_gxx")

    def gamma_at(self, t: float) -> np.ndarray:
        return self.gamma[int(np.argmin(np.abs(self.t - t)))]


def run_2d(f: ReactionTerm, c: float, u0: Field2D, p: FrontProfile, T: float, dt: float,
           sample_dt: float = 1.0, level: float = 0.5, R: float = 10.0,
           margin: float | None = None, keep=()) -> Run2D:
    """Evolve ``u0`` and record level sets and convergence diagnostics.

    At every sample time the level set is extracted (NaN if it is not yet
    a graph), and the profile residual, band monotonicity, x-derivative
    norms over ``|z| <= R`` and level-set slopes are stored.  Fields at
    the times in ``keep`` are returned in ``snapshots``.
    """
    g = u0.grid
    step_contract(f, c, g.dz, dt)
    if margin is None:
        margin = default_band_margin(p, level)
    per = int(round(sample_dt / dt))
    n = int(round(T / dt))
    keep_k = {int(round(tk / dt)): tk for tk in keep}
    diag = {k: [np.nan] for k in Run2D.DIAG_COLUMNS}
    ts, gam, snaps = [u0.time], [], {}

    def record(u):
        try:
            ls = extract_level_set(u, level)
            gam.append(ls.gamma)
            res = profile_residual(u, ls, p)
            gx, gxx, _ = gamma_derivatives(ls)
        except (MultipleCrossings, NoCrossing):
            gam.append(np.full(g.nx, np.nan))
            res = gx = gxx = np.nan
        ux, uxx = _sup_x_derivatives(u, R)
        return res, monotonicity_check(u, level, margin), ux, uxx, gx, gxx

    for key, val in zip(Run2D.DIAG_COLUMNS, record(u0)):
        diag[key][0] = val
    if 0 in keep_k:
        snaps[keep_k[0]] = u0
    u = u0
    for k in range(1, n + 1):
        u = step2d(u, f, c, dt, check=False)
        if k in keep_k:
            snaps[keep_k[k]] = u
        if k % per == 0:
            ts.append(u.time)
            for key, val in zip(Run2D.DIAG_COLUMNS, record(u)):
                diag[key].append(val)
    return Run2D(float(c), float(level), g.x, np.array(ts), np.array(gam),
                 {k: np.array(v) for k, v in diag.items()}, u, snaps)
