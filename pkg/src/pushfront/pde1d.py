"""One-dimensional reaction-diffusion in the frame moving with speed ``c``.

Solves ``u_t = u_zz + c u_z + f(u)`` on a truncated interval with ``u = 1`` on
the left and ``u = 0`` on the right.  Time stepping is IMEX Euler: the
reaction is explicit, diffusion and advection are implicit with centered
second-order differences, so each step is one tridiagonal solve.

The discrete front drifts slowly relative to the continuous one (the
discrete minimal speed differs from ``c*`` by ``O(dz^2)``); for HR(4) the
drift is about ``-0.28 dz^2`` per unit time.  Runs that measure positions to
``1e-2`` over hundreds of time units therefore use ``dz <= 0.02``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from ._stencil import boundary_rhs, implicit_banded, step_contract
from .errors import (DomainTooSmall, IllConditionedFit, Inconsistent, InstabilityError,
                     NoCrossing, NonMonotone)
from .profile import FrontProfile
from .reaction_terms import ReactionTerm

__all__ = [
    "Grid1D",
    "Field1D",
    "FrontTrace",
    "ShiftFit",
    "step",
    "evolve",
    "level_position",
    "min_descent",
    "run_front_convergence",
    "fit_log_shift",
    "sandwich_shifts",
    "step_data",
    "exponential_data",
    "profile_data",
]


@dataclass(frozen=True)
class Grid1D:
    z_lo: float
    z_hi: float
    nz: int

    def __post_init__(self):
        if self.nz < 64:
            raise ValueError(f"nz must be at least 64, got {self.nz}")
        if not self.z_hi > self.z_lo:
            raise ValueError("z_hi must exceed z_lo")

    @classmethod
    def from_spacing(cls, z_lo: float, z_hi: float, dz: float) -> "Grid1D":
        return cls(float(z_lo), float(z_hi), int(round((z_hi - z_lo) / dz)) + 1)

    @property
    def dz(self) -> float:
        return (self.z_hi - self.z_lo) / (self.nz - 1)

    @property
    def z(self) -> np.ndarray:
        return np.linspace(self.z_lo, self.z_hi, self.nz)


@dataclass(frozen=True, eq=False)
class Field1D:
    grid: Grid1D
    values: np.ndarray
    time: float = 0.0
    bc: str = "dirichlet"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.nz,):
            raise ValueError(f"values have shape {v.shape}, grid has {self.grid.nz} nodes")
        object.__setattr__(self, "values", v)


def step(u: Field1D, f: ReactionTerm, c: float, dt: float, *, check: bool = True) -> Field1D:
    """Advance one IMEX Euler step.

    Stability contract: ``|c| dz/2 < 1`` and ``dt max_[0,1] |f'| <= 1``;
    under it the step preserves ``[0, 1]``.  Raises ``ValueError`` if the
    contract is violated and :class:`InstabilityError` if ``|u| > 10``.
    """
    g = u.grid
    if check:
        step_contract(f, c, g.dz, dt)
    ab = implicit_banded(g.nz, g.dz, float(dt), float(c), (0.0,), u.bc)
    rhs = u.values + dt * f(u.values)
    boundary_rhs(rhs, u.bc)
    v = solve_banded((1, 1), ab, rhs, check_finite=False)
    if not np.all(np.abs(v) <= 10.0):
        raise InstabilityError(f"|u| exceeded 10 at t={u.time + dt:.4g}")
    return replace(u, values=v, time=u.time + dt)


def evolve(u: Field1D, f: ReactionTerm, c: float, dt: float, T: float) -> Field1D:
    """Take ``round(T/dt)`` steps."""
    step_contract(f, c, u.grid.dz, dt)
    for _ in range(int(round(T / dt))):
        u = step(u, f, c, dt, check=False)
    return u


def level_position(u: Field1D, level: float = 0.5, band=None) -> float:
    """Position of the downward crossing of ``level``, linearly interpolated.

    Parameters
    ----------
    band : (float, float), optional
        Only crossings with ``band[0] <= z <= band[1]`` are considered.

    Raises
    ------
    NoCrossing
        No crossing inside the band.
    NonMonotone
        Some crossing inside the band goes upward, so the level set is not a
        single point there.
    """
    z = u.grid.z
    v = u.values
    above = v >= level
    down = np.flatnonzero(above[:-1] & ~above[1:])
    up = np.flatnonzero(~above[:-1] & above[1:])
    if band is not None:
        lo, hi = band
        down = down[(z[down] >= lo) & (z[down + 1] <= hi)]
        up = up[(z[up] >= lo) & (z[up + 1] <= hi)]
    if up.size:
        raise NonMonotone(f"u increases through {level} at z={z[up[0]]:.4g}")
    if not down.size:
        raise NoCrossing(f"u does not cross {level} in the band")
    i = down[0]
    return float(z[i] + (v[i] - level) / (v[i] - v[i + 1]) * u.grid.dz)


def min_descent(values: np.ndarray, dz: float, level: float, margin: float, axis: int = -1) -> float:
    """Minimum of ``-u_z`` (centered differences) over nodes with ``|u - level| <= margin``."""
    v = np.moveaxis(np.asarray(values), axis, -1)
    uz = (v[..., 2:] - v[..., :-2]) / (2.0 * dz)
    mask = np.abs(v[..., 1:-1] - level) <= margin
    if not mask.any():
        raise ValueError("no nodes in the monotonicity band")
    return float(np.min(-uz[mask]))


def step_data(grid: Grid1D, z0: float = 0.0, width_nodes: int = 2) -> Field1D:
    """Heaviside ``1 (z < z0), 0 (z >= z0)`` with a linear ramp over ``width_nodes`` cells."""
    w = width_nodes * grid.dz
    return Field1D(grid, np.clip(0.5 - (grid.z - z0) / (2.0 * w), 0.0, 1.0))


def exponential_data(grid: Grid1D, lam: float, K: float = 1.0) -> Field1D:
    """``min(1, K exp(lam z))`` with ``lam < 0``."""
    if not lam < 0:
        raise ValueError("tail rate must be negative")
    return Field1D(grid, np.minimum(1.0, K * np.exp(lam * grid.z)))


def profile_data(grid: Grid1D, p: FrontProfile, shift: float = 0.0) -> Field1D:
    """Sampled profile ``Phi(z - shift)`` with exact boundary values."""
    v = p(grid.z - shift)
    v[0], v[-1] = 1.0, 0.0
    return Field1D(grid, v)


@dataclass
class FrontTrace:
    """Level positions ``xi(t)`` in the moving frame and ``sigma = xi + c t``."""

    c: float
    t: np.ndarray
    xi: np.ndarray
    final: Field1D
    widenings: list = field(default_factory=list)

    @property
    def sigma(self) -> np.ndarray:
        return self.xi + self.c * self.t

    def drift(self) -> float:
        """``xi(T) - xi(T/2)`` using the sample nearest ``T/2``."""
        T = self.t[-1]
        k = int(np.argmin(np.abs(self.t - T / 2)))
        return float(self.xi[-1] - self.xi[k])


def _widen(u: Field1D, factor: float = 0.5) -> Field1D:
    g = u.grid
    extra = int(round(factor * (g.nz - 1)))
    new = Grid1D(g.z_lo, g.z_hi + extra * g.dz, g.nz + extra)
    v = np.empty(new.nz)
    v[: g.nz] = u.values
    # continue the tail with its own log-slope measured away from the boundary layer
    z = g.z
    sel = (z >= g.z_hi - 10) & (z <= g.z_hi - 5) & (u.values > 0)
    rate = np.polyfit(z[sel], np.log(u.values[sel]), 1)[0] if sel.sum() > 2 else -1.0
    i0 = np.flatnonzero(z <= g.z_hi - 5)[-1]
    v[i0:] = u.values[i0] * np.exp(min(rate, 0.0) * (new.z[i0:] - z[i0]))
    v[-1] = 0.0
    return Field1D(new, v, u.time, u.bc)


def run_front_convergence(f: ReactionTerm, c: float, u0: Field1D, T: float, dt: float,
                          sample_dt: float | None = None, sample_times=None, level: float = 0.5,
                          tail_tol: float = 1e-6, max_widenings: int = 3) -> FrontTrace:
    """Evolve ``u0`` to time ``T`` and record the level position.

    Samples are taken every ``sample_dt`` or at ``sample_times`` (rounded
    to the step grid).  After each sample the tail monitor checks that
    ``u(z_hi - 5) < tail_tol``; on violation the domain is extended to the
    right by half its length and the run continues.
    """
    step_contract(f, c, u0.grid.dz, dt)
    if sample_times is None:
        if sample_dt is None:
            raise ValueError("give sample_dt or sample_times")
        sample_times = np.arange(sample_dt, T + 0.5 * sample_dt, sample_dt)
    k_samples = np.unique(np.round(np.asarray(sample_times) / dt).astype(int))
    k_samples = k_samples[(k_samples > 0) & (k_samples <= int(round(T / dt)))]
    u, k = u0, 0
    ts, xs, widened = [], [], []
    for ks in k_samples:
        while k < ks:
            u = step(u, f, c, dt, check=False)
            k += 1
        ts.append(k * dt)
        xs.append(level_position(u, level))
        probe = np.searchsorted(u.grid.z, u.grid.z_hi - 5.0)
        if u.values[probe] >= tail_tol:
            if len(widened) >= max_widenings:
                raise DomainTooSmall(f"tail still above {tail_tol} after {max_widenings} widenings")
            u = _widen(u)
            widened.append((k * dt, u.grid.z_hi))
    return FrontTrace(float(c), np.array(ts), np.array(xs), u, widened)


@dataclass(frozen=True)
class ShiftFit:
    """``sigma(t) ~ c_fit t + r ln t + s`` over ``window``."""

    c_fit: float
    r: float
    s: float
    rms: float
    window: tuple


def fit_log_shift(t, sigma, window=(50.0, 500.0)) -> ShiftFit:
    """Least-squares fit of lab-frame positions to ``c t + r ln t + s``.

    Raises :class:`IllConditionedFit` if the window spans less than a decade
    or holds fewer than 3 samples.
    """
    t = np.asarray(t, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    lo, hi = window
    m = (t >= lo) & (t <= hi)
    if m.sum() < 3 or t[m].max() < 10.0 * t[m].min() * (1 - 1e-9):
        raise IllConditionedFit(f"fit window {window} must hold >= 3 samples over >= one decade")
    tt = t[m]
    A = np.stack([tt, np.log(tt), np.ones_like(tt)], axis=1)
    coef, *_ = np.linalg.lstsq(A, sigma[m], rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - sigma[m]) ** 2)))
    return ShiftFit(float(coef[0]), float(coef[1]), float(coef[2]), rms, (float(tt[0]), float(tt[-1])))


def sandwich_shifts(u: Field1D, p: FrontProfile, delta: float, search=None,
                    tol: float = 1e-10) -> tuple[float, float]:
    """Tightest shifts with ``Phi(z - z2) - delta <= u <= Phi(z - z1) + delta``.

    ``Phi(z - s)`` increases with ``s``, so the lower bound holds for all
    shifts up to a largest ``z2`` and the upper bound from a smallest ``z1``
    on.  Both are found by bisection.  When ``u`` lies within ``delta`` of a
    translated profile the pair is ordered, ``z1 <= z2``; otherwise
    :class:`Inconsistent` is raised.
    """
    z, v = u.grid.z, u.values
    if search is None:
        search = (u.grid.z_lo / 2, u.grid.z_hi / 2)
    a, b = search

    def lower_ok(s):
        return bool(np.all(p(z - s) - delta <= v))

    def upper_ok(s):
        return bool(np.all(v <= p(z - s) + delta))

    def bisect(pred, lo, hi):
        # pred(lo) != pred(hi); returns the switching point
        plo = pred(lo)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if pred(mid) == plo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    if not (lower_ok(a) and not lower_ok(b)):
        raise DomainTooSmall(f"lower-bound shift not bracketed by {search}")
    if not (upper_ok(b) and not upper_ok(a)):
        raise DomainTooSmall(f"upper-bound shift not bracketed by {search}")
    z2 = bisect(lower_ok, a, b)
    z1 = bisect(upper_ok, a, b)
    if z1 > z2 + u.grid.dz:
        raise Inconsistent(f"u is not within {delta} of a translated profile (z1={z1:.4g} > z2={z2:.4g})")
    return float(z1), float(z2)
