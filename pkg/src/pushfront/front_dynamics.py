"""Graph evolutions for the front position.

Two periodic 1D-in-x models for a front graph ``z = W(x, t)``:

* mean curvature flow with drift, ``U_t = U_xx / (1 + U_x^2) + c sqrt(1 + U_x^2)``,
* its small-gradient surrogate, ``V_t = V_xx + (c/2) V_x^2 (+ c)``.

Both are stepped explicitly with centered differences.  The schemes are
monotone (hence satisfy a discrete comparison principle) when
``dt <= dx^2/2`` and, for the semilinear one, ``c |V_x| dx / 2 <= 1``.
Flat data have zero discrete derivatives, so they translate by exactly
``c dt`` per step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import IllConditionedFit, InstabilityError
from .pde2d import periodic_derivative

__all__ = [
    "GraphField",
    "GapSeries",
    "DerivativeNorms",
    "make_graph",
    "fourier_graph",
    "step_mcf",
    "step_semilinear",
    "evolve_graph",
    "compare_U_V",
    "decay_rate_fit",
    "derivative_norms",
    "smoothed_square_wave",
    "gamma_vs_V",
    "to_lab_frame",
    "stable_dt",
]

GRADIENT_LIMIT = 1e3


@dataclass(frozen=True, eq=False)
class GraphField:
    """Periodic graph values ``W(x)`` on a uniform grid ``x = i dx``."""

    x: np.ndarray
    values: np.ndarray
    time: float = 0.0
    kind: str = "semilinear"
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("mcf", "semilinear"):
            raise ValueError(f"kind must be 'mcf' or 'semilinear', got {self.kind!r}")
        v = np.asarray(self.values, dtype=float)
        if v.shape != np.shape(self.x):
            raise ValueError("values and x differ in shape")
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def period(self) -> float:
        return self.dx * len(self.x)


def make_graph(Lx: float, nx: int, values, kind: str = "semilinear", c: float = 0.0) -> GraphField:
    x = np.arange(nx) * (Lx / nx)
    vals = values(x) if callable(values) else np.broadcast_to(np.asarray(values, dtype=float), x.shape)
    return GraphField(x, np.array(vals, dtype=float), 0.0, kind, float(c))


def fourier_graph(Lx: float, nx: int, modes, kind: str = "semilinear", c: float = 0.0) -> GraphField:
    """Graph ``sum a_k cos(2 pi k x / Lx) + b_k sin(2 pi k x / Lx)`` from ``(k, a_k, b_k)`` triples."""
    def values(x):
        w = np.zeros_like(x)
        for k, a, b in modes:
            w += a * np.cos(2 * np.pi * k * x / Lx) + b * np.sin(2 * np.pi * k * x / Lx)
        return w
    return make_graph(Lx, nx, values, kind, c)


def stable_dt(dx: float, safety: float = 0.9) -> float:
    """Largest explicit step inside the ``dt <= dx^2/2`` contract, times ``safety``."""
    return safety * 0.5 * dx**2


def _check(W: GraphField, dt: float, wx: np.ndarray) -> None:
    if dt > 0.5 * W.dx**2 * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds the explicit bound dx^2/2={0.5 * W.dx**2:.4g}")
    if not np.all(np.abs(wx) < GRADIENT_LIMIT):
        raise InstabilityError(f"graph gradient exceeded {GRADIENT_LIMIT} at t={W.time:.4g}")


def step_mcf(U: GraphField, c: float, dt: float) -> GraphField:
    """``U_t = U_xx / (1 + U_x^2) + c sqrt(1 + U_x^2)``, forward Euler."""
    ux = periodic_derivative(U.values, U.dx, 1)
    _check(U, dt, ux)
    uxx = periodic_derivative(U.values, U.dx, 2)
    g2 = 1.0 + ux * ux
    return replace(U, values=U.values + dt * (uxx / g2 + c * np.sqrt(g2)), time=U.time + dt,
                   kind="mcf", c=float(c))


def step_semilinear(V: GraphField, c: float, dt: float, with_drift: bool = True) -> GraphField:
    """``V_t = V_xx + (c/2) V_x^2 (+ c)``, forward Euler."""
    vx = periodic_derivative(V.values, V.dx, 1)
    _check(V, dt, vx)
    vxx = periodic_derivative(V.values, V.dx, 2)
    rate = vxx + 0.5 * c * vx * vx
    if with_drift:
        rate = rate + c
    return replace(V, values=V.values + dt * rate, time=V.time + dt, kind="semilinear", c=float(c))


def evolve_graph(W: GraphField, c: float, dt: float, T: float, with_drift: bool = True,
                 sample_every: int | None = None):
    """Evolve to ``T`` with the solver selected by ``W.kind``.

    Returns the final field, or ``(final, snapshots)`` when ``sample_every``
    (in steps) is given; snapshots include the initial field.
    """
    snaps = [W] if sample_every else None
    for k in range(1, int(round(T / dt)) + 1):
        if W.kind == "mcf":
            W = step_mcf(W, c, dt) if with_drift else step_mcf(W, 0.0, dt)
        else:
            W = step_semilinear(W, c, dt, with_drift)
        if sample_every and k % sample_every == 0:
            snaps.append(W)
    return (W, snaps) if sample_every else W


@dataclass
class GapSeries:
    t: np.ndarray
    gap: np.ndarray
    grad_norm: float = np.nan

    @property
    def max_gap(self) -> float:
        return float(np.max(self.gap))


def compare_U_V(phi: GraphField, c: float, T: float, dt: float | None = None,
                sample_dt: float = 1.0) -> GapSeries:
    """``sup_x |U - V|`` along the run, both started from ``phi`` with drift ``c``.

    ``grad_norm`` records ``sup |phi_x|`` so the gap can be tabulated
    against the size of the initial gradient.
    """
    dt = dt if dt is not None else stable_dt(phi.dx)
    per = max(1, int(round(sample_dt / dt)))
    dt = sample_dt / per
    U = replace(phi, kind="mcf")
    V = replace(phi, kind="semilinear")
    ts, gaps = [0.0], [0.0]
    for k in range(1, int(round(T / dt)) + 1):
        U = step_mcf(U, c, dt)
        V = step_semilinear(V, c, dt, with_drift=True)
        if k % per == 0:
            ts.append(k * dt)
            gaps.append(float(np.max(np.abs(U.values - V.values))))
    gn = float(np.max(np.abs(periodic_derivative(phi.values, phi.dx, 1))))
    return GapSeries(np.array(ts), np.array(gaps), gn)


def decay_rate_fit(t, s, window=None) -> float:
    """Log-log least-squares slope of ``s`` against ``t``.

    Raises :class:`IllConditionedFit` when a value in the window is below
    ``1e-12`` or the window spans less than a decade.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if window is not None:
        m = (t >= window[0]) & (t <= window[1])
        t, s = t[m], s[m]
    if t.size < 3 or t.max() < 10 * t.min() * (1 - 1e-9):
        raise IllConditionedFit("decay fit needs >= 3 samples over at least one decade")
    if np.any(s < 1e-12):
        raise IllConditionedFit("sup norm below 1e-12; the data are flat")
    return float(np.polyfit(np.log(t), np.log(s), 1)[0])


@dataclass
class DerivativeNorms:
    t: np.ndarray
    V_x: np.ndarray
    V_xx: np.ndarray
    V_xxx: np.ndarray
    V_xt: np.ndarray

    def rate(self, which: str, window=(1.0, 100.0)) -> float:
        return decay_rate_fit(self.t, getattr(self, which), window)


def derivative_norms(snapshots, c: float) -> DerivativeNorms:
    """Sup norms of ``V_x``, ``V_xx``, ``V_xxx`` and ``V_xt``.

    ``V_xt`` is taken from the equation, ``V_xt = V_xxx + c V_x V_xx``.
    """
    rows = []
    for V in snapshots:
        d1, d2, d3 = (periodic_derivative(V.values, V.dx, k) for k in (1, 2, 3))
        rows.append((V.time, *(float(np.max(np.abs(a))) for a in (d1, d2, d3, d3 + c * d1 * d2))))
    t, a, b, d, e = map(np.array, zip(*rows))
    return DerivativeNorms(t, a, b, d, e)


def smoothed_square_wave(Lx: float, nx: int, height: float = 1.0, width: float = 0.5,
                         kind: str = "semilinear", c: float = 0.0) -> GraphField:
    """Periodic step-like graph ``(h/2) tanh((Lx/2pi) sin(2 pi x/Lx) / width)``.

    Two smoothed jumps of size ``h`` a half period apart.  Until the
    diffusion length reaches the half period the derivatives decay like
    those of an isolated step, ``t^(-k/2)`` for the k-th derivative.
    """
    def values(x):
        return 0.5 * height * np.tanh(Lx / (2 * np.pi) * np.sin(2 * np.pi * x / Lx) / width)
    return make_graph(Lx, nx, values, kind, c)


def gamma_vs_V(t, gamma, x, tau: float, c: float, T: float | None = None,
               dt: float | None = None, grid_x=None) -> GapSeries:
    """``sup_x |Gamma(x, t) - V(x, t - tau)|`` for sample times ``t >= tau``.

    ``V`` solves the drift-free semilinear equation with ``V(., 0) =
    Gamma(., tau)``.  ``grid_x``, if given, must equal ``x``.
    """
    t = np.asarray(t, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    x = np.asarray(x, dtype=float)
    if grid_x is not None and (len(grid_x) != len(x) or not np.allclose(grid_x, x)):
        raise ValueError("level-set x-axis and graph x-axis differ")
    T = t[-1] if T is None else T
    k0 = int(np.argmin(np.abs(t - tau)))
    if abs(t[k0] - tau) > 1e-9 * max(1.0, tau):
        raise ValueError(f"tau={tau} is not a sample time")
    sel = np.flatnonzero((t >= t[k0]) & (t <= T + 1e-9))
    dx = x[1] - x[0]
    spacing = np.diff(t[sel])
    h = spacing.min() if spacing.size else 1.0
    dt = dt if dt is not None else stable_dt(dx, 0.8)
    per = int(np.ceil(h / dt))
    dt = h / per
    V = GraphField(x, gamma[k0].copy(), 0.0, "semilinear", float(c))
    ts, gaps = [t[k0] - tau], [0.0]
    for k in sel[1:]:
        n = int(round((t[k] - t[k0]) / dt))
        while int(round(V.time / dt)) < n:
            V = step_semilinear(V, c, dt, with_drift=False)
        ts.append(t[k] - tau)
        gaps.append(float(np.max(np.abs(gamma[k] - V.values))))
    return GapSeries(np.array(ts) + tau, np.array(gaps))


def to_lab_frame(t, w, c: float):
    """Moving-frame positions plus ``c t``."""
    t = np.asarray(t, dtype=float)
    w = np.asarray(w, dtype=float)
    return w + c * (t if w.ndim == 1 else t[:, None])
