"""Traveling-wave profiles by phase-plane shooting.

The profile equation ``phi'' + c phi' + f(phi) = 0`` is integrated as a first
order system from the saddle ``(1, 0)`` along its unstable eigenvector.  For
``c >= c*`` the trajectory reaches the node at the origin without crossing
``phi = 0``; for ``c < c*`` it overshoots.  Near the origin the solution is a
combination ``A exp(lam_+ z) + B exp(lam_- z)``; the sign of the slow-mode
coefficient ``A`` is read off from ``psi - lam_- phi`` so the overshoot test
does not have to wait for the (possibly astronomically late) zero crossing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq, minimize_scalar

from .errors import BracketError, ComplexRootsError, DomainTooSmall, Inconsistent, Overshoot
from .reaction_terms import CharacteristicExponents, ReactionTerm, lambda_roots

__all__ = [
    "FrontProfile",
    "FrontType",
    "solve_profile",
    "find_min_speed",
    "measure_decay_exponent",
    "fit_log_slope",
    "classify_front",
    "exact_hadeler_rothe",
]

PHI_STOP = 1e-8


class FrontType(enum.Enum):
    PUSHED = "pushed"
    PULLED = "pulled"


@dataclass(frozen=True, eq=False)
class FrontProfile:
    """A traveling-wave profile normalized to ``phi(0) = 1/2``.

    Stored on a uniform grid together with ``phi'``.  Evaluation between
    nodes uses cubic Hermite interpolation of ``phi`` (slopes ``phi'``) and of
    ``phi'`` (slopes from the profile equation).  Outside the grid the
    profile is continued by its exponential asymptotics:
    ``1 - (1 - phi_lo) exp(left_rate (z - z_lo))`` on the left and
    ``phi_hi exp(right_rate (z - z_hi))`` on the right.
    """

    c: float
    z: np.ndarray
    phi: np.ndarray
    phi_prime: np.ndarray
    reaction: ReactionTerm
    left_rate: float
    right_rate: float

    def __post_init__(self):
        f = self.reaction
        dpsi = -self.c * self.phi_prime - f(self.phi)
        object.__setattr__(self, "_phi_spline", CubicHermiteSpline(self.z, self.phi, self.phi_prime))
        object.__setattr__(self, "_psi_spline", CubicHermiteSpline(self.z, self.phi_prime, dpsi))

    @property
    def z_lo(self) -> float:
        return float(self.z[0])

    @property
    def z_hi(self) -> float:
        return float(self.z[-1])

    @property
    def exponents(self) -> CharacteristicExponents | None:
        try:
            return lambda_roots(self.reaction, self.c, tol=1e-8)
        except ComplexRootsError:
            return None

    @property
    def decay_exponent_measured(self) -> float:
        return measure_decay_exponent(self)

    def _eval(self, z):
        z = np.asarray(z, dtype=float)
        phi = np.empty_like(z)
        dphi = np.empty_like(z)
        left = z < self.z_lo
        right = z > self.z_hi
        mid = ~(left | right)
        phi[mid] = self._phi_spline(z[mid])
        dphi[mid] = self._psi_spline(z[mid])
        if left.any():
            gap = 1.0 - self.phi[0]
            e = gap * np.exp(self.left_rate * (z[left] - self.z_lo))
            phi[left] = 1.0 - e
            dphi[left] = -self.left_rate * e
        if right.any():
            e = self.phi[-1] * np.exp(self.right_rate * (z[right] - self.z_hi))
            phi[right] = e
            dphi[right] = self.right_rate * e
        return phi, dphi

    def __call__(self, z):
        return self._eval(z)[0]

    def derivatives(self, z, order: int = 2):
        """Return ``(phi, phi', ..., phi^(order))`` at ``z`` (order <= 3).

        Second and third derivatives come from the profile equation,
        ``phi'' = -c phi' - f(phi)`` and its derivative, so compositions
        built from them satisfy the equation up to interpolation error in
        ``phi`` and ``phi'`` only.
        """
        phi, d1 = self._eval(z)
        out = [phi, d1]
        if order >= 2:
            f = self.reaction
            d2 = -self.c * d1 - f(phi)
            out.append(d2)
            if order >= 3:
                out.append(-self.c * d2 - f.derivative(phi) * d1)
        return tuple(out[: order + 1])

    def ode_residual(self) -> np.ndarray:
        """Residual of the profile ODE at interior nodes by centered differences."""
        h = self.z[1] - self.z[0]
        p = self.phi
        d2 = (p[2:] - 2 * p[1:-1] + p[:-2]) / h**2
        d1 = (p[2:] - p[:-2]) / (2 * h)
        return d2 + self.c * d1 + self.reaction(p[1:-1])


def _saddle_rate(f: ReactionTerm, c: float) -> float:
    # positive root of mu^2 + c mu + f'(1) = 0
    return 0.5 * (-c + np.sqrt(c * c - 4.0 * f.fprime1))


def _integrate(f, c, eps, phi_stop, z_max, rtol, dense):
    mu = _saddle_rate(f, c)
    y0 = [1.0 - eps, -eps * mu]

    def rhs(z, y):
        return [y[1], -c * y[1] - f(y[0])]

    def hit_zero(z, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    def settled(z, y):
        return y[0] - phi_stop

    settled.terminal = True
    settled.direction = -1

    sol = solve_ivp(
        rhs, (0.0, z_max), y0, method="DOP853", rtol=rtol, atol=1e-30,
        events=[hit_zero, settled], dense_output=dense,
    )
    return sol, mu


def _overshoots(f: ReactionTerm, c: float, eps: float = 1e-6, phi_stop: float = 1e-12,
                z_max: float = 1e4, rtol: float = 1e-12) -> bool:
    """True when no positive monotone front exists at speed ``c``."""
    if c * c < 4.0 * f.fprime0:
        return True
    sol, _ = _integrate(f, c, eps, phi_stop, z_max, rtol, dense=False)
    if sol.t_events[0].size:
        return True
    if not sol.t_events[1].size:
        raise DomainTooSmall(f"trajectory at c={c} did not settle before z={z_max}")
    phi, psi = sol.y[:, -1]
    lam_minus = -0.5 * (c + np.sqrt(c * c - 4.0 * f.fprime0))
    return bool(psi - lam_minus * phi < 0)


def solve_profile(f: ReactionTerm, c: float, *, dz: float = 1e-3, eps: float = 1e-6,
                  phi_stop: float = PHI_STOP, rtol: float = 1e-12, z_max: float = 1e4) -> FrontProfile:
    """Shoot the heteroclinic orbit at speed ``c`` and sample it uniformly.

    Raises
    ------
    Overshoot
        The orbit crosses ``phi = 0`` before ``phi`` drops below ``phi_stop``.
    DomainTooSmall
        ``phi_stop`` was not reached before ``z_max``.
    """
    if c * c < 4.0 * f.fprime0:
        raise Overshoot(f"c={c} is below 2 sqrt(f'(0)); the orbit spirals through phi=0")
    sol, mu = _integrate(f, c, eps, phi_stop, z_max, rtol, dense=True)
    if sol.t_events[0].size:
        raise Overshoot(f"orbit at c={c} crosses phi=0 at z={sol.t_events[0][0]:.3f}")
    if not sol.t_events[1].size:
        raise DomainTooSmall(f"phi did not fall below {phi_stop} before z={z_max}")
    z_end = sol.t_events[1][0]
    phi_end, psi_end = sol.y_events[1][0]
    lam_minus = -0.5 * (c + np.sqrt(c * c - 4.0 * f.fprime0))
    # a clearly negative slow-mode coefficient means a crossing further out
    if psi_end - lam_minus * phi_end < -1e-3 * abs(lam_minus) * phi_end:
        raise Overshoot(f"slow tail mode at c={c} is negative; the orbit will cross phi=0")
    dense = sol.sol
    z_half = brentq(lambda s: dense(s)[0] - 0.5, 0.0, z_end, xtol=1e-15, rtol=1e-15)
    k_lo = int(np.ceil(-z_half / dz))
    k_hi = int(np.floor((z_end - z_half) / dz))
    grid = np.arange(k_lo, k_hi + 1) * dz
    y = dense(grid + z_half)
    phi, psi = y[0], y[1]
    if not (np.all(np.diff(phi) < 0) and np.all(psi < 0)):
        raise Overshoot(f"profile at c={c} is not strictly decreasing")
    return FrontProfile(
        c=float(c), z=grid, phi=phi, phi_prime=psi, reaction=f,
        left_rate=float(mu), right_rate=float(psi[-1] / phi[-1]),
    )


def find_min_speed(f: ReactionTerm, tol: float = 1e-9, c_hi: float | None = None,
                   max_doublings: int = 40) -> float:
    """Minimal front speed by bisection on the overshoot predicate.

    The bracket starts at ``[2 sqrt(f'(0)) - tol, c_hi]``; ``c_hi`` grows by
    a factor 1.5 until the predicate is false.  The result is the bracket
    midpoint clamped below at ``2 sqrt(f'(0))``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    c_lin = 2.0 * np.sqrt(f.fprime0)
    lo = c_lin - tol
    hi = c_hi if c_hi is not None else c_lin + 1.0
    for _ in range(max_doublings):
        if not _overshoots(f, hi):
            break
        lo = hi
        hi *= 1.5
    else:
        raise BracketError(f"no front found below c={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _overshoots(f, mid):
            lo = mid
        else:
            hi = mid
    return float(max(0.5 * (lo + hi), c_lin))


def fit_log_slope(z, phi, double_root: bool = False) -> float:
    """Tail exponent from samples of a decaying profile.

    Plain least squares of ``log phi`` against ``z``; with ``double_root``
    the fit form is ``log phi = lam z + log(alpha z + beta)``, solved by
    minimizing over ``lam`` with ``(alpha, beta)`` eliminated linearly.
    """
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if z.size < 10:
        raise ValueError("tail window needs at least 10 points")
    if np.any(phi <= 0):
        raise ValueError("profile must be positive in the tail window")
    lam0 = np.polyfit(z, np.log(phi), 1)[0]
    if not double_root:
        return float(lam0)

    def misfit(lam):
        w = phi * np.exp(-lam * z)
        A = np.stack([z, np.ones_like(z)], axis=1)
        coef, *_ = np.linalg.lstsq(A / w[:, None], np.ones_like(z), rcond=None)
        lin = A @ coef
        if np.any(lin <= 0):
            return np.inf
        return float(np.sum((np.log(phi) - lam * z - np.log(lin)) ** 2))

    res = minimize_scalar(misfit, bounds=(1.5 * lam0, 0.5 * lam0 if lam0 < 0 else 0.0),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.x)


def measure_decay_exponent(p: FrontProfile, window=None) -> float:
    """Log-slope of the stored tail over ``window = (z_a, z_b)``.

    The default window is the last decade of stored values above
    ``PHI_STOP``.  At a double characteristic root the linear-in-z
    correction is fitted as well.
    """
    if window is None:
        mask = (p.phi <= 10 * PHI_STOP) & (p.phi >= PHI_STOP)
        ex = p.exponents
        if ex is not None and ex.double_root:
            mask = (p.phi <= 1e-3) & (p.phi >= PHI_STOP)
    else:
        a, b = window
        mask = (p.z >= a) & (p.z <= b)
        if np.any(p.phi[mask] >= 1e-2):
            raise ValueError("decay window must lie where phi < 1e-2")
    ex = p.exponents
    return fit_log_slope(p.z[mask], p.phi[mask], double_root=bool(ex is not None and ex.double_root))


def classify_front(f: ReactionTerm, cstar: float, p: FrontProfile, tol: float = 1e-3,
                   rel: float = 0.05) -> FrontType:
    """Pushed/pulled decision from the speed margin, confirmed by the tail.

    Pushed requires ``cstar - 2 sqrt(f'(0)) > tol`` and a measured exponent
    within ``rel`` of ``lambda_-(cstar)``; pulled requires the speed within
    ``tol`` of ``2 sqrt(f'(0))`` and an exponent within ``rel`` of
    ``lambda_+(cstar)``.
    """
    c_lin = 2.0 * np.sqrt(f.fprime0)
    ex = lambda_roots(f, cstar, tol=max(tol, 1e-10))
    measured = measure_decay_exponent(p)

    def close(target):
        return abs(measured - target) <= rel * abs(target)

    margin = cstar - c_lin
    if margin > tol:
        if close(ex.lambda_minus):
            return FrontType.PUSHED
        raise Inconsistent(
            f"speed margin {margin:.3g} says pushed but tail exponent {measured:.4f} "
            f"is not within {rel:.0%} of lambda_-={ex.lambda_minus:.4f}"
        )
    if abs(margin) <= tol:
        if close(ex.lambda_plus):
            return FrontType.PULLED
        raise Inconsistent(
            f"speed says pulled but tail exponent {measured:.4f} is not within "
            f"{rel:.0%} of lambda_+={ex.lambda_plus:.4f}"
        )
    raise Inconsistent(f"c*={cstar} lies below the linear spreading speed {c_lin}")


def exact_hadeler_rothe(nu: float, dz: float = 1e-3, phi_stop: float = PHI_STOP,
                        eps: float = 1e-6) -> FrontProfile:
    """Closed-form pushed front ``1/(1 + exp(b z))``, ``b = sqrt(nu/2)``."""
    from .reaction_terms import make_hadeler_rothe

    if not nu > 2:
        raise ValueError("closed form is the minimal-speed front only for nu > 2")
    f = make_hadeler_rothe(nu)
    b = np.sqrt(nu / 2.0)
    c = b + 1.0 / b
    z_lo = -np.log((1.0 - eps) / eps) / b
    z_hi = np.log((1.0 - phi_stop) / phi_stop) / b
    z = np.arange(int(np.ceil(z_lo / dz)), int(np.floor(z_hi / dz)) + 1) * dz
    phi = 0.5 * (1.0 - np.tanh(0.5 * b * z))
    dphi = -b * phi * (1.0 - phi)
    return FrontProfile(c=float(c), z=z, phi=phi, phi_prime=dphi, reaction=f,
                        left_rate=float(b), right_rate=float(-b))
