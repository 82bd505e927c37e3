"""Monostable reaction terms.

A reaction term is stored as a polynomial on ``u >= 0`` and continued
linearly, ``f(u) = f'(0) u``, for ``u < 0``.  The continuation keeps the
negative side sign-compatible with the monostable conditions and makes the
comparison functions that dip below zero well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ComplexRootsError

__all__ = [
    "ReactionTerm",
    "CharacteristicExponents",
    "MonostableReport",
    "make_kpp",
    "make_hadeler_rothe",
    "make_polynomial",
    "make_reaction",
    "validate_monostable",
    "lambda_roots",
    "satisfies_kpp_bound",
]


@dataclass(frozen=True)
class ReactionTerm:
    """Polynomial nonlinearity with a linear extension below zero.

    Parameters
    ----------
    name : str
        Identifier used in configs and reports.
    coeffs : tuple of float
        Polynomial coefficients in increasing degree, valid for ``u >= 0``.
    params : dict
        Family parameters, e.g. ``{"nu": 4.0}``.
    """

    name: str
    coeffs: tuple
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.size < 2:
            raise ValueError("need at least a linear term")
        if abs(c[0]) > 1e-14:
            raise ValueError("f(0) must vanish")
        if abs(c.sum()) > 1e-12 * max(1.0, np.abs(c).sum()):
            raise ValueError("f(1) must vanish")

    @property
    def fprime0(self) -> float:
        return float(self.coeffs[1])

    @property
    def fprime1(self) -> float:
        return float(P.polyval(1.0, P.polyder(self.coeffs)))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < 0, self.fprime0 * u, P.polyval(u, self.coeffs))

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < 0, self.fprime0, P.polyval(u, P.polyder(self.coeffs)))

    def fprime_sup(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Exact ``max |f'|`` on ``[lo, hi]`` (endpoints plus critical points)."""
        d1 = P.polyder(self.coeffs)
        pts = [lo, hi]
        d2 = P.polyder(d1)
        if np.any(d2 != 0):
            for r in P.polyroots(d2):
                if abs(r.imag) < 1e-12 and lo <= r.real <= hi:
                    pts.append(r.real)
        return float(np.max(np.abs(P.polyval(np.array(pts), d1))))

    def fprime_max(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Exact ``max f'`` on ``[lo, hi]``."""
        d1 = P.polyder(self.coeffs)
        pts = [lo, hi]
        d2 = P.polyder(d1)
        if np.any(d2 != 0):
            pts += [r.real for r in P.polyroots(d2) if abs(r.imag) < 1e-12 and lo <= r.real <= hi]
        return float(np.max(P.polyval(np.array(pts), d1)))


def make_polynomial(coeffs, name: str = "polynomial", **params) -> ReactionTerm:
    """General polynomial reaction term from increasing-degree coefficients."""
    return ReactionTerm(name, tuple(float(a) for a in coeffs), dict(params))


def make_kpp() -> ReactionTerm:
    """Fisher-KPP term ``u(1-u)``."""
    return make_polynomial([0.0, 1.0, -1.0], name="kpp")


def make_hadeler_rothe(nu: float) -> ReactionTerm:
    """Cubic ``u(1-u)(1+nu u)``; the minimal-speed front is pushed for ``nu > 2``."""
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    return make_polynomial([0.0, 1.0, nu - 1.0, -nu], name="hadeler_rothe", nu=float(nu))


_FAMILIES = {
    "kpp": lambda **kw: make_kpp(),
    "hadeler_rothe": lambda nu, **kw: make_hadeler_rothe(nu),
}


def make_reaction(name: str, **params) -> ReactionTerm:
    """Look up a built-in family by config name."""
    try:
        factory = _FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown reaction {name!r}; choose from {sorted(_FAMILIES)}") from None
    return factory(**params)


@dataclass
class MonostableReport:
    passed: bool
    violations: list

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def __bool__(self):
        return self.passed


def validate_monostable(f: ReactionTerm, samples: int = 10_000, tol: float = 0.0) -> MonostableReport:
    """Sample the monostable sign conditions.

    Checks ``f(0) = f(1) = 0``, ``f'(0) > 0``, ``f'(1) < 0``, ``f > tol`` on a
    uniform sample of the open interval ``(0, 1)``, ``f < -tol`` on ``(1, 2]``
    and on ``[-1, 0)``.  Violations are ``(label, s, f(s))`` tuples in
    sampling order.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    bad = []
    for s in (0.0, 1.0):
        if f(s) != 0.0:
            bad.append(("zero", s, float(f(s))))
    if not f.fprime0 > 0:
        bad.append(("fprime0", 0.0, f.fprime0))
    if not f.fprime1 < 0:
        bad.append(("fprime1", 1.0, f.fprime1))
    inner = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    outer = np.linspace(1.0, 2.0, samples + 1)[1:]
    below = np.linspace(-1.0, 0.0, samples + 1)[:-1]
    for label, s, ok in (
        ("positive", inner, lambda v: v > tol),
        ("negative_above", outer, lambda v: v < -tol),
        ("negative_below", below, lambda v: v < -tol),
    ):
        v = f(s)
        idx = np.flatnonzero(~ok(v))
        bad.extend((label, float(s[i]), float(v[i])) for i in idx[:5])
    return MonostableReport(not bad, bad)


def satisfies_kpp_bound(f: ReactionTerm, M: float, alpha: float, samples: int = 10_000) -> bool:
    """Sample ``0 < f'(0)u - f(u) <= M u^(1+alpha)`` on ``(0, 1)``.

    The upper bound is checked non-strictly (relative slack ``1e-12``) so that
    KPP with ``M = alpha = 1``, where it is an identity, passes.
    """
    u = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    g = f.fprime0 * u - f(u)
    bound = M * u ** (1.0 + alpha)
    return bool(np.all(g > 0) and np.all(g <= bound * (1 + 1e-12)))


@dataclass(frozen=True)
class CharacteristicExponents:
    """Roots of ``lam^2 + c lam + f'(0) = 0`` with ``lambda_minus <= lambda_plus``."""

    lambda_minus: float
    lambda_plus: float
    discriminant: float
    double_root: bool


def lambda_roots(f: ReactionTerm, c: float, tol: float = 1e-10) -> CharacteristicExponents:
    """Tail exponents at speed ``c``.

    Raises :class:`ComplexRootsError` when ``c < 2 sqrt(f'(0)) - tol``.
    Discriminants in ``(-tol, tol)`` are treated as a double root.
    """
    a = f.fprime0 if isinstance(f, ReactionTerm) else float(f)
    disc = c * c - 4.0 * a
    cmin = 2.0 * np.sqrt(a)
    if c < cmin - tol:
        raise ComplexRootsError(f"c={c} below 2*sqrt(f'(0))={cmin}")
    double = abs(disc) < tol
    root = np.sqrt(max(disc, 0.0))
    lm = -0.5 * (c + root)
    # Vieta for the small root avoids cancellation when c^2 >> 4 f'(0).
    lp = a / lm if lm != 0 else 0.0
    # rounding can put the quotient one ulp below lm at a double root
    lp = max(lp, lm)
    return CharacteristicExponents(float(lm), float(lp), float(disc), bool(double))
