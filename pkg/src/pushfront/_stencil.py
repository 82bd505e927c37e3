"""Banded matrices for the implicit half of the IMEX steppers.

The implicit operator is ``I - dt (D_zz + c D_z - kappa)`` with second-order
centered differences on a uniform z-grid.  Each distinct ``kappa`` (one per
Fourier mode in x) contributes one block of a single block-diagonal
tridiagonal system, so a whole 2D step is one ``solve_banded`` call.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def step_contract(reaction, c: float, dz: float, dt: float) -> None:
    """Raise ``ValueError`` if the step would break the discrete maximum principle.

    The implicit matrix is an M-matrix when ``|c| dz / 2 < 1``; the explicit
    reaction map ``u -> u + dt f(u)`` is monotone on ``[0, 1]`` when
    ``dt max|f'| <= 1``.  Together they keep data in ``[0, 1]`` inside it.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if abs(c) * dz / 2.0 >= 1.0:
        raise ValueError(f"advection cell number |c| dz/2 = {abs(c) * dz / 2:.3g} must be < 1")
    lip = reaction.fprime_sup(0.0, 1.0)
    if dt * lip > 1.0:
        raise ValueError(f"dt={dt} exceeds the reaction bound 1/max|f'| = {1.0 / lip:.4g}")


@lru_cache(maxsize=32)
def implicit_banded(nz: int, dz: float, dt: float, c: float, kappas: tuple = (0.0,),
                    bc: str = "dirichlet") -> np.ndarray:
    """Stacked tridiagonal blocks in ``solve_banded((1, 1), ...)`` layout.

    Boundary rows are identity rows for Dirichlet data and ``u_0 - u_1 = 0``
    (resp. ``u_{n-1} - u_{n-2} = 0``) for the zero-flux variant.
    """
    r = dt / dz**2
    a = c * dt / (2.0 * dz)
    nb = len(kappas)
    ab = np.zeros((3, nb * nz))
    for j, kap in enumerate(kappas):
        s = slice(j * nz, (j + 1) * nz)
        diag = np.full(nz, 1.0 + 2.0 * r + dt * kap)
        up = np.full(nz, -(r + a))  # coefficient of u_{i+1} in row i, stored at column i+1
        lo = np.full(nz, -(r - a))  # coefficient of u_{i-1} in row i, stored at column i-1
        up[0] = 0.0
        lo[-1] = 0.0
        diag[0] = diag[-1] = 1.0
        if bc == "dirichlet":
            up[1] = 0.0
            lo[-2] = 0.0
        elif bc == "neumann":
            up[1] = -1.0
            lo[-2] = -1.0
        else:
            raise ValueError(f"unknown boundary condition {bc!r}")
        ab[0, s] = up
        ab[1, s] = diag
        ab[2, s] = lo
    ab.setflags(write=False)
    return ab


def boundary_rhs(rhs: np.ndarray, bc: str, left: float = 1.0, right: float = 0.0) -> None:
    """Overwrite the first/last entries along the last axis with boundary data."""
    if bc == "dirichlet":
        rhs[..., 0] = left
        rhs[..., -1] = right
    else:
        rhs[..., 0] = 0.0
        rhs[..., -1] = 0.0
