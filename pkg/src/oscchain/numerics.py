"""Floating-point oracles and physics outputs.

A finite-difference radial eigensolver cross-checks the exact 2-body
algebraic energies; Born-Oppenheimer routines quantify the approximation
error against the exactly known ground energy; potential-curve tables are
emitted exactly (the curve is linear).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import Case, Params, build_potential, reduced_masses, \
    nu_coefficients, validate_case


@dataclass(frozen=True)
class Grid1D:
    rmax: float
    npoints: int

    def __post_init__(self):
        if self.npoints < 200:
            raise ValueError("need at least 200 grid points")
        if self.rmax <= 0:
            raise ValueError("rmax must be positive")

    @property
    def spacing(self) -> float:
        return self.rmax / (self.npoints - 1)

    def halved(self) -> "Grid1D":
        return Grid1D(self.rmax, 2 * (self.npoints - 1) + 1)


class NonConfiningPotential(ValueError):
    pass


def potential_coeffs(p: Params, case: Case) -> List[float]:
    """Coefficients of V as a polynomial in rho = r^2, constant term first."""
    V = build_potential(case, p)
    deg = V.total_degree()
    return [float(V.coeff((j,))) for j in range(deg + 1)]


def default_rmax(p: Params) -> float:
    """Radius where the ground-state Gaussian tail drops below 1e-12."""
    from .model import two_body_mu
    mu = float(two_body_mu(p))
    om = float(p.omega)
    # exp(-mu om r^2) < 1e-12  =>  r^2 > 12 ln10 / (mu om); pad by 40%
    return 1.4 * math.sqrt(12 * math.log(10.0) / (mu * om))


def fd_radial_eigen(potential: Sequence[float], d: int,
                    grid: Optional[Grid1D] = None, k: int = 1,
                    mu: float = 0.5, richardson: bool = True,
                    rmax: Optional[float] = None) -> List[float]:
    """k lowest eigenvalues of -(1/2mu)[psi'' + (d-1)/r psi'] + V(r^2) psi.

    The r^((d-1)/2)-weighted transform removes the first-order term, leaving
    -(1/2mu) u'' + [V(r^2) + (d-1)(d-3)/(8 mu r^2)] u = E u with Dirichlet
    conditions; symmetric second-order stencil, Richardson-extrapolated
    over grids (h, h/2).
    """
    potential = list(potential)
    if not potential or potential[-1] <= 0:
        raise NonConfiningPotential("leading potential coefficient must be > 0")
    if grid is None:
        grid = Grid1D(rmax if rmax is not None else 3.0 * math.sqrt(
            (12 * math.log(10.0) / potential[-1]) ** (1.0 / (len(potential)))),
            4000)

    def solve(g: Grid1D) -> np.ndarray:
        h = g.spacing
        r = np.arange(1, g.npoints - 1) * h
        rho = r * r
        V = np.zeros_like(r)
        for c in reversed(potential):
            V = V * rho + c
        V = V + (d - 1) * (d - 3) / (8.0 * mu * r * r)
        inv = 1.0 / (2.0 * mu)
        diag = 2.0 * inv / h ** 2 + V
        off = np.full(g.npoints - 3, -inv / h ** 2)
        vals = eigh_tridiagonal(diag, off, select="i",
                                select_range=(0, k - 1))[0]
        return vals

    coarse = solve(grid)
    if not richardson:
        return list(coarse[:k])
    fine = solve(grid.halved())
    return list((4.0 * fine - coarse) / 3.0)[:k]


def fd_two_body_energies(p: Params, case: Case, k: int = 1,
                         npoints: int = 4000) -> List[float]:
    """Grid oracle for the 2-body cases, mu = 1/2 gauge convention."""
    validate_case(case, p)
    coeffs = potential_coeffs(p, case)
    grid = Grid1D(default_rmax(replace(p, m1=1, m2=1)), npoints)
    return fd_radial_eigen(coeffs, p.d, grid, k, mu=0.5)


# ---------------------------------------------------------------------------
# Born-Oppenheimer

@dataclass(frozen=True)
class BOReport:
    exact_e0: float
    nuclear_e0: float
    gap: float
    c1_exact: float
    c2_exact: float
    c1_fit: Optional[float] = None
    c2_fit: Optional[float] = None

    def to_json(self) -> dict:
        return {"exact_e0": self.exact_e0, "nuclear_e0": self.nuclear_e0,
                "gap": self.gap, "c1_exact": self.c1_exact,
                "c2_exact": self.c2_exact, "c1_fit": self.c1_fit,
                "c2_fit": self.c2_fit}


def bo_series_coefficients(p: Params) -> Tuple[Fraction, Fraction]:
    """Exact leading coefficients of gap(m1) = c1 m1 + c2 m1^2 + ...

    Valid for m2 = m3 = 1.  c1 = omega d (a+b)/2;
    c2 = -omega d (a^2 - 14ab + 4ac + b^2 + 4bc) / (8c).
    """
    a, b, c, om, d = p.a, p.b, p.c, p.omega, Fraction(p.d)
    c1 = om * d * (a + b) / 2
    if c == 0:
        raise ZeroDivisionError("series second coefficient needs c > 0")
    c2 = -om * d * (a ** 2 - 14 * a * b + 4 * a * c + b ** 2 + 4 * b * c) \
        / (8 * c)
    return c1, c2


def bo_energies(p: Params) -> BOReport:
    """Zero-point nuclear energy, exact energy, and their gap."""
    if p.m2 is None or p.m3 is None or p.m2 != p.m3:
        raise ValueError("Born-Oppenheimer analysis expects finite m2 = m3")
    if p.a <= 0 or p.b <= 0:
        raise ValueError("need a, b > 0")
    m = float(p.m1)
    mu = float(reduced_masses(p)[2])
    nu23 = float(nu_coefficients(p)[2])
    a, b, c = float(p.a), float(p.b), float(p.c)
    om, d = float(p.omega), float(p.d)
    exact_e0 = om * d * (a + b + c)
    nuclear_e0 = om * d * (a + b) \
        + om * d * math.sqrt((a * b * m / mu) * (1 + nu23 / (a * b * m)))
    gap = nuclear_e0 - exact_e0
    if p.c != 0:
        c1, c2 = bo_series_coefficients(p)
        c1f, c2f = float(c1), float(c2)
    else:
        c1f = c2f = float("nan")
    return BOReport(exact_e0, nuclear_e0, gap, c1f, c2f)


DEFAULT_FIT_GRID = tuple(Fraction(i, 500) for i in range(1, 11))  # (0, 0.02]


def bo_series_fit(p: Params, m1_grid: Sequence[float] = DEFAULT_FIT_GRID
                  ) -> Tuple[float, float]:
    """Leading coefficients of gap(m1) = c1 m1 + c2 m1^2 + ... by fit.

    A quartic (no constant term) least-squares model absorbs the cubic and
    quartic tail so c1, c2 are clean on grids up to m1 ~ 0.05.
    """
    m1_grid = [float(m) for m in m1_grid]
    if len(m1_grid) < 6:
        raise ValueError("need at least 6 grid points")
    if any(m <= 0 or m > 0.1 for m in m1_grid):
        raise ValueError("m1 grid must lie in (0, 0.1]")
    gaps = []
    for m1 in m1_grid:
        q = replace(p, m1=Fraction(m1).limit_denominator(10 ** 12))
        gaps.append(bo_energies(q).gap)
    A = np.array([[m ** j for j in range(1, 5)] for m in m1_grid])
    sol, *_ = np.linalg.lstsq(A, np.array(gaps), rcond=None)
    return float(sol[0]), float(sol[1])


def bo_report_with_fit(p: Params, m1_grid: Sequence[float]) -> BOReport:
    base = bo_energies(p)
    c1, c2 = bo_series_fit(p, m1_grid)
    return replace(base, c1_fit=c1, c2_fit=c2)


def bo_mu_scan(p: Params, mu_factors: Sequence[float]) -> List[Tuple[float, float]]:
    """(mu, |gap|) rows for m2 = m3 scaled by each factor."""
    rows = []
    for f in mu_factors:
        scale = Fraction(float(f)).limit_denominator(10 ** 9)
        q = replace(p, m2=p.m2 * scale, m3=p.m3 * scale)
        mu = float(reduced_masses(q)[2])
        rows.append((mu, abs(bo_energies(q).gap)))
    return rows


# ---------------------------------------------------------------------------
# potential curves

def potential_curve(p: Params, rho23_values: Sequence[Fraction]
                    ) -> List[Tuple[Fraction, Fraction]]:
    """(rho23, ground energy) rows of the molecular curve, exact and linear."""
    validate_case(Case.MOLECULAR3, p)
    m, a, b, om, d = p.m1, p.a, p.b, p.omega, Fraction(p.d)
    rows = []
    for r in rho23_values:
        r = Fraction(r) if not isinstance(r, Fraction) else r
        rows.append((r, om * d * (a + b) + 2 * m * om ** 2 * a * b * r))
    return rows


def curve_csv(rows, header=("rho23", "E0")) -> str:
    lines = [",".join(header)]
    for r, e in rows:
        lines.append(f"{float(r):.15g},{float(e):.15g}")
    return "\n".join(lines) + "\n"
