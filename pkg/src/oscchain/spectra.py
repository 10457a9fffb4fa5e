"""Finite-dimensional spectral engine on invariant polynomial spaces.

The gauged operators of the solvable cases preserve the space P_N of
polynomials of total degree <= N and never raise the total degree, so their
matrices are block upper-triangular in the degree grading and the spectrum
is the union of the diagonal-block spectra.  Everything here is exact:
rational eigenvalues are reported as Fractions, irrational ones as certified
Sturm-bisection isolating intervals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .exact import DiffOp, MultiPoly
from .model import (Case, CaseError, GroundState, Params, build_h_algebraic,
                    case_variables, ground_state, validate_case)


class InvariantSubspaceViolation(RuntimeError):
    def __init__(self, monomial, overflow):
        self.monomial = monomial
        self.overflow = overflow
        super().__init__(
            f"operator leaves the span on {monomial!r}; overflow {overflow!r}")


class DefectiveBlock(RuntimeError):
    pass


@dataclass(frozen=True)
class MonomialBasis:
    variables: Tuple[str, ...]
    degree_cap: int
    monomials: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    def index(self, exps: Tuple[int, ...]) -> int:
        return self.monomials.index(exps)

    def degree_slices(self):
        """[(degree, start, stop), ...] for the graded ordering."""
        out = []
        start = 0
        for n in range(self.degree_cap + 1):
            size = comb(n + len(self.variables) - 1, len(self.variables) - 1)
            out.append((n, start, start + size))
            start += size
        return out


def enumerate_basis(variables: Sequence[str], N: int) -> MonomialBasis:
    """Monomials of total degree <= N, graded-lex ordered."""
    variables = tuple(variables)
    k = len(variables)
    if k not in (1, 2, 3):
        raise ValueError("supported variable counts: 1, 2, 3")
    if N < 0:
        raise ValueError("degree cap must be nonnegative")
    monos = []
    for n in range(N + 1):
        level = []

        def fill(prefix, rem, slots):
            if slots == 1:
                level.append(prefix + (rem,))
                return
            for e in range(rem, -1, -1):
                fill(prefix + (e,), rem - e, slots - 1)

        fill((), n, k)
        monos.extend(level)
    basis = MonomialBasis(variables, N, tuple(monos))
    assert basis.size == comb(N + k, k)
    return basis


@dataclass(frozen=True)
class OpMatrix:
    basis: MonomialBasis
    entries: tuple  # row-major tuple of tuples of Fraction

    @property
    def size(self) -> int:
        return self.basis.size

    def rows(self):
        return [list(r) for r in self.entries]

    def diagonal_block(self, start: int, stop: int):
        return [[self.entries[i][j] for j in range(start, stop)]
                for i in range(start, stop)]

    def is_graded_triangular(self) -> bool:
        for _, start, stop in self.basis.degree_slices():
            for i in range(stop, self.size):
                for j in range(start, stop):
                    if self.entries[i][j] != 0:
                        return False
        return True


def assemble_matrix(op: DiffOp, basis: MonomialBasis) -> OpMatrix:
    if op.variables != basis.variables:
        raise ValueError(
            f"operator variables {op.variables} != basis {basis.variables}")
    n = basis.size
    cols = []
    index = {m: i for i, m in enumerate(basis.monomials)}
    for mono in basis.monomials:
        image = op.apply(MultiPoly(basis.variables, {mono: 1}))
        col = [Fraction(0)] * n
        for exps, c in image.terms.items():
            i = index.get(exps)
            if i is None:
                raise InvariantSubspaceViolation(
                    MultiPoly(basis.variables, {mono: 1}),
                    MultiPoly(basis.variables, {exps: c}))
            col[i] = c
        cols.append(col)
    entries = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return OpMatrix(basis, entries)


# ---------------------------------------------------------------------------
# spectrum extraction

@dataclass(frozen=True)
class Eigenvalue:
    """Exact value when rational, else a certified isolating interval."""
    value: Optional[Fraction]
    interval: Optional[Tuple[Fraction, Fraction]]
    multiplicity: int
    degree: int
    eigenspace_dim: Optional[int] = None

    def approx(self) -> float:
        if self.value is not None:
            return float(self.value)
        lo, hi = self.interval
        return float((lo + hi) / 2)

    def to_json(self) -> dict:
        def fr(x):
            return f"{x.numerator}/{x.denominator}"
        out = {"multiplicity": self.multiplicity, "degree": self.degree}
        if self.value is not None:
            out["value"] = fr(self.value)
        else:
            out["interval"] = [fr(self.interval[0]), fr(self.interval[1])]
        if self.eigenspace_dim is not None:
            out["eigenspace_dim"] = self.eigenspace_dim
        return out


@dataclass(frozen=True)
class Eigenfunction:
    eigenvalue: Fraction
    coeffs: Tuple[Fraction, ...]  # coordinates in the monomial basis

    def as_poly(self, basis: MonomialBasis) -> MultiPoly:
        return MultiPoly(basis.variables,
                         {m: c for m, c in zip(basis.monomials, self.coeffs)
                          if c != 0})


@dataclass(frozen=True)
class SpectrumReport:
    case: Optional[Case]
    params: Optional[Params]
    basis: MonomialBasis
    gauged: Tuple[Eigenvalue, ...]
    ground_energy: Optional[Fraction]
    eigenfunctions: Tuple[Eigenfunction, ...] = ()

    @property
    def physical(self) -> Tuple[Eigenvalue, ...]:
        if self.ground_energy is None:
            return self.gauged
        e0 = self.ground_energy
        out = []
        for ev in self.gauged:
            if ev.value is not None:
                out.append(Eigenvalue(ev.value + e0, None, ev.multiplicity,
                                      ev.degree, ev.eigenspace_dim))
            else:
                lo, hi = ev.interval
                out.append(Eigenvalue(None, (lo + e0, hi + e0),
                                      ev.multiplicity, ev.degree,
                                      ev.eigenspace_dim))
        return tuple(out)

    def gauged_values(self) -> list:
        """Flat multiset of approximate gauged eigenvalues."""
        out = []
        for ev in self.gauged:
            out.extend([ev.approx()] * ev.multiplicity)
        return sorted(out)

    def rational_gauged(self) -> list:
        out = []
        for ev in self.gauged:
            if ev.value is not None:
                out.extend([ev.value] * ev.multiplicity)
        return sorted(out)

    def to_json(self) -> dict:
        def fr(x):
            return f"{x.numerator}/{x.denominator}"
        out = {
            "case": self.case.value if self.case else None,
            "N": self.basis.degree_cap,
            "basis_size": self.basis.size,
            "gauged": [ev.to_json() for ev in self.gauged],
            "physical": [ev.to_json() for ev in self.physical],
            "eigenfunctions": [
                {"eigenvalue": fr(ef.eigenvalue),
                 "coeffs": [fr(c) for c in ef.coeffs]}
                for ef in self.eigenfunctions],
        }
        if self.ground_energy is not None:
            out["ground_energy"] = fr(self.ground_energy)
        return out


def _block_eigenvalues(block, degree: int):
    """Eigenvalues of one exact diagonal block, with eigenspace dims for
    repeated rational eigenvalues."""
    n = len(block)
    if n == 0:
        return []
    cp = linalg.char_poly(block)
    rational, irrational = linalg.real_roots_exact(cp)
    out = []
    for root, mult in rational:
        dim = None
        if mult > 1:
            shifted = linalg.mat_sub_scaled_identity(block, root)
            dim = n - linalg.rank(shifted)
        out.append(Eigenvalue(root, None, mult, degree, dim))
    for (lo, hi), mult in irrational:
        out.append(Eigenvalue(None, (lo, hi), mult, degree, None))
    return out


def eigenvalues_graded(M: OpMatrix, case: Optional[Case] = None,
                       params: Optional[Params] = None,
                       ground_energy: Optional[Fraction] = None,
                       want_eigenfunctions: bool = True) -> SpectrumReport:
    """Spectrum of a graded-triangular matrix, block by block.

    Eigenfunctions are reconstructed by back-substitution for rational
    eigenvalues that are simple across the whole grading.
    """
    if not M.is_graded_triangular():
        raise ValueError("matrix is not block-triangular in the grading")
    evs: List[Eigenvalue] = []
    slices = M.basis.degree_slices()
    for degree, start, stop in slices:
        if start == stop:
            continue
        evs.extend(_block_eigenvalues(M.diagonal_block(start, stop), degree))
    total = sum(ev.multiplicity for ev in evs)
    # complex pairs (possible in principle) would make total < size
    eigenfunctions = []
    if want_eigenfunctions:
        rational_counts: dict = {}
        for ev in evs:
            if ev.value is not None:
                rational_counts[ev.value] = rational_counts.get(ev.value, 0) \
                    + ev.multiplicity
        rows = M.rows()
        n = M.size
        for ev in evs:
            if ev.value is None or rational_counts[ev.value] != 1:
                continue
            shifted = linalg.mat_sub_scaled_identity(rows, ev.value)
            null = linalg.nullspace(shifted)
            if len(null) != 1:
                continue
            v = null[0]
            # normalize: first nonzero coordinate -> 1
            lead = next(c for c in v if c != 0)
            v = [c / lead for c in v]
            eigenfunctions.append(Eigenfunction(ev.value, tuple(v)))
    evs.sort(key=lambda e: (e.approx(), e.degree))
    report = SpectrumReport(case, params, M.basis, tuple(evs),
                            ground_energy, tuple(eigenfunctions))
    if total != M.size:
        # keep the report but record the discrepancy loudly
        raise DefectiveBlock(
            f"eigenvalue count {total} != basis size {M.size} "
            "(complex eigenvalues in a diagonal block)")
    return report


# ---------------------------------------------------------------------------
# case-level drivers

def case_operator(case: Case, p: Params) -> DiffOp:
    """Gauged operator restricted to its dynamical variables.

    For the molecular case rho23 must be supplied in params and is
    substituted, leaving an operator in (rho12, rho13).
    """
    h = build_h_algebraic(case, p)
    if case is Case.MOLECULAR3:
        if p.rho23 is None:
            raise CaseError("molecular spectra need a numeric rho23")
        h = h.subs_values({"rho23": p.rho23})
    return h


def case_ground_energy(case: Case, p: Params) -> Fraction:
    gs = ground_state(case, p)
    if case is Case.MOLECULAR3:
        return gs.energy.eval({"rho12": 0, "rho13": 0, "rho23": p.rho23})
    return gs.energy_value


def spectrum(case: Case, p: Params, N: int,
             want_eigenfunctions: bool = True) -> SpectrumReport:
    """End-to-end exact spectrum of the gauged operator on P_N."""
    validate_case(case, p)
    h = case_operator(case, p)
    basis = enumerate_basis(h.variables, N)
    M = assemble_matrix(h, basis)
    return eigenvalues_graded(M, case, p, case_ground_energy(case, p),
                              want_eigenfunctions)


def qes_2body_block(p: Params) -> SpectrumReport:
    """Exact (N+1)x(N+1) spectral problem of the sextic 2-body operator."""
    validate_case(Case.TWO_BODY_QES, p)
    h = build_h_algebraic(Case.TWO_BODY_QES, p)
    basis = enumerate_basis(h.variables, p.N)
    n = basis.size
    index = {m: i for i, m in enumerate(basis.monomials)}
    cols = []
    for mono in basis.monomials:
        image = h.apply(MultiPoly(basis.variables, {mono: 1}))
        col = [Fraction(0)] * n
        for exps, c in image.terms.items():
            i = index.get(exps)
            if i is None:
                raise InvariantSubspaceViolation(
                    MultiPoly(basis.variables, {mono: 1}),
                    MultiPoly(basis.variables, {exps: c}))
            col[i] = c
        cols.append(col)
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    evs = _block_eigenvalues(rows, p.N)
    eigenfunctions = []
    counts: dict = {}
    for ev in evs:
        if ev.value is not None:
            counts[ev.value] = counts.get(ev.value, 0) + ev.multiplicity
    for ev in evs:
        if ev.value is None or counts[ev.value] != 1:
            continue
        null = linalg.nullspace(linalg.mat_sub_scaled_identity(rows, ev.value))
        if len(null) == 1:
            lead = next(c for c in null[0] if c != 0)
            eigenfunctions.append(
                Eigenfunction(ev.value, tuple(c / lead for c in null[0])))
    evs.sort(key=lambda e: (e.approx(), e.degree))
    return SpectrumReport(Case.TWO_BODY_QES, p, basis, tuple(evs),
                          p.omega * p.d, tuple(eigenfunctions))


# ---------------------------------------------------------------------------
# Laguerre verification for the exactly-solvable 2-body case

def laguerre_polynomials(nmax: int, alpha: Fraction, scale: Fraction):
    """L_n^(alpha)(scale * rho) for n <= nmax, exact three-term recurrence."""
    var = ("rho",)
    x = scale * MultiPoly.var(var, "rho")
    one = MultiPoly.const(var, 1)
    polys = [one]
    if nmax >= 1:
        polys.append(MultiPoly.const(var, 1 + alpha) - x)
    for n in range(1, nmax):
        nxt = ((2 * n + 1 + alpha) * one - x) * polys[n] \
            - (n + alpha) * polys[n - 1]
        polys.append(nxt * Fraction(1, n + 1))
    return polys


def laguerre_verify(p: Params, nmax: int) -> bool:
    """Exactly-solvable 2-body eigenfunctions are scaled Laguerre polynomials.

    Checks apply(h, L_n) = 4*omega*n * L_n for all n <= nmax and that the
    back-substituted eigenvectors match the recurrence up to scale.
    Raises ValueError naming the first failing n.
    """
    validate_case(Case.TWO_BODY_ES, p)
    h = build_h_algebraic(Case.TWO_BODY_ES, p)
    alpha = Fraction(p.d, 2) - 1
    lags = laguerre_polynomials(nmax, alpha, p.omega)
    for n, phi in enumerate(lags):
        if h.apply(phi) != (4 * p.omega * n) * phi:
            raise ValueError(f"Laguerre relation fails at n={n}")
    basis = enumerate_basis(("rho",), nmax)
    M = assemble_matrix(h, basis)
    report = eigenvalues_graded(M, Case.TWO_BODY_ES, p, p.omega * p.d)
    by_val = {ef.eigenvalue: ef for ef in report.eigenfunctions}
    for n, phi in enumerate(lags):
        ef = by_val.get(Fraction(4 * p.omega * n))
        if ef is None:
            raise ValueError(f"missing eigenfunction at n={n}")
        vec = ef.as_poly(basis)
        # proportionality: cross-multiply leading coefficients
        lead_phi = phi.coeff((n,))
        lead_vec = vec.coeff((n,))
        if lead_vec == 0 or vec * lead_phi != phi * lead_vec:
            raise ValueError(f"eigenvector/recurrence mismatch at n={n}")
    return True
