"""Linear differential operators with polynomial (or rational) coefficients.

Canonical form is normal-ordered: every term is a coefficient on the left
times a mixed partial-derivative multi-index.  Composition re-normal-orders
via the Leibniz expansion, so equality of operators is syntactic equality
of the canonical term maps.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Sequence, Union

from .gaussian import GaussFn
from .poly import MultiPoly, RationalFn, VariableMismatch

Coeffable = Union[int, Fraction, MultiPoly]


def _binom_multi(alpha, gamma) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= comb(a, g)
    return out


def _sub_multi_indices(alpha):
    """All gamma with 0 <= gamma <= alpha componentwise."""
    idx = [()]
    for a in alpha:
        idx = [g + (k,) for g in idx for k in range(a + 1)]
    return idx


class DiffOp:
    """Sum of MultiPoly-coefficient derivative terms over a shared variable list."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Mapping[tuple, Coeffable] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict = {}
        if terms:
            for derivs, coeff in terms.items():
                derivs = tuple(derivs)
                if len(derivs) != n:
                    raise ValueError(f"derivative index {derivs} has wrong length")
                if isinstance(coeff, (int, Fraction)):
                    coeff = MultiPoly.const(self.variables, coeff)
                elif coeff.variables != self.variables:
                    raise VariableMismatch(
                        f"{coeff.variables} vs {self.variables}")
                if derivs in clean:
                    coeff = clean[derivs] + coeff
                if not coeff.is_zero():
                    clean[derivs] = coeff
                elif derivs in clean:
                    del clean[derivs]
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def identity(cls, variables):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): 1})

    @classmethod
    def partial(cls, variables, name: str, order: int = 1):
        variables = tuple(variables)
        i = variables.index(name)
        derivs = tuple(order if j == i else 0 for j in range(len(variables)))
        return cls(variables, {derivs: 1})

    @classmethod
    def mul_by(cls, poly: MultiPoly):
        """Multiplication operator f -> poly * f."""
        return cls(poly.variables, {(0,) * len(poly.variables): poly})

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "DiffOp"):
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        terms = dict(self.terms)
        for derivs, coeff in other.terms.items():
            if derivs in terms:
                s = terms[derivs] + coeff
                if s.is_zero():
                    del terms[derivs]
                else:
                    terms[derivs] = s
            else:
                terms[derivs] = coeff
        out = DiffOp(self.variables)
        out.terms = terms
        return out

    def __neg__(self):
        out = DiffOp(self.variables)
        out.terms = {d: -c for d, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction, MultiPoly)):
            if isinstance(scalar, MultiPoly):
                out = DiffOp(self.variables)
                out.terms = {d: c * scalar for d, c in self.terms.items()
                             if not (c * scalar).is_zero()}
                return out
            if scalar == 0:
                return DiffOp.zero(self.variables)
            out = DiffOp(self.variables)
            out.terms = {d: c * scalar for d, c in self.terms.items()}
            return out
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for derivs in sorted(self.terms, key=lambda d: (sum(d), d)):
            ds = "".join(f" d_{v}^{k}" if k > 1 else f" d_{v}"
                         for v, k in zip(self.variables, derivs) if k)
            parts.append(f"[{self.terms[derivs]!r}]{ds}")
        return " + ".join(parts)

    # -- action ------------------------------------------------------------
    def apply(self, f):
        """Apply to a MultiPoly, GaussFn, or RationalFn; result same kind."""
        if isinstance(f, MultiPoly):
            if f.variables != self.variables:
                raise VariableMismatch(f"{f.variables} vs {self.variables}")
            out = MultiPoly.zero(self.variables)
            for derivs, coeff in self.terms.items():
                g = f
                for v, k in zip(self.variables, derivs):
                    for _ in range(k):
                        g = g.diff(v)
                        if g.is_zero():
                            break
                if not g.is_zero():
                    out = out + coeff * g
            return out
        if isinstance(f, GaussFn):
            if f.variables != self.variables:
                raise VariableMismatch(f"{f.variables} vs {self.variables}")
            out = GaussFn(MultiPoly.zero(self.variables), f.exponent)
            for derivs, coeff in self.terms.items():
                g = f
                for v, k in zip(self.variables, derivs):
                    for _ in range(k):
                        g = g.diff(v)
                out = out + coeff * g
            return out
        if isinstance(f, RationalFn):
            if f.variables != self.variables:
                raise VariableMismatch(f"{f.variables} vs {self.variables}")
            out = RationalFn(MultiPoly.zero(self.variables))
            for derivs, coeff in self.terms.items():
                g = f
                for v, k in zip(self.variables, derivs):
                    for _ in range(k):
                        g = g.diff(v)
                out = out + coeff * g
            return out
        raise TypeError(f"cannot apply DiffOp to {type(f).__name__}")

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Operator product self o other in canonical form."""
        self._check(other)
        out = DiffOp.zero(self.variables)
        acc: dict = {}
        for alpha, P in self.terms.items():
            for beta, Q in other.terms.items():
                # P d^alpha (Q d^beta f) = sum_gamma C(alpha,gamma) P (d^gamma Q) d^(alpha-gamma+beta) f
                for gamma in _sub_multi_indices(alpha):
                    dq = Q
                    for v, k in zip(self.variables, gamma):
                        for _ in range(k):
                            dq = dq.diff(v)
                            if dq.is_zero():
                                break
                        if dq.is_zero():
                            break
                    if dq.is_zero():
                        continue
                    c = _binom_multi(alpha, gamma)
                    coeff = P * dq * c
                    derivs = tuple(a - g + b for a, g, b
                                   in zip(alpha, gamma, beta))
                    if derivs in acc:
                        s = acc[derivs] + coeff
                        if s.is_zero():
                            del acc[derivs]
                        else:
                            acc[derivs] = s
                    else:
                        acc[derivs] = coeff
        out.terms = acc
        return out

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self.compose(other) - other.compose(self)

    def order(self) -> int:
        if not self.terms:
            return 0
        return max(sum(d) for d in self.terms)

    def principal_symbol(self, momentum_names: Sequence[str]) -> MultiPoly:
        """Top-order coefficients with each derivative replaced by a momentum.

        Returns a polynomial over variables + momentum_names.
        """
        top = self.order()
        variables = self.variables + tuple(momentum_names)
        out = MultiPoly.zero(variables)
        for derivs, coeff in self.terms.items():
            if sum(derivs) != top:
                continue
            term = coeff.extend(variables)
            for name, k in zip(momentum_names, derivs):
                if k:
                    term = term * MultiPoly.var(variables, name) ** k
            out = out + term
        return out

    def subs_values(self, point) -> "DiffOp":
        """Substitute numeric values for parameter-like variables.

        Substituted variables must not carry derivatives in any term.
        """
        keep = [v for v in self.variables if v not in point]
        idx = [self.variables.index(v) for v in keep]
        out = DiffOp(tuple(keep))
        terms = {}
        for derivs, coeff in self.terms.items():
            for i, v in enumerate(self.variables):
                if v in point and derivs[i]:
                    raise ValueError(f"cannot substitute differentiated variable {v}")
            new_coeff = coeff.subs_values(point)
            if not new_coeff.is_zero():
                d = tuple(derivs[i] for i in idx)
                if d in terms:
                    terms[d] = terms[d] + new_coeff
                else:
                    terms[d] = new_coeff
        out.terms = {d: c for d, c in terms.items() if not c.is_zero()}
        return out

    def extend(self, variables: Sequence[str]) -> "DiffOp":
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        n = len(variables)
        out = DiffOp(variables)
        terms = {}
        for derivs, coeff in self.terms.items():
            d = [0] * n
            for p, k in zip(pos, derivs):
                d[p] = k
            terms[tuple(d)] = coeff.extend(variables)
        out.terms = terms
        return out

    # -- gauge rotation ----------------------------------------------------
    def gauge_conjugate(self, g: GaussFn, shift=0) -> "DiffOp":
        """Exact g^-1 (self - shift) g for unit-prefactor Gaussian g.

        Conjugation sends each d_i to d_i + (d_i q) where q is the exponent
        of g; the result has polynomial coefficients again.
        """
        if not (g.prefactor.is_constant()
                and g.prefactor.constant_value() == 1):
            raise ValueError("gauge factor must have prefactor 1")
        if g.variables != self.variables:
            raise VariableMismatch(f"{g.variables} vs {self.variables}")
        q = g.exponent
        shifted = [DiffOp(self.variables,
                          {tuple(1 if j == i else 0
                                 for j in range(len(self.variables))): 1,
                           (0,) * len(self.variables): q.diff(v)})
                   for i, v in enumerate(self.variables)]
        out = DiffOp.zero(self.variables)
        for alpha, P in self.terms.items():
            term = DiffOp.identity(self.variables)
            for i, k in enumerate(alpha):
                for _ in range(k):
                    term = shifted[i].compose(term)
            out = out + DiffOp.mul_by(P).compose(term)
        if isinstance(shift, MultiPoly):
            out = out - DiffOp.mul_by(shift)
        elif shift != 0:
            out = out - shift * DiffOp.identity(self.variables)
        return out

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        term_list = []
        for derivs in sorted(self.terms, key=lambda d: (sum(d), d)):
            for exps, c in self.terms[derivs].sorted_terms():
                term_list.append({"coeff": f"{c.numerator}/{c.denominator}",
                                  "powers": list(exps),
                                  "derivs": list(derivs)})
        return {"variables": list(self.variables), "terms": term_list}

    @classmethod
    def from_json(cls, data: dict) -> "DiffOp":
        variables = tuple(data["variables"])
        terms: dict = {}
        for t in data["terms"]:
            derivs = tuple(t["derivs"])
            mono = MultiPoly(variables,
                             {tuple(t["powers"]): Fraction(t["coeff"])})
            terms[derivs] = terms.get(derivs, MultiPoly.zero(variables)) + mono
        return cls(variables, terms)


class RatDiffOp:
    """Differential operator with RationalFn coefficients (used in w-coordinates)."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Mapping[tuple, RationalFn] | None = None):
        self.variables = tuple(variables)
        self.terms = {}
        if terms:
            for derivs, coeff in terms.items():
                derivs = tuple(derivs)
                if isinstance(coeff, MultiPoly):
                    coeff = RationalFn(coeff)
                if not coeff.is_zero():
                    if derivs in self.terms:
                        self.terms[derivs] = self.terms[derivs] + coeff
                    else:
                        self.terms[derivs] = coeff

    def __add__(self, other: "RatDiffOp") -> "RatDiffOp":
        out = RatDiffOp(self.variables, dict(self.terms))
        for derivs, coeff in other.terms.items():
            if derivs in out.terms:
                out.terms[derivs] = out.terms[derivs] + coeff
            else:
                out.terms[derivs] = coeff
        out.terms = {d: c for d, c in out.terms.items() if not c.is_zero()}
        return out

    def apply(self, f) -> RationalFn:
        if isinstance(f, MultiPoly):
            f = RationalFn(f)
        out = RationalFn(MultiPoly.zero(self.variables))
        for derivs, coeff in self.terms.items():
            g = f
            for v, k in zip(self.variables, derivs):
                for _ in range(k):
                    g = g.diff(v)
            out = out + coeff * g
        return out
