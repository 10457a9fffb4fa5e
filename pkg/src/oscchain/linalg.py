"""Small exact linear-algebra toolkit over Fraction.

Dense matrices are lists of lists of Fraction.  Sizes here are desk-scale
(basis dimension <= 84), so cubic algorithms are fine.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def mat_zero(n: int, m: Optional[int] = None) -> Matrix:
    m = n if m is None else m
    return [[Fraction(0)] * m for _ in range(n)]


def mat_identity(n: int) -> Matrix:
    out = mat_zero(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = mat_zero(n, m)
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                if Bt[j] != 0:
                    row[j] += a * Bt[j]
    return out


def mat_sub_scaled_identity(A: Matrix, lam: Fraction) -> Matrix:
    out = [row[:] for row in A]
    for i in range(len(A)):
        out[i][i] -= lam
    return out


def mat_trace(A: Matrix) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def rank(A: Matrix) -> int:
    if not A:
        return 0
    M = [row[:] for row in A]
    n, m = len(M), len(M[0])
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == n:
            break
    return r


def nullspace(A: Matrix) -> List[List[Fraction]]:
    """Basis of the right nullspace (list of vectors)."""
    if not A:
        return []
    M = [row[:] for row in A]
    n, m = len(M), len(M[0])
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of A x = b, or None if inconsistent/singular-square."""
    n = len(A)
    if n == 0:
        return []
    m = len(A[0])
    M = [A[i][:] + [Fraction(b[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if M[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, pc in enumerate(pivots):
        x[pc] = M[i][m]
    return x


def char_poly(A: Matrix) -> List[Fraction]:
    """Characteristic polynomial coefficients [c0, ..., cn] of det(lam*I - A).

    Faddeev-LeVerrier; cn = 1.
    """
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = mat_identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        c = -mat_trace(M) / k
        coeffs[n - k] = c
        for i in range(n):
            M[i][i] += c
    return coeffs


# -- univariate polynomial utilities over Fraction ---------------------------

def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def poly_deriv(coeffs: Sequence[Fraction]) -> List[Fraction]:
    return [k * c for k, c in enumerate(coeffs)][1:] or [Fraction(0)]


def poly_trim(coeffs: Sequence[Fraction]) -> List[Fraction]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [Fraction(0)]


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = poly_trim(a)
    b = poly_trim(b)
    if b == [Fraction(0)]:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and poly_trim(r) != [Fraction(0)]:
        r = poly_trim(r)
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        f = r[-1] / b[-1]
        q[k] = f
        for i in range(len(b)):
            r[i + k] -= f * b[i]
        r.pop()
    return poly_trim(q), poly_trim(r)


def poly_gcd(a, b) -> List[Fraction]:
    a, b = poly_trim(a), poly_trim(b)
    while b != [Fraction(0)]:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a[-1] != 0:
        a = [c / a[-1] for c in a]
    return a


def square_free(coeffs) -> List[Fraction]:
    coeffs = poly_trim(coeffs)
    if len(coeffs) <= 2:
        return coeffs
    g = poly_gcd(coeffs, poly_deriv(coeffs))
    if len(g) == 1:
        return coeffs
    q, r = poly_divmod(coeffs, g)
    assert r == [Fraction(0)]
    return q


def _refine_sign_change(coeffs, lo: Fraction, hi: Fraction,
                        width: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink [lo, hi] (with a sign change of coeffs) below `width` by
    exact bisection, keeping the sign change inside."""
    flo = poly_eval(coeffs, lo)
    fhi = poly_eval(coeffs, hi)
    if flo == 0:
        return (lo, lo)
    if fhi == 0:
        return (hi, hi)
    assert (flo > 0) != (fhi > 0), "no sign change over isolating interval"
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = poly_eval(coeffs, mid)
        if fm == 0:
            return (mid, mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return (lo, hi)


def real_roots_exact(coeffs, width: Fraction = Fraction(1, 2 ** 64)):
    """All real roots of a Fraction-coefficient polynomial.

    Returns (rational, irrational): rational as [(Fraction, multiplicity)],
    irrational as [((lo, hi), multiplicity)] with certified isolating
    intervals of width <= `width` refined by exact sign-change bisection.
    Factorization over Q is delegated to sympy; the interval refinement and
    the final sign-change certificates are done in-house over Fraction.
    """
    import sympy

    coeffs = poly_trim(coeffs)
    if len(coeffs) <= 1:
        return [], []
    lam = sympy.Symbol("lam")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * lam ** k
               for k, c in enumerate(coeffs))
    poly = sympy.Poly(expr, lam, domain="QQ")
    _, factors = poly.factor_list()
    rational: List[Tuple[Fraction, int]] = []
    irrational = []
    for fac, mult in factors:
        fcoeffs = [Fraction(str(c)) for c in reversed(fac.all_coeffs())]
        if fac.degree() == 1:
            # c0 + c1 lam
            rational.append((-fcoeffs[0] / fcoeffs[1], mult))
            continue
        for (lo, hi), _m in fac.intervals():
            lo = Fraction(str(lo))
            hi = Fraction(str(hi))
            if lo == hi:
                rational.append((lo, mult))
                continue
            irrational.append((_refine_sign_change(fcoeffs, lo, hi, width),
                               mult))
    rational.sort(key=lambda t: t[0])
    irrational.sort(key=lambda t: t[0][0])
    return rational, irrational
