"""Secular polynomials p(E, lam) of truncated model matrices.

Tridiagonal models use the three-term determinant recurrence
D_k = B_k * D_{k-1} - A_k^2 * D_{k-2} with D_{-1} = 1.  Dense models use
fraction-free Bareiss elimination over bivariate polynomial entries:
exact integer polynomials for the rational box-x matrix, BigReal
polynomials for the box-x^2 matrix.

The API indexes by matrix dimension n (the number of retained basis
states); a dimension-n determinant has degree exactly n in E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpfr, mpz

from .discriminant import _zp_divexact, _zp_mul, _zp_sub, _zp_trim, bareiss_det
from .models import DenseModelMatrix, ModelSpec, dense_matrix, recurrence_coeffs
from .poly import BiPoly, UniPoly
from .rings import QQ, RealField, working_precision


@dataclass(frozen=True)
class SecularPoly:
    """det(H_n - E I_n) for one model at one truncation dimension."""

    p: BiPoly
    spec: object
    dim: int

    def __post_init__(self):
        if self.p.degree_in_E != self.dim:
            raise ValueError(
                "degenerate truncation: secular degree in E "
                f"{self.p.degree_in_E} != dimension {self.dim}"
            )


def secular_tridiagonal(spec, n):
    """Secular polynomial of a tridiagonal model at dimension n >= 1."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    d_prev2 = BiPoly.one(QQ)
    d_prev = None
    for i in range(n):
        rc = recurrence_coeffs(spec, i)
        if d_prev is None:
            d = rc.B
        else:
            d = rc.B * d_prev - rc.Asq * d_prev2
            d_prev2 = d_prev
        d_prev = d
    return SecularPoly(d_prev, spec, n)


# ---------------------------------------------------------------------------
# dense path: bivariate entries as tuples (per E power) of lam-coefficient
# tuples; integer (mpz) for the exact ring, mpfr for the float ring


def _zz_trim(e):
    n = len(e)
    while n and not e[n - 1]:
        n -= 1
    return tuple(e[:n])


def _zz_mul(a, b):
    if not a or not b:
        return ()
    out = [()] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    prod = _zp_mul(ca, cb)
                    out[i + j] = _zp_add_raw(out[i + j], prod)
    return _zz_trim(out)


def _zp_add_raw(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _zp_trim(out)


def _zz_sub(a, b):
    if len(a) < len(b):
        a = a + ((),) * (len(b) - len(a))
    out = list(a)
    for i, c in enumerate(b):
        out[i] = _zp_sub(out[i], c)
    return _zz_trim(out)


def _zz_divexact(a, b):
    """Exact division in Z[E, lam], E-major long division."""
    if not a:
        return ()
    da, db = len(a) - 1, len(b) - 1
    q = [()] * (da - db + 1)
    rem = list(a)
    lead = b[-1]
    for k in range(da - db, -1, -1):
        c = rem[db + k]
        if c:
            qc = _zp_divexact(c, lead)
            q[k] = qc
            for j in range(db + 1):
                if b[j]:
                    rem[j + k] = _zp_sub(rem[j + k], _zp_mul(qc, b[j]))
    return _zz_trim(q)


class _ZZOps:
    one = ((mpz(1),),)
    zero = ()

    @staticmethod
    def is_zero(a):
        return not a

    mul = staticmethod(_zz_mul)
    sub = staticmethod(_zz_sub)
    divexact = staticmethod(_zz_divexact)


def _make_fp_ops(prec):
    """Float analogues of the exact bivariate ops at `prec` bits.

    Division discards the remainder; it is roundoff-sized because every
    Bareiss quotient is exact in the underlying algebra.
    """

    def fp_mul(a, b):
        if not a or not b:
            return ()
        out = [()] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] = _lam_add(out[i + j], _lam_mul(ca, cb))
        return _zz_trim(out)

    def _lam_mul(x, y):
        res = [mpfr(0)] * (len(x) + len(y) - 1)
        for i, cx in enumerate(x):
            if cx:
                for j, cy in enumerate(y):
                    res[i + j] += cx * cy
        return tuple(res)

    def _lam_add(x, y):
        if len(x) < len(y):
            x, y = y, x
        res = list(x)
        for i, c in enumerate(y):
            res[i] += c
        return tuple(res)

    def _lam_sub(x, y):
        if len(x) < len(y):
            x = x + (mpfr(0),) * (len(y) - len(x))
        res = list(x)
        for i, c in enumerate(y):
            res[i] -= c
        return tuple(res)

    def _lam_div(x, y):
        # long division in lam, remainder dropped
        if not x:
            return ()
        if len(y) == 1:
            inv = 1 / y[0]
            return tuple(c * inv for c in x)
        dx, dy = len(x) - 1, len(y) - 1
        if dx < dy:
            return ()
        qq = [mpfr(0)] * (dx - dy + 1)
        rem = list(x)
        inv = 1 / y[-1]
        for k in range(dx - dy, -1, -1):
            qc = rem[dy + k] * inv
            qq[k] = qc
            if qc:
                for j in range(dy + 1):
                    rem[j + k] -= qc * y[j]
        return tuple(qq)

    def fp_sub(a, b):
        if len(a) < len(b):
            a = a + ((),) * (len(b) - len(a))
        out = list(a)
        for i, c in enumerate(b):
            out[i] = _lam_sub(out[i], c)
        return _zz_trim(out)

    def fp_divexact(a, b):
        if not a:
            return ()
        da, db = len(a) - 1, len(b) - 1
        q = [()] * (da - db + 1)
        rem = list(a)
        lead = b[-1]
        for k in range(da - db, -1, -1):
            c = rem[db + k]
            if c:
                qc = _lam_div(c, lead)
                q[k] = qc
                for j in range(db + 1):
                    if b[j]:
                        rem[j + k] = _lam_sub(rem[j + k], _lam_mul(qc, b[j]))
        return _zz_trim(q)

    class _FPOps:
        one = ((mpfr(1),),)
        zero = ()

        @staticmethod
        def is_zero(a):
            return not a or all(all(c == 0 for c in row) for row in a)

        mul = staticmethod(fp_mul)
        sub = staticmethod(fp_sub)
        divexact = staticmethod(fp_divexact)

    return _FPOps


def secular_dense(matrix):
    """Secular polynomial det(M - E I) of a dense model matrix."""
    n = matrix.dim
    if matrix.ring.exact:
        scales = []
        zmat = []
        for r in range(n):
            den = 1
            for c in range(n):
                for coeff in matrix.entries[r][c].coeffs:
                    den = den * coeff.denominator // math.gcd(
                        den, coeff.denominator
                    )
            scales.append(den)
            row = []
            for c in range(n):
                lam_row = _zp_trim(
                    [mpz((co * den).numerator)
                     for co in matrix.entries[r][c].coeffs]
                )
                if r == c:
                    row.append(_zz_trim([lam_row, (mpz(-den),)]))
                else:
                    row.append(_zz_trim([lam_row]))
            zmat.append(row)
        det = bareiss_det(zmat, _ZZOps)
        prod = 1
        for s in scales:
            prod *= s
        rows = [
            UniPoly(QQ, (Fraction(int(c), prod) for c in lam_row))
            for lam_row in det
        ]
        p = BiPoly(QQ, rows)
        return SecularPoly(p, matrix.spec, n)

    prec = matrix.ring.prec
    work = prec + 64
    ops = _make_fp_ops(work)
    with working_precision(work):
        fmat = []
        for r in range(n):
            row = []
            for c in range(n):
                lam_row = tuple(
                    mpfr(v, work) for v in matrix.entries[r][c].coeffs
                )
                if r == c:
                    row.append(_zz_trim([lam_row, (mpfr(-1),)]))
                else:
                    row.append(_zz_trim([lam_row]))
            fmat.append(row)
        det = bareiss_det(fmat, ops)
        out_ring = RealField(prec)
        rows = [UniPoly(out_ring, lam_row) for lam_row in det]
        p = BiPoly(out_ring, rows)
    return SecularPoly(p, matrix.spec, n)


def secular(spec, n):
    """Secular polynomial for any model at dimension n."""
    if spec.kind == "Toy3":
        from .toy3 import toy_charpoly

        p = toy_charpoly(spec.beta if spec.beta is not None else Fraction(1, 10))
        return SecularPoly(p, spec, 3)
    if spec.is_tridiagonal:
        return secular_tridiagonal(spec, n)
    return secular_dense(dense_matrix(spec, n))
