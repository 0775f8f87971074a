"""Fixed 3x3 symmetric model with exactly known exceptional points.

H(lam) = [[3-lam, b, 0], [b, 2, b], [0, b, 1+lam]] couples three levels
that would cross at lam = 1 when b = 0.  For b = 1/10 the discriminant
of the characteristic polynomial is (50 lam^2 - 100 lam + 51)^3 / 31250,
so the exceptional points sit at lam = 1 +/- i sqrt(2)/10, each a triple
root of the discriminant, with all three eigenvalues coalescing at
E = 2.  At the exceptional point the matrix is defective: one
eigenvector plus a Jordan chain of length 3.

Everything here is exact.  The field Q(sqrt2, i) holds the exceptional
point, the chain vectors, and the similarity transform, so the Jordan
form is a bit-exact identity rather than a numerical approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .discriminant import disc_in_E
from .poly import BiPoly, UniPoly
from .rings import QQ, working_precision


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Q2I:
    """Element a + b sqrt2 + c i + d i sqrt2 of the field Q(sqrt2, i).

    Components are exact rationals.  Multiplication follows from
    sqrt2^2 = 2 and i^2 = -1; inversion multiplies by the three field
    conjugates (sqrt2 -> -sqrt2, i -> -i, and both) and divides by the
    resulting rational norm.
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "Q2I":
        if isinstance(x, Q2I):
            return x
        return Q2I(_frac(x))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __add__(self, other):
        o = Q2I.of(other)
        return Q2I(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Q2I(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-Q2I.of(other))

    def __rsub__(self, other):
        return Q2I.of(other) + (-self)

    def __mul__(self, other):
        o = Q2I.of(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Q2I(
            a1 * a2 + 2 * b1 * b2 - c1 * c2 - 2 * d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_sqrt2(self):
        return Q2I(self.a, -self.b, self.c, -self.d)

    def conj_i(self):
        return Q2I(self.a, self.b, -self.c, -self.d)

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        cofactor = self.conj_sqrt2() * self.conj_i() * self.conj_sqrt2().conj_i()
        norm = self * cofactor
        assert not (norm.b or norm.c or norm.d)
        n = norm.a
        return Q2I(cofactor.a / n, cofactor.b / n, cofactor.c / n, cofactor.d / n)

    def __truediv__(self, other):
        return self * Q2I.of(other).inv()

    def __rtruediv__(self, other):
        return Q2I.of(other) * self.inv()

    def __str__(self):
        parts = []
        for co, unit in (
            (self.a, ""),
            (self.b, "*sqrt2"),
            (self.c, "*i"),
            (self.d, "*i*sqrt2"),
        ):
            if co:
                parts.append(f"{co}{unit}" if unit else str(co))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def embed(self, prec=256):
        """Numeric value as a complex float at `prec` bits."""
        with working_precision(prec):
            r2 = gmpy2.sqrt(mpfr(2))
            re = mpfr(self.a.numerator) / self.a.denominator + (
                mpfr(self.b.numerator) / self.b.denominator
            ) * r2
            im = mpfr(self.c.numerator) / self.c.denominator + (
                mpfr(self.d.numerator) / self.d.denominator
            ) * r2
            return mpc(re, im)


Q2I_ZERO = Q2I()
Q2I_ONE = Q2I(Fraction(1))
Q2I_SQRT2 = Q2I(Fraction(0), Fraction(1))
Q2I_I = Q2I(Fraction(0), Fraction(0), Fraction(1))
Q2I_ISQRT2 = Q2I(Fraction(0), Fraction(0), Fraction(0), Fraction(1))

TOY_DIM = 3
TOY_EIGENVALUE_AT_EP = Q2I(Fraction(2))


@dataclass(frozen=True)
class Toy3Matrix:
    """The 3x3 coupled-level matrix at symbolic lam, entries in Q[lam]."""

    beta: Fraction
    entries: tuple

    @staticmethod
    def build(beta) -> "Toy3Matrix":
        beta = _frac(beta)
        lam = UniPoly.variable(QQ)

        def const(x):
            return UniPoly.constant(QQ, _frac(x))

        rows = (
            (const(3) - lam, const(beta), const(0)),
            (const(beta), const(2), const(beta)),
            (const(0), const(beta), const(1) + lam),
        )
        return Toy3Matrix(beta, rows)

    def at(self, lam):
        """Entries evaluated at a Q2I (or rational) coupling value."""
        lam = Q2I.of(lam)
        out = []
        for row in self.entries:
            out.append(
                tuple(
                    sum(
                        (Q2I.of(co) * pw for co, pw in _q2i_powers(e, lam)),
                        Q2I_ZERO,
                    )
                    for e in row
                )
            )
        return tuple(out)


def _q2i_powers(poly, lam):
    pw = Q2I_ONE
    for co in poly.coeffs:
        yield co, pw
        pw = pw * lam


def toy_charpoly(beta) -> BiPoly:
    """det(H(lam) - E I) as an exact polynomial in (E, lam)."""
    m = Toy3Matrix.build(beta)
    e_var = BiPoly.var_E(QQ)
    ent = [
        [BiPoly(QQ, [m.entries[r][c]]) for c in range(3)] for r in range(3)
    ]
    for r in range(3):
        ent[r][r] = ent[r][r] - e_var
    # cofactor expansion along the first row
    det = ent[0][0] * (ent[1][1] * ent[2][2] - ent[1][2] * ent[2][1])
    det = det - ent[0][1] * (ent[1][0] * ent[2][2] - ent[1][2] * ent[2][0])
    det = det + ent[0][2] * (ent[1][0] * ent[2][1] - ent[1][1] * ent[2][0])
    return det


def toy_disc(beta) -> UniPoly:
    """Discriminant in E of the toy characteristic polynomial, exact."""
    return disc_in_E(toy_charpoly(beta), method="exact")


def ep_pair(beta):
    """The two exceptional couplings 1 +/- i sqrt2 * beta, exact."""
    beta = _frac(beta)
    up = Q2I_ONE + Q2I_ISQRT2 * beta
    return up, up.conj_i()


def _check_columns(a, cols, rhs, what):
    for r in range(3):
        acc = Q2I_ZERO
        for c in range(3):
            acc = acc + a[r][c] * cols[c]
        if acc - rhs[r]:
            raise ArithmeticError(f"jordan chain inconsistent in {what}")


def jordan_at_ep():
    """Jordan chain and similarity transform at the upper exceptional point.

    Fixes beta = 1/10, lam = 1 + i sqrt2 / 10, eigenvalue 2.  The chain
    systems (H - 2I) v1 = 0, (H - 2I) v2 = v1, (H - 2I) v3 = v2 are each
    underdetermined by one dimension; the gauge takes v2[2] = 0 and
    v3[0] = 0, with v1 scaled to (-i, sqrt2, i)/2.  Every equation is
    re-checked exactly and an inconsistent system raises.

    Returns (v1, v2, v3, U, J) with U = [v1 v2 v3] columns and J the
    3x3 Jordan block for eigenvalue 2; H U = U J holds exactly.
    """
    beta = Fraction(1, 10)
    lam, _ = ep_pair(beta)
    h = Toy3Matrix.build(beta).at(lam)
    two = TOY_EIGENVALUE_AT_EP
    a = tuple(
        tuple(h[r][c] - (two if r == c else Q2I_ZERO) for c in range(3))
        for r in range(3)
    )
    b = Q2I.of(beta)

    # null vector: row 2 gives v[0] = -v[2], row 3 gives v[1]; scale by t
    t = Q2I_I / 2
    v1 = (-t, -(a[2][2] / b) * t, t)
    _check_columns(a, v1, (Q2I_ZERO,) * 3, "(H - 2I) v1 = 0")

    # first generalized vector, gauge v2[2] = 0
    v2 = (v1[1] / b, v1[2] / b, Q2I_ZERO)
    _check_columns(a, v2, v1, "(H - 2I) v2 = v1")

    # second generalized vector, gauge v3[0] = 0
    v3 = (Q2I_ZERO, v2[0] / b, v2[1] / b)
    _check_columns(a, v3, v2, "(H - 2I) v3 = v2")

    u = tuple(tuple((v1, v2, v3)[c][r] for c in range(3)) for r in range(3))
    one = Q2I_ONE
    zero = Q2I_ZERO
    j = ((two, one, zero), (zero, two, one), (zero, zero, two))

    # H U = U J, column by column, exactly
    hu = mat3_mul(h, u)
    uj = mat3_mul(u, j)
    for r in range(3):
        for c in range(3):
            if hu[r][c] - uj[r][c]:
                raise ArithmeticError("similarity identity H U = U J failed")
    return v1, v2, v3, u, j


def mat3_mul(x, y):
    return tuple(
        tuple(
            x[r][0] * y[0][c] + x[r][1] * y[1][c] + x[r][2] * y[2][c]
            for c in range(3)
        )
        for r in range(3)
    )


def mat3_inv(x):
    """Exact inverse of a 3x3 matrix over the field, via the adjugate."""

    def minor(r, c):
        rs = [k for k in range(3) if k != r]
        cs = [k for k in range(3) if k != c]
        return (
            x[rs[0]][cs[0]] * x[rs[1]][cs[1]]
            - x[rs[0]][cs[1]] * x[rs[1]][cs[0]]
        )

    det = (
        x[0][0] * minor(0, 0) - x[0][1] * minor(0, 1) + x[0][2] * minor(0, 2)
    )
    inv_det = det.inv() if isinstance(det, Q2I) else 1 / det
    sign = (1, -1)
    return tuple(
        tuple(sign[(r + c) % 2] * minor(c, r) * inv_det for c in range(3))
        for r in range(3)
    )
