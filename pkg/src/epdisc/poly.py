"""Dense univariate and bivariate polynomial arithmetic.

`UniPoly` stores coefficients in ascending order over one of the rings in
:mod:`epdisc.rings`.  `BiPoly` represents p(E, lam) as a tuple of
lam-polynomials indexed by the power of E, which matches how secular
polynomials are produced (each E-coefficient is itself a polynomial in
the Hamiltonian parameter).

The zero polynomial has degree None (a distinguished sentinel, never an
integer).  Trailing coefficients are trimmed only when exactly zero;
callers that want to drop numerically tiny float coefficients use
:meth:`UniPoly.trimmed`.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpc, mpfr

from .rings import (
    ComplexField,
    QQ,
    RealField,
    join_rings,
    require_same_ring,
    working_precision,
)


def _prec_of(x):
    if isinstance(x, mpfr):
        return x.precision
    if isinstance(x, mpc):
        return max(x.precision)
    return None


def ring_of_scalar(x, default=QQ):
    """Smallest ring containing the scalar `x`."""
    if isinstance(x, mpc):
        return ComplexField(max(x.precision))
    if isinstance(x, mpfr):
        return RealField(x.precision)
    if isinstance(x, (int, Fraction)):
        return default
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


class UniPoly:
    """Univariate polynomial with ascending coefficients over a ring."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs, *, _trusted=False):
        if not _trusted:
            coeffs = tuple(ring.embed(c) for c in coeffs)
            while coeffs and ring.is_zero(coeffs[-1]):
                coeffs = coeffs[:-1]
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ring):
        return cls(ring, (), _trusted=True)

    @classmethod
    def one(cls, ring):
        return cls(ring, (ring.one,), _trusted=True)

    @classmethod
    def constant(cls, ring, c):
        c = ring.embed(c)
        if ring.is_zero(c):
            return cls.zero(ring)
        return cls(ring, (c,), _trusted=True)

    @classmethod
    def variable(cls, ring):
        return cls(ring, (ring.zero, ring.one), _trusted=True)

    @classmethod
    def from_roots(cls, ring, roots):
        p = cls.one(ring)
        for r in roots:
            p = p * cls(ring, (-ring.embed(r), ring.one), _trusted=True)
        return p

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        if not self.coeffs:
            return None
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.ring.zero

    def _wrap(self, coeffs):
        coeffs = tuple(coeffs)
        while coeffs and self.ring.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        return UniPoly(self.ring, coeffs, _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __add__(self, other):
        require_same_ring(self.ring, other.ring)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._wrap(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UniPoly(self.ring, tuple(-c for c in self.coeffs), _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        require_same_ring(self.ring, other.ring)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(self.ring)
        out = [self.ring.zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if self.ring.is_zero(ca):
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return self._wrap(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s):
        s = self.ring.embed(s)
        if self.ring.is_zero(s):
            return UniPoly.zero(self.ring)
        return self._wrap(c * s for c in self.coeffs)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift_up(self, k):
        """Multiply by x**k."""
        if not self.coeffs:
            return self
        return UniPoly(
            self.ring, (self.ring.zero,) * k + self.coeffs, _trusted=True
        )

    def derivative(self):
        c = self.coeffs
        return self._wrap(i * c[i] for i in range(1, len(c)))

    def eval_at(self, x):
        """Horner evaluation; the scalar type of `x` drives the result type."""
        if not self.coeffs:
            return 0 * x if not isinstance(x, int) else self.ring.zero
        acc = self.coeffs[-1] + 0 * x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.eval_at(x)

    def convert(self, ring):
        """Re-embed the coefficients into another ring."""
        if ring == self.ring:
            return self
        return UniPoly(ring, self.coeffs)

    def trimmed(self, rel_tol):
        """Drop leading coefficients below `rel_tol` * max |coeff|."""
        if not self.coeffs or self.ring.exact:
            return self
        mag = max(abs(c) for c in self.coeffs)
        if mag == 0:
            return UniPoly.zero(self.ring)
        cut = mag * rel_tol
        coeffs = self.coeffs
        while coeffs and abs(coeffs[-1]) <= cut:
            coeffs = coeffs[:-1]
        return UniPoly(self.ring, coeffs, _trusted=True)

    def monic(self):
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        inv = 1 / self.lead if not self.ring.exact else self.ring.one / self.lead
        return self.scale(inv)

    def content_and_primitive(self):
        """For rational polynomials: content c and primitive integer part."""
        if self.ring != QQ:
            raise TypeError("content is defined for rational polynomials")
        if self.is_zero:
            return Fraction(0), self
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self.coeffs]
        g = 0
        for n in nums:
            g = gcd(g, n)
        if self.coeffs[-1] < 0:
            g = -g
        cont = Fraction(g, den)
        prim = UniPoly(QQ, tuple(Fraction(n // g) for n in nums), _trusted=True)
        return cont, prim

    def __repr__(self):
        if self.is_zero:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                terms.append(f"({c})*x^{i}" if i else f"({c})")
        return "UniPoly(" + " + ".join(terms) + ")"


class BiPoly:
    """Polynomial in (E, lam): rows[k] is the lam-polynomial on E**k."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows, *, _trusted=False):
        if not _trusted:
            fixed = []
            for row in rows:
                if isinstance(row, UniPoly):
                    require_same_ring(ring, row.ring)
                    fixed.append(row)
                else:
                    fixed.append(UniPoly(ring, row))
            rows = tuple(fixed)
            while rows and rows[-1].is_zero:
                rows = rows[:-1]
        self.ring = ring
        self.rows = rows

    @classmethod
    def zero(cls, ring):
        return cls(ring, (), _trusted=True)

    @classmethod
    def one(cls, ring):
        return cls(ring, (UniPoly.one(ring),), _trusted=True)

    @classmethod
    def from_const_in_E(cls, lam_poly):
        """Embed a lam-polynomial as an E-independent bivariate."""
        if lam_poly.is_zero:
            return cls.zero(lam_poly.ring)
        return cls(lam_poly.ring, (lam_poly,), _trusted=True)

    @classmethod
    def var_E(cls, ring):
        return cls(ring, (UniPoly.zero(ring), UniPoly.one(ring)), _trusted=True)

    @classmethod
    def var_lam(cls, ring):
        return cls(ring, (UniPoly.variable(ring),), _trusted=True)

    @property
    def degree_in_E(self):
        """Degree in E, or None for the zero polynomial."""
        if not self.rows:
            return None
        return len(self.rows) - 1

    @property
    def degree_in_lam(self):
        """Degree in lam, or None for the zero polynomial."""
        if not self.rows:
            return None
        return max(row.degree for row in self.rows if not row.is_zero)

    @property
    def is_zero(self):
        return not self.rows

    def coeff_in_E(self, k):
        if 0 <= k < len(self.rows):
            return self.rows[k]
        return UniPoly.zero(self.ring)

    def _wrap(self, rows):
        rows = tuple(rows)
        while rows and rows[-1].is_zero:
            rows = rows[:-1]
        return BiPoly(self.ring, rows, _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __add__(self, other):
        require_same_ring(self.ring, other.ring)
        a, b = self.rows, other.rows
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, row in enumerate(b):
            out[i] = out[i] + row
        return self._wrap(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BiPoly(self.ring, tuple(-r for r in self.rows), _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        require_same_ring(self.ring, other.ring)
        a, b = self.rows, other.rows
        if not a or not b:
            return BiPoly.zero(self.ring)
        out = [UniPoly.zero(self.ring)] * (len(a) + len(b) - 1)
        for i, ra in enumerate(a):
            if ra.is_zero:
                continue
            for j, rb in enumerate(b):
                out[i + j] = out[i + j] + ra * rb
        return self._wrap(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s):
        if isinstance(s, UniPoly):
            return self._wrap(row * s for row in self.rows)
        s = self.ring.embed(s)
        if self.ring.is_zero(s):
            return BiPoly.zero(self.ring)
        return self._wrap(row.scale(s) for row in self.rows)

    def derivative_in_E(self):
        rows = self.rows
        return self._wrap(rows[i].scale(i) for i in range(1, len(rows)))

    def derivative_in_lam(self):
        return self._wrap(row.derivative() for row in self.rows)

    def specialize_lam(self, lam):
        """Substitute a value for lam, returning a polynomial in E.

        The result ring follows the scalar type: rational values keep the
        current ring, mpfr/mpc values promote to the matching float ring.
        """
        ring = join_rings(self.ring, ring_of_scalar(lam, default=self.ring))
        if ring.exact:
            return UniPoly(ring, (row.eval_at(lam) for row in self.rows))
        with working_precision(ring.prec):
            vals = [row.eval_at(lam) for row in self.rows]
        return UniPoly(ring, vals)

    def specialize_E(self, energy):
        """Substitute a value for E, returning a polynomial in lam."""
        ring = join_rings(self.ring, ring_of_scalar(energy, default=self.ring))

        def horner():
            out = UniPoly.zero(ring)
            for row in reversed(self.rows):
                out = out.scale(energy) + row.convert(ring)
            return out

        if ring.exact:
            return horner()
        with working_precision(ring.prec):
            return horner()

    def eval_at(self, energy, lam):
        prec = max(p for p in (_prec_of(energy), _prec_of(lam), 0) if p is not None)
        if prec:
            with working_precision(prec):
                acc = 0 * energy
                for row in reversed(self.rows):
                    acc = acc * energy + row.eval_at(lam)
                return acc
        acc = Fraction(0)
        for row in reversed(self.rows):
            acc = acc * energy + row.eval_at(lam)
        return acc

    def subs_neg_lam(self):
        """Substitute lam -> -lam."""
        rows = []
        for row in self.rows:
            rows.append(
                UniPoly(
                    self.ring,
                    tuple(c if i % 2 == 0 else -c for i, c in enumerate(row.coeffs)),
                    _trusted=True,
                )
            )
        return BiPoly(self.ring, tuple(rows), _trusted=True)

    def convert(self, ring):
        if ring == self.ring:
            return self
        return BiPoly(ring, tuple(row.convert(ring) for row in self.rows))

    def __repr__(self):
        if self.is_zero:
            return "BiPoly(0)"
        terms = [f"E^{i}: {row!r}" for i, row in enumerate(self.rows)]
        return "BiPoly(" + "; ".join(terms) + ")"
