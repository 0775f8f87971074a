"""Coefficient rings for the polynomial layer.

Three rings are supported: exact rationals (`fractions.Fraction`),
arbitrary-precision reals (`gmpy2.mpfr`) and arbitrary-precision complex
values (`gmpy2.mpc`).  A ring object records which scalar type it works
over and, for the float rings, the working precision in bits.  All
arithmetic on float-ring values must run inside :func:`working_precision`
so results are rounded at the ring's precision rather than whatever the
ambient gmpy2 context happens to be.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq, mpz

DEFAULT_PRECISION = int(os.environ.get("EPDISC_PRECISION", "256"))

BigReal = mpfr
BigComplex = mpc


class RingMismatchError(TypeError):
    """Raised when an operation mixes values from different rings."""


@contextlib.contextmanager
def working_precision(bits):
    """Run a block with the gmpy2 context precision set to `bits`."""
    ctx = gmpy2.context(gmpy2.get_context(), precision=bits)
    with ctx:
        yield


def pi(bits):
    return gmpy2.const_pi(bits)


@dataclass(frozen=True)
class RationalField:
    """Exact rational coefficients (always reduced, positive denominator)."""

    kind = "rational"
    exact = True
    prec = None

    def embed(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, mpz)):
            return Fraction(int(x))
        if isinstance(x, mpq):
            return Fraction(int(x.numerator), int(x.denominator))
        raise TypeError(f"cannot embed {type(x).__name__} into the rational field")

    def is_zero(self, c):
        return c == 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True)
class RealField:
    """Reals at a fixed precision in bits."""

    prec: int = DEFAULT_PRECISION
    kind = "real"
    exact = False

    def embed(self, x):
        if isinstance(x, mpc):
            raise TypeError("cannot embed a complex value into a real field")
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        return mpfr(x, self.prec)

    def is_zero(self, c):
        return c == 0

    @property
    def zero(self):
        return mpfr(0, self.prec)

    @property
    def one(self):
        return mpfr(1, self.prec)

    def __repr__(self):
        return f"RR({self.prec})"


@dataclass(frozen=True)
class ComplexField:
    """Complex values at a fixed precision in bits per component."""

    prec: int = DEFAULT_PRECISION
    kind = "complex"
    exact = False

    def embed(self, x):
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        if isinstance(x, (mpq, int, mpz)):
            with working_precision(self.prec):
                return mpc(mpfr(x, self.prec))
        return mpc(x, precision=(self.prec, self.prec))

    def is_zero(self, c):
        return c == 0

    @property
    def zero(self):
        return mpc(0, precision=(self.prec, self.prec))

    @property
    def one(self):
        return mpc(1, precision=(self.prec, self.prec))

    def __repr__(self):
        return f"CC({self.prec})"


QQ = RationalField()


def require_same_ring(a, b):
    if a != b:
        raise RingMismatchError(f"mixed-ring operands: {a!r} vs {b!r}")
    return a


def join_rings(a, b):
    """Smallest ring containing both operand rings."""
    if a == b:
        return a
    if a.kind == "rational":
        return b
    if b.kind == "rational":
        return a
    prec = max(a.prec, b.prec)
    if "complex" in (a.kind, b.kind):
        return ComplexField(prec)
    return RealField(prec)


def to_mpfr(x, prec):
    """Convert an exact or float scalar to mpfr at `prec` bits."""
    if isinstance(x, Fraction):
        x = mpq(x.numerator, x.denominator)
    return mpfr(x, prec)


def to_mpc(x, prec):
    """Convert any supported scalar to mpc at `prec` bits."""
    if isinstance(x, mpc):
        return mpc(x, precision=(prec, prec))
    return mpc(to_mpfr(x, prec), precision=(prec, prec))


def scalar_str(x):
    """Decimal string that round-trips at the value's own precision."""
    return str(x)


def parse_real(s, prec):
    return mpfr(s, prec)
