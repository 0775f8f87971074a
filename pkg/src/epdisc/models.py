"""Catalog of parameter-dependent Hamiltonian models.

Every model is reduced either to three-term recurrence coefficients
(A_i^2, B_i) for a tridiagonal secular determinant, or to a dense
truncated matrix whose entries are polynomials of degree <= 1 in the
coupling lam.

Couplings are only ever exposed squared (A_i^2), which keeps every
tridiagonal model exactly rational even when A_i itself carries a square
root.  The particle-in-a-box models are rescaled so that the linear-x
model is exactly rational (energies divided by pi^2/4, coupling by
pi^4/4); the x^2 model mixes 1/3 and 1/pi^2 diagonal terms and is
therefore carried in BigReal at a chosen precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
from gmpy2 import mpfr

from .poly import BiPoly, UniPoly
from .rings import DEFAULT_PRECISION, QQ, RealField, to_mpc, working_precision

TRIDIAGONAL_KINDS = (
    "MathieuPiEven",
    "MathieuPiOdd",
    "Mathieu2PiEven",
    "Mathieu2PiOdd",
    "RigidRotor",
    "SymmetricTop",
)
DENSE_KINDS = ("BoxX", "BoxX2")
ALL_KINDS = TRIDIAGONAL_KINDS + DENSE_KINDS + ("Toy3",)


@dataclass(frozen=True)
class ModelSpec:
    """A model family plus its quantum numbers and ring selection."""

    kind: str
    M: Optional[int] = None
    K: Optional[int] = None
    parity: Optional[str] = None
    beta: Optional[Fraction] = None
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "RigidRotor":
            if self.M is None or self.M < 0:
                raise ValueError("RigidRotor needs an integer M >= 0")
        if self.kind == "SymmetricTop":
            if self.M is None or self.K is None:
                raise ValueError("SymmetricTop needs integers M and K")
        if self.kind == "BoxX2" and self.parity not in ("even", "odd"):
            raise ValueError("BoxX2 needs parity 'even' or 'odd'")

    @property
    def is_tridiagonal(self):
        return self.kind in TRIDIAGONAL_KINDS

    @property
    def is_dense(self):
        return self.kind in DENSE_KINDS

    @property
    def exact_capable(self):
        """True when the (possibly rescaled) matrix is exactly rational."""
        return self.kind != "BoxX2"

    @property
    def symmetry(self):
        """Negation behavior of the EP set.

        "negation": the accepted set is closed under lam -> -lam;
        ("cross", partner): negation maps this model's EP set onto the
        partner model's; "none": conjugation closure only.
        """
        k = self.kind
        if k in ("BoxX", "MathieuPiEven", "MathieuPiOdd", "RigidRotor"):
            return "negation"
        if k == "SymmetricTop":
            if self.M * self.K == 0:
                return "negation"
            return ("cross", ModelSpec("SymmetricTop", M=self.M, K=-self.K,
                                       prec=self.prec))
        if k == "Mathieu2PiEven":
            return ("cross", ModelSpec("Mathieu2PiOdd", prec=self.prec))
        if k == "Mathieu2PiOdd":
            return ("cross", ModelSpec("Mathieu2PiEven", prec=self.prec))
        return "none"

    def label(self):
        k = self.kind
        if k == "RigidRotor":
            return f"rotor M={self.M}"
        if k == "SymmetricTop":
            return f"top M={self.M} K={self.K}"
        if k == "BoxX2":
            return f"box-x2 {self.parity}"
        names = {
            "BoxX": "box-x",
            "MathieuPiEven": "mathieu pi-even",
            "MathieuPiOdd": "mathieu pi-odd",
            "Mathieu2PiEven": "mathieu 2pi-even",
            "Mathieu2PiOdd": "mathieu 2pi-odd",
            "Toy3": "toy3",
        }
        return names[k]


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """One step of a tridiagonal secular recurrence.

    Asq is A_i^2 (coupling squared, E-free, rational in lam); B is the
    diagonal entry, linear in E with E-coefficient exactly -1.
    """

    Asq: BiPoly
    B: BiPoly


def _beta_bipoly(const, lam_coeff=Fraction(0)):
    """Diagonal entry (const + lam_coeff*lam) - E as a BiPoly."""
    return BiPoly(QQ, [UniPoly(QQ, [const, lam_coeff]), UniPoly(QQ, [-1])])


def _asq_bipoly(lam2_coeff):
    """Coupling squared lam2_coeff * lam^2 as an E-free BiPoly."""
    return BiPoly(QQ, [UniPoly(QQ, [0, 0, lam2_coeff])])


def recurrence_coeffs(spec, i):
    """Exact-rational (A_i^2, B_i) for a tridiagonal model at index i >= 0.

    The coupling A_i connects basis states i-1 and i, so A_0^2 is 0 by
    convention (it multiplies nothing in the recurrence).
    """
    if not spec.is_tridiagonal:
        raise ValueError(f"{spec.kind} is not a tridiagonal model")
    if i < 0:
        raise ValueError("index must be >= 0")
    k = spec.kind
    if k == "MathieuPiEven":
        beta = _beta_bipoly(Fraction(4 * i * i))
        if i == 0:
            asq = Fraction(0)
        elif i == 1:
            asq = Fraction(2)
        else:
            asq = Fraction(1)
        return RecurrenceCoeffs(_asq_bipoly(asq), beta)
    if k == "MathieuPiOdd":
        beta = _beta_bipoly(Fraction(4 * (i + 1) * (i + 1)))
        return RecurrenceCoeffs(_asq_bipoly(Fraction(0 if i == 0 else 1)), beta)
    if k in ("Mathieu2PiEven", "Mathieu2PiOdd"):
        shift = Fraction(1 if k == "Mathieu2PiEven" else -1)
        beta = _beta_bipoly(
            Fraction((2 * i + 1) ** 2), shift if i == 0 else Fraction(0)
        )
        return RecurrenceCoeffs(_asq_bipoly(Fraction(0 if i == 0 else 1)), beta)
    if k == "RigidRotor":
        m = spec.M
        beta = _beta_bipoly(Fraction((i + m) * (i + m + 1)))
        if i == 0:
            asq = Fraction(0)
        else:
            asq = Fraction(i * (i + 2 * m), 4 * (i + m) ** 2 - 1)
        return RecurrenceCoeffs(_asq_bipoly(asq), beta)
    # SymmetricTop
    m, kk = spec.M, spec.K
    j0 = max(abs(m), abs(kk))
    t = j0 + i
    if m * kk == 0:
        lam_coeff = Fraction(0)
    else:
        lam_coeff = Fraction(-m * kk, t * (t + 1))
    beta = _beta_bipoly(Fraction(t * (t + 1)), lam_coeff)
    if i == 0:
        asq = Fraction(0)
    else:
        num = (t * t - kk * kk) * (t * t - m * m)
        den = t * t * (4 * t * t - 1)
        asq = Fraction(num, den)
    return RecurrenceCoeffs(_asq_bipoly(asq), beta)


# ---------------------------------------------------------------------------
# dense box models


def box_x_element(m, n):
    """Scaled matrix element of x between box states m and n.

    In the rescaled units (energies / (pi^2/4), coupling / (pi^4/4)) the
    element is exactly rational: -16ab/((a-b)^2(a+b)^2) for m+n odd with
    a = m+1, b = n+1, and 0 otherwise.
    """
    if (m + n) % 2 == 0:
        return Fraction(0)
    a, b = m + 1, n + 1
    return Fraction(-16 * a * b, (a - b) ** 2 * (a + b) ** 2)


def box_x2_element(m, n, prec):
    """Scaled matrix element of x^2 between box states m and n.

    Diagonal 1/3 - 2/(pi^2 a^2); off-diagonal (m+n even)
    32ab/(pi^2 (a-b)^2 (a+b)^2); zero for m+n odd.  Mixes rational and
    1/pi^2 terms, so it is returned as BigReal at `prec` bits.
    """
    with working_precision(prec):
        pi2 = gmpy2.const_pi(prec) ** 2
        a, b = m + 1, n + 1
        if m == n:
            return mpfr(1) / 3 - 2 / (pi2 * a * a)
        if (m + n) % 2 == 1:
            return mpfr(0)
        num = 32 * a * b
        den = (a - b) ** 2 * (a + b) ** 2
        return num / (pi2 * den)


@dataclass(frozen=True)
class DenseModelMatrix:
    """Truncated dense matrix with entries polynomial in lam (degree <= 1).

    `entries[r][c]` are UniPoly in lam over `ring`; `basis` holds the
    underlying basis labels (consecutive for BoxX, one parity class for
    BoxX2); `spec` records the model for scale-map lookups.
    """

    spec: ModelSpec
    dim: int
    basis: tuple
    entries: tuple
    ring: object


def dense_matrix(spec, n):
    """Truncated matrix of a dense (box) model at dimension n >= 2."""
    if not spec.is_dense:
        raise ValueError(f"{spec.kind} is not a dense-matrix model")
    if n < 2:
        raise ValueError("dense truncation needs dimension >= 2")
    if spec.kind == "BoxX":
        basis = tuple(range(n))
        ring = QQ
        entries = []
        for r, m in enumerate(basis):
            row = []
            for c, mm in enumerate(basis):
                const = Fraction((m + 1) ** 2) if r == c else Fraction(0)
                row.append(UniPoly(QQ, [const, box_x_element(m, mm)]))
            entries.append(tuple(row))
        return DenseModelMatrix(spec, n, basis, tuple(entries), ring)
    # BoxX2: one parity block
    start = 0 if spec.parity == "even" else 1
    basis = tuple(start + 2 * i for i in range(n))
    prec = spec.prec
    ring = RealField(prec)
    entries = []
    for r, m in enumerate(basis):
        row = []
        for c, mm in enumerate(basis):
            const = mpfr((m + 1) ** 2, prec) if r == c else mpfr(0, prec)
            row.append(UniPoly(ring, [const, box_x2_element(m, mm, prec)]))
        entries.append(tuple(row))
    return DenseModelMatrix(spec, n, basis, tuple(entries), ring)


# ---------------------------------------------------------------------------
# unit scaling


def scale_factors(spec, prec):
    """(E factor, lam factor) mapping scaled units back to physical ones."""
    if spec.kind == "BoxX":
        with working_precision(prec):
            pi2 = gmpy2.const_pi(prec) ** 2
            return pi2 / 4, pi2 * pi2 / 4
    if spec.kind == "BoxX2":
        with working_precision(prec):
            pi2 = gmpy2.const_pi(prec) ** 2
            return pi2 / 4, pi2 / 4
    return None


def scale_map(spec, lam, prec=None):
    """Physical coupling from the scaled one (identity for unscaled models)."""
    factors = scale_factors(spec, prec or spec.prec)
    if factors is None:
        return lam
    p = prec or spec.prec
    with working_precision(p):
        return to_mpc(lam, p) * factors[1] if not isinstance(lam, mpfr) \
            else lam * factors[1]


def scale_map_E(spec, energy, prec=None):
    """Physical energy from the scaled one (identity for unscaled models)."""
    factors = scale_factors(spec, prec or spec.prec)
    if factors is None:
        return energy
    p = prec or spec.prec
    with working_precision(p):
        return to_mpc(energy, p) * factors[0] if not isinstance(energy, mpfr) \
            else energy * factors[0]
