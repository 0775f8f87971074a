"""Resultants and discriminants via Sylvester determinants.

Two computation paths:

* exact, for rational coefficients: clear denominators, run fraction-free
  Bareiss elimination on the Sylvester matrix over integer polynomials in
  lam, rescale;
* float, for BigReal/BigComplex coefficients (or rational input forced to
  the float path): evaluate the discriminant of the specialized
  E-polynomial on a circle of sample points and recover the coefficients
  of F(lam) by the inverse DFT, with an adaptive circle radius.

The float path runs at an internally boosted precision: interpolation on
a circle loses roughly one bit per degree when the circle radius
overshoots the outermost root, so the working precision is padded by the
target degree before rounding results back to the requested precision.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpz

from .poly import BiPoly, UniPoly
from .rings import (
    ComplexField,
    QQ,
    RealField,
    to_mpc,
    working_precision,
)

# ---------------------------------------------------------------------------
# integer lam-polynomials as tuples of mpz, ascending degree


def _zp_trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _zp_from_unipoly(row, den):
    """Rational lam-polynomial times the common denominator `den` -> mpz tuple."""
    out = []
    for c in row.coeffs:
        v = c * den
        assert v.denominator == 1
        out.append(mpz(v.numerator))
    return _zp_trim(out)


def _zp_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _zp_trim(out)


def _zp_neg(a):
    return tuple(-c for c in a)


def _zp_sub(a, b):
    return _zp_add(a, _zp_neg(b))


def _zp_mul(a, b):
    if not a or not b:
        return ()
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _zp_trim(out)


def _zp_scale(a, s):
    if not s:
        return ()
    return tuple(c * s for c in a)


def _zp_divexact(a, b):
    """Exact division a / b in Z[lam]; caller guarantees divisibility."""
    if not a:
        return ()
    if len(b) == 1:
        d = b[0]
        return tuple(c // d for c in a)
    da, db = len(a) - 1, len(b) - 1
    q = [mpz(0)] * (da - db + 1)
    rem = list(a)
    lead = b[-1]
    for k in range(da - db, -1, -1):
        c = rem[db + k]
        if c:
            qc = c // lead
            q[k] = qc
            for j in range(db + 1):
                rem[j + k] -= qc * b[j]
    return _zp_trim(q)


class _ZPolyOps:
    """Ring operations on mpz-tuple lam-polynomials for Bareiss."""

    one = (mpz(1),)
    zero = ()

    @staticmethod
    def is_zero(a):
        return not a

    mul = staticmethod(_zp_mul)
    sub = staticmethod(_zp_sub)
    divexact = staticmethod(_zp_divexact)


def bareiss_det(matrix, ops):
    """Fraction-free determinant over any integral domain.

    `ops` supplies one/zero/is_zero/mul/sub/divexact.  Positional pivots
    with row swaps only when a pivot vanishes; each two-step Sylvester
    identity divides exactly by the previous pivot.
    """
    n = len(matrix)
    m = [list(row) for row in matrix]
    sign = 1
    prev = ops.one
    for k in range(n - 1):
        if ops.is_zero(m[k][k]):
            for r in range(k + 1, n):
                if not ops.is_zero(m[r][k]):
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ops.zero
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            if ops.is_zero(mik):
                for j in range(k + 1, n):
                    row_i[j] = ops.divexact(ops.mul(row_i[j], piv), prev)
            else:
                for j in range(k + 1, n):
                    t = ops.sub(ops.mul(row_i[j], piv), ops.mul(mik, row_k[j]))
                    row_i[j] = ops.divexact(t, prev)
            row_i[k] = ops.zero
        prev = piv
    det = m[n - 1][n - 1]
    if sign < 0:
        det = ops.sub(ops.zero, det)
    return det


# ---------------------------------------------------------------------------
# Sylvester matrices


def sylvester(f, g):
    """Sylvester matrix of two nonconstant polynomials.

    Layout: the first deg(g) columns carry the coefficients of f in
    descending order, each column shifted down by one; the last deg(f)
    columns carry those of g likewise.  Entry layout follows the matrix
    the determinant of which defines the resultant.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("Sylvester matrix of the zero polynomial")
    m, n = f.degree, g.degree
    if m < 1 or n < 1:
        raise ValueError("Sylvester matrix needs degrees >= 1")
    ring = f.ring
    size = m + n
    fa = list(reversed(f.coeffs))
    gb = list(reversed(g.coeffs))
    rows = [[ring.zero] * size for _ in range(size)]
    for j in range(n):
        for k, c in enumerate(fa):
            rows[j + k][j] = c
    for j in range(m):
        for k, c in enumerate(gb):
            rows[j + k][n + j] = c
    return rows


def _det_exact(matrix):
    """Exact determinant of a Fraction matrix via integer Bareiss."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    zmat = []
    for row in matrix:
        den = 1
        for c in row:
            den = den * c.denominator // math.gcd(den, c.denominator)
        scale *= den
        zmat.append([mpz((c * den).numerator) for c in row])

    class _ZOps:
        one = mpz(1)
        zero = mpz(0)

        @staticmethod
        def is_zero(a):
            return not a

        @staticmethod
        def mul(a, b):
            return a * b

        @staticmethod
        def sub(a, b):
            return a - b

        @staticmethod
        def divexact(a, b):
            return a // b

    det = bareiss_det(zmat, _ZOps)
    return Fraction(int(det)) / scale


def det_lu(matrix, prec):
    """Determinant of a BigComplex matrix by pivoted elimination."""
    n = len(matrix)
    with working_precision(prec):
        m = [[to_mpc(c, prec) for c in row] for row in matrix]
        det = mpc(1)
        for k in range(n):
            piv_row, piv_mag = k, abs(m[k][k])
            for r in range(k + 1, n):
                mag = abs(m[r][k])
                if mag > piv_mag:
                    piv_row, piv_mag = r, mag
            if piv_mag == 0:
                return mpc(0)
            if piv_row != k:
                m[k], m[piv_row] = m[piv_row], m[k]
                det = -det
            piv = m[k][k]
            det = det * piv
            inv = 1 / piv
            row_k = m[k]
            for i in range(k + 1, n):
                row_i = m[i]
                f = row_i[k] * inv
                if f == 0:
                    continue
                for j in range(k + 1, n):
                    row_i[j] = row_i[j] - f * row_k[j]
        return det


def resultant(f, g):
    """Resultant of two univariate polynomials over one scalar ring.

    Conventions: Res(f, c) = c**deg(f) and Res(c, g) = c**deg(g) for a
    nonzero constant c; the resultant with a zero polynomial is 0 except
    that two zero inputs are an error.
    """
    if f.is_zero and g.is_zero:
        raise ValueError("resultant of two zero polynomials")
    ring = f.ring
    if f.is_zero or g.is_zero:
        return ring.zero
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return ring.one
    if n == 0:
        return _scalar_pow(g.coeffs[0], m, ring)
    if m == 0:
        return _scalar_pow(f.coeffs[0], n, ring)
    mat = sylvester(f, g)
    if ring.exact:
        return _det_exact(mat)
    if ring.kind == "real":
        det = det_lu(mat, ring.prec)
        return mpfr(det.real, ring.prec)
    return det_lu(mat, ring.prec)


def _scalar_pow(c, k, ring):
    if ring.exact:
        return c**k
    with working_precision(ring.prec):
        return c**k


def discriminant(f):
    """Discriminant of a univariate polynomial: sign * Res(f, f') / lead."""
    if f.is_zero or f.degree == 0:
        raise ValueError("discriminant needs degree >= 1")
    d = f.degree
    if d == 1:
        return f.ring.one
    res = resultant(f, f.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    if f.ring.exact:
        return sign * res / f.lead
    with working_precision(f.ring.prec):
        out = res / f.lead
        return -out if sign < 0 else out


# ---------------------------------------------------------------------------
# bivariate discriminant in E


class DegenerateTruncationError(ValueError):
    """Secular polynomial whose degree in E fell below 2."""


def disc_in_E(p, method="auto", prec=None):
    """F(lam) = discriminant in E of a bivariate polynomial.

    method: "exact" (rational input only), "float", or "auto" (exact for
    rational input, float otherwise).  `prec` sets the result precision
    of the float path; it defaults to the input ring's precision or 256
    for rational input forced to the float path.
    """
    d_e = p.degree_in_E
    if d_e is None or d_e < 2:
        raise DegenerateTruncationError(
            "degenerate truncation: degree in E below 2"
        )
    if method == "auto":
        method = "exact" if p.ring.exact else "float"
    if method == "exact":
        if not p.ring.exact:
            raise ValueError("exact path requires rational coefficients")
        return _disc_exact(p)
    if method == "float":
        return _disc_float(p, prec)
    raise ValueError(f"unknown method {method!r}")


def _disc_exact(p):
    """Bareiss elimination over integer lam-polynomials, then rescale."""
    m = p.degree_in_E
    den = 1
    for row in p.rows:
        for c in row.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    zrows = [_zp_from_unipoly(row, den) for row in p.rows]
    zrows_d = [_zp_scale(zrows[j], j) for j in range(1, len(zrows))]

    size = 2 * m - 1
    zero = ()
    mat = [[zero] * size for _ in range(size)]
    fa = list(reversed(zrows))
    gb = list(reversed(zrows_d))
    for j in range(m - 1):
        for k, c in enumerate(fa):
            mat[j + k][j] = c
    for j in range(m):
        for k, c in enumerate(gb):
            mat[j + k][m - 1 + j] = c

    det = bareiss_det(mat, _ZPolyOps)
    if not det:
        return UniPoly.zero(QQ)
    disc_scaled = _zp_divexact(det, zrows[-1])
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    rescale = Fraction(sign) / Fraction(den) ** (2 * m - 2)
    return UniPoly(QQ, (Fraction(int(c)) * rescale for c in disc_scaled))


def _lam_degree_bound(p):
    """Upper bound for deg_lam of Disc_E(p) via optimal assignment."""
    import numpy as np
    from scipy.optimize import linear_sum_assignment

    m = p.degree_in_E
    rows = [row.degree for row in p.rows]
    rows_d = [p.rows[j].degree for j in range(1, len(p.rows))]
    size = 2 * m - 1
    big = 10**9
    cost = np.full((size, size), big, dtype=np.int64)
    fa = list(reversed(rows))
    gb = list(reversed(rows_d))
    for j in range(m - 1):
        for k, d in enumerate(fa):
            if d is not None:
                cost[j + k][j] = -d
    for j in range(m):
        for k, d in enumerate(gb):
            if d is not None:
                cost[j + k][m - 1 + j] = -d
    r_idx, c_idx = linear_sum_assignment(cost)
    total = cost[r_idx, c_idx].sum()
    if total >= big // 2:
        return None
    lead_deg = p.rows[-1].degree or 0
    return int(-total) - lead_deg


def _disc_at_point(p, lam, prec):
    """Numeric discriminant of p(E, lam) at one lam value."""
    f = p.specialize_lam(to_mpc(lam, prec))
    d = len(p.rows) - 1
    with working_precision(prec):
        coeffs = [to_mpc(c, prec) for c in f.coeffs]
        while len(coeffs) < d + 1:
            coeffs.append(mpc(0))
        fp = [coeffs[i] * i for i in range(1, d + 1)]
        size = 2 * d - 1
        mat = [[mpc(0)] * size for _ in range(size)]
        fa = list(reversed(coeffs))
        gb = list(reversed(fp))
        for j in range(d - 1):
            for k, c in enumerate(fa):
                mat[j + k][j] = c
        for j in range(d):
            for k, c in enumerate(gb):
                mat[j + k][d - 1 + j] = c
        det = det_lu(mat, prec)
        sign = -1 if (d * (d - 1) // 2) % 2 else 1
        out = det / coeffs[-1]
        return -out if sign < 0 else out


def _mag_scale(row, absz, prec):
    """Sum_i |c_i| |z|^i, the natural magnitude scale at z."""
    with working_precision(prec):
        acc = mpfr(0)
        for c in reversed(row.coeffs):
            acc = acc * absz + abs(c)
        return acc


def _node_values(p, nodes, prec):
    lead = p.rows[-1]
    for _ in range(6):
        ok = True
        with working_precision(prec):
            bound = mpfr(2) ** (-(prec // 2))
            for z in nodes:
                lv = abs(lead.eval_at(z))
                if lv <= bound * _mag_scale(lead, abs(z), prec):
                    ok = False
                    break
        if ok:
            break
        # leading-in-E coefficient vanishes at a node: rotate the circle
        with working_precision(prec):
            rot = gmpy2.exp(mpc(0, mpfr("0.7391")))
            nodes = [z * rot for z in nodes]
    return nodes, [_disc_at_point(p, z, prec) for z in nodes]


def _fujiwara_bound(coeffs, prec):
    """Root-modulus bound 2*max_k |a_{d-k}/a_d|^(1/k)."""
    with working_precision(prec):
        d = len(coeffs) - 1
        lead = abs(coeffs[-1])
        if lead == 0:
            return None
        best = mpfr(0)
        for k in range(1, d + 1):
            c = abs(coeffs[d - k])
            if c == 0:
                continue
            r = (c / lead) ** (mpfr(1) / k)
            if r > best:
                best = r
        return 2 * best


def _probe_radius(p, d_f, probe_prec=192):
    """Geometric search for a circle radius just enclosing the roots of F.

    Uses the growth of median log|F| between probe circles: once every
    root lies inside, doubling the radius multiplies |F| by about 2**d_f.
    Returns the smallest power-of-two radius whose doubling shows that
    saturated growth, times a small margin.
    """
    angles = [0.9501, 2.3399, 4.1031, 5.5218]
    cache = {}

    def med_log(r):
        if r in cache:
            return cache[r]
        vals = []
        with working_precision(probe_prec):
            for a in angles:
                z = mpc(mpfr(r) * math.cos(a), mpfr(r) * math.sin(a))
                v = abs(_disc_at_point(p, z, probe_prec))
                if v == 0 or not gmpy2.is_finite(v):
                    continue
                vals.append(gmpy2.log2(v))
        vals.sort()
        out = vals[len(vals) // 2] if vals else None
        cache[r] = out
        return out

    target = d_f * 0.9

    def saturated(r):
        lo, hi = med_log(r), med_log(2 * r)
        if lo is None or hi is None:
            return False
        return (hi - lo) >= target

    r = Fraction(1)
    if saturated(r):
        while r > Fraction(1, 2**40) and saturated(r / 2):
            r /= 2
    else:
        while r < 2**40 and not saturated(r):
            r *= 2
    with working_precision(probe_prec):
        return mpfr(r) * mpfr("1.15")


def _interp_circle(p, d_f, radius, prec):
    """Sample Disc_E on a circle and invert the DFT for F's coefficients."""
    n_nodes = d_f + 1
    with working_precision(prec):
        two_pi = 2 * gmpy2.const_pi(prec)
        nodes = []
        for k in range(n_nodes):
            theta = two_pi * k / n_nodes
            nodes.append(radius * mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    nodes, values = _node_values(p, nodes, prec)
    with working_precision(prec):
        # nodes may have been rotated; recover the actual offset angle
        base = nodes[0] / radius
        coeffs = []
        inv_n = mpfr(1) / n_nodes
        unit = [nodes[k] / (radius * base) for k in range(n_nodes)]
        for j in range(n_nodes):
            acc = mpc(0)
            for k in range(n_nodes):
                acc += values[k] * unit[(-j * k) % n_nodes]
            coeffs.append(acc * inv_n / (radius * base) ** j)
        return coeffs


def _coeffs_settled(prev, cur, radius, work, out_prec):
    """True when two interpolation passes agree coefficient-by-coefficient.

    Coefficients whose contribution on the sample circle sits below the
    output noise floor are accepted as unresolved noise; every other
    coefficient must match to 2^(-out_prec/2) relative.
    """
    with working_precision(work):
        r = mpfr(radius)
        pw = mpfr(1)
        contrib = []
        for c in cur:
            contrib.append(abs(c) * pw)
            pw *= r
        v_max = max(contrib)
        if v_max == 0:
            return True
        floor = v_max * mpfr(2) ** (-(out_prec + 16))
        rel = mpfr(2) ** (-(out_prec // 2))
        pw = mpfr(1)
        for j, (a, b) in enumerate(zip(prev, cur)):
            if contrib[j] <= floor and abs(a) * pw <= floor:
                pw *= r
                continue
            if abs(a - b) > rel * max(abs(a), abs(b)):
                return False
            pw *= r
        return True


def _disc_float(p, prec):
    out_prec = prec or (256 if p.ring.exact else p.ring.prec)
    d_f = _lam_degree_bound(p)
    if d_f is None:
        return UniPoly.zero(ComplexField(out_prec))
    if d_f == 0:
        val = _disc_at_point(p, to_mpc(0, out_prec), out_prec)
        return _round_disc(p, [val], None, out_prec, out_prec)
    # the coefficients of F can span a dynamic range of many hundreds of
    # bits, so the working precision is raised until two consecutive
    # interpolation passes agree; a single fixed-precision pass silently
    # loses every coefficient window below its noise floor
    work = 2 * out_prec + 2 * d_f
    cap = 1 << 16
    with working_precision(work):
        radius = mpfr(_probe_radius(p, d_f), work)
    coeffs = _interp_circle(p, d_f, radius, work)
    est = _fujiwara_bound(coeffs, work)
    with working_precision(work):
        redo = est is not None and est > 0 and (
            est > mpfr("2.2") * radius or 4 * est < radius
        )
        if redo:
            radius = est * mpfr("1.15")
    if redo:
        coeffs = _interp_circle(p, d_f, radius, work)
    while True:
        work2 = 2 * work
        coeffs2 = _interp_circle(p, d_f, radius, work2)
        if _coeffs_settled(coeffs, coeffs2, radius, work2, out_prec):
            return _round_disc(p, coeffs2, radius, work2, out_prec)
        if work2 >= cap:
            raise RuntimeError(
                "discriminant interpolation did not settle at "
                f"{work2} bits - coefficient range exceeds the cap"
            )
        work, coeffs = work2, coeffs2


def _round_disc(p, coeffs, radius, work, out_prec):
    source_real = p.ring.exact or p.ring.kind == "real"
    with working_precision(work):
        mag = max(abs(c) for c in coeffs)
        if mag == 0:
            ring = RealField(out_prec) if source_real else ComplexField(out_prec)
            return UniPoly.zero(ring)
        # trim only coefficients that were unresolvable on the sample
        # circle at the final working precision; a genuinely tiny
        # leading coefficient survives
        if radius is not None:
            r = mpfr(radius)
            contrib = []
            pw = mpfr(1)
            for c in coeffs:
                contrib.append(abs(c) * pw)
                pw *= r
            v_max = max(contrib)
            cut = v_max * mpfr(2) ** (-(7 * work // 8))
            while coeffs and contrib[len(coeffs) - 1] <= cut:
                coeffs = coeffs[:-1]
    with working_precision(out_prec):
        if source_real:
            ring = RealField(out_prec)
            return UniPoly(ring, (mpfr(c.real, out_prec) for c in coeffs))
        ring = ComplexField(out_prec)
        return UniPoly(ring, (to_mpc(c, out_prec) for c in coeffs))
