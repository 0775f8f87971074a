"""Simultaneous root extraction for multiprecision polynomials.

Aberth–Ehrlich iteration from initial points on a circle whose radius is
the Cauchy coefficient bound, followed by Newton polish.  Every returned
root is certified by a backward-error test: |F(z)| must fall below
2^(-P/2) times the coefficient-magnitude scale sum_i |a_i| |z|^i.
"""

from __future__ import annotations

import math

import gmpy2
from gmpy2 import mpc, mpfr

from .rings import to_mpc, working_precision

GOLDEN_ANGLE = 2.399963229728653


class RootFindingError(RuntimeError):
    """Iteration cap hit or certification failed; carries partial results."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


def _cauchy_bound(coeffs):
    """Cauchy's root bound: the positive root of |a_d| x^d = sum |a_i| x^i.

    Every root of the polynomial has modulus at most this value.  Found
    by doubling plus bisection on the coefficient magnitudes; a small
    outward margin keeps the initial circle strictly enclosing.
    """
    d = len(coeffs) - 1
    mags = [abs(c) for c in coeffs]
    lead = mags[-1]

    def excess(x):
        # |a_d| x^d - sum_{i<d} |a_i| x^i, sign only
        acc = lead
        for c in reversed(mags[:-1]):
            acc = acc * x - c
        return acc

    hi = mpfr(1)
    for _ in range(2200):
        if excess(hi) > 0:
            break
        hi = hi * 2
    lo = hi / 2
    if excess(lo) > 0:
        while lo > mpfr(2) ** (-1100) and excess(lo / 2) > 0:
            lo = lo / 2
        hi = lo
        lo = lo / 2
    for _ in range(40):
        mid = (lo + hi) / 2
        if excess(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi * mpfr("1.05")


def _dead_lead_cut(coeffs, prec):
    """Proposed new degree after removing numerically dead leading terms.

    Plots (i, log2|c_i|) and takes the upper Newton polygon; each hull
    segment's slope gives the magnitude of the roots it accounts for.
    Coefficients above a segment whose root magnitude jumps by 2^(prec/4)
    or more over the segment below look like interpolation noise rather
    than data; the caller confirms with a backward-error check, so a
    false proposal here costs nothing.  Returns the cut degree, or None
    when the profile looks legitimate.
    """
    pts = [
        (i, float(gmpy2.log2(abs(c)))) for i, c in enumerate(coeffs) if c != 0
    ]
    if len(pts) < 3:
        return None
    hull = []
    for p in pts:
        while len(hull) >= 2 and (hull[-1][0] - hull[-2][0]) * (
            p[1] - hull[-2][1]
        ) - (hull[-1][1] - hull[-2][1]) * (p[0] - hull[-2][0]) >= 0:
            hull.pop()
        hull.append(p)
    if len(hull) < 3:
        return None
    # log2 root magnitude per segment, increasing left to right
    mags = []
    for (i0, y0), (i1, y1) in zip(hull, hull[1:]):
        mags.append((y0 - y1) / (i1 - i0))
    for j in range(len(mags) - 1, 0, -1):
        if mags[j] - mags[j - 1] >= prec / 4:
            return hull[j][0]
    return None


def _eval_and_scale(coeffs, z):
    """Horner value of F at z plus the magnitude scale sum |a_i| |z|^i."""
    acc = coeffs[-1]
    mag = abs(coeffs[-1])
    az = abs(z)
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
        mag = mag * az + abs(c)
    return acc, mag


def _eval_val_der(coeffs, z):
    acc = coeffs[-1]
    der = mpc(0)
    for c in reversed(coeffs[:-1]):
        der = der * z + acc
        acc = acc * z + c
    return acc, der


def roots_all(f, prec=None, max_sweeps=400, info=None):
    """All complex roots (with multiplicity) of a univariate polynomial.

    `f` is a UniPoly over any ring; rational input is embedded at `prec`
    bits (default 256).  `info`, if a dict, receives diagnostics
    (trimmed leading/trailing counts, sweeps used).
    """
    if f.is_zero:
        raise ValueError("cannot extract roots of the zero polynomial")
    prec = prec or (256 if f.ring.exact else f.ring.prec)
    with working_precision(prec):
        coeffs = [to_mpc(c, prec) for c in f.coeffs]
        lead_trimmed = 0
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
            lead_trimmed += 1
        cut = _dead_lead_cut(coeffs, prec)
        if cut is not None:
            # verify the proposed cut by backward error: the discarded
            # terms must stay below roundoff on the whole disk holding the
            # surviving roots, so the trimmed polynomial is an exact
            # perturbation of the input there
            rest = coeffs[: cut + 1]
            r_rest = _cauchy_bound(rest)
            removed = mpfr(0)
            pw = r_rest ** (cut + 1)
            for c in coeffs[cut + 1 :]:
                removed += abs(c) * pw
                pw *= r_rest
            body = abs(rest[-1])
            for c in reversed(rest[:-1]):
                body = body * r_rest + abs(c)
            if removed <= mpfr(2) ** (-(7 * prec // 8)) * body:
                lead_trimmed += len(coeffs) - len(rest)
                coeffs = rest
        zero_roots = 0
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs.pop(0)
            zero_roots += 1
        if info is not None:
            info["leading_trimmed"] = lead_trimmed
            info["zero_roots"] = zero_roots
        d = len(coeffs) - 1
        roots = [mpc(0)] * zero_roots
        if d == 0:
            if not roots and lead_trimmed == 0:
                raise ValueError("constant polynomial has no roots")
            if info is not None:
                info["sweeps"] = 0
            return roots

        radius = _cauchy_bound(coeffs)
        z = []
        for k in range(d):
            th = 2 * math.pi * k / d + GOLDEN_ANGLE
            z.append(radius * mpc(gmpy2.cos(mpfr(th)), gmpy2.sin(mpfr(th))))

        # iterate well past the certification bound: freezing exactly at
        # the reporting threshold strands iterates on polynomials whose
        # values sit near that level far from any root.  A frozen root
        # additionally needs a tiny last step, otherwise an iterate that
        # jumps next to an occupied root would freeze as a duplicate
        # before the pairwise repulsion can push it off.
        stop = mpfr(2) ** (-(7 * prec // 8))
        cert = mpfr(2) ** (-(prec // 2))
        settle = mpfr(2) ** (-(prec // 4))
        tiny_step = mpfr(2) ** (-(prec - 8))
        abs_coeffs = [abs(c) for c in coeffs]
        rev_coeffs = abs_coeffs[-2::-1]
        done = [False] * d
        last_step = [mpfr(1)] * d
        sweeps = 0
        for sweep in range(max_sweeps):
            sweeps = sweep + 1
            moved = mpfr(0)
            for i in range(d):
                if done[i]:
                    continue
                zi = z[i]
                val, der = _eval_val_der(coeffs, zi)
                az = abs(zi)
                scale = abs_coeffs[-1]
                for c in rev_coeffs:
                    scale = scale * az + c
                if abs(val) <= stop * scale and last_step[i] <= settle * (1 + az):
                    done[i] = True
                    continue
                if der == 0:
                    z[i] = zi + tiny_step * (1 + az)
                    continue
                newton = val / der
                rep = mpc(0)
                collide = False
                for j in range(d):
                    if j == i:
                        continue
                    dz = zi - z[j]
                    if dz == 0:
                        collide = True
                        break
                    rep += 1 / dz
                if collide:
                    z[i] = zi + tiny_step * (1 + az)
                    continue
                den = 1 - newton * rep
                step = newton if den == 0 else newton / den
                z[i] = zi - step
                last_step[i] = abs(step)
                rel = last_step[i] / (1 + az)
                if rel > moved:
                    moved = rel
            if all(done) or moved <= tiny_step:
                break
        else:
            raise RootFindingError(
                f"no convergence after {max_sweeps} sweeps", partial=roots + z
            )
        if info is not None:
            info["sweeps"] = sweeps

        # Newton polish
        for i in range(d):
            zi = z[i]
            for _ in range(4):
                val, der = _eval_val_der(coeffs, zi)
                if der == 0 or val == 0:
                    break
                zi = zi - val / der
            z[i] = zi

        # certification
        bad = []
        for zi in z:
            val, scale = _eval_and_scale(coeffs, zi)
            if not abs(val) <= cert * scale:
                bad.append(zi)
        if bad:
            raise RootFindingError(
                f"{len(bad)} of {d} roots failed certification",
                partial=roots + z,
            )

        # multiset sanity: the monic rebuild from the roots must match the
        # input coefficients, or some cluster collapsed onto one point
        recon = [mpc(1)]
        for zi in z:
            recon.append(mpc(0))
            for j in range(len(recon) - 1, 0, -1):
                recon[j] = recon[j - 1] - recon[j] * zi
            recon[0] = -recon[0] * zi
        inv_lead = 1 / coeffs[-1]
        monic = [c * inv_lead for c in coeffs]
        top = max(abs(c) for c in monic)
        worst = max(abs(recon[j] - monic[j]) for j in range(d + 1))
        ok = worst <= mpfr("1e-6") * top
        if ok and d >= 2:
            # mid-range coefficients can be astronomically larger than the
            # root bound, making the check above vacuous for a single far
            # miss; the root-sum and root-pair-sum coefficients sit at a
            # scale where such a miss is visible
            e1_tol = mpfr("1e-6") * d * radius
            e2_tol = mpfr("1e-6") * d * d * radius * radius
            ok = abs(recon[d - 1] - monic[d - 1]) <= e1_tol and abs(
                recon[d - 2] - monic[d - 2]
            ) <= e2_tol
        if not ok:
            raise RootFindingError(
                "root multiset fails to reconstruct the coefficients",
                partial=roots + z,
            )
        roots.extend(z)
        return roots


def newton_root_polish(coeffs, z0, iters=6):
    """Plain Newton steps on a coefficient list, used by seed refinement."""
    z = z0
    for _ in range(iters):
        val, der = _eval_val_der(coeffs, z)
        if der == 0 or val == 0:
            break
        z = z - val / der
    return z
