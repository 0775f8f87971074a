import random
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from epdisc.poly import UniPoly
from epdisc.rings import QQ, ComplexField, working_precision
from epdisc.rootfind import newton_root_polish, roots_all

PREC = 256


def match_off(got, want):
    # greedy nearest pairing; fine for well separated root sets
    got = list(got)
    worst = mpfr(0)
    for w in want:
        best = min(range(len(got)), key=lambda i: abs(got[i] - w))
        worst = max(worst, abs(got.pop(best) - w))
    assert not got
    return worst


def test_conjugate_pair_near_one():
    f = UniPoly(QQ, [Fraction(51), Fraction(-100), Fraction(50)])
    roots = roots_all(f, prec=PREC)
    with working_precision(PREC):
        s = gmpy2.sqrt(mpfr(2)) / 10
        want = [mpc(1, s), mpc(1, -s)]
        assert match_off(roots, want) < 1e-12


def test_pure_imaginary_pair():
    f = UniPoly(QQ, [Fraction(1), Fraction(0), Fraction(1)])
    roots = roots_all(f, prec=PREC)
    with working_precision(PREC):
        assert match_off(roots, [mpc(0, 1), mpc(0, -1)]) < mpfr(2) ** -200


def test_triple_root_cluster():
    f = UniPoly(QQ, [Fraction(-1), Fraction(3), Fraction(-3), Fraction(1)])
    roots = roots_all(f, prec=PREC)
    assert len(roots) == 3
    # a triple root is only resolvable to about a third of the precision
    for r in roots:
        assert abs(r - 1) < 1e-20


def test_zero_roots_reported():
    f = UniPoly(QQ, [Fraction(0), Fraction(1), Fraction(0), Fraction(1)])
    info = {}
    roots = roots_all(f, prec=PREC, info=info)
    assert info["zero_roots"] == 1
    with working_precision(PREC):
        assert match_off(roots, [mpc(0), mpc(0, 1), mpc(0, -1)]) < mpfr(2) ** -200


def test_numerically_dead_lead_is_cut():
    cc = ComplexField(PREC)
    with working_precision(PREC):
        junk = mpc(mpfr(2) ** -300)
        f = UniPoly(cc, [mpc(6), mpc(-5), mpc(1), junk])
        info = {}
        roots = roots_all(f, prec=PREC, info=info)
        assert info["leading_trimmed"] == 1
        assert match_off(roots, [mpc(2), mpc(3)]) < mpfr(2) ** -200


def test_reconstruction_from_computed_roots():
    # coefficients are elementary symmetric functions of the roots, so
    # rebuilding from the computed roots must reproduce them
    rng = random.Random(41)
    cc = ComplexField(PREC)
    for deg in (5, 12, 25, 40):
        with working_precision(PREC):
            want = [
                mpc(mpfr(rng.uniform(-3, 3)), mpfr(rng.uniform(-3, 3)))
                for _ in range(deg)
            ]
            f = UniPoly.from_roots(cc, want)
            roots = roots_all(f, prec=PREC)
            back = UniPoly.from_roots(cc, roots)
            for a, b in zip(f.coeffs, back.coeffs):
                assert abs(a - b) <= 1e-8 * max(mpfr(1), abs(a))


def test_precision_doubling_stability():
    rng = random.Random(42)
    cc = ComplexField(PREC)
    with working_precision(PREC):
        want = [
            mpc(mpfr(rng.uniform(-2, 2)), mpfr(rng.uniform(-2, 2)))
            for _ in range(12)
        ]
        f = UniPoly.from_roots(cc, want)
    lo = roots_all(f, prec=PREC)
    hi = roots_all(f.convert(ComplexField(2 * PREC)), prec=2 * PREC)
    with working_precision(2 * PREC):
        assert match_off(lo, hi) <= mpfr(2) ** (-PREC // 4)


def test_newton_polish():
    with working_precision(PREC):
        coeffs = [mpc(-2), mpc(0), mpc(1)]
        z0 = mpc(mpfr("1.414"))
        z = newton_root_polish(coeffs, z0)
        assert abs(z - gmpy2.sqrt(mpfr(2))) < mpfr(2) ** -250


def test_degenerate_inputs_rejected():
    for coeffs in ([], [Fraction(5)]):
        f = UniPoly(QQ, coeffs)
        try:
            roots_all(f, prec=PREC)
            assert False
        except ValueError:
            pass
