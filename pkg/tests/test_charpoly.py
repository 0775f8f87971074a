import random
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from epdisc.charpoly import (
    SecularPoly,
    secular,
    secular_dense,
    secular_tridiagonal,
)
from epdisc.models import ModelSpec, dense_matrix, recurrence_coeffs
from epdisc.poly import BiPoly, UniPoly
from epdisc.rings import QQ, working_precision

KINDS = [
    ModelSpec(kind="MathieuPiEven"),
    ModelSpec(kind="MathieuPiOdd"),
    ModelSpec(kind="Mathieu2PiEven"),
    ModelSpec(kind="Mathieu2PiOdd"),
    ModelSpec(kind="RigidRotor", M=1),
    ModelSpec(kind="SymmetricTop", M=1, K=2),
]


def const_minus_E(c, lam_coeff=0):
    return BiPoly(QQ, [UniPoly(QQ, [Fraction(c), Fraction(lam_coeff)]),
                       UniPoly(QQ, [Fraction(-1)])])


def lam_sq(c):
    return BiPoly(QQ, [UniPoly(QQ, [0, 0, Fraction(c)])])


def cofactor_det(mat):
    # Laplace expansion along the first row, generic over BiPoly entries
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = BiPoly.zero(mat[0][0].ring)
    for c in range(n):
        if mat[0][c].is_zero:
            continue
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        term = mat[0][c] * cofactor_det(minor)
        total = total + term if c % 2 == 0 else total - term
    return total


def tridiagonal_as_matrix(spec, n):
    # determinants only see the product of the symmetric off-diagonal
    # pair, so put Asq on one side and 1 on the other
    one = BiPoly.one(QQ)
    zero = BiPoly.zero(QQ)
    mat = [[zero] * n for _ in range(n)]
    for i in range(n):
        rc = recurrence_coeffs(spec, i)
        mat[i][i] = rc.B
        if i > 0:
            mat[i][i - 1] = rc.Asq
            mat[i - 1][i] = one
    return mat


def test_small_expansions():
    p1 = secular_tridiagonal(ModelSpec(kind="MathieuPiOdd"), 1).p
    assert p1 == const_minus_E(4)
    p2 = secular_tridiagonal(ModelSpec(kind="MathieuPiOdd"), 2).p
    assert p2 == const_minus_E(16) * const_minus_E(4) - lam_sq(1)
    r2 = secular_tridiagonal(ModelSpec(kind="RigidRotor", M=0), 2).p
    assert r2 == const_minus_E(2) * const_minus_E(0) - lam_sq(Fraction(1, 3))


def test_tridiagonal_matches_cofactor_determinant():
    for spec in KINDS:
        for n in range(1, 6):
            want = cofactor_det(tridiagonal_as_matrix(spec, n))
            assert secular_tridiagonal(spec, n).p == want


def test_dense_matches_cofactor_determinant():
    for n in (2, 3, 4):
        m = dense_matrix(ModelSpec(kind="BoxX"), n)
        mat = []
        for r in range(n):
            row = []
            for c in range(n):
                rows = [m.entries[r][c]]
                if r == c:
                    rows.append(UniPoly(QQ, [Fraction(-1)]))
                row.append(BiPoly(QQ, rows))
            mat.append(row)
        assert secular_dense(m).p == cofactor_det(mat)


def test_leading_E_coefficient():
    for spec in KINDS:
        for n in (1, 3, 5):
            p = secular_tridiagonal(spec, n).p
            assert p.coeff_in_E(n) == UniPoly(QQ, [Fraction((-1) ** n)])
    for n in (2, 4):
        p = secular_dense(dense_matrix(ModelSpec(kind="BoxX"), n)).p
        assert p.coeff_in_E(n) == UniPoly(QQ, [Fraction((-1) ** n)])


def test_unperturbed_spectrum():
    cases = [
        (ModelSpec(kind="MathieuPiEven"), lambda i: 4 * i * i),
        (ModelSpec(kind="MathieuPiOdd"), lambda i: 4 * (i + 1) * (i + 1)),
        (ModelSpec(kind="Mathieu2PiEven"), lambda i: (2 * i + 1) ** 2),
        (ModelSpec(kind="Mathieu2PiOdd"), lambda i: (2 * i + 1) ** 2),
        (ModelSpec(kind="RigidRotor", M=2), lambda i: (i + 2) * (i + 3)),
        (ModelSpec(kind="SymmetricTop", M=1, K=2),
         lambda i: (i + 2) * (i + 3)),
    ]
    for spec, eig in cases:
        for n in (1, 3, 5):
            p = secular_tridiagonal(spec, n).p
            at0 = p.specialize_lam(Fraction(0))
            roots = [Fraction(eig(i)) for i in range(n)]
            want = UniPoly.from_roots(QQ, roots).scale(Fraction((-1) ** n))
            assert at0 == want
            for r in roots:
                assert p.eval_at(r, Fraction(0)) == 0


def test_secular_dispatch():
    assert secular(ModelSpec(kind="MathieuPiEven"), 4).p == \
        secular_tridiagonal(ModelSpec(kind="MathieuPiEven"), 4).p
    assert secular(ModelSpec(kind="BoxX"), 4).p == \
        secular_dense(dense_matrix(ModelSpec(kind="BoxX"), 4)).p
    t = secular(ModelSpec(kind="Toy3"), 3)
    assert t.dim == 3 and t.p.degree_in_E == 3


def test_degenerate_truncation_rejected():
    p = BiPoly(QQ, [UniPoly(QQ, [Fraction(1)]), UniPoly(QQ, [Fraction(-1)])])
    try:
        SecularPoly(p, ModelSpec(kind="MathieuPiEven"), 3)
        assert False
    except ValueError:
        pass


def test_boxx2_secular_matches_numeric_determinant():
    prec = 256
    work = prec + 96
    spec = ModelSpec(kind="BoxX2", parity="even", prec=prec)
    for n in (3, 5):
        m = dense_matrix(spec, n)
        p = secular_dense(m).p
        rng = random.Random(31 + n)
        for _ in range(4):
            with working_precision(work):
                en = mpfr(rng.randint(-50, 50)) / 16
                lam = mpc(mpfr(rng.randint(-50, 50)) / 16,
                          mpfr(rng.randint(-50, 50)) / 16)
                a = [[mpc(m.entries[r][c].coeffs[0], precision=work) +
                      (m.entries[r][c].coeff(1) * lam)
                      for c in range(n)] for r in range(n)]
                for i in range(n):
                    a[i][i] = a[i][i] - en
                # Gaussian elimination with partial pivoting as the oracle
                det = mpc(1)
                for col in range(n):
                    piv = max(range(col, n), key=lambda r: abs(a[r][col]))
                    if piv != col:
                        a[col], a[piv] = a[piv], a[col]
                        det = -det
                    det = det * a[col][col]
                    for r in range(col + 1, n):
                        f = a[r][col] / a[col][col]
                        for c in range(col, n):
                            a[r][c] = a[r][c] - f * a[col][c]
                got = p.eval_at(en, lam)
                assert abs(got - det) <= mpfr(2) ** (-200) * max(
                    mpfr(1), abs(det))
