import random
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from epdisc.epsolver import (
    ExceptionalPoint,
    match_filter,
    refine_ep,
    scan,
    symmetry_partition,
)
from epdisc.models import ModelSpec
from epdisc.poly import BiPoly, UniPoly
from epdisc.rings import QQ, working_precision
from epdisc.toy3 import ep_pair, toy_charpoly

PREC = 256


def fake_ep(z):
    return ExceptionalPoint(
        lam=z, energy=mpc(0), lam_internal=z, energy_internal=mpc(0),
        lam_seed=z, residual=mpfr(0), accepted_dim=5, multiplicity=2,
        disc_order=1,
    )


def near(a, b, tol):
    return abs(a - b) <= tol * (1 + max(abs(a), abs(b)))


def test_match_filter_keeps_only_stable_roots():
    with working_precision(PREC):
        cur = [mpc(1, 1), mpc(5)]
        prev = [mpc(mpfr("1.0005"), mpfr(1)), mpc(9)]
        kept = match_filter(cur, prev, tol=1e-3)
        assert len(kept) == 1
        root, dist = kept[0]
        assert root == mpc(1, 1)
        assert dist < 1e-3
    assert match_filter([], prev) == []
    assert match_filter(cur, []) == []


def test_match_filter_is_symmetric_and_injective():
    rng = random.Random(61)
    with working_precision(PREC):
        for _ in range(20):
            a = [mpc(mpfr(rng.uniform(-4, 4)), mpfr(rng.uniform(-4, 4)))
                 for _ in range(rng.randint(1, 8))]
            jitter = [mpc(mpfr(rng.uniform(-1e-5, 1e-5)),
                          mpfr(rng.uniform(-1e-5, 1e-5))) for _ in a]
            b = [x + j for x, j in zip(a, jitter)]
            rng.shuffle(b)
            fwd = match_filter(a, b, tol=1e-3)
            back = match_filter(b, a, tol=1e-3)
            assert len(fwd) == len(back)
            # each kept root appears once
            assert len({repr(r) for r, _ in fwd}) == len(fwd)


def test_refine_parabolic_touchpoint():
    # E^2 - lam pinches its two energy branches at the origin
    p = BiPoly(QQ, [
        UniPoly(QQ, [Fraction(0), Fraction(-1)]),
        UniPoly.zero(QQ),
        UniPoly.one(QQ),
    ])
    with working_precision(PREC):
        rr = refine_ep(p, mpc(mpfr("1e-6")), prec=PREC)
        assert abs(rr.lam) < 1e-30
        assert abs(rr.energy) < 1e-30
        assert rr.multiplicity == 2
        assert rr.disc_order == 1


def test_refine_triple_coalescence():
    p = toy_charpoly(Fraction(1, 10))
    up, _ = ep_pair(Fraction(1, 10))
    with working_precision(PREC):
        seed = mpc(mpfr(1), mpfr("0.1414"))
        rr = refine_ep(p, seed, prec=PREC)
        assert rr.multiplicity == 3
        assert rr.disc_order == 3
        assert abs(rr.lam - up.embed(PREC)) <= mpfr(2) ** -200
        assert abs(rr.energy - 2) <= mpfr(2) ** -200


def test_refine_rejects_linear_pencils():
    p = BiPoly(QQ, [UniPoly(QQ, [Fraction(0), Fraction(1)]), UniPoly.one(QQ)])
    try:
        refine_ep(p, mpc(0))
        assert False
    except ValueError:
        pass


def test_symmetry_partition_kinds():
    spec = ModelSpec(kind="MathieuPiEven")
    with working_precision(PREC):
        quad = [fake_ep(mpc(1, 1)), fake_ep(mpc(1, -1)),
                fake_ep(mpc(-1, 1)), fake_ep(mpc(-1, -1))]
        rep = symmetry_partition(quad, spec, tol=1e-6)
        assert [g.kind for g in rep.groups] == ["quadruplet"]
        assert rep.warnings == ()
        assert all(e.flags["conjugate_partner_present"] for e in quad)
        assert all(e.flags["negation_partner_present"] for e in quad)

        doublet = [fake_ep(mpc(0, 2)), fake_ep(mpc(0, -2))]
        rep = symmetry_partition(doublet, spec, tol=1e-6)
        assert [g.kind for g in rep.groups] == ["imaginary-axis doublet"]
        assert rep.warnings == ()

        pair = [fake_ep(mpc(1, 1)), fake_ep(mpc(1, -1))]
        rep = symmetry_partition(pair, spec, tol=1e-6)
        assert [g.kind for g in rep.groups] == ["conjugate pair"]
        assert len(rep.warnings) == 1 and "negation" in rep.warnings[0]

        lone = [fake_ep(mpc(3, 1))]
        rep = symmetry_partition(lone, spec, tol=1e-6)
        assert [g.kind for g in rep.groups] == ["unpaired"]
        assert len(rep.warnings) == 1 and "conjugate" in rep.warnings[0]

        # without the sign-flip symmetry a plain pair is complete
        rep = symmetry_partition(
            [fake_ep(mpc(1, 1)), fake_ep(mpc(1, -1))],
            ModelSpec(kind="BoxX2", parity="even"), tol=1e-6)
        assert rep.warnings == ()


def test_scan_fixed_model():
    rep = scan(ModelSpec(kind="Toy3"), precision=PREC)
    assert rep.accepted_dim == 3
    assert len(rep.accepted) == 2
    assert len(rep.rejected) == 0
    up, dn = ep_pair(Fraction(1, 10))
    with working_precision(PREC):
        want = [up.embed(PREC), dn.embed(PREC)]
        for e in rep.accepted:
            assert min(abs(e.lam - w) for w in want) < 1e-40
            assert abs(e.energy - 2) < 1e-40
            assert e.multiplicity == 3
            assert e.disc_order == 3
    assert [g.kind for g in rep.groups] == ["conjugate pair"]
    assert rep.warnings == ()


def test_scan_box_accounts_for_every_root():
    rep = scan(ModelSpec(kind="BoxX"), 4, 7, tol=1e-3, precision=PREC)
    assert rep.accepted_dim == 7
    assert len(rep.accepted) + len(rep.rejected) == 7 * 6
    assert len(rep.accepted) > 0
    for rec in rep.per_dim:
        assert rec.error is None
        assert rec.method == "exact"
        assert rec.degree == rec.dim * (rec.dim - 1)
    with working_precision(PREC):
        lams = [e.lam_internal for e in rep.accepted]
        for z in lams:
            assert abs(z.imag) > 1e-3
            assert any(near(w, z.conjugate(), mpfr(1e-6)) for w in lams)
            assert any(near(w, -z, mpfr(1e-6)) for w in lams)


def test_scan_exact_path_is_deterministic():
    a = scan(ModelSpec(kind="BoxX"), 4, 6, precision=PREC)
    b = scan(ModelSpec(kind="BoxX"), 4, 6, precision=PREC)
    assert len(a.accepted) == len(b.accepted)
    for x, y in zip(a.accepted, b.accepted):
        assert x.lam == y.lam and x.energy == y.energy


def test_scan_argument_validation():
    spec = ModelSpec(kind="BoxX")
    for args, kw in (
        ((spec,), dict(ring="fancy")),
        ((spec,), {}),
        ((spec, 1, 5), {}),
        ((spec, 5, 5), {}),
    ):
        try:
            scan(*args, **kw)
            assert False, (args, kw)
        except ValueError:
            pass
    try:
        scan(ModelSpec(kind="BoxX2", parity="even"), 4, 6, ring="exact")
        assert False
    except ValueError:
        pass
