"""Exceptional point pipeline on top of the discriminant machinery.

An exceptional point of a parameter-dependent Hermitian truncation is a
complex coupling lam where two or more eigenvalues of H(lam) coalesce,
i.e. a root of F(lam) = Disc_E p(E, lam).  A single truncation dimension
mixes true branch points with truncation artifacts, so the pipeline is:
roots of F per dimension, mutual-nearest-neighbor filtering between
consecutive dimensions, two-variable Newton refinement on the system
(p, dp/dE) = 0, revalidation at doubled working precision, unit
scale-back, and conjugation / negation symmetry classification.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from gmpy2 import mpc, mpfr

from .charpoly import SecularPoly, secular
from .discriminant import disc_in_E
from .models import scale_map, scale_map_E
from .rings import DEFAULT_PRECISION, to_mpc, working_precision
from .rootfind import RootFindingError, roots_all

__all__ = [
    "DimRecord",
    "ExceptionalPoint",
    "RefineResult",
    "RefinementError",
    "RootFindingError",
    "ScanReport",
    "SymmetryGroup",
    "SymmetryReport",
    "match_filter",
    "refine_ep",
    "roots_all",
    "scan",
    "symmetry_partition",
]

DEFAULT_FILTER_TOL = 1e-3


class RefinementError(Exception):
    pass


@dataclass(frozen=True)
class ExceptionalPoint:
    """One accepted coalescence point of a scanned model.

    `lam` and `energy` are in physical units; the `_internal` twins are
    in the model's working variable (they differ only for the scaled box
    models).  `lam_seed` is the raw discriminant root that survived the
    dimension filter and seeded the refinement.  `residual` is the
    filter distance |lam^(n) - lam^(n-1)| in the working variable, or
    the root-cluster spread for the fixed 3x3 model.
    """

    lam: object
    energy: object
    lam_internal: object
    energy_internal: object
    lam_seed: object
    residual: object
    accepted_dim: int
    multiplicity: int
    disc_order: int
    flags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DimRecord:
    """Diagnostics for one truncation dimension of a scan."""

    dim: int
    degree: object = None
    n_roots: object = None
    matched_with_prev: object = None
    method: object = None
    seconds: float = 0.0
    error: object = None


@dataclass(frozen=True)
class SymmetryGroup:
    kind: str
    members: tuple


@dataclass(frozen=True)
class SymmetryReport:
    groups: tuple
    warnings: tuple


@dataclass(frozen=True)
class ScanReport:
    model: object
    dims: tuple
    per_dim: tuple
    accepted: tuple
    rejected: tuple
    groups: tuple
    warnings: tuple
    tol: float
    precision: int
    ring: str
    accepted_dim: object
    seconds: float


# ---------------------------------------------------------------------------
# cross-dimension filtering


def _mnn_pairs(roots_a, roots_b, tol):
    """Mutual nearest neighbor index pairs (i, j, dist) with dist < tol."""
    if not roots_a or not roots_b:
        return []

    def nearest(src, dst):
        out = []
        for a in src:
            best, best_j = None, -1
            for j, b in enumerate(dst):
                d = abs(a - b)
                if best is None or d < best:
                    best, best_j = d, j
            out.append((best_j, best))
        return out

    fwd = nearest(roots_a, roots_b)
    back = nearest(roots_b, roots_a)
    pairs = []
    for i, (j, dist) in enumerate(fwd):
        if back[j][0] == i and dist < tol:
            pairs.append((i, j, dist))
    return pairs


def match_filter(roots_n, roots_prev, tol=DEFAULT_FILTER_TOL):
    """Roots stable between consecutive dimensions, as (lam, residual).

    A root of the dimension-n discriminant survives when it and a root
    of the dimension-(n-1) discriminant are mutual nearest neighbors
    closer than `tol`; each root is used at most once, and unmatched
    roots are the spurious ones.  Empty inputs give an empty list.
    """
    tol = mpfr(tol)
    return [
        (roots_n[i], dist) for i, j, dist in _mnn_pairs(roots_n, roots_prev, tol)
    ]


# ---------------------------------------------------------------------------
# two-variable Newton refinement


@dataclass(frozen=True)
class RefineResult:
    """Converged coalescence point (lam, energy) with local structure.

    `multiplicity` counts the eigenvalues meeting at the point (the
    consecutive E-derivatives of p that vanish there); `disc_order` is
    the matching vanishing order m(m-1)/2 of the discriminant root;
    `stage` is the derivative order of the Newton system that converged.
    """

    lam: object
    energy: object
    multiplicity: int
    disc_order: int
    residual: object
    stage: int


def _bipoly_mag(rows_abs, a_e, a_l):
    """sum |c_ij| a_e^i a_l^j over precomputed |coefficient| rows."""
    total = mpfr(0)
    for row in reversed(rows_abs):
        acc = mpfr(0)
        for c in reversed(row):
            acc = acc * a_l + c
        total = total * a_e + acc
    return total


def _abs_rows(poly, prec):
    return [
        [abs(to_mpc(c, prec)) for c in row.coeffs] for row in poly.rows
    ]


def _cluster_seed(roots, size):
    """Centroid of the tightest cluster of `size` roots."""
    if len(roots) <= size:
        picked = list(roots)
    else:
        best = None
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                d = abs(roots[i] - roots[j])
                if best is None or d < best[0]:
                    best = (d, i, j)
        picked = [roots[best[1]], roots[best[2]]]
        rest = [r for k, r in enumerate(roots) if k not in (best[1], best[2])]
        while len(picked) < size:
            centroid = sum(picked) / len(picked)
            k = min(range(len(rest)), key=lambda t: abs(rest[t] - centroid))
            picked.append(rest.pop(k))
    return sum(picked) / len(picked)


def _newton_stage(poly, s, e0, lam0, prec, cap=60):
    """Newton on (d^(s-2)p/dE^(s-2), d^(s-1)p/dE^(s-1)) = 0.

    Returns (energy, lam, residual) or raises RefinementError naming the
    failure mode (singular Jacobian, divergence, stall, iteration cap).
    """
    g1 = poly
    for _ in range(s - 2):
        g1 = g1.derivative_in_E()
    g2 = g1.derivative_in_E()
    g1l = g1.derivative_in_lam()
    g2e = g2.derivative_in_E()
    g2l = g2.derivative_in_lam()
    a1, a2 = _abs_rows(g1, prec), _abs_rows(g2, prec)
    eps = mpfr(2) ** (-(prec // 2))
    sing = mpfr(2) ** (-(3 * prec // 4))
    tiny = mpfr(2) ** (-(prec + 16))
    energy, lam = e0, lam0
    prev_res, stall = None, 0
    for _ in range(cap):
        val1 = mpc(g1.eval_at(energy, lam))
        val2 = mpc(g2.eval_at(energy, lam))
        m1 = _bipoly_mag(a1, abs(energy), abs(lam)) + tiny
        m2 = _bipoly_mag(a2, abs(energy), abs(lam)) + tiny
        res = max(abs(val1) / m1, abs(val2) / m2)
        if res <= eps:
            return energy, lam, res
        j01 = mpc(g1l.eval_at(energy, lam))
        j10 = mpc(g2e.eval_at(energy, lam))
        j11 = mpc(g2l.eval_at(energy, lam))
        det = val2 * j11 - j01 * j10
        if abs(det) <= sing * (abs(val2 * j11) + abs(j01 * j10) + tiny):
            raise RefinementError(f"singular Jacobian at stage {s}")
        d_e = (j01 * val2 - val1 * j11) / det
        d_l = (val1 * j10 - val2 * val2) / det
        energy = energy + d_e
        lam = lam + d_l
        if max(abs(d_e), abs(d_l)) > mpfr("1e9") * (1 + abs(lam0)):
            raise RefinementError(f"divergence at stage {s}")
        if prev_res is not None and res > prev_res * mpfr("0.99"):
            stall += 1
            if stall > 12:
                raise RefinementError(f"stalled at stage {s}")
        else:
            stall = 0
        prev_res = res
    raise RefinementError(f"iteration cap at stage {s}")


def _vanishing_count(poly, energy, lam, prec):
    """Consecutive E-derivatives of p that vanish at the point."""
    loose = mpfr(2) ** (-(prec // 4))
    tiny = mpfr(2) ** (-(prec + 16))
    count = 0
    q = poly
    while q.degree_in_E is not None:
        val = abs(mpc(q.eval_at(energy, lam)))
        mag = _bipoly_mag(_abs_rows(q, prec), abs(energy), abs(lam)) + tiny
        if val > loose * mag:
            break
        count += 1
        q = q.derivative_in_E()
    return count


def refine_ep(p, lam0, prec=None):
    """Polish a coalescence point by Newton on (p, dp/dE) = 0.

    `p` is a SecularPoly (or a bare bivariate polynomial) with E-degree
    at least 2; `lam0` a nearby coupling, typically a discriminant root.
    The energy seed is the midpoint of the closest pair of roots of
    p(., lam0), the pair that is about to coalesce.  When the plain
    system has a singular Jacobian (more than two eigenvalues meeting),
    the system escalates to higher E-derivatives; exhausting the
    escalation raises "higher-order coalescence - reduce the scan step
    or raise the precision".
    """
    poly = p.p if isinstance(p, SecularPoly) else p
    d_e = poly.degree_in_E
    if d_e is None or d_e < 2:
        raise ValueError("refinement needs E-degree at least 2")
    if prec is None:
        prec = DEFAULT_PRECISION if poly.ring.exact else poly.ring.prec
    with working_precision(prec):
        lam = to_mpc(lam0, prec)
        e_roots = roots_all(poly.specialize_lam(lam), prec=prec)
        failures = []
        for s in range(2, min(4, d_e) + 1):
            e_seed = _cluster_seed(e_roots, s)
            try:
                energy, lam_out, res = _newton_stage(
                    poly, s, e_seed, lam, prec
                )
            except RefinementError as exc:
                failures.append(str(exc))
                continue
            m = _vanishing_count(poly, energy, lam_out, prec)
            if m < s:
                failures.append(
                    f"stage {s} converged to a non-coalescing point"
                )
                continue
            return RefineResult(
                lam=lam_out,
                energy=energy,
                multiplicity=m,
                disc_order=m * (m - 1) // 2,
                residual=res,
                stage=s,
            )
    raise RefinementError(
        "higher-order coalescence - reduce the scan step or raise the "
        "precision (" + "; ".join(failures) + ")"
    )


# ---------------------------------------------------------------------------
# symmetry classification


def _near(a, b, tol):
    return abs(a - b) <= tol * (1 + max(abs(a), abs(b)))


def symmetry_partition(eps, spec, tol=DEFAULT_FILTER_TOL):
    """Group accepted points by conjugation and negation partners.

    Every point should have its complex conjugate in the set; models
    carrying the sign-flip symmetry H(-lam) ~ H(lam) should also show
    negation partners, completing quadruplets (or imaginary-axis
    doublets, where conjugate and negation partner coincide).  Missing
    partners produce warnings, not errors.  Also fills the partner
    flags on the points themselves.
    """
    tol = mpfr(tol)
    lams = [mpc(e.lam) for e in eps]
    n = len(lams)
    has_negation = spec is not None and spec.symmetry == "negation"
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in range(n):
        for j in range(i + 1, n):
            conj = _near(lams[j], lams[i].conjugate(), tol)
            neg = has_negation and (
                _near(lams[j], -lams[i], tol)
                or _near(lams[j], -lams[i].conjugate(), tol)
            )
            if conj or neg:
                union(i, j)
            if conj:
                eps[i].flags["conjugate_partner_present"] = True
                eps[j].flags["conjugate_partner_present"] = True
            if has_negation and _near(lams[j], -lams[i], tol):
                eps[i].flags["negation_partner_present"] = True
                eps[j].flags["negation_partner_present"] = True
    for i in range(n):
        eps[i].flags.setdefault("conjugate_partner_present", False)
        eps[i].flags.setdefault("negation_partner_present", False)
        # a point on the imaginary axis is its own negation partner
        if has_negation and abs(lams[i].real) <= tol * (1 + abs(lams[i])):
            eps[i].flags["negation_partner_present"] = True

    buckets = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(i)
    groups, warnings = [], []
    for members in buckets.values():
        members = tuple(sorted(members))
        axis = all(
            abs(lams[i].real) <= tol * (1 + abs(lams[i])) for i in members
        )
        if len(members) == 1:
            kind = "unpaired"
            warnings.append(
                f"point {_c_str(lams[members[0]])} has no conjugate "
                "partner within tolerance"
            )
        elif len(members) == 2 and axis:
            kind = "imaginary-axis doublet"
        elif len(members) == 2:
            kind = "conjugate pair"
            if has_negation:
                warnings.append(
                    f"points {_c_str(lams[members[0]])} and "
                    f"{_c_str(lams[members[1]])} lack negation partners "
                    "despite the sign-flip symmetry"
                )
        elif len(members) == 4:
            kind = "quadruplet"
        else:
            kind = f"cluster of {len(members)}"
        groups.append(SymmetryGroup(kind=kind, members=members))
    groups.sort(key=lambda g: g.members)
    return SymmetryReport(groups=tuple(groups), warnings=tuple(warnings))


def _c_str(z):
    return f"{float(z.real):.6g}{float(z.imag):+.6g}j"


# ---------------------------------------------------------------------------
# the scan driver


def scan(
    spec,
    n_min=None,
    n_max=None,
    tol=DEFAULT_FILTER_TOL,
    precision=None,
    ring="auto",
):
    """Full exceptional point scan of one model over a dimension range.

    For each dimension: secular polynomial, discriminant in E, all
    discriminant roots.  Roots stable between the largest pair of
    consecutive dimensions become candidates; real-axis roots are
    rejected (a Hermitian family has no real coalescence), the rest are
    Newton-refined, revalidated at doubled precision, scale-mapped to
    physical units, and symmetry-classified.  Per-dimension failures
    are recorded without aborting the scan.  The fixed 3x3 model scans
    as a single dimension with root clustering in place of the
    consecutive-dimension filter.
    """
    precision = precision or DEFAULT_PRECISION
    if ring not in ("exact", "float", "auto"):
        raise ValueError(f"unknown ring selection {ring!r}")
    if ring == "exact" and not spec.exact_capable:
        raise ValueError(f"{spec.label()} has no exact coefficient path")
    t_start = time.perf_counter()
    if spec.kind == "Toy3":
        return _scan_toy3(spec, tol, precision, ring, t_start)
    if n_min is None or n_max is None:
        raise ValueError("scan needs an explicit dimension range")
    if n_min < 2 or n_max <= n_min:
        raise ValueError("dimension range must satisfy 2 <= n_min < n_max")

    per_dim = []
    roots_by_dim = {}
    secular_by_dim = {}
    for n in range(n_min, n_max + 1):
        t0 = time.perf_counter()
        if ring == "auto":
            # exact-capable models stay exact at every dimension: their
            # discriminant coefficients span a dynamic range far beyond
            # any fixed working precision, so only the fraction-free
            # path recovers F faithfully
            method = "exact" if spec.exact_capable else "float"
        else:
            method = ring
        try:
            sp = secular(spec, n)
            secular_by_dim[n] = sp
            f_of_lam = disc_in_E(sp.p, method=method, prec=precision)
            degree = f_of_lam.degree
            roots = roots_all(f_of_lam, prec=precision)
            roots_by_dim[n] = roots
            per_dim.append(
                DimRecord(
                    dim=n,
                    degree=degree,
                    n_roots=len(roots),
                    method=method,
                    seconds=time.perf_counter() - t0,
                )
            )
        except Exception as exc:
            per_dim.append(
                DimRecord(
                    dim=n,
                    method=method,
                    seconds=time.perf_counter() - t0,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )

    # matched counts for every consecutive pair; candidates from the largest
    pair_counts = {}
    candidates, accept_dim = [], None
    with working_precision(precision):
        for n in range(n_min + 1, n_max + 1):
            if n in roots_by_dim and n - 1 in roots_by_dim:
                pairs = _mnn_pairs(
                    roots_by_dim[n], roots_by_dim[n - 1], mpfr(tol)
                )
                pair_counts[n] = len(pairs)
                candidates = [
                    (roots_by_dim[n][i], dist) for i, _, dist in pairs
                ]
                matched_idx = {i for i, _, _ in pairs}
                accept_dim = n
    per_dim = [
        replace(rec, matched_with_prev=pair_counts.get(rec.dim, None))
        for rec in per_dim
    ]

    warnings = []
    if accept_dim is None:
        warnings.append(
            "no two consecutive dimensions completed; nothing to accept"
        )
        matched_idx = set()

    accepted, rejected = [], []
    with working_precision(precision):
        if accept_dim is not None:
            for i, root in enumerate(roots_by_dim[accept_dim]):
                if i not in matched_idx:
                    rejected.append(
                        (
                            scale_map(spec, root, precision),
                            "spurious: no stable partner at the previous "
                            "dimension",
                        )
                    )
        accepted = _refine_candidates(
            spec,
            secular_by_dim.get(accept_dim),
            candidates,
            accept_dim,
            tol,
            precision,
            rejected,
        )
    sym = symmetry_partition(accepted, spec, tol)
    warnings.extend(sym.warnings)
    return ScanReport(
        model=spec,
        dims=tuple(range(n_min, n_max + 1)),
        per_dim=tuple(per_dim),
        accepted=tuple(accepted),
        rejected=tuple(rejected),
        groups=sym.groups,
        warnings=tuple(warnings),
        tol=float(tol),
        precision=precision,
        ring=ring,
        accepted_dim=accept_dim,
        seconds=time.perf_counter() - t_start,
    )


def _refine_candidates(
    spec, sp, candidates, accept_dim, tol, precision, rejected
):
    """Refine filtered roots into accepted points, or sort them into
    `rejected` with a reason.  Mutates and returns nothing but the
    accepted list."""
    accepted = []
    if sp is None:
        return accepted
    tol = mpfr(tol)
    dedupe = mpfr(2) ** (-(precision // 4))
    spec2 = spec if spec.exact_capable else replace(spec, prec=2 * precision)
    sp2 = None
    for lam_seed, dist in candidates:
        phys_seed = scale_map(spec, lam_seed, precision)
        if abs(lam_seed.imag) < tol:
            rejected.append(
                (
                    phys_seed,
                    "real axis: a Hermitian family has no real "
                    "coalescence",
                )
            )
            continue
        try:
            rr = refine_ep(sp, lam_seed, prec=precision)
        except (RefinementError, RootFindingError) as exc:
            rejected.append((phys_seed, f"refinement failed: {exc}"))
            continue
        if abs(rr.lam - lam_seed) > 10 * tol * (1 + abs(lam_seed)):
            rejected.append(
                (phys_seed, "refinement left the seed neighborhood")
            )
            continue
        if abs(rr.lam.imag) < tol:
            rejected.append(
                (
                    phys_seed,
                    "real axis: refinement landed on a real coupling",
                )
            )
            continue
        if any(
            _near(rr.lam, e.lam_internal, dedupe) for e in accepted
        ):
            rejected.append(
                (phys_seed, "duplicate of an already accepted point")
            )
            continue
        # revalidate at doubled precision from the refined value
        if sp2 is None:
            sp2 = sp if spec.exact_capable else secular(spec2, accept_dim)
        try:
            rr2 = refine_ep(sp2, rr.lam, prec=2 * precision)
        except (RefinementError, RootFindingError) as exc:
            rejected.append(
                (phys_seed, f"revalidation at doubled precision failed: {exc}")
            )
            continue
        if not _near(rr2.lam, rr.lam, dedupe):
            rejected.append(
                (phys_seed, "unstable under doubled working precision")
            )
            continue
        with working_precision(precision):
            lam_int = mpc(rr2.lam)
            energy_int = mpc(rr2.energy)
            accepted.append(
                ExceptionalPoint(
                    lam=scale_map(spec, lam_int, precision),
                    energy=scale_map_E(spec, energy_int, precision),
                    lam_internal=lam_int,
                    energy_internal=energy_int,
                    lam_seed=lam_seed,
                    residual=dist,
                    accepted_dim=accept_dim,
                    multiplicity=rr2.multiplicity,
                    disc_order=rr2.disc_order,
                    flags={
                        "real_suspect": False,
                        "imaginary_axis": bool(
                            abs(lam_int.real) <= tol * (1 + abs(lam_int))
                        ),
                    },
                )
            )
    return accepted


def _scan_toy3(spec, tol, precision, ring, t_start):
    """Single-dimension scan of the fixed 3x3 model via root clustering."""
    t0 = time.perf_counter()
    per_dim = []
    candidates, rejected, accepted = [], [], []
    sp = None
    try:
        sp = secular(spec, 3)
        f_of_lam = disc_in_E(sp.p, method="exact")
        with working_precision(precision):
            roots = roots_all(f_of_lam, prec=precision)
            cluster_tol = mpfr(2) ** (-(precision // 8))
            clusters = []
            for r in roots:
                for cl in clusters:
                    if _near(r, cl[0] / cl[2], cluster_tol):
                        cl[0] += r
                        cl[1] = max(
                            cl[1], abs(r - cl[0] / (cl[2] + 1))
                        )
                        cl[2] += 1
                        break
                else:
                    clusters.append([r, mpfr(0), 1])
            for total, spread, count in clusters:
                candidates.append((total / count, spread))
        per_dim.append(
            DimRecord(
                dim=3,
                degree=f_of_lam.degree,
                n_roots=len(roots),
                method="exact",
                seconds=time.perf_counter() - t0,
            )
        )
    except Exception as exc:
        per_dim.append(
            DimRecord(
                dim=3,
                method="exact",
                seconds=time.perf_counter() - t0,
                error=f"{type(exc).__name__}: {exc}",
            )
        )
    with working_precision(precision):
        accepted = _refine_candidates(
            spec, sp, candidates, 3, tol, precision, rejected
        )
    sym = symmetry_partition(accepted, spec, tol)
    return ScanReport(
        model=spec,
        dims=(3,),
        per_dim=tuple(per_dim),
        accepted=tuple(accepted),
        rejected=tuple(rejected),
        groups=sym.groups,
        warnings=tuple(sym.warnings),
        tol=float(tol),
        precision=precision,
        ring=ring,
        accepted_dim=3 if accepted else None,
        seconds=time.perf_counter() - t_start,
    )
