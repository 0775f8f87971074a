"""Serialization of scan reports: canonical JSON and convenience CSV.

JSON is the canonical format.  Multiprecision numbers are written as
decimal strings produced by str(), which carries every digit of the
working precision, so a report parses back field-for-field identical.
CSV is a lossy export at 17 significant digits, one row per accepted
point.  All writes go through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from gmpy2 import mpc, mpfr

from .epsolver import (
    DimRecord,
    ExceptionalPoint,
    ScanReport,
    SymmetryGroup,
)
from .models import ModelSpec
from .rings import working_precision

__all__ = [
    "report_from_json",
    "report_to_json",
    "write_csv",
    "write_json",
    "read_json",
]


def _c_dump(z):
    if z is None:
        return None
    if not isinstance(z, mpc):
        # wrapping an existing mpc would re-round it at the ambient
        # context precision and corrupt the canonical digits
        z = mpc(z)
    return {"re": str(z.real), "im": str(z.imag)}


def _c_load(d, prec):
    if d is None:
        return None
    # the mpc wrap must happen at the target precision, otherwise the
    # ambient context re-rounds the parts and the digits do not survive
    with working_precision(prec):
        return mpc(mpfr(d["re"], prec), mpfr(d["im"], prec))


def _spec_dump(spec):
    return {
        "kind": spec.kind,
        "M": spec.M,
        "K": spec.K,
        "parity": spec.parity,
        "beta": None if spec.beta is None else str(Fraction(spec.beta)),
        "prec": spec.prec,
        "label": spec.label(),
    }


def _spec_load(d):
    return ModelSpec(
        kind=d["kind"],
        M=d["M"],
        K=d["K"],
        parity=d["parity"],
        beta=None if d["beta"] is None else Fraction(d["beta"]),
        prec=d["prec"],
    )


def report_to_json(report) -> dict:
    """Plain-dict form of a ScanReport, ready for json.dumps."""
    prec = report.precision
    return {
        "model": _spec_dump(report.model),
        "dims": list(report.dims),
        "per_dim": [
            {
                "dim": r.dim,
                "degree": r.degree,
                "n_roots": r.n_roots,
                "matched_with_prev": r.matched_with_prev,
                "method": r.method,
                "seconds": r.seconds,
                "error": r.error,
            }
            for r in report.per_dim
        ],
        "accepted": [
            {
                "lam": _c_dump(e.lam),
                "energy": _c_dump(e.energy),
                "lam_internal": _c_dump(e.lam_internal),
                "energy_internal": _c_dump(e.energy_internal),
                "lam_seed": _c_dump(e.lam_seed),
                "residual": str(e.residual),
                "accepted_dim": e.accepted_dim,
                "multiplicity": e.multiplicity,
                "disc_order": e.disc_order,
                "flags": dict(e.flags),
            }
            for e in report.accepted
        ],
        "rejected": [
            {"root": _c_dump(root), "reason": reason}
            for root, reason in report.rejected
        ],
        "groups": [
            {"kind": g.kind, "members": list(g.members)}
            for g in report.groups
        ],
        "warnings": list(report.warnings),
        "tol": report.tol,
        "precision": prec,
        "ring": report.ring,
        "accepted_dim": report.accepted_dim,
        "seconds": report.seconds,
    }


def report_from_json(data) -> ScanReport:
    """Rebuild a ScanReport from its JSON dict, field-for-field."""
    prec = data["precision"]
    return ScanReport(
        model=_spec_load(data["model"]),
        dims=tuple(data["dims"]),
        per_dim=tuple(
            DimRecord(
                dim=r["dim"],
                degree=r["degree"],
                n_roots=r["n_roots"],
                matched_with_prev=r["matched_with_prev"],
                method=r["method"],
                seconds=r["seconds"],
                error=r["error"],
            )
            for r in data["per_dim"]
        ),
        accepted=tuple(
            ExceptionalPoint(
                lam=_c_load(e["lam"], prec),
                energy=_c_load(e["energy"], prec),
                lam_internal=_c_load(e["lam_internal"], prec),
                energy_internal=_c_load(e["energy_internal"], prec),
                lam_seed=_c_load(e["lam_seed"], prec),
                residual=mpfr(e["residual"], prec),
                accepted_dim=e["accepted_dim"],
                multiplicity=e["multiplicity"],
                disc_order=e["disc_order"],
                flags=dict(e["flags"]),
            )
            for e in data["accepted"]
        ),
        rejected=tuple(
            (_c_load(r["root"], prec), r["reason"]) for r in data["rejected"]
        ),
        groups=tuple(
            SymmetryGroup(kind=g["kind"], members=tuple(g["members"]))
            for g in data["groups"]
        ),
        warnings=tuple(data["warnings"]),
        tol=data["tol"],
        precision=prec,
        ring=data["ring"],
        accepted_dim=data["accepted_dim"],
        seconds=data["seconds"],
    )


def atomic_write_text(path, text):
    """Write via a sibling temp file and rename, so readers never see a
    partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(report, path):
    atomic_write_text(
        path, json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n"
    )


def read_json(path) -> ScanReport:
    with open(path) as fh:
        return report_from_json(json.load(fh))


CSV_HEADER = "model,M,K,class,n,re_lam,im_lam,residual"

_MATHIEU_CLASS = {
    "MathieuPiEven": "pi-even",
    "MathieuPiOdd": "pi-odd",
    "Mathieu2PiEven": "2pi-even",
    "Mathieu2PiOdd": "2pi-odd",
}


def _sig17(x):
    if not isinstance(x, mpfr):
        x = mpfr(x, 64)
    return f"{x:.17g}"


def csv_rows(report):
    """One lossy row per accepted point at 17 significant digits."""
    spec = report.model
    rows = []
    for e in report.accepted:
        z = e.lam if isinstance(e.lam, mpc) else mpc(e.lam)
        rows.append(
            ",".join(
                [
                    spec.kind,
                    "" if spec.M is None else str(spec.M),
                    "" if spec.K is None else str(spec.K),
                    _MATHIEU_CLASS.get(spec.kind, spec.parity or ""),
                    str(e.accepted_dim),
                    _sig17(z.real),
                    _sig17(z.imag),
                    _sig17(e.residual),
                ]
            )
        )
    return rows


def write_csv(report, path):
    atomic_write_text(path, "\n".join([CSV_HEADER] + csv_rows(report)) + "\n")
