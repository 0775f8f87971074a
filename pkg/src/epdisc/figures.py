"""Figure data export: per-series point sets and a rendered scatter.

Each scan report becomes one series of accepted coupling values in the
complex plane, keyed by the quantum numbers that distinguish it within
its model family (parity, symmetry class, M, or (M, K)).  The CSV holds
every series of one figure with a series key column; a PNG scatter of
the same data is rendered next to it so the delimited output can be
eyeballed without a plotting session.
"""

from __future__ import annotations

from gmpy2 import mpc, mpfr

from .report import atomic_write_text

__all__ = [
    "FIGURE_CSV_HEADER",
    "render_png",
    "series_from_reports",
    "series_key",
    "write_figure_csv",
]

FIGURE_CSV_HEADER = "series,re_lam,im_lam"


def series_key(spec) -> str:
    """Short legend label for one scan inside its model family."""
    if spec.kind == "BoxX2":
        return spec.parity
    if spec.kind.startswith("Mathieu"):
        number = {"MathieuPiEven": "pi-even", "MathieuPiOdd": "pi-odd",
                  "Mathieu2PiEven": "2pi-even", "Mathieu2PiOdd": "2pi-odd"}
        return number[spec.kind]
    if spec.kind == "RigidRotor":
        return f"M={spec.M}"
    if spec.kind == "SymmetricTop":
        return f"M={spec.M} K={spec.K}"
    if spec.kind == "BoxX":
        return "box-x"
    return "toy3"


def series_from_reports(reports):
    """[(key, [(re, im), ...])] with one series per report."""
    out = []
    for rep in reports:
        pts = []
        for e in rep.accepted:
            z = e.lam if isinstance(e.lam, mpc) else mpc(e.lam)
            pts.append((z.real, z.imag))
        out.append((series_key(rep.model), pts))
    return out


def _sig17(x):
    if not isinstance(x, mpfr):
        x = mpfr(x, 64)
    return f"{x:.17g}"


def write_figure_csv(series, path):
    lines = [FIGURE_CSV_HEADER]
    for key, pts in series:
        for re_l, im_l in pts:
            lines.append(f"{key},{_sig17(re_l)},{_sig17(im_l)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


_MARKERS = ["o", "D", "s", "^", "v", "P", "*", "X"]


def render_png(series, path, title=None):
    """Scatter of all series in the complex coupling plane."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for i, (key, pts) in enumerate(series):
        xs = [float(p[0]) for p in pts]
        ys = [float(p[1]) for p in pts]
        ax.scatter(
            xs, ys, s=18, marker=_MARKERS[i % len(_MARKERS)], label=key
        )
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    if title:
        ax.set_title(title)
    if series:
        ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    ax.axhline(0, color="black", linewidth=0.6)
    ax.axvline(0, color="black", linewidth=0.6)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
