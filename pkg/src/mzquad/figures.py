"""Figure rendering for scan grids and benchmark curves.

The CLI writes these images next to the delimited output files; the CSV
remains the canonical, byte-stable artifact and the figures are a visual
companion.  Rendering always goes through the Agg backend so it works in
headless environments.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import COND_BUCKETS, STATUS_OK, ScanGrid  # noqa: E402

_BUCKET_COLORS = {
    "[1,10)": "tab:green",
    "[10,10^2)": "gold",
    "[10^2,10^4)": "tab:orange",
    "[10^4,10^7)": "magenta",
    "[10^7,inf)": "black",
}


def _cell_table(grid: ScanGrid):
    mi = {m: i for i, m in enumerate(grid.m_values)}
    ni = {n: i for i, n in enumerate(grid.n_values)}
    eta = np.full((len(grid.m_values), len(grid.n_values)), np.nan)
    cond = np.full_like(eta, np.nan)
    for c in grid.cells:
        if c.status == STATUS_OK:
            eta[mi[c.m], ni[c.n]] = c.eta
            cond[mi[c.m], ni[c.n]] = c.cond2
    return eta, cond


def save_scan_figure(grid: ScanGrid, path) -> None:
    """Render an eta contour map or a cond2 bucket map to an image file."""
    eta, cond = _cell_table(grid)
    ms = np.array(grid.m_values)
    ns = np.array(grid.n_values)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    title = f"{grid.family} on {grid.domain}"

    if grid.kind == "eta":
        with np.errstate(divide="ignore"):
            logeta = np.log10(np.maximum(eta, 1e-17))
        mesh = ax.pcolormesh(ns, ms, logeta, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=r"$\log_{10}\eta$")
        if np.isfinite(eta).any() and np.nanmin(eta) < 1.0 < np.nanmax(eta):
            ax.contour(ns, ms, eta, levels=[1.0], colors="red", linewidths=1.5)
        ax.set_title(f"MZ constant $\\eta$: {title}")
    else:
        for lo, hi, label in COND_BUCKETS:
            mask = (cond >= lo) & (cond < hi) if math.isfinite(hi) else (cond >= lo)
            mm, nn = np.nonzero(mask)
            if mm.size:
                ax.scatter(ns[nn], ms[mm], s=14, color=_BUCKET_COLORS[label], label=label)
        ax.legend(title=r"$\mathrm{cond}_2(G)$", fontsize=7, loc="center left",
                  bbox_to_anchor=(1.01, 0.5))
        ax.set_title(f"Gramian conditioning: {title}")

    ax.set_xlabel("polynomial degree n")
    ax.set_ylabel("rule parameter m")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(records, path) -> None:
    """Three-panel semilog error plot: relaxed hyper / classical hyper / LS."""
    from .approx import Method

    relaxed_family = next(
        r.family for r in records if r.method is Method.HYPERINTERPOLATION and r.family not in ("gl", "tensor-gl")
    )
    panels = [
        (f"{relaxed_family} hyperinterpolation",
         lambda r: r.method is Method.HYPERINTERPOLATION and r.family == relaxed_family),
        ("classical hyperinterpolation",
         lambda r: r.method is Method.HYPERINTERPOLATION and r.family in ("gl", "tensor-gl")),
        (f"{relaxed_family} least squares",
         lambda r: r.method is Method.LEAST_SQUARES),
    ]
    fids = sorted({r.fid for r in records})
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.8), sharey=True)
    for ax, (label, pred) in zip(axes, panels):
        for fid in fids:
            pts = sorted((r.n, r.relerr) for r in records if pred(r) and r.fid == fid)
            ax.semilogy([p[0] for p in pts], [max(p[1], 1e-17) for p in pts],
                        marker="o", markersize=3, label=fid)
        ax.set_title(label, fontsize=10)
        ax.set_xlabel("degree n")
        ax.grid(True, which="both", alpha=0.25)
    axes[0].set_ylabel("relative $L^2$ error")
    axes[-1].legend(fontsize=8)
    fig.suptitle(f"approximation errors on {records[0].domain}", fontsize=11)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
