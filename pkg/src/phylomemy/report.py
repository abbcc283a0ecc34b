"""Static reporting from an export file: delimited tables plus rendered
figures of the seabed and kinship views. Diagnostic output only; the
export JSON remains the interchange format."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["write_tables", "render_seabed", "render_kinship", "write_report"]


def write_tables(projection: dict, outdir: str) -> list[str]:
    """branches.csv and terms.csv, comma-delimited."""
    paths = []
    path = os.path.join(outdir, "branches.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label", "elevation", "peak_x", "peak_y", "span_first", "span_last", "groups"])
        counts = {}
        for g in projection["groups"]:
            counts[g["branch"]] = counts.get(g["branch"], 0) + 1
        for b in projection["branches"]:
            writer.writerow([
                b["id"], " ".join(b["label"]), b["elevation"], b["peak"]["x"], b["peak"]["y"],
                b["span"][0], b["span"][1], counts.get(b["id"], 0),
            ])
    paths.append(path)

    path = os.path.join(outdir, "terms.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "first_period", "last_period", "freq_last", "group_count", "cross_branch"])
        for t in projection["terms"]:
            writer.writerow([
                t["id"], t["first_period"], t["last_period"], t["freq_last"],
                t["group_count"], t["cross_branch"],
            ])
    paths.append(path)
    return paths


def _density_field(xs, ys, bandwidth=0.05, grid=(256, 128)):
    gx = np.linspace(0, 1, grid[0])
    gy = np.linspace(0, 1, grid[1])
    mx, my = np.meshgrid(gx, gy)
    field = np.zeros_like(mx)
    for x, y in zip(xs, ys):
        field += np.exp(-((mx - x) ** 2 + (my - y) ** 2) / (2 * bandwidth**2))
    return gx, gy, field


def render_seabed(projection: dict, path: str) -> str:
    """Peaks as triangles with density isolines; ordinate 0 at the top."""
    branches = projection["branches"]
    xs = [b["peak"]["x"] for b in branches]
    ys = [b["peak"]["y"] for b in branches]
    fig, ax = plt.subplots(figsize=(10, 4))
    if len(branches) > 1:
        gx, gy, field = _density_field(xs, ys)
        levels = np.quantile(field[field > field.max() * 1e-6], [0.5, 0.7, 0.85, 0.95])
        levels = np.unique(levels)
        if len(levels) > 1:
            ax.contour(gx, gy, field, levels=levels, colors="steelblue", linewidths=0.8)
    ax.scatter(xs, ys, marker="v", color="black", zorder=3)
    for b in branches:
        ax.annotate(" ".join(b["label"]), (b["peak"]["x"], b["peak"]["y"]),
                    fontsize=7, xytext=(2, 4), textcoords="offset points")
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(1.05, -0.05)  # elevation grows downward
    ax.set_xlabel("branch drift")
    ax.set_ylabel("final elevation")
    ax.set_title("seabed view")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_kinship(projection: dict, path: str) -> str:
    """Groups per period with kinship lines (ghost links dashed)."""
    coords = {g["id"]: (g["x"], g["y"]) for g in projection["groups"]}
    branch_ids = [b["id"] for b in projection["branches"]]
    cmap = plt.get_cmap("tab20")
    color_of = {b: cmap(i % 20) for i, b in enumerate(branch_ids)}

    fig, ax = plt.subplots(figsize=(10, 6))
    for l in projection["links"]:
        (x1, y1), (x2, y2) = coords[l["parent"]], coords[l["child"]]
        ax.plot([x1, x2], [y1, y2], color="0.3", linewidth=0.7, zorder=1)
    for l in projection["ghost_links"]:
        (x1, y1), (x2, y2) = coords[l["parent"]], coords[l["child"]]
        ax.plot([x1, x2], [y1, y2], color="0.7", linewidth=0.7, linestyle="--", zorder=1)
    for g in projection["groups"]:
        ax.scatter(g["x"], g["y"], s=30, color=color_of[g["branch"]], zorder=2)
    ax.invert_yaxis()  # parents at the top
    ax.set_xlabel("branch bands")
    ax.set_ylabel("period")
    ax.set_title("kinship view")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_report(projection: dict, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = write_tables(projection, outdir)
    paths.append(render_seabed(projection, os.path.join(outdir, "seabed.png")))
    paths.append(render_kinship(projection, os.path.join(outdir, "kinship.png")))
    return paths
