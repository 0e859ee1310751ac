"""Figures for the report paths of the CLI (matplotlib, Agg backend)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

_STATUS_CODE = {"reducible": 0, "irreducible": 1, "undecidable": 2}
_NOT_VISITED = -1


def verdict_heatmap(verdicts: Sequence, path: str | Path) -> Path:
    """One panel per prime: subgroups (rows) by characters (columns)."""
    path = Path(path)
    primes = sorted({v.prime for v in verdicts})
    fig, axes = plt.subplots(len(primes), 1, figsize=(12, 1 + 3.5 * len(primes)), squeeze=False)
    cmap = ListedColormap(["#ffffff", "#d9d9d9", "#2b8cbe", "#e34a33"])
    for ax, p in zip(axes[:, 0], primes):
        vs = [v for v in verdicts if v.prime == p]
        rows = list(dict.fromkeys(" > ".join(v.path) for v in vs))
        cols = list(dict.fromkeys(v.character for v in vs))
        grid = [[_NOT_VISITED] * len(cols) for _ in rows]
        for v in vs:
            grid[rows.index(" > ".join(v.path))][cols.index(v.character)] = _STATUS_CODE[v.status]
        ax.imshow(grid, cmap=cmap, vmin=-1.5, vmax=2.5, aspect="auto", interpolation="nearest")
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels([r if len(r) < 48 else "..." + r[-45:] for r in rows], fontsize=7)
        degs = {v.character: v.degree for v in vs}
        ax.set_xticks(range(len(cols)))
        ax.set_xticklabels([f"{c} ({degs[c]})" for c in cols], rotation=90, fontsize=6)
        ax.set_title(f"{vs[0].ambient}, prime {p}: blue irreducible, grey reducible, red undecidable",
                     fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def reduction_margins(cases: Sequence, spot_check_n: int, path: str | Path) -> Path:
    """log10 of bound/size ratios at t = 2^n for every reduction case."""
    from .genericq import ABELIAN_NORMAL_INDEX, SQRT_ORDER, degree_lower_bound

    path = Path(path)
    d = degree_lower_bound()
    fig, ax = plt.subplots(figsize=(8, 5))
    for c in cases:
        ns, ys = [], []
        for n in range(1, spot_check_n + 1):
            t = 2 ** n
            if not c.applies(t):
                continue
            dt = d(t)
            if c.m_bound_kind == SQRT_ORDER:
                margin = 2 * math.log10(dt) - math.log10(c.order(t))
            elif c.m_bound_kind == ABELIAN_NORMAL_INDEX:
                margin = math.log10(dt) - math.log10(c.index_bound(t))
            else:
                margin = 3 * math.log10(dt) - 13 * math.log10(2 * t * t)
            ns.append(n)
            ys.append(margin)
        ax.plot(ns, ys, marker="o", label=f"{c.number}) {c.name}")
    ax.axhline(0, color="black", linewidth=0.8)
    ax.set_xlabel("n  (q = 2^(2n+1))")
    ax.set_ylabel("log10 margin (positive = excluded)")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def parabolic_values(rows: Sequence, ts: Sequence[int], path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(8, 5))
    qs = [2 * t * t for t in ts]
    for r in rows:
        line, = ax.plot(qs, [r.u_value(t) for t in ts], marker="o", label=f"{r.name} u")
        ax.plot(qs, [r.v_value(t) for t in ts], marker="x", linestyle="--",
                color=line.get_color(), label=f"{r.name} v")
    ax.set_xscale("log", base=2)
    ax.set_yscale("symlog")
    ax.set_xlabel("q")
    ax.set_ylabel("character value")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
