"""Figure rendering for sweep output.

Kept apart from the numeric modules so matplotlib stays an output-only
dependency; everything here consumes already-computed tables and writes
PNG files next to the delimited data.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import tableio
from ._version import __version__
from .chaos import BRule, BifurcationSample, bifurcation_sweep, lyapunov_sweep
from .map_core import MapParams, eval_f_vec
from .orbits import invariant_interval


def render_map_figure(p: MapParams, path: str, grid: int = 2_001) -> None:
    """Both branches of the map with the diagonal and, when defined, the
    trapping interval shaded."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    left = np.linspace(0.0, 0.5, grid)
    right = np.linspace(np.nextafter(0.5, 1.0), 1.0, grid)
    ax.plot(left, eval_f_vec(p, left), lw=1.6, label="left branch")
    ax.plot(right, eval_f_vec(p, right), lw=1.6, label="right branch")
    ax.plot([0.0, 1.0], [0.0, 1.0], ls="--", lw=0.8, color="gray")
    f_half = float(eval_f_vec(p, np.array([0.5]))[0])
    r_lim = float(eval_f_vec(p, np.array([np.nextafter(0.5, 1.0)]))[0])
    ax.plot([0.5], [f_half], marker="o", ms=5, color="k")
    ax.plot([0.5], [r_lim], marker="o", ms=5, mfc="white", color="k")
    if not p.is_degenerate:
        trap = invariant_interval(p)
        ax.axvspan(trap.lo, trap.hi, alpha=0.12, color="tab:green", label="trapping interval")
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.set_title(f"piecewise map at a={p.a:g}, b={p.b:g}")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_bifurcation_figure(samples: list[BifurcationSample], path: str, label: str) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for s in samples:
        ax.plot([s.a] * len(s.retained), s.retained, ",", color="k", alpha=0.5)
    ax.set_xlabel("a")
    ax.set_ylabel("retained iterates")
    ax.set_title(f"attractor sweep along {label}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_lyapunov_figure(rows: list[tuple[float, float, float]], path: str, label: str) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot([r[0] for r in rows], [r[2] for r in rows], lw=1.2)
    ax.axhline(0.0, ls="--", lw=0.8, color="gray")
    ax.set_xlabel("a")
    ax.set_ylabel("orbit-averaged log derivative")
    ax.set_title(f"stretching exponent along {label}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_report(
    out_dir: str,
    rule: BRule,
    a_min: float,
    a_max: float,
    steps: int,
    x0: float = 0.3,
    burn: int = 10_000,
    keep: int = 500,
    n: int = 100_000,
    threads: int = 1,
    command: str = "report",
) -> list[str]:
    """Run both sweeps along b = rule(a) and write the delimited tables
    plus their rendered figures into out_dir; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    cfg = {
        "rule": rule.label(), "a_min": a_min, "a_max": a_max, "steps": steps,
        "x0": x0, "burn": burn, "keep": keep, "n": n, "threads": threads,
    }
    meta = [
        ("tool", f"pwdyn {__version__}"),
        ("command", command),
        ("config", tableio.config_json(cfg)),
    ]

    lam_rows = lyapunov_sweep(rule, a_min, a_max, steps, x0=x0, burn=burn, n=n, threads=threads)
    samples = bifurcation_sweep(rule, a_min, a_max, steps, x0=x0, burn=burn, keep=keep, threads=threads)

    paths = []
    lam_path = os.path.join(out_dir, "lyapunov.csv")
    with open(lam_path, "w") as fh:
        fh.write(tableio.render_csv(("a", "b", "lambda"), lam_rows, meta))
    paths.append(lam_path)

    bif_path = os.path.join(out_dir, "bifurcation.csv")
    bif_rows = [(s.a, s.b, x) for s in samples for x in s.retained]
    with open(bif_path, "w") as fh:
        fh.write(tableio.render_csv(("a", "b", "x"), bif_rows, meta))
    paths.append(bif_path)

    label = rule.label()
    lam_png = os.path.join(out_dir, "lyapunov.png")
    render_lyapunov_figure(lam_rows, lam_png, label)
    paths.append(lam_png)

    bif_png = os.path.join(out_dir, "bifurcation.png")
    render_bifurcation_figure(samples, bif_png, label)
    paths.append(bif_png)

    map_png = os.path.join(out_dir, "map.png")
    render_map_figure(MapParams(a_max, rule.b_of(a_max)), map_png)
    paths.append(map_png)

    return paths
