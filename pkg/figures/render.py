#!/usr/bin/env python3
"""Render publication-style figures from qvepair CSV artifacts.

Usage:
    figures/render.py --recipe <id> --data <dir> --out <path>

Recipes come in two kinds:

* spectrum recipes (fig1a-fig1d, fig4a-fig4d): plot every ``spectrum*.csv``
  in the data directory (sorted by name) as occupation number vs final
  kinetic momentum, one labeled curve per file.
* density recipes (fig2, fig3, fig5, fig6, fig7): read ``sweep.csv`` and
  plot density vs the sweep axis, one labeled curve per variant, on a log
  ordinate (densities span many orders of magnitude).  fig7 adds an inset
  zoom over the upper end of the axis.

Inputs are validated (existence and exact CSV header) before anything is
drawn; a missing or ill-formed file aborts with the offending path on
stderr and a nonzero exit, leaving no output file behind.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SPECTRUM_HEADER = ["P3", "p_par_final", "f"]
SWEEP_HEADER = ["variant", "axis_value", "density", "mode", "n_grid"]


class RecipeError(Exception):
    """Input file missing or ill-formed; the message names the path."""


@dataclass(frozen=True)
class Recipe:
    figure_id: str
    kind: str  # "spectrum" | "density"
    title: str
    xlabel: str
    log_y: bool = False
    inset: bool = False


def _spectrum_recipe(fid: str, title: str) -> Recipe:
    return Recipe(fid, "spectrum", title, "longitudinal momentum $p_\\parallel$ [$m_e c$]")


def _density_recipe(fid: str, title: str, xlabel: str, inset: bool = False) -> Recipe:
    return Recipe(fid, "density", title, xlabel, log_y=True, inset=inset)


RECIPES: dict[str, Recipe] = {
    r.figure_id: r
    for r in [
        _spectrum_recipe("fig1a", "One-color spectra, constant chirp $|b|=0.000125$"),
        _spectrum_recipe("fig1b", "One-color spectra, constant chirp $|b|=0.00075$"),
        _spectrum_recipe("fig1c", "One-color spectra, sign-flip chirp $|b|=0.000125$"),
        _spectrum_recipe("fig1d", "One-color spectra, sign-flip chirp $|b|=0.00075$"),
        _spectrum_recipe("fig4a", "Two-color spectra, same-sign chirp $|b_1|=0.000125$"),
        _spectrum_recipe("fig4b", "Two-color spectra, same-sign chirp $|b_1|=0.00075$"),
        _spectrum_recipe("fig4c", "Two-color spectra, opposite-sign chirp $|b_1|=0.000125$"),
        _spectrum_recipe("fig4d", "Two-color spectra, opposite-sign chirp $|b_1|=0.00075$"),
        _density_recipe("fig2", "Density vs carrier frequency", "carrier frequency $\\omega$ [$m_e$]"),
        _density_recipe("fig3", "Density vs chirp magnitude", "chirp magnitude $|b|$ [$m_e^2$]"),
        _density_recipe("fig5", "Density vs relative chirp", "$|b|/\\omega$"),
        _density_recipe("fig6", "Density vs frequency ratio (small chirp)", "$\\omega_2/\\omega_1$"),
        _density_recipe("fig7", "Density vs frequency ratio (large chirp)", "$\\omega_2/\\omega_1$",
                        inset=True),
    ]
}


def _read_rows(path: Path, header: list[str]) -> list[list[str]]:
    if not path.is_file():
        raise RecipeError(f"missing input: {path}")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != header:
        raise RecipeError(
            f"ill-formed input: {path} (expected header {','.join(header)})"
        )
    return [row for row in rows[1:] if row]


def load_spectrum(path: Path) -> tuple[list[float], list[float]]:
    rows = _read_rows(path, SPECTRUM_HEADER)
    try:
        return [float(r[1]) for r in rows], [float(r[2]) for r in rows]
    except (IndexError, ValueError) as exc:
        raise RecipeError(f"ill-formed input: {path} ({exc})") from exc


def load_sweep(path: Path) -> dict[str, tuple[list[float], list[float]]]:
    rows = _read_rows(path, SWEEP_HEADER)
    series: dict[str, tuple[list[float], list[float]]] = {}
    try:
        for r in rows:
            xs, ys = series.setdefault(r[0], ([], []))
            xs.append(float(r[1]))
            ys.append(float(r[2]))
    except (IndexError, ValueError) as exc:
        raise RecipeError(f"ill-formed input: {path} ({exc})") from exc
    return series


def _render_spectrum(recipe: Recipe, data: Path, ax) -> None:
    paths = sorted(data.glob("spectrum*.csv"))
    if not paths:
        raise RecipeError(f"missing input: {data}/spectrum*.csv (no spectrum files)")
    for path in paths:
        x, y = load_spectrum(path)
        ax.plot(x, y, lw=1.2, label=path.stem)
    ax.set_ylabel("occupation number $f$")


def _render_density(recipe: Recipe, data: Path, ax, fig) -> None:
    series = load_sweep(data / "sweep.csv")
    if not series:
        raise RecipeError(f"ill-formed input: {data / 'sweep.csv'} (no data rows)")
    for label, (xs, ys) in series.items():
        ax.plot(xs, ys, marker="o", ms=3, lw=1.2, label=label)
    ax.set_yscale("log")
    ax.set_ylabel("pair number density $n$")
    if recipe.inset:
        axins = fig.add_axes((0.58, 0.18, 0.3, 0.28))
        for _, (xs, ys) in series.items():
            lo = min(xs) + 0.7 * (max(xs) - min(xs))
            pts = [(x, y) for x, y in zip(xs, ys) if x >= lo]
            if pts:
                axins.plot(*zip(*pts), marker="o", ms=2, lw=0.8)
        axins.set_yscale("log")
        axins.tick_params(labelsize=6)


def render(recipe_id: str, data_dir: str | Path, out_path: str | Path) -> Path:
    """Validate inputs, draw the figure, and write the image atomically
    enough that a failed render leaves no file behind."""
    if recipe_id not in RECIPES:
        raise RecipeError(f"unknown recipe: {recipe_id}")
    recipe = RECIPES[recipe_id]
    data = Path(data_dir)
    out = Path(out_path)

    fig, ax = plt.subplots(figsize=(5.0, 3.4), dpi=150)
    try:
        if recipe.kind == "spectrum":
            _render_spectrum(recipe, data, ax)
        else:
            _render_density(recipe, data, ax, fig)
        ax.set_xlabel(recipe.xlabel)
        ax.set_title(recipe.title, fontsize=10)
        ax.legend(fontsize=7, frameon=False)
        if not recipe.inset:  # manual inset axes are incompatible with tight_layout
            fig.tight_layout()
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
    finally:
        plt.close(fig)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render a figure from qvepair CSV outputs."
    )
    parser.add_argument("--recipe", required=True, choices=sorted(RECIPES))
    parser.add_argument("--data", required=True, help="directory with the input CSVs")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        print(render(args.recipe, args.data, args.out))
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
