"""Output artifacts: CSV/JSON writers with atomic replace semantics.

Every file is written to a temp file in the target directory and renamed
into place, so interrupted runs never leave truncated output.  Numbers are
serialized with 17 significant digits to guarantee float round-trip.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .observables import DensityResult, Spectrum
from .sweeps import SweepResult

__all__ = [
    "fmt",
    "atomic_write_text",
    "write_spectrum_csv",
    "write_sweep_csv",
    "write_density_json",
    "write_series_csv",
]


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_spectrum_csv(spec: Spectrum, path: str | Path) -> Path:
    lines = ["P3,p_par_final,f"]
    for p3, pk, f in zip(spec.canonical_momentum, spec.kinetic_momentum_final, spec.f):
        lines.append(f"{fmt(p3)},{fmt(pk)},{fmt(f)}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_sweep_csv(result: SweepResult, path: str | Path) -> Path:
    lines = ["variant,axis_value,density,mode,n_grid"]
    for row in result.rows:
        if row.density is None:
            continue  # failures are reported separately, not serialized
        lines.append(
            f"{row.variant_label},{fmt(row.axis_value)},{fmt(row.density.value)},"
            f"{row.density.mode.value},{row.density.n_par}"
        )
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_density_json(density: DensityResult, path: str | Path) -> Path:
    return atomic_write_text(path, json.dumps(density.to_dict(), indent=2) + "\n")


def write_series_csv(series, path: str | Path) -> Path:
    """Per-mode time series, columns (t, f, g, w, A)."""
    lines = ["t,f,g,w,A"]
    for row in series:
        lines.append(",".join(fmt(v) for v in row))
    return atomic_write_text(path, "\n".join(lines) + "\n")
