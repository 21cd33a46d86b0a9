"""Run-configuration parsing and validation.

Configs are JSON documents validated against the shipped schema
(``schema/runconfig.v1.json``); validation reports every violation with a
JSON-pointer path instead of stopping at the first problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from importlib import resources

import jsonschema

from .fields import ChirpProfile, ChirpedPulse, FieldConfig
from .solver import SolverOptions
from .sweeps import (
    GridPolicy,
    SweepKind,
    SweepSpec,
    Variant,
    fig2_variants,
    fig3_variants,
    fig5_variants,
    frequency_ratio_variant,
)

__all__ = ["RunConfig", "SchemaError", "parse_config", "load_schema"]


class SchemaError(ValueError):
    """Config rejected; ``errors`` lists every (json_pointer, message) pair."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("\n".join(f"{ptr}: {msg}" for ptr, msg in errors))


def load_schema() -> dict:
    text = resources.files("qvepair").joinpath("schema/runconfig.v1.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: FieldConfig
    grid: GridPolicy
    n_perp: int | None
    perp_max: float
    solver: SolverOptions
    allow_chirp_overrun: bool
    output_directory: str
    overwrite: bool
    sweep: SweepSpec | None = None
    oracle: dict | None = None
    schema_version: int = 1


def _pointer(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def _build_field(payload: dict) -> FieldConfig:
    pulses = []
    for p in payload["pulses"]:
        pulses.append(
            ChirpedPulse(
                amplitude=float(p["amplitude"]),
                carrier_frequency=float(p["carrier_frequency"]),
                width=float(p["width"]),
                chirp=float(p.get("chirp", 0.0)),
                chirp_profile=ChirpProfile(p.get("chirp_profile", "constant")),
                first_half_sign=int(p.get("first_half_sign", 1)),
            )
        )
    return FieldConfig(pulses)


def _build_sweep(doc: dict, field_cfg: FieldConfig, solver: SolverOptions,
                 grid: GridPolicy, allow_overrun: bool,
                 errors: list[tuple[str, str]]) -> SweepSpec | None:
    payload = doc["sweep"]
    kind = SweepKind(payload["kind"])
    axis = payload["axis"]
    if len(axis) > 1 and not all(b > a for a, b in zip(axis, axis[1:])):
        errors.append(("/sweep/axis", "axis values must be strictly increasing"))
        return None
    variants: list[Variant]
    if kind is SweepKind.CARRIER_FREQUENCY:
        variants = fig2_variants(float(payload.get("chirp_magnitude", 0.00025)))
    elif kind is SweepKind.CHIRP_MAGNITUDE:
        variants = fig3_variants()
    elif kind is SweepKind.SIGN_COMBINATION:
        if len(field_cfg.pulses) != 2:
            errors.append(("/sweep", "sign_combination sweeps need a two-color base field"))
            return None
        variants = fig5_variants()
    else:  # FREQUENCY_RATIO
        if len(field_cfg.pulses) != 2:
            errors.append(("/sweep", "frequency_ratio sweeps need a two-color base field"))
            return None
        if "variants" not in payload:
            errors.append(("/sweep/variants", "frequency_ratio sweeps require explicit variants"))
            return None
        variants = [
            frequency_ratio_variant(v["label"], float(v["b1"]), float(v["b2"]))
            for v in payload["variants"]
        ]
    return SweepSpec(
        kind=kind,
        base_field=field_cfg,
        axis=axis,
        variants=variants,
        solver=solver,
        grid=grid,
        allow_chirp_overrun=allow_overrun,
    )


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON run configuration.

    Raises SchemaError carrying every violation found (schema and semantic),
    each with its JSON-pointer path.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([("/", f"invalid JSON: {exc}")]) from exc

    errors: list[tuple[str, str]] = []
    validator = jsonschema.Draft202012Validator(load_schema())
    for err in sorted(validator.iter_errors(doc), key=_pointer):
        errors.append((_pointer(err), err.message))
    if errors:
        raise SchemaError(errors)

    allow_overrun = bool(doc.get("allow_chirp_overrun", False))

    # semantic checks beyond the JSON shape, all collected before raising
    field_cfg = _build_field(doc["field"])
    from .fields import validate as validate_field

    for v in validate_field(field_cfg):
        if v.kind == "chirp_bound" and allow_overrun:
            continue
        ptr = "/field/pulses" + (f"/{v.pulse}" if v.pulse is not None else "")
        errors.append((ptr, v.message))

    solver_payload = dict(doc.get("solver", {}))
    t_start = solver_payload.get("t_start")
    t_end = solver_payload.get("t_end")
    if t_start is not None and t_end is not None and not (t_start < t_end):
        errors.append(("/solver", f"t_start ({t_start}) must be below t_end ({t_end})"))

    grid_payload = dict(doc.get("grid", {}))
    grid_range = grid_payload.get("range", "auto")
    if grid_range != "auto" and not (grid_range[0] < grid_range[1]):
        errors.append(("/grid/range", "range lower bound must be below upper bound"))

    command = doc["command"]
    if command == "sweep" and "sweep" not in doc:
        errors.append(("/sweep", "sweep command requires a sweep payload"))
    if command == "oracle-check" and "oracle" not in doc:
        errors.append(("/oracle", "oracle-check command requires an oracle payload"))
    if command == "oracle-check" and "oracle" in doc:
        o = doc["oracle"]
        if not (o["t_start"] < o["t_end"]):
            errors.append(("/oracle", "t_start must be below t_end"))

    solver = None
    if not errors:
        try:
            solver = SolverOptions(
                rtol=float(solver_payload.get("rtol", 1e-8)),
                atol=float(solver_payload.get("atol", 1e-12)),
                t_start=t_start,
                t_end=t_end,
                max_step=float(solver_payload.get("max_step", 1.0)),
                record_series=bool(solver_payload.get("record_series", False)),
                series_stride=int(solver_payload.get("series_stride", 100)),
            )
        except ValueError as exc:
            errors.append(("/solver", str(exc)))

    grid = GridPolicy(
        n_par=int(grid_payload.get("n_par", 512)),
        momentum_range=None if grid_range == "auto" else (float(grid_range[0]), float(grid_range[1])),
        p_perp=float(grid_payload.get("p_perp", 0.0)),
        symmetric=bool(grid_payload.get("symmetric", False)),
    )

    sweep = None
    if not errors and command == "sweep":
        sweep = _build_sweep(doc, field_cfg, solver, grid, allow_overrun, errors)

    if errors:
        raise SchemaError(errors)

    output = dict(doc.get("output", {}))
    return RunConfig(
        command=command,
        field=field_cfg,
        grid=grid,
        n_perp=grid_payload.get("n_perp"),
        perp_max=float(grid_payload.get("perp_max", 1.5)),
        solver=solver,
        allow_chirp_overrun=allow_overrun,
        output_directory=str(output.get("directory", "out")),
        overwrite=bool(output.get("overwrite", False)),
        sweep=sweep,
        oracle=doc.get("oracle"),
    )
