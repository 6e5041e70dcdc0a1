"""Scenario files: a small JSON format describing an event pair to build.

A scenario file fixes the causal arrangement, the initial state, the two
measured bases, and optionally evolutions, Hamiltonians, a timing block, and
CHSH settings.  Files are schema-validated before any numerics run, so
malformed input fails with a pointed diagnostic rather than a shape error.

Angles in scenario files are radians, except the CHSH settings, which are
conventionally quoted in degrees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .event_states import EventScenario, EventTiming
from .policy import ScenarioError
from .quantum_core import PAULI_X, PAULI_Y, PAULI_Z, MeasurementModel
from .serialize import basis_from_json, operator_from_json, profile_from_json
from .timing import (
    CONDITIONAL,
    MARGINAL,
    TimeGrid,
    TimingProfile,
    delta_conditional,
    delta_profile,
    exponential_conditional,
    exponential_profile,
)

__all__ = ["ScenarioFile", "scenario_from_json", "load_scenario", "schema"]

_SCHEMA_CACHE: dict | None = None


def schema() -> dict:
    """The JSON schema scenario files are validated against."""
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        text = resources.files("eventstates").joinpath("data/scenario.schema.json").read_text()
        _SCHEMA_CACHE = json.loads(text)
    return _SCHEMA_CACHE


@dataclass(frozen=True)
class ScenarioFile:
    """A parsed scenario plus any CHSH settings carried alongside it."""

    scenario: EventScenario
    chsh_angles: tuple[tuple[float, float], tuple[float, float]] | None
    source: str


def _rotation_unitary(axis: str, angle: float) -> np.ndarray:
    sigma = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}[axis]
    return np.cos(angle / 2.0) * np.eye(2, dtype=complex) - 1j * np.sin(angle / 2.0) * sigma


def _parse_unitary(data: dict, name: str) -> np.ndarray:
    if "axis" in data:
        return _rotation_unitary(data["axis"], float(data["angle"]))
    return operator_from_json(data, name=name)


_NAMED_BASES = {
    "Sz": MeasurementModel.sz,
    "Sx": MeasurementModel.sx,
    "Sy": MeasurementModel.sy,
}


def _parse_basis(data, name: str) -> MeasurementModel:
    if isinstance(data, str):
        return _NAMED_BASES[data]()
    if "theta" in data:
        labels = data.get("labels", (1.0, -1.0))
        return MeasurementModel.from_axis_angle(
            float(data["theta"]), float(data.get("phi", 0.0)), labels=labels
        )
    return basis_from_json(data, name=name)


def _parse_initial(data: dict) -> np.ndarray:
    if "ket" in data:
        spec = data["ket"]
        re = np.asarray(spec["re"], dtype=float)
        im = np.asarray(spec["im"], dtype=float)
        if re.shape != im.shape or re.ndim != 1:
            raise ScenarioError("initial.ket: re/im must be equal-length vectors")
        return re + 1j * im
    return operator_from_json(data["density"], name="initial.density")


def _parse_profile(data: dict, grid: TimeGrid, name: str) -> TimingProfile:
    if "type" not in data:
        profile = profile_from_json(data, name=name)
        if profile.grid != grid:
            raise ScenarioError(f"{name}: profile grid does not match the timing grid")
        return profile
    conditional = bool(data.get("conditional", False))
    if data["type"] == "exponential":
        gamma = float(data["gamma"])
        maker = exponential_conditional if conditional else exponential_profile
        return maker(gamma, grid)
    if conditional:
        return delta_conditional(grid, int(data.get("lag_bins", 0)))
    return delta_profile(grid, int(data.get("bin", 0)))


def _parse_timing(data: dict) -> EventTiming:
    spec = data["grid"]
    grid = TimeGrid(t0=float(spec.get("t0", 0.0)), dt=float(spec["dt"]), n_bins=int(spec["n_bins"]))
    if "joint" in data:
        re = np.asarray(data["joint"]["re"], dtype=float)
        im = np.asarray(data["joint"]["im"], dtype=float)
        return EventTiming(joint_amplitudes=re + 1j * im, joint_grid=grid)
    profile_a = _parse_profile(data["profileA"], grid, "timing.profileA")
    profile_b = _parse_profile(data["profileB"], grid, "timing.profileB")
    return EventTiming(profile_a=profile_a, profile_b=profile_b)


def scenario_from_json(data: dict, *, source: str = "<memory>") -> ScenarioFile:
    """Validate and build a scenario from already-parsed JSON."""
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as exc:
        raise ScenarioError(f"{source}: {exc.json_path}: {exc.message}") from None

    kwargs = {
        "kind": data["kind"],
        "initial": _parse_initial(data["initial"]),
        "basis_a": _parse_basis(data["basisA"], "basisA"),
        "basis_b": _parse_basis(data["basisB"], "basisB"),
    }
    for json_key, field in (
        ("evolution", "evolution"),
        ("evolutionA", "evolution_a"),
        ("evolutionB", "evolution_b"),
    ):
        if json_key in data:
            kwargs[field] = _parse_unitary(data[json_key], json_key)
    for json_key, field in (
        ("hamiltonian", "hamiltonian"),
        ("hamiltonianA", "hamiltonian_a"),
        ("hamiltonianB", "hamiltonian_b"),
    ):
        if json_key in data:
            kwargs[field] = operator_from_json(data[json_key], name=json_key)
    if "timing" in data:
        kwargs["timing"] = _parse_timing(data["timing"])

    scenario = EventScenario(**kwargs)

    chsh_angles = None
    if "chsh" in data:
        if scenario.kind != "SL":
            raise ScenarioError(f"{source}: CHSH settings only apply to independent pairs")
        block = data["chsh"]
        chsh_angles = (
            tuple(math.radians(float(x)) for x in block["anglesA"]),
            tuple(math.radians(float(x)) for x in block["anglesB"]),
        )
    return ScenarioFile(scenario=scenario, chsh_angles=chsh_angles, source=source)


def load_scenario(path: str) -> ScenarioFile:
    """Load and validate a scenario file.

    Missing files raise FileNotFoundError; malformed JSON or schema
    violations raise ScenarioError; numeric invariant failures raise
    NumericsError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_json(data, source=path)
