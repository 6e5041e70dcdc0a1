"""Command-line front end.

Subcommands load a scenario (or a previously built record state), run one
analysis, and print either human-readable lines or machine-readable JSON
(``--json``, canonical formatting) / CSV (``--csv``).

Exit codes: 0 on success, 1 for a missing input file, 2 for a malformed
scenario or state file, 3 for a numerical invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources

import numpy as np

from .bell import chsh_scenarios, chsh_value
from .event_states import (
    EventState,
    build_event_state,
    build_timed_state,
    conditional_decomposition,
    trace_out_timers,
    timer_distribution,
)
from .inference import classical_correlation, determinism_check, predict_future_outcome
from .policy import NumericsError, ScenarioError
from .scenario import ScenarioFile, scenario_from_json, load_scenario
from .serialize import (
    canonical_dumps,
    chsh_report_to_json,
    load_json_file,
    state_from_json,
    state_to_json,
)
from .timing import (
    BranchingSchedule,
    JointTimeDistribution,
    continuum_limit_check,
    exponential_conditional,
    exponential_grid,
    exponential_profile,
    joint_time_distribution,
)
from .witnesses import coherence_witness, time_witness

DEMO_FILES = {
    "appendix-e": "deterministic_tl.json",
    "hadamard-tl": "hadamard_tl.json",
    "bell-sl": "bell_sl.json",
}
DEMO_NAMES = ("appendix-e", "decay", "hadamard-tl", "bell-sl")


def _load_any(path: str) -> tuple[EventState | None, ScenarioFile | None]:
    """Read either a scenario file or a serialized record state."""
    data = load_json_file(path)
    if "record_basisA" in data:
        return state_from_json(data), None
    loaded = scenario_from_json(data, source=path)
    return None, loaded


def _detector_state(path: str) -> EventState:
    state, loaded = _load_any(path)
    if state is None:
        state = build_event_state(loaded.scenario)
    if state.timers is not None:
        state = trace_out_timers(state)
    return state


def _emit(args, payload: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(canonical_dumps(payload))
    else:
        for line in lines:
            print(line)


def _cmd_validate(args) -> int:
    loaded = load_scenario(args.scenario)
    s = loaded.scenario
    payload = {
        "ok": True,
        "kind": s.kind,
        "dimA": s.basis_a.dim,
        "dimB": s.basis_b.dim,
        "timing": s.timing is not None,
        "chsh": loaded.chsh_angles is not None,
    }
    lines = [
        f"{args.scenario}: ok",
        f"kind = {s.kind}",
        f"records = {s.basis_a.dim} x {s.basis_b.dim}",
        f"timing = {'yes' if s.timing is not None else 'no'}",
        f"chsh settings = {'yes' if loaded.chsh_angles is not None else 'no'}",
    ]
    _emit(args, payload, lines)
    return 0


def _cmd_build(args) -> int:
    loaded = load_scenario(args.scenario)
    if args.timed:
        state = build_timed_state(loaded.scenario)
    else:
        state = build_event_state(loaded.scenario)
    text = canonical_dumps(state_to_json(state))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
        print(f"wrote {args.out} ({state.rho.shape[0]}-dimensional, kind {state.kind})")
    elif args.json:
        print(text)
    else:
        probs = np.real(np.diag(state.rho))
        print(f"kind = {state.kind}")
        print(f"dim = {state.rho.shape[0]}")
        print(f"trace = {float(np.real(np.trace(state.rho))):.12f}")
        print(f"largest record weight = {float(probs.max()):.6f}")
    return 0


def _timing_table(loaded: ScenarioFile):
    scenario = loaded.scenario
    timing = scenario.timing
    if timing is None:
        return None
    if timing.joint_amplitudes is not None:
        table = np.abs(timing.joint_amplitudes) ** 2 * timing.grid.dt**2
        return JointTimeDistribution(grid=timing.grid, kind=scenario.kind, table=table)
    return joint_time_distribution(timing.profile_a, timing.profile_b, scenario.kind)


def _cmd_witness(args) -> int:
    state, loaded = _load_any(args.path)
    reports = []
    if state is not None:
        if state.timers is not None:
            reports.append(time_witness(timer_distribution(state)))
            state = trace_out_timers(state)
        reports.append(coherence_witness(state))
    else:
        table = _timing_table(loaded)
        if table is not None:
            reports.append(time_witness(table))
        reports.append(coherence_witness(build_event_state(loaded.scenario)))
    reports.reverse()

    if args.kind != "all":
        wanted = {"coherence": "record-coherence", "timecorr": "time-correlation"}[args.kind]
        reports = [r for r in reports if r.witness == wanted]
        if not reports:
            raise ScenarioError(f"{args.path}: no timing information for the {args.kind} witness")

    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(["witness", "value", "verdict"])
        for rep in reports:
            writer.writerow([rep.witness, f"{rep.value:.12g}", rep.verdict])
    else:
        payload = {
            "witnesses": [
                {"witness": r.witness, "value": r.value, "verdict": r.verdict} for r in reports
            ]
        }
        lines = [f"{r.witness}: value = {r.value:.6g}, verdict = {r.verdict}" for r in reports]
        _emit(args, payload, lines)
    return 0


def _cmd_discriminate(args) -> int:
    state = _detector_state(args.path)
    report = predict_future_outcome(state)
    payload = {"success": report.success, "exact": report.exact}
    lines = [f"p_suc = {report.success:.6f}", f"exact = {'true' if report.exact else 'false'}"]
    if state.kind == "TL":
        det = determinism_check(state)
        payload["deterministic"] = det.deterministic
        payload["max_overlap"] = det.max_overlap
        lines.append(f"deterministic = {'true' if det.deterministic else 'false'}")
        lines.append(f"max conditional overlap = {det.max_overlap:.6g}")
    _emit(args, payload, lines)
    return 0


def _cmd_classical_corr(args) -> int:
    state = _detector_state(args.path)
    report = classical_correlation(state)
    _emit(
        args,
        {"classical_correlation_bits": report.bits},
        [f"C_A = {report.bits:.6f} bit"],
    )
    return 0


def _chsh_report(loaded: ScenarioFile):
    if loaded.chsh_angles is None:
        raise ScenarioError(f"{loaded.source}: no chsh settings in scenario")
    angles_a, angles_b = loaded.chsh_angles
    scenarios = chsh_scenarios(loaded.scenario.initial, angles_a, angles_b)
    return chsh_value([build_event_state(s) for s in scenarios])


def _cmd_chsh(args) -> int:
    loaded = load_scenario(args.scenario)
    report = _chsh_report(loaded)
    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(["E_ab", "E_abp", "E_apb", "E_apbp", "S", "tsirelson_ok"])
        writer.writerow(
            [f"{e:.12g}" for e in report.correlators]
            + [f"{report.value:.12g}", str(report.tsirelson_ok).lower()]
        )
        return 0
    payload = chsh_report_to_json(report)
    lines = [
        "E = " + ", ".join(f"{e:+.6f}" for e in report.correlators),
        f"S = {report.value:.6f}",
        f"tsirelson_ok = {'true' if report.tsirelson_ok else 'false'}",
    ]
    _emit(args, payload, lines)
    return 0


def _demo_scenario(name: str) -> ScenarioFile:
    text = resources.files("eventstates").joinpath(f"data/{DEMO_FILES[name]}").read_text()
    return scenario_from_json(json.loads(text), source=f"demo:{name}")


def _demo_decay(args) -> tuple[dict, list[str]]:
    gamma, dt = args.gamma, args.dt
    if gamma * dt >= 1.0:
        raise ScenarioError(f"gamma * dt = {gamma * dt:.3g} >= 1; no per-bin probability exists")
    grid = exponential_grid(gamma, dt)
    schedule = BranchingSchedule.constant(grid, gamma * dt)
    profile = exponential_profile(gamma, grid)
    err = continuum_limit_check(schedule, profile)

    table_grid = exponential_grid(gamma, max(dt, 0.02))
    table = joint_time_distribution(
        exponential_profile(gamma, table_grid),
        exponential_conditional(gamma, table_grid),
        "TL",
    )
    witness = time_witness(table)
    continuum = 1.0 / gamma**2
    payload = {
        "gamma": gamma,
        "dt": dt,
        "branching_max_relative_error": err,
        "time_covariance": witness.value,
        "continuum_covariance": continuum,
        "verdict": witness.verdict,
    }
    lines = [
        f"gamma = {gamma:g}, dt = {dt:g}, bins = {grid.n_bins}",
        f"branching vs continuum: max relative error = {err:.3e}",
        f"time covariance = {witness.value:.6f} (continuum 1/gamma^2 = {continuum:.6f})",
        f"verdict = {witness.verdict}",
    ]
    return payload, lines


def _demo_record_pair(name: str) -> tuple[dict, list[str]]:
    loaded = _demo_scenario(name)
    state = build_event_state(loaded.scenario)
    if name == "appendix-e":
        prediction = predict_future_outcome(state)
        corr = classical_correlation(state).bits
        det = determinism_check(state)
        payload = {
            "p_suc": prediction.success,
            "classical_correlation_bits": corr,
            "deterministic": det.deterministic,
        }
        lines = [
            f"p_suc = {prediction.success:.4f}",
            f"C_A = {corr:.4f} bit",
            f"deterministic = {'true' if det.deterministic else 'false'}",
        ]
        return payload, lines
    witness = coherence_witness(state)
    decomp = conditional_decomposition(state)
    prediction = predict_future_outcome(state)
    payload = {
        "record_coherence_bits": witness.value,
        "verdict": witness.verdict,
        "p_suc": prediction.success,
        "probs": [float(p) for p in decomp.probs],
    }
    lines = [
        f"record coherence = {witness.value:.6f} bit",
        f"verdict = {witness.verdict}",
        f"p_suc = {prediction.success:.6f}",
        "second-record probabilities = " + ", ".join(f"{p:.4f}" for p in decomp.probs),
    ]
    return payload, lines


def _cmd_demo(args) -> int:
    if args.name == "decay":
        payload, lines = _demo_decay(args)
    elif args.name == "bell-sl":
        loaded = _demo_scenario("bell-sl")
        report = _chsh_report(loaded)
        payload = chsh_report_to_json(report)
        lines = [
            "E = " + ", ".join(f"{e:+.6f}" for e in report.correlators),
            f"S = {report.value:.6f}",
            f"tsirelson_ok = {'true' if report.tsirelson_ok else 'false'}",
        ]
    else:
        payload, lines = _demo_record_pair(args.name)
    _emit(args, payload, lines)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventstates",
        description="Build and analyze joint record states of measurement event pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="schema-check a scenario file")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("build", help="build the record state a scenario describes")
    p.add_argument("scenario")
    p.add_argument("--timed", action="store_true", help="keep timer registers (small grids only)")
    p.add_argument("--out", help="write the state JSON here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("witness", help="run causal-signature witnesses")
    p.add_argument("path", help="scenario file or serialized record state")
    p.add_argument(
        "--kind",
        choices=("coherence", "timecorr", "all"),
        default="all",
        help="which witness to run (default: every applicable one)",
    )
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("discriminate", help="predict the second record from the first")
    p.add_argument("path", help="scenario file or serialized record state")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_discriminate)

    p = sub.add_parser("classical-corr", help="classical correlation of the two records")
    p.add_argument("path", help="scenario file or serialized record state")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_classical_corr)

    p = sub.add_parser("chsh", help="CHSH combination from a scenario's settings")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_chsh)

    p = sub.add_parser("demo", help="run a bundled worked example")
    p.add_argument("name", choices=DEMO_NAMES)
    p.add_argument("--gamma", type=float, default=1.0, help="decay rate for the decay demo")
    p.add_argument("--dt", type=float, default=0.001, help="grid step for the decay demo")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: file not found: {name}", file=sys.stderr)
        return 1
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
