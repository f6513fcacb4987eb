"""Simulation orchestration: the run loop, output emission, and the
two-force-mode comparison run."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .config import Config, validate_config
from .diagnostics import (
    StateHistory,
    compare_runs,
    make_record,
    snapshot_state,
)
from .fields import FieldBlowupError, ensure_cfl
from .grid import PhaseSpaceGrid, build_grid
from .output import (
    DiagnosticsWriter,
    manifest_payload,
    write_divergence,
    write_manifest,
    write_snapshot,
)
from .state import SimulationState, clone_state, initialize_state
from .vlasov import KickDisplacementError, max_velocity, step, time_step

SOLVER_ABORTS = (KickDisplacementError, FieldBlowupError)


@dataclass
class RunResult:
    config: Config
    grid: PhaseSpaceGrid
    dt: float
    n_steps: int
    records: list
    snapshots: list
    history: StateHistory
    final_state: SimulationState
    aborted: bool = False
    abort_reason: str = ""


def planned_steps(config: Config, dt: float) -> int:
    return max(1, round(config.t_end / dt))


def run_simulation(config: Config, *, out_dir=None, collect_snapshots: bool = False,
                   initial_state: SimulationState | None = None,
                   n_steps: int | None = None) -> RunResult:
    """Run a full simulation; optionally emit manifest, diagnostics, snapshots.

    Diagnostics records are computed every step; rows and snapshots are
    written at the output_every cadence plus the initial state.  On a solver
    abort the partial diagnostics are already flushed; the result is returned
    with ``aborted`` set.
    """
    config = validate_config(config)
    grid = build_grid(config)
    dt = time_step(config, grid)
    cfl = ensure_cfl(grid, dt, config.c, max_velocity(config, grid))
    total = planned_steps(config, dt) if n_steps is None else n_steps

    state = initial_state if initial_state is not None else initialize_state(config, grid)
    history = StateHistory()
    history.push(snapshot_state(state, config, grid))

    writer = DiagnosticsWriter(Path(out_dir) / "diagnostics.csv") if out_dir else None
    if out_dir:
        write_manifest(manifest_payload(config, grid, dt, total, cfl), out_dir)

    records = []
    snapshots = []
    written = 0

    def emit(current: SimulationState, write_files: bool) -> None:
        nonlocal written
        record = make_record(current, history, config, grid, dt)
        records.append(record)
        if write_files and writer is not None:
            writer.write(record)
            written = len(records)
        if write_files:
            if collect_snapshots:
                snapshots.append(history.snapshots[-1])
            if out_dir:
                write_snapshot(current, grid, out_dir)

    result = RunResult(config=config, grid=grid, dt=dt, n_steps=total,
                       records=records, snapshots=snapshots, history=history,
                       final_state=state)
    try:
        emit(state, True)
        for k in range(1, total + 1):
            state = step(state, config, grid)
            history.push(snapshot_state(state, config, grid))
            emit(state, k % config.output_every == 0)
            result.final_state = state
    except SOLVER_ABORTS as exc:
        result.aborted = True
        result.abort_reason = str(exc)
        # flush the last computed record so the file shows where the run died
        if writer is not None and records and written < len(records):
            writer.write(records[-1])
    finally:
        if writer is not None:
            writer.close()
    return result


def run_command(config_path, out_dir) -> int:
    from .config import ConfigError, load_config

    try:
        config = load_config(config_path)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}")
        return 2
    result = run_simulation(config, out_dir=out_dir)
    if result.aborted:
        print(f"solver aborted at step {result.final_state.step}: {result.abort_reason}")
        return 1
    print(
        f"completed {result.n_steps} steps to t = {result.final_state.time:.6g}; "
        f"outputs in {out_dir}"
    )
    return 0


def compare_simulations(config: Config, *, out_dir=None):
    """Run the same configuration under both force modes from one shared
    initial state and return (rows, run_modified, run_standard)."""
    config = validate_config(config)
    grid = build_grid(config)
    state0 = initialize_state(config, grid)

    runs = {}
    for mode in ("modified", "standard"):
        mode_config = replace(config, force_mode=mode)
        mode_dir = Path(out_dir) / mode if out_dir else None
        runs[mode] = run_simulation(
            mode_config,
            out_dir=mode_dir,
            collect_snapshots=True,
            initial_state=clone_state(state0),
        )
    rows = compare_runs(runs["modified"], runs["standard"])
    if out_dir:
        write_divergence(rows, Path(out_dir) / "divergence.csv")
    return rows, runs["modified"], runs["standard"]


def compare_command(config_path, out_dir) -> int:
    from .config import ConfigError, load_config

    try:
        config = load_config(config_path)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}")
        return 2
    rows, run_mod, run_std = compare_simulations(config, out_dir=out_dir)
    if run_mod.aborted or run_std.aborted:
        print("comparison aborted: "
              + (run_mod.abort_reason or run_std.abort_reason))
        return 1
    final = rows[-1]
    print(
        f"compared {len(rows)} snapshots; final f_minus distance "
        f"{final.f_minus_dist:.6g}; outputs in {out_dir}"
    )
    return 0
