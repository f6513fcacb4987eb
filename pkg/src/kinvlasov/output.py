"""Deterministic plain-text outputs: diagnostics CSV, phase-space snapshots,
and the run manifest.

All floats are written in shortest round-trip decimal form (Python repr), so
re-reading any file reproduces the values bit-exactly and repeated runs are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .config import Config
from .diagnostics import (
    DIAGNOSTICS_FIELDS,
    LEDGER_LAYOUT,
    UNKNOWNS_FULL,
    UNKNOWNS_REDUCED,
    DiagnosticsRecord,
)
from .grid import PhaseSpaceGrid
from .state import SimulationState


def format_float(x) -> str:
    return repr(float(x))


def write_diagnostics_header(sink) -> None:
    sink.write(",".join(DIAGNOSTICS_FIELDS) + "\n")


def write_diagnostics(record: DiagnosticsRecord, sink) -> None:
    """Append one CSV row; the header must already have been emitted."""
    values = [str(record.step)]
    for name in DIAGNOSTICS_FIELDS[1:]:
        values.append(format_float(getattr(record, name)))
    sink.write(",".join(values) + "\n")


class DiagnosticsWriter:
    """CSV sink that emits the header on first use and flushes per row."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = None

    def write(self, record: DiagnosticsRecord) -> None:
        if self._fh is None:
            self._fh = open(self.path, "w", encoding="utf-8")
            write_diagnostics_header(self._fh)
        write_diagnostics(record, self._fh)
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _write_matrix(path: Path, header: str, matrix: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in matrix:
            fh.write(" ".join(format_float(v) for v in row) + "\n")


def write_snapshot(state: SimulationState, grid: PhaseSpaceGrid, out_dir) -> list:
    """Write f_plus_<step>.dat, f_minus_<step>.dat, fields_<step>.dat.

    Distribution files: one header line, then nx lines of np values (row = x,
    column = p, both ascending).  The field file carries the time-centered
    potentials of this state alongside the cached moments.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    step = state.step
    meta = (
        f"# t={format_float(state.time)} nx={grid.nx} np={grid.np} "
        f"x_max={format_float(grid.x_max)} p_max={format_float(grid.p_max)}"
    )
    paths = []
    for label, species in (("plus", state.plus), ("minus", state.minus)):
        path = out_dir / f"f_{label}_{step}.dat"
        _write_matrix(path, meta, species.f)
        paths.append(path)

    fields_path = out_dir / f"fields_{step}.dat"
    phi = 0.5 * (state.fields.phi_prev + state.fields.phi_curr)
    a = 0.5 * (state.fields.a_prev + state.fields.a_curr)
    x = (np.arange(grid.nx) + 0.5) * grid.dx
    table = np.column_stack([x, phi, a, state.rho, state.j])
    header = (
        f"# t={format_float(state.time)} nx={grid.nx} "
        f"x_max={format_float(grid.x_max)} columns=x,phi,a,rho,j"
    )
    _write_matrix(fields_path, header, table)
    paths.append(fields_path)
    return paths


def read_snapshot(path):
    """Parse a snapshot file back into (metadata dict, value matrix)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        matrix = np.array(
            [[float(v) for v in line.split()] for line in fh if line.strip()]
        )
    meta = {}
    for token in header.lstrip("# ").split():
        key, _, value = token.partition("=")
        if key in ("nx", "np"):
            meta[key] = int(value)
        elif key == "columns":
            meta[key] = value
        else:
            meta[key] = float(value)
    return meta, matrix


def manifest_payload(config: Config, grid: PhaseSpaceGrid, dt: float,
                     n_steps: int, cfl) -> dict:
    """Everything needed to reproduce and interpret the run bit-exactly."""
    return {
        "version": __version__,
        "config": asdict(config),
        "derived": {
            "dx": grid.dx,
            "dp": grid.dp,
            "dt": dt,
            "n_steps": n_steps,
            "cfl_light_ratio": cfl.light_ratio,
            "cfl_transport_ratio": cfl.transport_ratio,
        },
        "equation_partition": {
            "entries": [
                {
                    "equation": eq,
                    "status": status,
                    "full_multiplicity": full,
                    "reduced_multiplicity": reduced,
                }
                for eq, status, full, reduced in LEDGER_LAYOUT
            ],
            "full_equation_total": sum(r[2] for r in LEDGER_LAYOUT),
            "full_unknown_total": sum(UNKNOWNS_FULL.values()),
            "reduced_equation_total": sum(r[3] for r in LEDGER_LAYOUT),
            "reduced_unknown_total": sum(UNKNOWNS_REDUCED.values()),
            "unknowns_full": UNKNOWNS_FULL,
            "unknowns_reduced": UNKNOWNS_REDUCED,
        },
        "notes": {
            "continuity_residual_forms": (
                "The ledger reports the dimensionally consistent residual "
                "dn/dt + d(flux)/dx as equation h; the model's stated form "
                "carries an extra 1/c on the time term and is emitted as the "
                "informational h/c row."
            ),
            "initial_fields": (
                "phi starts from the zero-mean periodic electrostatic solve of "
                "the initial charge density, with equal stored levels "
                "(phi_t(0) = 0) and A = 0; this choice is not forced by the "
                "evolved equations."
            ),
            "residual_columns": (
                "Kinetic and continuity residual columns are centered one step "
                "behind the row's step (three snapshots are needed) and report "
                "0.0 for the first two rows."
            ),
        },
    }


def write_manifest(payload: dict, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


DIVERGENCE_FIELDS = ("step", "time", "f_plus_dist", "f_minus_dist", "phi_dist",
                     "a_dist", "force_dist")


def write_divergence(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(DIVERGENCE_FIELDS) + "\n")
        for row in rows:
            fh.write(",".join(
                [str(row.step)] + [format_float(getattr(row, n))
                                   for n in DIVERGENCE_FIELDS[1:]]
            ) + "\n")
