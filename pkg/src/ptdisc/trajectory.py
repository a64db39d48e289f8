"""Bloch-sphere trajectories of the three states through the pipeline.

One row per (state, stage); state ids follow plan order (descending prior),
matching the canonical final geometry: state 1 at (0, 1, 0), state 2 at
(0, -1, 0), state 3 in the y-z plane at polar angle rho.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import bloch_vector
from .protocol import DiscriminationPlan, pipeline_stages

STAGES = ("input", "prepared", "evolved", "aligned", "final")

CSV_HEADER = "state_id,stage,x,y,z"


@dataclass(frozen=True)
class TrajectoryRow:
    state_id: int
    stage: str
    x: float
    y: float
    z: float


def trajectory_rows(plan: DiscriminationPlan) -> list[TrajectoryRow]:
    rows = []
    for i, b in enumerate(plan.ensemble.states, start=1):
        stages = pipeline_stages(plan, b)
        for stage in STAGES:
            x, y, z = bloch_vector(getattr(stages, stage))
            rows.append(TrajectoryRow(i, stage, x, y, z))
    return rows


def render_csv(rows) -> str:
    """Fixed header, coordinates with 17 significant digits (doubles survive
    a round trip through the text)."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(f"{r.state_id},{r.stage},{r.x:.17g},{r.y:.17g},{r.z:.17g}")
    return "\n".join(lines) + "\n"


def rows_as_dicts(rows) -> list[dict]:
    return [
        {"state_id": r.state_id, "stage": r.stage, "x": r.x, "y": r.y, "z": r.z}
        for r in rows
    ]
