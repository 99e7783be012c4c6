"""Scaling-law sweeps and cross-model comparison reports.

Sweep points carry the full FLOP breakdown plus latency/energy with
per-operator shares prorated by FLOP fraction. Serialization to CSV and JSON
is byte-deterministic; SVG charts are a convenience rendering.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace

from .calibration import MeasurementRecord
from .cost import CostEstimate, FlopBreakdown, cost_from_breakdown, token_length, total_flops
from .specs import HardwareSpec, ModelSpec, VideoJob, bundled_data_path, _read_json

AXES = ("resolution", "frames", "steps")

BUNDLED_DEFAULTS = "model_defaults.json"

SWEEP_CSV_COLUMNS = (
    "axis_value", "tokens",
    "flops_text", "flops_vae_conv", "flops_vae_attn",
    "flops_self", "flops_cross", "flops_mlp", "flops_timestep", "flops_total",
    "latency_s", "energy_wh",
)

COMPARISON_CSV_COLUMNS = (
    "model_id", "latency_s", "gpu_wh", "cpu_wh", "ram_wh",
    "total_wh", "gpu_share", "cpu_share", "ram_share",
)

# FLOP CSV column -> breakdown field.
_FLOP_COLUMNS = {
    "flops_text": "text",
    "flops_vae_conv": "vae_conv",
    "flops_vae_attn": "vae_mid_attn",
    "flops_self": "self_attn",
    "flops_cross": "cross_attn",
    "flops_mlp": "mlp",
    "flops_timestep": "timestep",
}


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis with values, the fixed job dims, and the cost context."""

    axis: str
    values: tuple
    fixed: VideoJob
    mu: float
    hardware: HardwareSpec

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("values must be nonempty")
        if self.axis == "resolution":
            values = tuple((int(h), int(w)) for h, w in values)
            keys = [h * w for h, w in values]
        else:
            values = tuple(int(v) for v in values)
            keys = list(values)
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ValueError("values must be strictly increasing along the swept axis")
        object.__setattr__(self, "values", values)
        if not 0.0 < self.mu <= 1.0:
            raise ValueError("mu must be in (0, 1]")

    def job_for(self, value) -> VideoJob:
        if self.axis == "resolution":
            return replace(self.fixed, height_px=value[0], width_px=value[1])
        if self.axis == "frames":
            return replace(self.fixed, frames=value)
        return replace(self.fixed, steps=value)


@dataclass(frozen=True)
class SweepPoint:
    axis_value: object
    tokens: int
    breakdown: FlopBreakdown
    cost: CostEstimate


@dataclass(frozen=True)
class SweepResult:
    """Sweep output; iterates as the ordered list of points."""

    spec: SweepSpec
    points: tuple[SweepPoint, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, idx):
        return self.points[idx]


@dataclass(frozen=True)
class ModelDefaults:
    """Default generation settings of one benchmarked model."""

    model_id: str
    steps: int
    height: int
    width: int
    frames: int
    fps: int


@dataclass(frozen=True)
class ComparisonRow:
    model_id: str
    latency_s: float
    gpu_wh: float
    cpu_wh: float
    ram_wh: float
    total_wh: float
    gpu_share: float
    cpu_share: float
    ram_share: float


@dataclass(frozen=True)
class ComparisonReport:
    """Cross-model energy/latency table, sorted by total energy, descending."""

    rows: tuple[ComparisonRow, ...]
    ratios: dict[tuple[str, str], float]


def run_sweep(spec: SweepSpec, model: ModelSpec) -> SweepResult:
    """Evaluate the cost model at every swept value."""
    points = []
    for value in spec.values:
        job = spec.job_for(value)
        breakdown = total_flops(job, model.dit, model.text_encoder, model.vae)
        cost = cost_from_breakdown(breakdown, spec.hardware, spec.mu)
        points.append(SweepPoint(
            axis_value=value,
            tokens=token_length(job, model.dit),
            breakdown=breakdown,
            cost=cost,
        ))
    return SweepResult(spec=spec, points=tuple(points))


def load_model_defaults(path=None) -> list[ModelDefaults]:
    """Bundled (or explicit JSON) per-model default generation settings."""
    source = bundled_data_path(BUNDLED_DEFAULTS) if path is None else path
    return [ModelDefaults(**row) for row in _read_json(source)]


def compare_models(
    defaults: list[ModelDefaults],
    measurements: list[MeasurementRecord],
) -> ComparisonReport:
    """Build the cross-model comparison from measured energy records.

    Every measurement must match a defaults entry by model_id. Total energy
    sums the GPU, CPU, and RAM components; the ratios map holds the
    largest-to-smallest total-energy pair.
    """
    by_id = {d.model_id: d for d in defaults}
    rows = []
    for record in measurements:
        if record.model_id not in by_id:
            raise ValueError(f"measurement for unknown model_id {record.model_id!r}")
        if record.latency_s is None or record.gpu_wh is None:
            raise ValueError(f"comparison needs latency_s and gpu_wh for {record.model_id!r}")
        total = record.gpu_wh + record.cpu_wh + record.ram_wh
        rows.append(ComparisonRow(
            model_id=record.model_id,
            latency_s=record.latency_s,
            gpu_wh=record.gpu_wh,
            cpu_wh=record.cpu_wh,
            ram_wh=record.ram_wh,
            total_wh=total,
            gpu_share=record.gpu_wh / total,
            cpu_share=record.cpu_wh / total,
            ram_share=record.ram_wh / total,
        ))
    rows.sort(key=lambda r: (-r.total_wh, r.model_id))
    ratios = {}
    if len(rows) > 1:
        top, bottom = rows[0], rows[-1]
        ratios[(top.model_id, bottom.model_id)] = top.total_wh / bottom.total_wh
    return ComparisonReport(rows=tuple(rows), ratios=ratios)


# --- serialization ---

def _axis_value_str(value) -> str:
    if isinstance(value, tuple):
        return f"{value[0]}x{value[1]}"
    return str(value)


def _sweep_csv(result: SweepResult) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_COLUMNS)
    for point in result.points:
        row = [_axis_value_str(point.axis_value), point.tokens]
        row += [getattr(point.breakdown, field) for field in _FLOP_COLUMNS.values()]
        row += [point.breakdown.total, point.cost.latency_s, point.cost.energy_wh]
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def _sweep_json(result: SweepResult) -> bytes:
    doc = {
        "axis": result.spec.axis,
        "mu": result.spec.mu,
        "hardware": result.spec.hardware.name,
        "points": [
            {
                "axis_value": _axis_value_str(p.axis_value),
                "tokens": p.tokens,
                "flops": p.breakdown.as_dict(),
                "latency_s": p.cost.latency_s,
                "energy_j": p.cost.energy_j,
                "energy_wh": p.cost.energy_wh,
                "operator_latency_s": p.cost.operator_latency_s,
                "operator_energy_wh": p.cost.operator_energy_wh,
            }
            for p in result.points
        ],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _comparison_csv(report: ComparisonReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISON_CSV_COLUMNS)
    for r in report.rows:
        writer.writerow([
            r.model_id, r.latency_s, r.gpu_wh, r.cpu_wh, r.ram_wh,
            r.total_wh, r.gpu_share, r.cpu_share, r.ram_share,
        ])
    return buf.getvalue().encode("utf-8")


def _comparison_json(report: ComparisonReport) -> bytes:
    doc = {
        "rows": [
            {
                "model_id": r.model_id,
                "latency_s": r.latency_s,
                "gpu_wh": r.gpu_wh,
                "cpu_wh": r.cpu_wh,
                "ram_wh": r.ram_wh,
                "total_wh": r.total_wh,
                "gpu_share": r.gpu_share,
                "cpu_share": r.cpu_share,
                "ram_share": r.ram_share,
            }
            for r in report.rows
        ],
        "ratios": [
            {"numerator": a, "denominator": b, "ratio": v}
            for (a, b), v in sorted(report.ratios.items())
        ],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def emit(report: SweepResult | ComparisonReport, format: str) -> bytes:
    """Serialize a report. CSV/JSON are contractual; SVG renders a chart."""
    from . import charts

    if isinstance(report, SweepResult):
        if format == "csv":
            return _sweep_csv(report)
        if format == "json":
            return _sweep_json(report)
        if format == "svg":
            return charts.stacked_area_svg(report).encode("utf-8")
    elif isinstance(report, ComparisonReport):
        if format == "csv":
            return _comparison_csv(report)
        if format == "json":
            return _comparison_json(report)
        if format == "svg":
            return charts.log_bar_svg(report).encode("utf-8")
    raise ValueError(f"unsupported report/format pairing: {type(report).__name__} as {format!r}")
