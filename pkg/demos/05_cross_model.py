"""
Cross-model energy comparison
=============================

Load the bundled benchmark dataset (seven open text-to-video models under
their default generation settings) and build the comparison report.
"""
from pathlib import Path

from vidcost import compare_models, emit, load_bundled_measurements, load_model_defaults

defaults = load_model_defaults()
records = load_bundled_measurements()
report = compare_models(defaults, records)

print(f"{'model':<17}{'latency':>9}{'total Wh':>10}{'gpu share':>11}")
for row in report.rows:
    print(f"{row.model_id:<17}{row.latency_s:>8.4g}s{row.total_wh:>10.3f}{row.gpu_share:>11.1%}")

for (top, bottom), ratio in report.ratios.items():
    print(f"\n{top} uses {ratio:.0f}x the total energy of {bottom} per clip")

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
(out_dir / "cross_model.svg").write_bytes(emit(report, "svg"))
(out_dir / "cross_model.csv").write_bytes(emit(report, "csv"))
print(f"\nwrote chart and CSV under {out_dir}")
